#include "pdm/diagram_io.hpp"

#include <cctype>
#include <cmath>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace pdm {

namespace {

std::string strip(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

[[noreturn]] void fail(const std::string& origin, std::size_t line, const std::string& what) {
  throw DataError(origin + ":" + std::to_string(line) + ": " + what);
}

double parse_field_double(const std::string& field, const std::string& origin, std::size_t line) {
  const std::string t = strip(field);
  double value = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || t.empty()) {
    fail(origin, line, "malformed number '" + field + "'");
  }
  if (!std::isfinite(value)) fail(origin, line, "non-finite coordinate '" + field + "'");
  return value;
}

long parse_field_int(const std::string& field, const std::string& origin, std::size_t line) {
  const std::string t = strip(field);
  long value = 0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || t.empty()) {
    fail(origin, line, "malformed multiplicity '" + field + "'");
  }
  return value;
}

}  // namespace

PersistenceDiagram parse_diagram_csv(const std::string& text, const std::string& origin) {
  std::vector<PersistenceDiagram::Entry> entries;
  std::string body = text;
  if (body.rfind("\xEF\xBB\xBF", 0) == 0) body.erase(0, 3);  // UTF-8 BOM
  std::istringstream in(body);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string t = strip(line);
    if (t.empty() || t[0] == '#') continue;

    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = t.find(',', start);
      fields.push_back(t.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 2 && fields.size() != 3) {
      fail(origin, line_no, "expected 'birth,death[,multiplicity]', got " +
                                std::to_string(fields.size()) + " fields");
    }

    const double birth = parse_field_double(fields[0], origin, line_no);
    const double death = parse_field_double(fields[1], origin, line_no);
    if (death < birth) fail(origin, line_no, "death < birth");
    if (death == birth) fail(origin, line_no, "point on the diagonal (death == birth)");
    long multiplicity = 1;
    if (fields.size() == 3) {
      multiplicity = parse_field_int(fields[2], origin, line_no);
      if (multiplicity < 1) fail(origin, line_no, "nonpositive multiplicity");
    }
    entries.push_back({PlanePoint{birth, death}, static_cast<int>(multiplicity)});
  }
  return PersistenceDiagram(std::move(entries));
}

PersistenceDiagram read_diagram(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_diagram_csv(buf.str(), path);
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string diagram_to_csv(const PersistenceDiagram& diagram) {
  std::string out;
  for (const auto& e : diagram.entries()) {
    out += format_double(e.point.birth);
    out += ',';
    out += format_double(e.point.death);
    out += ',';
    out += std::to_string(e.multiplicity);
    out += '\n';
  }
  return out;
}

void write_diagram(const PersistenceDiagram& diagram, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << diagram_to_csv(diagram);
  if (!out) throw DataError("write failed for '" + path + "'");
}

}  // namespace pdm
