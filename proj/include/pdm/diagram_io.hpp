#pragma once

// CSV reader/writer for persistence diagrams. One row per point,
// `birth,death[,multiplicity]`, multiplicity defaulting to 1. Lines starting
// with '#' are comments; LF and CRLF are both accepted.

#include <stdexcept>
#include <string>

#include "pdm/diagram.hpp"

namespace pdm {

// Malformed input data or I/O failure; the message carries file and line.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

PersistenceDiagram read_diagram(const std::string& path);
PersistenceDiagram parse_diagram_csv(const std::string& text, const std::string& origin);

// Writes entries in canonical order, always three fields per row, with
// round-trip-exact float formatting: read(write(D)) == D.
void write_diagram(const PersistenceDiagram& diagram, const std::string& path);
std::string diagram_to_csv(const PersistenceDiagram& diagram);

// Round-trip-exact decimal form (printf "%.17g"); used everywhere
// bit-stable output is required.
std::string format_double(double value);

}  // namespace pdm
