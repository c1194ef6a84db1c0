#include "pdm/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "pdm/diagram_io.hpp"
#include "pdm/feature_maps.hpp"
#include "pdm/matching.hpp"

namespace pdm {

std::string method_id(Method m) {
  switch (m) {
    case Method::PWG: return "PWG";
    case Method::PSS: return "PSS";
    case Method::LS: return "LS";
    case Method::IM: return "IM";
    case Method::TV: return "TV";
    case Method::SW_SQRT: return "SW_SQRT";
  }
  throw std::logic_error("unreachable");
}

Method method_from_id(const std::string& id) {
  if (id == "PWG") return Method::PWG;
  if (id == "PSS") return Method::PSS;
  if (id == "LS") return Method::LS;
  if (id == "IM") return Method::IM;
  if (id == "TV") return Method::TV;
  if (id == "SW_SQRT") return Method::SW_SQRT;
  throw std::invalid_argument("unknown method '" + id + "'");
}

void ExperimentConfig::validate() const {
  if (cardinalities.empty()) throw std::invalid_argument("config: cardinalities must be nonempty");
  for (int c : cardinalities) {
    if (c < 1) throw std::invalid_argument("config: cardinalities must be positive");
  }
  if (diagrams_per_cardinality < 2) {
    throw std::invalid_argument("config: diagrams_per_cardinality must be >= 2");
  }
  if (methods.empty()) throw std::invalid_argument("config: methods must be nonempty");
  std::vector<Method> sorted = methods;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("config: duplicate method");
  }
  if (!(pwg_sigma > 0.0) || !(pss_sigma > 0.0) || !(image_sigma > 0.0)) {
    throw std::invalid_argument("config: bandwidths must be positive");
  }
  if (image_resolution < 1) throw std::invalid_argument("config: image_resolution must be >= 1");
  if (tv_length < 1) throw std::invalid_argument("config: tv_length must be >= 1");
  if (landscape_k_max < 1) throw std::invalid_argument("config: landscape_k_max must be >= 1");
  if (sw_directions < 1) throw std::invalid_argument("config: sw_directions must be >= 1");
  if (threads < 0) throw std::invalid_argument("config: threads must be >= 0");
  weight_function_from_id(pwg_weight);
}

namespace {

std::vector<Method> all_methods() {
  return {Method::PWG, Method::PSS, Method::LS, Method::IM, Method::TV, Method::SW_SQRT};
}

}  // namespace

ExperimentConfig desk_scale_config() {
  ExperimentConfig config;
  config.cardinalities = {10, 30, 100};
  config.diagrams_per_cardinality = 30;
  config.rng_seed = 0;
  config.methods = all_methods();
  return config;
}

ExperimentConfig full_scale_config() {
  ExperimentConfig config;
  config.cardinalities = {10, 20, 50, 100, 200, 500, 1000};
  config.diagrams_per_cardinality = 100;
  config.rng_seed = 0;
  config.methods = all_methods();
  return config;
}

ExperimentConfig parse_config_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");

  ExperimentConfig config = desk_scale_config();
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "cardinalities") {
        config.cardinalities = value.get<std::vector<int>>();
      } else if (key == "diagrams_per_cardinality") {
        config.diagrams_per_cardinality = value.get<int>();
      } else if (key == "rng_seed") {
        config.rng_seed = value.get<std::uint64_t>();
      } else if (key == "methods") {
        config.methods.clear();
        for (const auto& id : value) config.methods.push_back(method_from_id(id.get<std::string>()));
      } else if (key == "pwg_sigma") {
        config.pwg_sigma = value.get<double>();
      } else if (key == "pss_sigma") {
        config.pss_sigma = value.get<double>();
      } else if (key == "image_sigma") {
        config.image_sigma = value.get<double>();
      } else if (key == "image_resolution") {
        config.image_resolution = value.get<int>();
      } else if (key == "tv_length") {
        config.tv_length = value.get<int>();
      } else if (key == "landscape_k_max") {
        config.landscape_k_max = value.get<int>();
      } else if (key == "sw_directions") {
        config.sw_directions = value.get<int>();
      } else if (key == "pwg_weight") {
        config.pwg_weight = value.get<std::string>();
      } else if (key == "threads") {
        config.threads = value.get<int>();
      } else {
        throw std::invalid_argument("config: unknown key '" + key + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("config: bad value for '" + key + "': " + e.what());
    }
  }
  config.validate();
  return config;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t bucket_seed(std::uint64_t base_seed, int cardinality, int index) {
  const std::uint64_t h =
      splitmix64(splitmix64(static_cast<std::uint64_t>(cardinality)) ^
                 static_cast<std::uint64_t>(index));
  return base_seed ^ h;
}

namespace {

// Per-diagram precomputed representations for one bucket.
struct BucketFeatures {
  std::vector<LandscapeProfile> landscapes;
  std::vector<GaussianSumEmbedding> pwg;
  std::vector<GaussianSumEmbedding> pss;
  std::vector<FiniteVector> images;
  std::vector<FiniteVector> tvs;
};

BucketFeatures compute_features(const std::vector<PersistenceDiagram>& diagrams,
                                const ExperimentConfig& config) {
  BucketFeatures f;
  const bool want_ls = std::count(config.methods.begin(), config.methods.end(), Method::LS) > 0;
  const bool want_pwg = std::count(config.methods.begin(), config.methods.end(), Method::PWG) > 0;
  const bool want_pss = std::count(config.methods.begin(), config.methods.end(), Method::PSS) > 0;
  const bool want_im = std::count(config.methods.begin(), config.methods.end(), Method::IM) > 0;
  const bool want_tv = std::count(config.methods.begin(), config.methods.end(), Method::TV) > 0;
  const WeightFunction pwg_weight = weight_function_from_id(config.pwg_weight);
  for (const PersistenceDiagram& d : diagrams) {
    if (want_ls) f.landscapes.push_back(landscape_profile(d, config.landscape_k_max));
    if (want_pwg) f.pwg.push_back(pwg_embedding(d, pwg_weight, config.pwg_sigma));
    if (want_pss) f.pss.push_back(pss_embedding(d, config.pss_sigma));
    if (want_im) {
      f.images.push_back(persistence_image(d, config.image_resolution, config.image_sigma,
                                           WeightFunction::persistence));
    }
    if (want_tv) f.tvs.push_back(topological_vector(d, config.tv_length));
  }
  return f;
}

struct PairResult {
  double d1 = 0.0;
  std::vector<double> dh;  // one entry per configured method
};

template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& body) {
  unsigned worker_count = threads > 0 ? static_cast<unsigned>(threads)
                                      : std::max(1u, std::thread::hardware_concurrency());
  worker_count = std::min<unsigned>(worker_count, count == 0 ? 1 : static_cast<unsigned>(count));
  if (worker_count <= 1) {
    for (std::size_t idx = 0; idx < count; ++idx) body(idx);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(worker_count);
  std::vector<std::thread> pool;
  pool.reserve(worker_count);
  for (unsigned w = 0; w < worker_count; ++w) {
    pool.emplace_back([&, w] {
      try {
        while (true) {
          const std::size_t idx = next.fetch_add(1);
          if (idx >= count) break;
          body(idx);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

RatioTable run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::vector<Bucket> buckets;
  buckets.reserve(config.cardinalities.size());
  for (const int cardinality : config.cardinalities) {
    Bucket bucket;
    bucket.cardinality = cardinality;
    bucket.diagrams.reserve(static_cast<std::size_t>(config.diagrams_per_cardinality));
    for (int idx = 0; idx < config.diagrams_per_cardinality; ++idx) {
      bucket.diagrams.push_back(
          sample_uniform_diagram(cardinality, bucket_seed(config.rng_seed, cardinality, idx)));
    }
    buckets.push_back(std::move(bucket));
  }
  return run_experiment_on_buckets(config, buckets);
}

RatioTable run_experiment_on_buckets(const ExperimentConfig& config,
                                     const std::vector<Bucket>& buckets) {
  config.validate();
  RatioTable table;

  for (const Bucket& bucket : buckets) {
    const int cardinality = bucket.cardinality;
    const std::vector<PersistenceDiagram>& diagrams = bucket.diagrams;
    const int n = static_cast<int>(diagrams.size());
    std::vector<std::pair<int, int>> pair_index;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) pair_index.emplace_back(i, j);
    }
    try {
      const BucketFeatures features = compute_features(diagrams, config);

      std::vector<PairResult> results(pair_index.size());
      parallel_for(pair_index.size(), config.threads, [&](std::size_t idx) {
        const auto [i, j] = pair_index[idx];
        PairResult& out = results[idx];
        out.d1 = diagram_distance(diagrams[static_cast<std::size_t>(i)],
                                  diagrams[static_cast<std::size_t>(j)], 1);
        out.dh.resize(config.methods.size());
        for (std::size_t m = 0; m < config.methods.size(); ++m) {
          const std::size_t a = static_cast<std::size_t>(i), b = static_cast<std::size_t>(j);
          switch (config.methods[m]) {
            case Method::PWG:
              out.dh[m] = gaussian_sum_l2_distance(features.pwg[a], features.pwg[b]);
              break;
            case Method::PSS:
              out.dh[m] = gaussian_sum_l2_distance(features.pss[a], features.pss[b]);
              break;
            case Method::LS:
              out.dh[m] = landscape_l2_distance(features.landscapes[a], features.landscapes[b]);
              break;
            case Method::IM:
              out.dh[m] = euclidean_distance(features.images[a], features.images[b]);
              break;
            case Method::TV:
              out.dh[m] = euclidean_distance(features.tvs[a], features.tvs[b]);
              break;
            case Method::SW_SQRT:
              out.dh[m] = std::sqrt(
                  sliced_wasserstein_distance(diagrams[a], diagrams[b], config.sw_directions));
              break;
          }
        }
      });

      // Gather in method-major, (i, j)-lexicographic order regardless of
      // completion order.
      for (std::size_t m = 0; m < config.methods.size(); ++m) {
        for (std::size_t idx = 0; idx < pair_index.size(); ++idx) {
          const PairResult& res = results[idx];
          if (res.d1 == 0.0) continue;
          RatioRow row;
          row.method = config.methods[m];
          row.cardinality = cardinality;
          row.i = pair_index[idx].first;
          row.j = pair_index[idx].second;
          row.d1 = res.d1;
          row.dh = res.dh[m];
          row.ratio = res.dh[m] / res.d1;
          table.rows.push_back(row);
        }
      }
      for (const PairResult& res : results) {
        if (res.d1 == 0.0) ++table.skipped_pairs;
      }
    } catch (const std::exception& e) {
      table.bucket_errors.push_back(BucketError{cardinality, e.what()});
    }
  }
  return table;
}

namespace {

double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double h = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double upper_decile_mean(const std::vector<double>& sorted) {
  if (sorted.empty()) return 0.0;
  const std::size_t take = (sorted.size() + 9) / 10;  // ceil(count / 10)
  double sum = 0.0;
  for (std::size_t i = sorted.size() - take; i < sorted.size(); ++i) sum += sorted[i];
  return sum / static_cast<double>(take);
}

}  // namespace

Summary summarize(const RatioTable& table) {
  Summary summary;
  summary.skipped_pairs = table.skipped_pairs;

  std::vector<Method> method_order;
  std::vector<int> cardinality_order;
  for (const RatioRow& row : table.rows) {
    if (std::find(method_order.begin(), method_order.end(), row.method) == method_order.end()) {
      method_order.push_back(row.method);
    }
    if (std::find(cardinality_order.begin(), cardinality_order.end(), row.cardinality) ==
        cardinality_order.end()) {
      cardinality_order.push_back(row.cardinality);
    }
  }
  std::sort(cardinality_order.begin(), cardinality_order.end());

  for (const Method method : method_order) {
    for (const int cardinality : cardinality_order) {
      std::vector<double> ratios;
      std::vector<double> reciprocal;
      for (const RatioRow& row : table.rows) {
        if (row.method != method || row.cardinality != cardinality) continue;
        ratios.push_back(row.ratio);
        reciprocal.push_back(row.dh > 0.0 ? row.d1 / row.dh
                                          : std::numeric_limits<double>::infinity());
      }
      if (ratios.empty()) continue;
      std::sort(ratios.begin(), ratios.end());
      std::sort(reciprocal.begin(), reciprocal.end());

      SummaryRow s;
      s.method = method;
      s.cardinality = cardinality;
      s.count = ratios.size();
      s.min = ratios.front();
      s.q1 = quantile(ratios, 0.25);
      s.median = quantile(ratios, 0.5);
      s.q3 = quantile(ratios, 0.75);
      s.max = ratios.back();
      s.mean = std::accumulate(ratios.begin(), ratios.end(), 0.0) /
               static_cast<double>(ratios.size());
      s.upper_decile_mean = upper_decile_mean(ratios);
      s.d1_over_dh_max = reciprocal.back();
      s.d1_over_dh_upper_decile_mean = upper_decile_mean(reciprocal);
      summary.rows.push_back(s);
    }
  }
  return summary;
}

std::string table_to_csv(const RatioTable& table) {
  std::string out = "method,cardinality,i,j,d1,dh,ratio\n";
  for (const RatioRow& row : table.rows) {
    out += method_id(row.method);
    out += ',';
    out += std::to_string(row.cardinality);
    out += ',';
    out += std::to_string(row.i);
    out += ',';
    out += std::to_string(row.j);
    out += ',';
    out += format_double(row.d1);
    out += ',';
    out += format_double(row.dh);
    out += ',';
    out += format_double(row.ratio);
    out += '\n';
  }
  return out;
}

RatioTable parse_table_csv(const std::string& text) {
  RatioTable table;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != "method,cardinality,i,j,d1,dh,ratio") {
        throw DataError("ratio table: unexpected header '" + line + "'");
      }
      continue;
    }
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 7) {
      throw DataError("ratio table:" + std::to_string(line_no) + ": expected 7 fields");
    }
    auto to_int = [&](const std::string& s) {
      int v = 0;
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw DataError("ratio table:" + std::to_string(line_no) + ": bad integer '" + s + "'");
      }
      return v;
    };
    auto to_double = [&](const std::string& s) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw DataError("ratio table:" + std::to_string(line_no) + ": bad number '" + s + "'");
      }
      return v;
    };
    RatioRow row;
    row.method = method_from_id(fields[0]);
    row.cardinality = to_int(fields[1]);
    row.i = to_int(fields[2]);
    row.j = to_int(fields[3]);
    row.d1 = to_double(fields[4]);
    row.dh = to_double(fields[5]);
    row.ratio = to_double(fields[6]);
    table.rows.push_back(row);
  }
  return table;
}

std::string table_to_json(const RatioTable& table) {
  nlohmann::ordered_json j;
  j["skipped_pairs"] = table.skipped_pairs;
  j["rows"] = nlohmann::ordered_json::array();
  for (const RatioRow& row : table.rows) {
    nlohmann::ordered_json r;
    r["method"] = method_id(row.method);
    r["cardinality"] = row.cardinality;
    r["i"] = row.i;
    r["j"] = row.j;
    r["d1"] = row.d1;
    r["dh"] = row.dh;
    r["ratio"] = row.ratio;
    j["rows"].push_back(std::move(r));
  }
  return j.dump(2) + "\n";
}

std::string summary_to_json(const Summary& summary) {
  nlohmann::ordered_json j;
  j["skipped_pairs"] = summary.skipped_pairs;
  j["rows"] = nlohmann::ordered_json::array();
  for (const SummaryRow& row : summary.rows) {
    nlohmann::ordered_json r;
    r["method"] = method_id(row.method);
    r["cardinality"] = row.cardinality;
    r["count"] = row.count;
    r["min"] = row.min;
    r["q1"] = row.q1;
    r["median"] = row.median;
    r["q3"] = row.q3;
    r["max"] = row.max;
    r["mean"] = row.mean;
    r["upper_decile_mean"] = row.upper_decile_mean;
    r["d1_over_dh_max"] = row.d1_over_dh_max;
    r["d1_over_dh_upper_decile_mean"] = row.d1_over_dh_upper_decile_mean;
    j["rows"].push_back(std::move(r));
  }

  // Trend arrays per method over ascending cardinalities.
  j["trend"] = nlohmann::ordered_json::array();
  std::vector<Method> seen;
  for (const SummaryRow& row : summary.rows) {
    if (std::find(seen.begin(), seen.end(), row.method) != seen.end()) continue;
    seen.push_back(row.method);
    nlohmann::ordered_json t;
    t["method"] = method_id(row.method);
    t["cardinalities"] = nlohmann::ordered_json::array();
    t["max_ratio"] = nlohmann::ordered_json::array();
    t["upper_decile_mean"] = nlohmann::ordered_json::array();
    t["d1_over_dh_max"] = nlohmann::ordered_json::array();
    t["d1_over_dh_upper_decile_mean"] = nlohmann::ordered_json::array();
    for (const SummaryRow& r : summary.rows) {
      if (r.method != row.method) continue;
      t["cardinalities"].push_back(r.cardinality);
      t["max_ratio"].push_back(r.max);
      t["upper_decile_mean"].push_back(r.upper_decile_mean);
      t["d1_over_dh_max"].push_back(r.d1_over_dh_max);
      t["d1_over_dh_upper_decile_mean"].push_back(r.d1_over_dh_upper_decile_mean);
    }
    j["trend"].push_back(std::move(t));
  }
  return j.dump(2) + "\n";
}

std::string summary_to_boxplot_csv(const Summary& summary) {
  std::string out = "method,cardinality,min,q1,median,q3,max\n";
  for (const SummaryRow& row : summary.rows) {
    out += method_id(row.method);
    out += ',';
    out += std::to_string(row.cardinality);
    out += ',';
    out += format_double(row.min);
    out += ',';
    out += format_double(row.q1);
    out += ',';
    out += format_double(row.median);
    out += ',';
    out += format_double(row.q3);
    out += ',';
    out += format_double(row.max);
    out += '\n';
  }
  return out;
}

namespace {

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw DataError("write failed for '" + path + "'");
}

}  // namespace

void emit_table(const RatioTable& table, const std::string& path, const std::string& format) {
  if (format == "csv") {
    write_text_file(path, table_to_csv(table));
  } else if (format == "json") {
    write_text_file(path, table_to_json(table));
  } else {
    throw std::invalid_argument("emit_table: format must be 'csv' or 'json'");
  }
}

void emit_summary(const Summary& summary, const std::string& path, const std::string& format) {
  if (format == "json") {
    write_text_file(path, summary_to_json(summary));
  } else if (format == "csv") {
    write_text_file(path, summary_to_boxplot_csv(summary));
  } else {
    throw std::invalid_argument("emit_summary: format must be 'csv' or 'json'");
  }
}

}  // namespace pdm
