#pragma once

// Experiment driver: sample diagram corpora per cardinality bucket, compute
// pairwise d_1 and each configured Hilbert distance, and emit ratio tables,
// summaries and boxplot-ready statistics with bit-stable formatting.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "pdm/diagram.hpp"
#include "pdm/matching.hpp"

namespace pdm {

enum class Method { PWG, PSS, LS, IM, TV, SW_SQRT };

std::string method_id(Method m);
Method method_from_id(const std::string& id);

struct ExperimentConfig {
  std::vector<int> cardinalities;
  int diagrams_per_cardinality = 30;
  std::uint64_t rng_seed = 0;
  std::vector<Method> methods;
  double pwg_sigma = 1.0;
  double pss_sigma = 1.0;
  double image_sigma = 1.0;
  int image_resolution = 10;
  int tv_length = 10;
  int landscape_k_max = 5;
  int sw_directions = default_sw_directions;
  std::string pwg_weight = "persistence_squared";
  int threads = 0;  // 0: use hardware concurrency

  void validate() const;  // throws std::invalid_argument
};

// CI-runnable scale: cardinalities {10, 30, 100}, 30 diagrams per bucket,
// all six methods, seed 0.
ExperimentConfig desk_scale_config();

// Full-scale grid (cardinalities 10..1000, 100 diagrams per bucket).
// Expect multiple hours of assignment solves at the top bucket.
ExperimentConfig full_scale_config();

// Strict JSON config: unknown keys rejected, list fields nonempty when given.
ExperimentConfig parse_config_json(const std::string& text);

// Per-bucket sampling seed: base ^ hash(cardinality, index), so buckets are
// independent of each other and of their position in the config.
std::uint64_t bucket_seed(std::uint64_t base_seed, int cardinality, int index);

struct RatioRow {
  Method method = Method::LS;
  int cardinality = 0;
  int i = 0;  // diagram indices within the bucket, i < j
  int j = 0;
  double d1 = 0.0;
  double dh = 0.0;
  double ratio = 0.0;  // dh / d1

  friend bool operator==(const RatioRow&, const RatioRow&) = default;
};

struct BucketError {
  int cardinality = 0;
  std::string message;
};

struct RatioTable {
  std::vector<RatioRow> rows;
  std::size_t skipped_pairs = 0;  // pairs with d_1 == 0, counted once per pair
  std::vector<BucketError> bucket_errors;
};

// Deterministic for a fixed config; a failure inside one bucket is recorded
// in bucket_errors and the remaining buckets still run.
RatioTable run_experiment(const ExperimentConfig& config);

// Core of run_experiment with caller-provided buckets of (cardinality label,
// diagrams); run_experiment samples per config and delegates here.
struct Bucket {
  int cardinality = 0;
  std::vector<PersistenceDiagram> diagrams;
};
RatioTable run_experiment_on_buckets(const ExperimentConfig& config,
                                     const std::vector<Bucket>& buckets);

struct SummaryRow {
  Method method = Method::LS;
  int cardinality = 0;
  std::size_t count = 0;
  double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0, mean = 0.0;
  // Mean of the top ceil(count/10) ratios: the upper-tail trend statistic.
  double upper_decile_mean = 0.0;
  // Same statistics for the reciprocal orientation d_1 / dh (the metric
  // distortion of the embedding); infinity when some dh is 0.
  double d1_over_dh_max = 0.0;
  double d1_over_dh_upper_decile_mean = 0.0;
};

struct Summary {
  std::vector<SummaryRow> rows;  // method in first-appearance order, cardinality ascending
  std::size_t skipped_pairs = 0;
};

Summary summarize(const RatioTable& table);

// --- serialization (fixed field order, %.17g floats, LF newlines) ---

std::string table_to_csv(const RatioTable& table);    // header: method,cardinality,i,j,d1,dh,ratio
std::string table_to_json(const RatioTable& table);
RatioTable parse_table_csv(const std::string& text);  // inverse of table_to_csv

std::string summary_to_json(const Summary& summary);
std::string summary_to_boxplot_csv(const Summary& summary);  // method,cardinality,min,q1,median,q3,max

// format: "csv" or "json"; throws std::invalid_argument on unknown format,
// DataError on I/O failure.
void emit_table(const RatioTable& table, const std::string& path, const std::string& format);
void emit_summary(const Summary& summary, const std::string& path, const std::string& format);

// Command-line front end (args exclude the program name).
// Exit codes: 0 success, 1 usage error, 2 data error, 3 internal failure.
int cli_main(const std::vector<std::string>& args);

}  // namespace pdm
