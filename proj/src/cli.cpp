#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pdm/bench.hpp"
#include "pdm/diagram_io.hpp"
#include "pdm/feature_maps.hpp"
#include "pdm/matching.hpp"
#include "pdm/theory.hpp"

namespace pdm {

namespace {

int parse_p_norm(const std::string& text) {
  if (text == "inf") return p_infinity;
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value < 1) {
    throw std::invalid_argument("--p must be a positive integer or 'inf', got '" + text + "'");
  }
  return value;
}

struct DistArgs {
  std::string p = "1";
  int directions = default_sw_directions;
  std::string file_a, file_b;
};

int run_dist(const DistArgs& args) {
  const PersistenceDiagram a = read_diagram(args.file_a);
  const PersistenceDiagram b = read_diagram(args.file_b);
  double value = 0.0;
  if (args.p == "sw") {
    value = sliced_wasserstein_distance(a, b, args.directions);
  } else {
    value = diagram_distance(a, b, parse_p_norm(args.p));
  }
  std::cout << format_double(value) << "\n";
  return 0;
}

struct EmbedArgs {
  std::string method;
  double sigma = 1.0;
  int resolution = 10;
  int length = 10;
  int k_max = 5;
  std::string weight = "persistence_squared";
  std::string file;
};

void print_vector_csv(const FiniteVector& v) {
  std::string out;
  for (std::size_t i = 0; i < v.entries.size(); ++i) {
    if (i > 0) out += ',';
    out += format_double(v.entries[i]);
  }
  std::cout << out << "\n";
}

void print_atoms_csv(const GaussianSumEmbedding& e) {
  for (const GaussianAtom& atom : e.atoms) {
    std::cout << format_double(atom.center.birth) << ',' << format_double(atom.center.death)
              << ',' << format_double(atom.weight) << "\n";
  }
}

int run_embed(const EmbedArgs& args) {
  const PersistenceDiagram d = read_diagram(args.file);
  if (args.method == "LS") {
    const LandscapeProfile profile = landscape_profile(d, args.k_max);
    nlohmann::ordered_json j;
    j["k_max"] = profile.k_max();
    j["envelopes"] = nlohmann::ordered_json::array();
    for (const LandscapeEnvelope& env : profile.envelopes) {
      nlohmann::ordered_json knots = nlohmann::ordered_json::array();
      for (const LandscapeKnot& k : env) knots.push_back({k.t, k.value});
      j["envelopes"].push_back(std::move(knots));
    }
    std::cout << j.dump(2) << "\n";
  } else if (args.method == "PWG") {
    print_atoms_csv(pwg_embedding(d, weight_function_from_id(args.weight), args.sigma));
  } else if (args.method == "PSS") {
    print_atoms_csv(pss_embedding(d, args.sigma));
  } else if (args.method == "IM") {
    print_vector_csv(persistence_image(d, args.resolution, args.sigma,
                                       WeightFunction::persistence));
  } else if (args.method == "TV") {
    print_vector_csv(topological_vector(d, args.length));
  } else {
    throw std::invalid_argument("--method must be one of LS, PWG, PSS, IM, TV");
  }
  return 0;
}

struct BenchArgs {
  std::string config_path;
  std::string out_dir;
  bool full = false;
};

int run_bench(const BenchArgs& args) {
  ExperimentConfig config;
  if (!args.config_path.empty()) {
    std::ifstream in(args.config_path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open config '" + args.config_path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    config = parse_config_json(buf.str());
  } else {
    config = args.full ? full_scale_config() : desk_scale_config();
    config.validate();
  }

  const RatioTable table = run_experiment(config);
  for (const BucketError& err : table.bucket_errors) {
    std::cerr << "bucket " << err.cardinality << " failed: " << err.message << "\n";
  }
  if (table.rows.empty()) {
    std::cerr << "no bucket produced rows\n";
    return 3;
  }
  const Summary summary = summarize(table);

  std::error_code ec;
  std::filesystem::create_directories(args.out_dir, ec);
  if (ec) throw DataError("cannot create output directory '" + args.out_dir + "': " + ec.message());
  const std::filesystem::path dir(args.out_dir);
  emit_table(table, (dir / "ratios.csv").string(), "csv");
  emit_summary(summary, (dir / "summary.json").string(), "json");
  emit_summary(summary, (dir / "boxplot.csv").string(), "csv");
  std::cout << "wrote " << table.rows.size() << " rows (" << table.skipped_pairs
            << " pairs skipped) to " << args.out_dir << "\n";
  return 0;
}

struct TheoryArgs {
  std::string suite;
  std::int64_t k = 4;
  std::string p = "1";
  std::int64_t q = 2;
  double sigma = 1.0;
  double C = 2.0;
  double alpha = 1.0;
  double L = 1.0;
};

nlohmann::ordered_json packing_report_json(const PackingFamily& family,
                                           const PackingReport& report) {
  nlohmann::ordered_json j;
  j["suite"] = "packing";
  j["C"] = family.C;
  j["alpha"] = family.alpha;
  j["L"] = family.L;
  j["beta"] = family.beta;
  j["M"] = report.M;
  j["r"] = report.r;
  j["p"] = report.p == p_infinity ? nlohmann::ordered_json("inf")
                                  : nlohmann::ordered_json(report.p);
  j["expected_to_empty"] = report.expected_to_empty;
  j["expected_pairwise"] = report.expected_pairwise;
  j["max_error_to_empty"] = report.max_error_to_empty;
  j["max_error_pairwise"] = report.max_error_pairwise;
  j["min_pairwise"] = report.min_pairwise;
  j["separation_radius"] = report.separation_radius;
  j["to_empty_within_r"] = report.to_empty_within_r;
  j["values_match"] = report.values_match;
  j["separates_at_beta_r"] = report.separates_at_beta_r;
  j["tolerance"] = report.tolerance;
  j["pass"] = report.pass;
  return j;
}

int run_theory(const TheoryArgs& args) {
  nlohmann::ordered_json j;
  if (args.suite == "s") {
    if (args.k < 1) throw std::invalid_argument("--k must be >= 1");
    const STruncation trunc = s_truncation(args.k);
    const double bound = s_distance_lower_bound(trunc.support, {});
    j["suite"] = "s";
    j["k"] = args.k;
    j["support_size"] = trunc.support.size();
    j["diagonal_matching_cost"] = bound;
    if (trunc.diagram.total_mass() <= 10) {
      const double oracle = brute_force_distance(trunc.diagram, PersistenceDiagram(), 1);
      j["oracle_d1"] = oracle;
      j["oracle_match"] = std::abs(oracle - bound) <= 1e-12;
    } else {
      j["oracle_d1"] = nullptr;
      j["oracle_match"] = nullptr;
    }
  } else if (args.suite == "cauchy") {
    const std::int64_t p = parse_p_norm(args.p);
    const CauchyTail pwg = pwg_cauchy_tail(p, args.q, args.sigma);
    const CauchyTail ls = landscape_cauchy_tail(p, args.q);
    j["suite"] = "cauchy";
    j["p"] = p;
    j["q"] = args.q;
    j["sigma"] = args.sigma;
    j["pwg"] = {{"tail_norm_sq", pwg.tail_norm_sq},
                {"bound", pwg.bound},
                {"within_bound", pwg.tail_norm_sq <= pwg.bound}};
    j["landscape"] = {{"tail_norm_sq", ls.tail_norm_sq},
                      {"bound", ls.bound},
                      {"within_bound", ls.tail_norm_sq <= ls.bound}};
  } else if (args.suite == "packing") {
    const PackingFamily family = assouad_packing(args.C, args.alpha, args.L);
    const PackingReport report = verify_packing(family, parse_p_norm(args.p));
    j = packing_report_json(family, report);
  } else {
    throw std::invalid_argument("--suite must be one of s, cauchy, packing");
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args) {
  CLI::App app{"Metric toolkit for persistence diagrams"};
  app.require_subcommand(1);

  DistArgs dist_args;
  CLI::App* dist = app.add_subcommand("dist", "Distance between two diagram CSV files");
  dist->add_option("--p", dist_args.p, "Cost exponent: positive integer, 'inf', or 'sw'");
  dist->add_option("--directions", dist_args.directions, "Directions for --p sw");
  dist->add_option("a", dist_args.file_a, "First diagram CSV")->required();
  dist->add_option("b", dist_args.file_b, "Second diagram CSV")->required();

  EmbedArgs embed_args;
  CLI::App* embed = app.add_subcommand("embed", "Print a feature-map embedding of a diagram");
  embed->add_option("--method", embed_args.method, "LS, PWG, PSS, IM or TV")->required();
  embed->add_option("--sigma", embed_args.sigma, "Gaussian bandwidth");
  embed->add_option("--resolution", embed_args.resolution, "Image grid resolution");
  embed->add_option("--length", embed_args.length, "Topological vector length");
  embed->add_option("--k-max", embed_args.k_max, "Number of landscape envelopes");
  embed->add_option("--weight", embed_args.weight, "PWG weight function id");
  embed->add_option("d", embed_args.file, "Diagram CSV")->required();

  BenchArgs bench_args;
  CLI::App* bench = app.add_subcommand("bench", "Run the distortion experiment");
  CLI::Option* config_opt =
      bench->add_option("--config", bench_args.config_path, "Experiment config JSON");
  bench->add_option("--out", bench_args.out_dir, "Output directory")->required();
  CLI::Option* full_flag = bench->add_flag(
      "--full", bench_args.full, "Full-scale grid (takes hours); default is desk scale");
  full_flag->excludes(config_opt);

  TheoryArgs theory_args;
  CLI::App* theory = app.add_subcommand("theory", "Run a theory-construction check suite");
  theory->add_option("--suite", theory_args.suite, "s, cauchy or packing")->required();
  theory->add_option("--k", theory_args.k, "Truncation size (suite s)");
  theory->add_option("--p", theory_args.p, "Tail start (cauchy) or cost exponent (packing)");
  theory->add_option("--q", theory_args.q, "Tail end (suite cauchy)");
  theory->add_option("--sigma", theory_args.sigma, "Bandwidth (suite cauchy)");
  theory->add_option("--C", theory_args.C, "Packing constant C");
  theory->add_option("--alpha", theory_args.alpha, "Packing exponent alpha");
  theory->add_option("--L", theory_args.L, "Packing box half-width L");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }

  try {
    if (dist->parsed()) return run_dist(dist_args);
    if (embed->parsed()) return run_embed(embed_args);
    if (bench->parsed()) return run_bench(bench_args);
    if (theory->parsed()) return run_theory(theory_args);
    std::cerr << "no subcommand given\n";
    return 1;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace pdm
