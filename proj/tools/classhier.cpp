// Command-line frontend: derive class hierarchies from confusion matrices,
// run distance baselines, generate synthetic matrices, sweep the threshold
// ratio, and compare trees.
//
// Exit codes: 0 success, 1 internal error, 2 bad input or usage,
// 3 class-set mismatch in compare.

#include <cstdlib>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "classhier/baseline.hpp"
#include "classhier/ch.hpp"
#include "classhier/io.hpp"
#include "classhier/matrix.hpp"
#include "classhier/oracle.hpp"
#include "classhier/serialize.hpp"
#include "classhier/synth.hpp"
#include "classhier/tree.hpp"

namespace {

using namespace classhier;

std::string render(const ClassTree& t, const std::string& format) {
  if (format == "json") return to_json_string(t);
  if (format == "dot") return to_dot(t);
  if (format == "newick") return to_newick(t);
  if (format == "ascii") return to_ascii(t);
  throw ValidationError("unknown format \"" + format + "\"");
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  out << text;
}

double epsilon_from_env() {
  const char* raw = std::getenv("HIERARCH_EPSILON");
  if (!raw) return 0.0;
  const std::string s(raw);
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || v < 0.0)
    throw ValidationError("HIERARCH_EPSILON must be a non-negative number, got \"" + s + "\"");
  return v;
}

void print_tree_stats(std::size_t n, const BuildStats& stats, const ClassTree& t) {
  std::cerr << "n=" << n << " iterations=" << stats.iterations << " depth=" << depth(t)
            << " internal_nodes=" << internal_node_count(t) << " max_arity=" << max_arity(t)
            << "\n";
}

struct BuildOptions {
  std::string input;
  std::string output;
  std::string format = "json";
  std::string mode = "sit";
  double ratio = 0.1;
  bool as_similarity = false;
};

ClassTree build_from(const LoadedMatrix& m, double ratio, const std::string& mode,
                     BuildStats* stats) {
  HierarchyConfig cfg;
  cfg.ratio = ratio;
  cfg.single_inheritance = mode == "sit";
  cfg.epsilon = epsilon_from_env();
  return build_hierarchy(m.to_similarity(), cfg, m.labels, stats);
}

int run_build(const BuildOptions& o) {
  const LoadedMatrix m = load_matrix_file(o.input, o.as_similarity);
  BuildStats stats;
  const ClassTree t = build_from(m, o.ratio, o.mode, &stats);
  print_tree_stats(m.labels.size(), stats, t);
  write_output(render(t, o.format), o.output);
  return 0;
}

struct BaselineOptions {
  std::string input;
  std::string output;
  std::string format = "json";
  std::string method = "ed";
  std::string linkage = "average";
  bool rates = false;
};

int run_baseline(const BaselineOptions& o) {
  const LoadedMatrix m = load_matrix_file(o.input);
  if (!m.counts) throw ValidationError("baseline needs a confusion count matrix");
  DistanceMatrix d;
  if (o.rates) {
    const NormalizedConfusionMatrix nm = normalize(*m.counts);
    d = o.method == "ed" ? euclidean_distance(nm) : l1_distance(nm);
  } else {
    d = o.method == "ed" ? euclidean_distance(*m.counts) : l1_distance(*m.counts);
  }
  const Linkage link = o.linkage == "complete" ? Linkage::complete : Linkage::average;
  const ClassTree t = agglomerate(d, m.labels, link);
  std::cerr << "n=" << m.labels.size() << " method=" << o.method << " linkage=" << o.linkage
            << " depth=" << depth(t) << "\n";
  write_output(render(t, o.format), o.output);
  return 0;
}

struct SynthOptions {
  std::string islands;
  std::string constant;
  std::string planted;
  std::string range;
  std::string output;
  double noise = 0.1;
  std::int64_t samples = 10000;
  std::uint64_t seed = 0;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  return parts;
}

int run_synth(const SynthOptions& o) {
  const int picked = !o.islands.empty() + !o.constant.empty() + !o.planted.empty();
  if (picked != 1)
    throw ValidationError("pick exactly one of --islands, --constant, --planted");

  if (!o.planted.empty()) {
    std::ifstream in(o.planted);
    if (!in) throw ValidationError("cannot open " + o.planted);
    std::stringstream buf;
    buf << in.rdbuf();
    PlantedSpec spec;
    spec.ground_truth = tree_from_json_string(buf.str());
    spec.noise = o.noise;
    spec.samples_per_class = o.samples;
    spec.seed = o.seed;
    const ConfusionMatrix cm = gen_planted(spec);
    if (o.output.size() >= 5 && o.output.substr(o.output.size() - 5) == ".json") {
      write_output(counts_to_json(cm).dump(2) + "\n", o.output);
    } else {
      std::ostringstream out;
      write_counts_csv(out, cm);
      write_output(out.str(), o.output);
    }
    return 0;
  }

  SimilarityMatrix s;
  std::size_t n = 0;
  if (!o.islands.empty()) {
    IslandSpec spec;
    spec.seed = o.seed;
    for (const std::string& block : split(o.islands, '|')) {
      std::vector<int> ids;
      for (const std::string& tok : split(block, ','))
        ids.push_back(std::stoi(detail::trim(tok)));
      spec.blocks.push_back(std::move(ids));
    }
    if (!o.range.empty()) {
      const auto parts = split(o.range, ',');
      if (parts.size() != 2) throw ValidationError("--range wants \"lo,hi\"");
      spec.lo = std::stod(parts[0]);
      spec.hi = std::stod(parts[1]);
    }
    s = gen_islands(spec);
    n = s.size();
  } else {
    const auto parts = split(o.constant, ',');
    if (parts.size() != 3) throw ValidationError("--constant wants \"n,c,diag\"");
    n = static_cast<std::size_t>(std::stoul(parts[0]));
    s = gen_constant(n, std::stod(parts[1]), std::stod(parts[2]));
  }
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("c" + std::to_string(i));
  write_output(similarity_to_json(labels, s).dump(2) + "\n", o.output);
  return 0;
}

struct SweepOptions {
  std::string input;
  std::string ratios;
  std::string output_dir = ".";
  std::string format = "json";
  std::string mode = "sit";
  bool as_similarity = false;
};

int run_sweep(const SweepOptions& o) {
  const std::vector<std::string> tokens = split(o.ratios, ',');
  if (tokens.empty()) throw ValidationError("--ratios must list at least one ratio");
  const std::string ext = o.format == "json"     ? "json"
                          : o.format == "dot"    ? "dot"
                          : o.format == "newick" ? "nwk"
                                                 : "txt";
  const LoadedMatrix m = load_matrix_file(o.input, o.as_similarity);
  std::filesystem::create_directories(o.output_dir);
  std::cout << "ratio\tdepth\tmax_arity\tinternal_nodes\n";
  for (const std::string& raw : tokens) {
    const std::string token = detail::trim(raw);
    const double ratio = std::stod(token);
    if (ratio < 0.0) throw ValidationError("ratio must be >= 0");
    BuildStats stats;
    const ClassTree t = build_from(m, ratio, o.mode, &stats);
    const std::string path =
        (std::filesystem::path(o.output_dir) / ("hierarchy_r" + token + "." + ext)).string();
    write_output(render(t, o.format), path);
    std::cout << token << '\t' << depth(t) << '\t' << max_arity(t) << '\t'
              << internal_node_count(t) << "\n";
  }
  return 0;
}

int run_compare(const std::string& a_path, const std::string& b_path) {
  const auto load = [](const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return tree_from_json_string(buf.str());
  };
  const ClassTree a = load(a_path);
  const ClassTree b = load(b_path);
  const double sim = tree_similarity(a, b);
  std::cout << "similarity: " << std::fixed << std::setprecision(6) << sim << "\n";
  std::cout << "canonical_match: " << (canonical_equal(a, b) ? "true" : "false") << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"class hierarchies from confusion matrices"};
  app.require_subcommand(1);

  BuildOptions build_opts;
  CLI::App* build = app.add_subcommand("build", "derive a hierarchy from a matrix file");
  build->add_option("--input", build_opts.input, "CSV or JSON matrix file")->required();
  build->add_option("--output", build_opts.output, "output path (default stdout)");
  build->add_option("--format", build_opts.format, "json|dot|newick|ascii")
      ->check(CLI::IsMember({"json", "dot", "newick", "ascii"}));
  build->add_option("--ratio", build_opts.ratio, "threshold ratio r (>= 0)")
      ->check(CLI::NonNegativeNumber);
  build->add_option("--mode", build_opts.mode, "sit|mit")
      ->check(CLI::IsMember({"sit", "mit"}));
  build->add_flag("--similarity", build_opts.as_similarity,
                  "treat the input as a similarity matrix, skipping normalization");

  BaselineOptions base_opts;
  CLI::App* baseline = app.add_subcommand("baseline", "agglomerative baseline hierarchy");
  baseline->add_option("--input", base_opts.input, "CSV or JSON confusion matrix")->required();
  baseline->add_option("--output", base_opts.output, "output path (default stdout)");
  baseline->add_option("--format", base_opts.format, "json|dot|newick|ascii")
      ->check(CLI::IsMember({"json", "dot", "newick", "ascii"}));
  baseline->add_option("--method", base_opts.method, "ed|l1")
      ->check(CLI::IsMember({"ed", "l1"}));
  baseline->add_option("--linkage", base_opts.linkage, "average|complete")
      ->check(CLI::IsMember({"average", "complete"}));
  baseline->add_flag("--rates", base_opts.rates, "use confusion rates instead of raw counts");

  SynthOptions synth_opts;
  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic matrix");
  synth->add_option("--islands", synth_opts.islands, "blocks, e.g. \"0,1|2,3\"");
  synth->add_option("--constant", synth_opts.constant, "\"n,c,diag\" constant off-diagonal");
  synth->add_option("--planted", synth_opts.planted, "ground-truth tree JSON file");
  synth->add_option("--range", synth_opts.range, "within-block similarity range \"lo,hi\"");
  synth->add_option("--noise", synth_opts.noise, "planted: off-diagonal mass in [0,1)");
  synth->add_option("--samples", synth_opts.samples, "planted: samples per class");
  synth->add_option("--seed", synth_opts.seed, "random seed");
  synth->add_option("--output", synth_opts.output, "output path (default stdout)");

  SweepOptions sweep_opts;
  CLI::App* sweep = app.add_subcommand("sweep", "build once per ratio and summarize");
  sweep->add_option("--input", sweep_opts.input, "CSV or JSON matrix file")->required();
  sweep->add_option("--ratios", sweep_opts.ratios, "comma-separated ratio list")->required();
  sweep->add_option("--output-dir", sweep_opts.output_dir, "directory for the per-ratio trees");
  sweep->add_option("--format", sweep_opts.format, "json|dot|newick|ascii")
      ->check(CLI::IsMember({"json", "dot", "newick", "ascii"}));
  sweep->add_option("--mode", sweep_opts.mode, "sit|mit")
      ->check(CLI::IsMember({"sit", "mit"}));
  sweep->add_flag("--similarity", sweep_opts.as_similarity,
                  "treat the input as a similarity matrix");

  std::string compare_a, compare_b;
  CLI::App* compare = app.add_subcommand("compare", "compare two tree JSON files");
  compare->add_option("a", compare_a, "first tree")->required();
  compare->add_option("b", compare_b, "second tree")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (build->parsed()) return run_build(build_opts);
    if (baseline->parsed()) return run_baseline(base_opts);
    if (synth->parsed()) return run_synth(synth_opts);
    if (sweep->parsed()) return run_sweep(sweep_opts);
    if (compare->parsed()) return run_compare(compare_a, compare_b);
  } catch (const ClassSetMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
