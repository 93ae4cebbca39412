// Synthetic similarity/confusion generators and tree-comparison metrics.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "classhier/matrix.hpp"
#include "classhier/tree.hpp"

namespace classhier {

// Class sets of the two trees differ. The CLI's compare maps this to exit 3.
class ClassSetMismatch : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace detail {

// Seeded generator with a fixed bits-to-double mapping (top 53 bits of
// mt19937_64 output) so generated matrices are identical across platforms.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

private:
  std::mt19937_64 eng_;
};

}  // namespace detail

// diag on the diagonal, c everywhere else.
inline SimilarityMatrix gen_constant(std::size_t n, double c, double diag) {
  if (n < 2) throw ValidationError("gen_constant: n must be >= 2");
  if (!(c > 0.0 && c <= 1.0)) throw ValidationError("gen_constant: c must be in (0, 1]");
  if (!(diag >= 0.0 && diag <= 1.0)) throw ValidationError("gen_constant: diag out of [0, 1]");
  SquareMatrix s(n, c);
  for (std::size_t i = 0; i < n; ++i) s(i, i) = diag;
  return SimilarityMatrix(s, 0.0);
}

// A block-structured matrix: zero similarity across blocks, random positive
// similarities inside each block.
struct IslandSpec {
  std::vector<std::vector<int>> blocks;  // partition of 0..n-1, k >= 2 blocks
  double lo = 0.05;                      // within-block similarity range
  double hi = 0.5;
  std::uint64_t seed = 0;
};

// Cross-block entries are exactly zero; within-block off-diagonals are drawn
// uniformly from [lo, hi], so every member of a multi-class block has a
// positive partner. Members of singleton blocks are perfectly classified
// (diagonal 1), other diagonals are 0.9.
inline SimilarityMatrix gen_islands(const IslandSpec& spec) {
  if (spec.blocks.size() < 2) throw ValidationError("invalid partition: need k >= 2 blocks");
  if (!(spec.lo > 0.0 && spec.lo <= spec.hi && spec.hi <= 1.0))
    throw ValidationError("invalid similarity range: need 0 < lo <= hi <= 1");
  std::size_t n = 0;
  for (const auto& b : spec.blocks) {
    if (b.empty()) throw ValidationError("invalid partition: empty block");
    n += b.size();
  }
  std::vector<char> seen(n, 0);
  for (const auto& b : spec.blocks) {
    for (int c : b) {
      if (c < 0 || static_cast<std::size_t>(c) >= n)
        throw ValidationError("invalid partition: class " + std::to_string(c) +
                              " out of range for n = " + std::to_string(n));
      if (seen[c]) throw ValidationError("invalid partition: class " + std::to_string(c) +
                                         " appears twice");
      seen[c] = 1;
    }
  }

  detail::Rng rng(spec.seed);
  SquareMatrix s(n, 0.0);
  for (const auto& b : spec.blocks) {
    std::vector<int> block = b;
    std::sort(block.begin(), block.end());
    for (int c : block) s(c, c) = block.size() == 1 ? 1.0 : 0.9;
    for (std::size_t x = 0; x < block.size(); ++x) {
      for (std::size_t y = x + 1; y < block.size(); ++y) {
        const double v = rng.uniform(spec.lo, spec.hi);
        s(block[x], block[y]) = v;
        s(block[y], block[x]) = v;
      }
    }
  }
  return SimilarityMatrix(s, 0.0);
}

namespace detail {

// Path length in edges between two leaves of a single-inheritance tree.
inline bool leaf_path(const ClassTree& t, int class_id, std::vector<int>& path, int depth_now) {
  if (t.is_leaf()) return t.id() == class_id;
  for (std::size_t c = 0; c < t.children().size(); ++c) {
    path.push_back(static_cast<int>(c));
    if (leaf_path(t.children()[c], class_id, path, depth_now + 1)) return true;
    path.pop_back();
  }
  return false;
}

inline int tree_distance(const ClassTree& t, int a, int b) {
  std::vector<int> pa, pb;
  leaf_path(t, a, pa, 0);
  leaf_path(t, b, pb, 0);
  std::size_t common = 0;
  while (common < pa.size() && common < pb.size() && pa[common] == pb[common]) ++common;
  return static_cast<int>(pa.size() + pb.size() - 2 * common);
}

}  // namespace detail

// A hierarchy to recover plus the sampling knobs for its confusion matrix.
struct PlantedSpec {
  // SIT whose leaves are exactly 0..n-1
  ClassTree ground_truth = ClassTree::leaf(0, "0");
  double noise = 0.1;  // in [0, 1): fraction of each row that leaves the diagonal
  std::int64_t samples_per_class = 10000;
  std::uint64_t seed = 0;
};

// Confusion counts whose error mass respects the planted hierarchy: row i
// keeps samples*(1 - noise) on the diagonal (rounded) and spreads the rest
// over j != i with weight proportional to 2^(-tree_distance(i, j)),
// multinomially sampled. Rows always sum to samples_per_class exactly.
inline ConfusionMatrix gen_planted(const PlantedSpec& spec) {
  if (!(spec.noise >= 0.0 && spec.noise < 1.0))
    throw ValidationError("gen_planted: noise must be in [0, 1)");
  if (spec.samples_per_class < 1) throw ValidationError("gen_planted: samples must be >= 1");
  if (!is_single_inheritance(spec.ground_truth))
    throw ValidationError("gen_planted: ground truth must be single-inheritance");
  const std::vector<int> classes = leaf_set(spec.ground_truth);
  const std::size_t n = classes.size();
  if (n < 2) throw ValidationError("gen_planted: need at least 2 classes");
  for (std::size_t i = 0; i < n; ++i)
    if (classes[i] != static_cast<int>(i))
      throw ValidationError("gen_planted: leaf classes must be exactly 0..n-1");

  std::vector<std::string> labels(n);
  std::vector<const ClassTree*> stack{&spec.ground_truth};
  while (!stack.empty()) {
    const ClassTree* t = stack.back();
    stack.pop_back();
    if (t->is_leaf())
      labels[t->id()] = t->label().empty() ? "c" + std::to_string(t->id()) : t->label();
    else
      for (const ClassTree& c : t->children()) stack.push_back(&c);
  }

  detail::Rng rng(spec.seed);
  const std::int64_t noise_count =
      std::llround(spec.noise * static_cast<double>(spec.samples_per_class));
  std::vector<std::vector<std::int64_t>> counts(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    counts[i][i] = spec.samples_per_class - noise_count;
    std::vector<double> cdf;
    std::vector<std::size_t> target;
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      total += std::exp2(-detail::tree_distance(spec.ground_truth, static_cast<int>(i),
                                                static_cast<int>(j)));
      cdf.push_back(total);
      target.push_back(j);
    }
    for (std::int64_t draw = 0; draw < noise_count; ++draw) {
      const double u = rng.uniform01() * total;
      std::size_t idx = static_cast<std::size_t>(
          std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
      ++counts[i][target[std::min(idx, target.size() - 1)]];
    }
  }
  return ConfusionMatrix(labels, counts);
}

namespace detail {

// Leaf sets of every node, deduplicated.
inline void collect_clusters(const ClassTree& t, std::set<std::vector<int>>& out) {
  out.insert(leaf_set(t));
  for (const ClassTree& c : t.children()) collect_clusters(c, out);
}

inline bool is_subset_int(const std::vector<int>& a, const std::vector<int>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// The inclusion-minimal clusters containing both x and y.
inline std::set<std::vector<int>> min_containing(const std::set<std::vector<int>>& clusters,
                                                 int x, int y) {
  std::vector<std::vector<int>> hits;
  for (const auto& c : clusters)
    if (std::binary_search(c.begin(), c.end(), x) && std::binary_search(c.begin(), c.end(), y))
      hits.push_back(c);
  std::set<std::vector<int>> minimal;
  for (const auto& c : hits) {
    bool has_smaller = false;
    for (const auto& other : hits) {
      if (other.size() < c.size() && is_subset_int(other, c)) {
        has_smaller = true;
        break;
      }
    }
    if (!has_smaller) minimal.insert(c);
  }
  return minimal;
}

}  // namespace detail

// Fraction of unordered class pairs on which the two trees agree about their
// tightest grouping: a pair agrees when the minimal clusters containing both
// classes are the same in a and b. 1.0 exactly when two single-inheritance
// trees are canonical-form equal.
inline double tree_similarity(const ClassTree& a, const ClassTree& b) {
  const std::vector<int> ca = leaf_set(a);
  const std::vector<int> cb = leaf_set(b);
  if (ca != cb) throw ClassSetMismatch("trees cover different class sets");
  if (ca.size() < 2) return 1.0;

  std::set<std::vector<int>> clusters_a, clusters_b;
  detail::collect_clusters(a, clusters_a);
  detail::collect_clusters(b, clusters_b);

  std::size_t agree = 0, total = 0;
  for (std::size_t x = 0; x < ca.size(); ++x) {
    for (std::size_t y = x + 1; y < ca.size(); ++y) {
      ++total;
      if (detail::min_containing(clusters_a, ca[x], ca[y]) ==
          detail::min_containing(clusters_b, ca[x], ca[y]))
        ++agree;
    }
  }
  return static_cast<double>(agree) / static_cast<double>(total);
}

}  // namespace classhier
