// Hierarchy construction: merge-condition evaluation, clique formation,
// similarity recomputation, and the outer build loop.
#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "classhier/matrix.hpp"
#include "classhier/tree.hpp"

namespace classhier {

struct HierarchyConfig {
  double ratio = 0.1;             // threshold ratio r; delta = r * m each round
  bool single_inheritance = true; // true: SIT output, false: MIT
  double epsilon = 0.0;           // extra slack on the merge condition's >=

  void validate() const {
    if (!(ratio >= 0.0)) throw ValidationError("ratio must be >= 0");
    if (!(epsilon >= 0.0)) throw ValidationError("epsilon must be >= 0");
  }
};

// A qualifying pair of tree indices (a < b) with its similarity score.
struct ScoredPair {
  std::size_t a = 0;
  std::size_t b = 0;
  double score = 0.0;

  bool operator==(const ScoredPair&) const = default;
};

// Sorted by score descending, ties by (a, b) ascending.
using PairList = std::vector<ScoredPair>;

// Groups of tree indices to merge; each group of size >= 2 becomes one new
// internal node. Size-1 groups pass the tree through unchanged.
using MergeGraphs = std::vector<std::vector<std::size_t>>;

// Undirected adjacency of the qualifying-pair graph.
struct PairAdjacency {
  std::vector<std::vector<std::size_t>> neighbors;  // each list sorted ascending
};

// All pairs (i, j) with s(i, j) > 0 and s(i, j) + delta + epsilon >= the
// largest off-diagonal entry in rows i and j. The diagonal never
// participates in the maximum.
inline PairList find_all_pairs(const SimilarityMatrix& s, double delta,
                               const HierarchyConfig& cfg) {
  const std::size_t n = s.size();
  std::vector<double> row_max(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) row_max[i] = std::max(row_max[i], s(i, j));

  PairList pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = s(i, j);
      if (v > 0.0 && v + delta + cfg.epsilon >= std::max(row_max[i], row_max[j]))
        pairs.push_back({i, j, v});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const ScoredPair& x, const ScoredPair& y) {
    if (x.score != y.score) return x.score > y.score;
    return std::pair(x.a, x.b) < std::pair(y.a, y.b);
  });
  return pairs;
}

inline PairAdjacency get_dict(const PairList& p, std::size_t n) {
  PairAdjacency d;
  d.neighbors.resize(n);
  for (const ScoredPair& pr : p) {
    if (pr.a >= n || pr.b >= n) throw InternalError("pair index out of range");
    d.neighbors[pr.a].push_back(pr.b);
    d.neighbors[pr.b].push_back(pr.a);
  }
  for (auto& lst : d.neighbors) std::sort(lst.begin(), lst.end());
  return d;
}

// Indices adjacent to every member of g (members themselves never qualify
// because no vertex is adjacent to itself). Sorted ascending.
inline std::vector<std::size_t> get_intersection(const std::vector<std::size_t>& g,
                                                 const PairAdjacency& d) {
  if (g.empty()) throw InternalError("get_intersection: empty group");
  std::vector<std::size_t> inter = d.neighbors[g[0]];
  for (std::size_t k = 1; k < g.size(); ++k) {
    std::vector<std::size_t> next;
    const auto& nb = d.neighbors[g[k]];
    std::set_intersection(inter.begin(), inter.end(), nb.begin(), nb.end(),
                          std::back_inserter(next));
    inter = std::move(next);
  }
  return inter;
}

namespace detail {

inline std::vector<std::size_t> sorted_intersection(const std::vector<std::size_t>& a,
                                                    const std::vector<std::size_t>& b) {
  std::vector<std::size_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// Bron-Kerbosch with pivoting.
inline void bron_kerbosch(std::vector<std::size_t>& r, std::vector<std::size_t> p,
                          std::vector<std::size_t> x, const PairAdjacency& d,
                          std::vector<std::vector<std::size_t>>& out) {
  if (p.empty() && x.empty()) {
    std::vector<std::size_t> done = r;
    std::sort(done.begin(), done.end());
    out.push_back(std::move(done));
    return;
  }
  std::size_t pivot = 0;
  std::size_t pivot_degree = 0;
  bool have_pivot = false;
  for (const auto* side : {&p, &x}) {
    for (std::size_t u : *side) {
      const std::size_t deg = sorted_intersection(d.neighbors[u], p).size();
      if (!have_pivot || deg > pivot_degree) {
        pivot = u;
        pivot_degree = deg;
        have_pivot = true;
      }
    }
  }
  std::vector<std::size_t> candidates;
  for (std::size_t v : p)
    if (!std::binary_search(d.neighbors[pivot].begin(), d.neighbors[pivot].end(), v))
      candidates.push_back(v);
  for (std::size_t v : candidates) {
    r.push_back(v);
    bron_kerbosch(r, sorted_intersection(p, d.neighbors[v]),
                  sorted_intersection(x, d.neighbors[v]), d, out);
    r.pop_back();
    p.erase(std::find(p.begin(), p.end(), v));
    x.insert(std::lower_bound(x.begin(), x.end(), v), v);
  }
}

// Every maximal clique through the seed, members sorted, in lexicographic
// order of the member lists. Lexicographic order matches the first-visit
// order of a naive depth-first extension of the seed by common neighbors,
// without that recursion's factorial blowup on dense pair graphs.
inline std::vector<std::vector<std::size_t>> find_all_graphs(std::size_t seed,
                                                             const PairAdjacency& d) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> r{seed};
  bron_kerbosch(r, d.neighbors[seed], {}, d, out);
  std::sort(out.begin(), out.end());
  return out;
}

inline bool is_subset(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline void erase_pairs_touching(PairList& p, std::size_t idx) {
  std::erase_if(p, [idx](const ScoredPair& pr) { return pr.a == idx || pr.b == idx; });
}

// When overlapping groups are allowed a graph can come out nested inside an
// earlier one (a leftover edge of an emitted clique resurfaces once the rest
// of that clique's pairs are gone). Only the bigger graph is kept.
inline void drop_nested_graphs(MergeGraphs& graphs) {
  std::vector<char> nested(graphs.size(), 0);
  for (std::size_t a = 0; a < graphs.size(); ++a)
    for (std::size_t b = 0; b < graphs.size() && !nested[a]; ++b)
      nested[a] = b != a && graphs[a].size() < graphs[b].size() &&
                  is_subset(graphs[a], graphs[b]);
  MergeGraphs kept;
  for (std::size_t a = 0; a < graphs.size(); ++a)
    if (!nested[a]) kept.push_back(std::move(graphs[a]));
  graphs = std::move(kept);
}

}  // namespace detail

// Converts the qualifying-pair list into merge groups.
//
// SIT: greedily seed with the highest-similarity remaining pair, grow by the
// common neighbor with the highest mean similarity to the group (ties to the
// lowest index), then retire every pair touching the group. Groups are
// disjoint.
//
// MIT: for each index in ascending order, take every maximal clique through
// it in the remaining pair graph; a lone index survives as a singleton only
// if no earlier group claimed it. After a seed is processed its pairs are
// dropped, along with the pairs of any neighbor whose remaining
// neighborhood is a subset of the seed's, so smaller cliques inside an
// already-emitted one are not emitted again. Groups may overlap.
inline MergeGraphs pairs_to_graphs(const SimilarityMatrix& s, const PairList& p,
                                   const HierarchyConfig& cfg) {
  const std::size_t n = s.size();
  MergeGraphs out;
  PairList rest = p;

  if (cfg.single_inheritance) {
    while (!rest.empty()) {
      const PairAdjacency d = get_dict(rest, n);
      std::vector<std::size_t> g{rest[0].a, rest[0].b};
      std::vector<std::size_t> inter = get_intersection(g, d);
      while (!inter.empty()) {
        std::size_t best = inter[0];
        double best_score = -1.0;
        for (std::size_t k : inter) {
          double sum = 0.0;
          for (std::size_t m : g) sum += s(k, m);
          const double mean = sum / static_cast<double>(g.size());
          if (mean > best_score) {
            best_score = mean;
            best = k;
          }
        }
        g.push_back(best);
        inter = get_intersection(g, d);
      }
      std::sort(g.begin(), g.end());
      for (std::size_t m : g) detail::erase_pairs_touching(rest, m);
      out.push_back(std::move(g));
    }
    return out;
  }

  std::vector<char> free_index(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    const PairAdjacency d = get_dict(rest, n);
    const std::vector<std::vector<std::size_t>> cliques = detail::find_all_graphs(i, d);
    for (const auto& g : cliques) {
      if (g.size() > 1 || free_index[i]) out.push_back(g);
      for (std::size_t j : g) free_index[j] = 0;
    }
    detail::erase_pairs_touching(rest, i);
    for (std::size_t j : d.neighbors[i]) {
      std::vector<std::size_t> dj = d.neighbors[j];
      std::erase(dj, i);
      if (detail::is_subset(dj, d.neighbors[i])) detail::erase_pairs_touching(rest, j);
    }
  }
  detail::drop_nested_graphs(out);
  return out;
}

// Largest similarity among tree pairs that share no base class, or 0 when
// every pair overlaps. This is the m from which delta = r * m is derived;
// overlapping trees are excluded because their mutual similarity is inflated
// by diagonal terms.
inline double max_offdiag_nonoverlap(const SimilarityMatrix& s, const Forest& f) {
  const std::size_t n = f.trees.size();
  if (s.size() != n) throw InternalError("similarity size does not match forest");
  std::vector<std::vector<int>> leaves(n);
  for (std::size_t i = 0; i < n; ++i) leaves[i] = leaf_set(f.trees[i]);
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      std::vector<int> both;
      std::set_intersection(leaves[i].begin(), leaves[i].end(), leaves[j].begin(),
                            leaves[j].end(), std::back_inserter(both));
      if (both.empty()) best = std::max(best, s(i, j));
    }
  }
  return best;
}

// True while at least one pair of trees is class-disjoint.
inline bool has_nonoverlapping_pair(const Forest& f) {
  const std::size_t n = f.trees.size();
  std::vector<std::vector<int>> leaves(n);
  for (std::size_t i = 0; i < n; ++i) leaves[i] = leaf_set(f.trees[i]);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      std::vector<int> both;
      std::set_intersection(leaves[i].begin(), leaves[i].end(), leaves[j].begin(),
                            leaves[j].end(), std::back_inserter(both));
      if (both.empty()) return true;
    }
  }
  return false;
}

// One merge round: qualifying pairs -> merge groups -> new forest. Each
// group of size >= 2 becomes one internal node whose children follow the
// group's member order; untouched trees keep their relative order after the
// new trees. The result's sim is stale until similarity_update runs.
inline Forest merge(const Forest& f, double delta, const HierarchyConfig& cfg,
                    int& next_synthetic_id) {
  const PairList p = find_all_pairs(f.sim, delta, cfg);
  const MergeGraphs graphs = pairs_to_graphs(f.sim, p, cfg);

  Forest out;
  std::vector<char> used(f.trees.size(), 0);
  for (const auto& g : graphs) {
    if (g.size() >= 2) {
      std::vector<ClassTree> children;
      children.reserve(g.size());
      for (std::size_t i : g) children.push_back(f.trees[i]);
      out.trees.push_back(combine(std::move(children), next_synthetic_id++));
    } else {
      out.trees.push_back(f.trees[g[0]]);
    }
    out.groups.push_back(g);
    for (std::size_t i : g) used[i] = 1;
  }
  for (std::size_t i = 0; i < f.trees.size(); ++i) {
    if (!used[i]) {
      out.trees.push_back(f.trees[i]);
      out.groups.push_back({i});
    }
  }
  return out;
}

// Similarity between merged trees: the flat mean of prev over the two trees'
// previous-round member groups, diagonal included. Groups of overlapping
// trees share members, which pulls diagonal entries of prev into the mean.
inline SimilarityMatrix similarity_update(const Forest& f, const SimilarityMatrix& prev) {
  const std::size_t n = f.trees.size();
  if (f.groups.size() != n) throw InternalError("forest groups out of sync");
  SquareMatrix s(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double sum = 0.0;
      for (std::size_t a : f.groups[i])
        for (std::size_t b : f.groups[j]) sum += prev(a, b);
      const double mean =
          sum / static_cast<double>(f.groups[i].size() * f.groups[j].size());
      s(i, j) = mean;
      s(j, i) = mean;
    }
  }
  return SimilarityMatrix(s, 0.0);
}

struct BuildStats {
  std::size_t iterations = 0;
};

// The full construction loop. Rounds of merge + similarity_update run while
// more than one tree remains, some pair can still merge, and at least one
// pair of trees is class-disjoint; once every pair overlaps (or nothing can
// merge) the remaining trees are combined under a single root. delta is
// recomputed each round from the non-overlapping maximum, which is 0 when
// those pairs are all zero-similarity -- overlapping trees then still merge
// at delta = 0 so a block of classes always collapses into one subtree.
inline ClassTree build_hierarchy(const SimilarityMatrix& s, const HierarchyConfig& cfg,
                                 std::vector<std::string> labels = {},
                                 BuildStats* stats = nullptr) {
  cfg.validate();
  const std::size_t n = s.size();
  if (n == 0) throw ValidationError("empty similarity matrix");

  Forest f = make_base_forest(s, std::move(labels));
  int next_id = static_cast<int>(n);
  std::size_t iterations = 0;

  double m_delta = max_offdiag_nonoverlap(f.sim, f);
  double m_any = f.sim.max_offdiagonal();
  bool disjoint_pair_left = f.trees.size() > 1;
  while (f.trees.size() > 1 && m_any > 0.0 && disjoint_pair_left) {
    Forest next = merge(f, cfg.ratio * m_delta, cfg, next_id);
    next.sim = similarity_update(next, f.sim);
    f = std::move(next);
    ++iterations;
    m_delta = max_offdiag_nonoverlap(f.sim, f);
    m_any = f.sim.max_offdiagonal();
    disjoint_pair_left = has_nonoverlapping_pair(f);
  }

  if (stats) stats->iterations = iterations;
  if (f.trees.size() == 1) return f.trees[0];
  return combine(std::move(f.trees), next_id);
}

}  // namespace classhier
