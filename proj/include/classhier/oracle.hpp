// Brute-force reference implementations for differential testing. These stay
// deliberately naive and independent of the engine's code paths.
#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "classhier/ch.hpp"
#include "classhier/matrix.hpp"

namespace classhier {

// Literal O(n^3) evaluation of the merge condition: for every pair, rescan
// both rows for the maximum and apply s(i, j) > 0 and s(i, j) + delta >= max.
inline PairList oracle_pairs(const SimilarityMatrix& s, double delta) {
  const std::size_t n = s.size();
  PairList pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double m = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != i) m = std::max(m, s(i, k));
        if (k != j) m = std::max(m, s(j, k));
      }
      if (s(i, j) > 0.0 && s(i, j) + delta >= m) pairs.push_back({i, j, s(i, j)});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const ScoredPair& x, const ScoredPair& y) {
    if (x.score != y.score) return x.score > y.score;
    return std::pair(x.a, x.b) < std::pair(y.a, y.b);
  });
  return pairs;
}

namespace detail {

// Every maximal clique of the graph over 0..n-1, found by scanning all
// 2^n vertex subsets. Sorted members, lexicographic order.
inline std::vector<std::vector<std::size_t>> all_maximal_cliques(
    const std::vector<std::vector<char>>& adj, std::size_t n) {
  std::vector<std::vector<std::size_t>> cliques;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<std::size_t> members;
    for (std::size_t v = 0; v < n; ++v)
      if (mask & (1u << v)) members.push_back(v);
    bool clique = true;
    for (std::size_t x = 0; x < members.size() && clique; ++x)
      for (std::size_t y = x + 1; y < members.size() && clique; ++y)
        if (!adj[members[x]][members[y]]) clique = false;
    if (!clique) continue;
    bool maximal = true;
    for (std::size_t v = 0; v < n && maximal; ++v) {
      if (mask & (1u << v)) continue;
      bool extends = true;
      for (std::size_t m : members)
        if (!adj[v][m]) {
          extends = false;
          break;
        }
      if (extends) maximal = false;
    }
    if (maximal) cliques.push_back(std::move(members));
  }
  std::sort(cliques.begin(), cliques.end());
  return cliques;
}

}  // namespace detail

// Reference for the multiple-inheritance graph conversion: exhaustive
// maximal-clique enumeration per seed followed by the same free-singleton
// and neighborhood-subset bookkeeping the engine applies. Exponential, so
// n is capped at 12.
inline MergeGraphs oracle_max_cliques(const PairList& p, std::size_t n) {
  if (n > 12)
    throw ValidationError("oracle_max_cliques: n = " + std::to_string(n) +
                          " exceeds the brute-force limit of 12");
  PairList rest = p;
  MergeGraphs out;
  std::vector<char> free_index(n, 1);

  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    std::vector<std::vector<std::size_t>> nbrs(n);
    for (const ScoredPair& pr : rest) {
      adj[pr.a][pr.b] = 1;
      adj[pr.b][pr.a] = 1;
      nbrs[pr.a].push_back(pr.b);
      nbrs[pr.b].push_back(pr.a);
    }
    for (auto& v : nbrs) std::sort(v.begin(), v.end());

    for (const auto& clique : detail::all_maximal_cliques(adj, n)) {
      if (std::find(clique.begin(), clique.end(), i) == clique.end()) continue;
      if (clique.size() > 1 || free_index[i]) out.push_back(clique);
      for (std::size_t j : clique) free_index[j] = 0;
    }

    std::erase_if(rest, [i](const ScoredPair& pr) { return pr.a == i || pr.b == i; });
    for (std::size_t j : nbrs[i]) {
      std::vector<std::size_t> dj = nbrs[j];
      std::erase(dj, i);
      if (std::includes(nbrs[i].begin(), nbrs[i].end(), dj.begin(), dj.end()))
        std::erase_if(rest, [j](const ScoredPair& pr) { return pr.a == j || pr.b == j; });
    }
  }

  // drop graphs nested inside a bigger one, mirroring the engine
  std::vector<char> nested(out.size(), 0);
  for (std::size_t a = 0; a < out.size(); ++a)
    for (std::size_t b = 0; b < out.size() && !nested[a]; ++b)
      nested[a] = b != a && out[a].size() < out[b].size() &&
                  std::includes(out[b].begin(), out[b].end(), out[a].begin(), out[a].end());
  MergeGraphs kept;
  for (std::size_t a = 0; a < out.size(); ++a)
    if (!nested[a]) kept.push_back(std::move(out[a]));
  return kept;
}

}  // namespace classhier
