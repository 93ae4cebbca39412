// Distance-based baseline hierarchies built by agglomerative clustering.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "classhier/matrix.hpp"
#include "classhier/tree.hpp"

namespace classhier {

// Symmetric pairwise distances with a zero diagonal.
class DistanceMatrix {
public:
  DistanceMatrix() = default;

  explicit DistanceMatrix(const SquareMatrix& m) : d_(m.size()) {
    const std::size_t n = m.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (m(i, i) != 0.0) throw ValidationError("distance diagonal must be zero");
      for (std::size_t j = i + 1; j < n; ++j) {
        if (m(i, j) != m(j, i)) throw ValidationError("distance matrix not symmetric");
        if (!(m(i, j) >= 0.0)) throw ValidationError("negative or NaN distance");
        d_(i, j) = m(i, j);
        d_(j, i) = m(i, j);
      }
    }
  }

  std::size_t size() const { return d_.size(); }
  double operator()(std::size_t i, std::size_t j) const { return d_(i, j); }

private:
  SquareMatrix d_;
};

// Euclidean distance between prediction rows, on raw counts.
inline DistanceMatrix euclidean_distance(const ConfusionMatrix& cm) {
  const std::size_t n = cm.size();
  SquareMatrix d(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double sum = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double diff = static_cast<double>(cm.count(i, k) - cm.count(j, k));
        sum += diff * diff;
      }
      d(i, j) = std::sqrt(sum);
      d(j, i) = d(i, j);
    }
  }
  return DistanceMatrix(d);
}

// Same formula on confusion rates instead of counts.
inline DistanceMatrix euclidean_distance(const NormalizedConfusionMatrix& nm) {
  const std::size_t n = nm.size();
  SquareMatrix d(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double sum = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double diff = nm.rate(i, k) - nm.rate(j, k);
        sum += diff * diff;
      }
      d(i, j) = std::sqrt(sum);
      d(j, i) = d(i, j);
    }
  }
  return DistanceMatrix(d);
}

// Sum of absolute differences between prediction rows, on raw counts.
inline DistanceMatrix l1_distance(const ConfusionMatrix& cm) {
  const std::size_t n = cm.size();
  SquareMatrix d(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      std::int64_t sum = 0;
      for (std::size_t k = 0; k < n; ++k) sum += std::abs(cm.count(i, k) - cm.count(j, k));
      d(i, j) = static_cast<double>(sum);
      d(j, i) = d(i, j);
    }
  }
  return DistanceMatrix(d);
}

inline DistanceMatrix l1_distance(const NormalizedConfusionMatrix& nm) {
  const std::size_t n = nm.size();
  SquareMatrix d(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double sum = 0.0;
      for (std::size_t k = 0; k < n; ++k) sum += std::abs(nm.rate(i, k) - nm.rate(j, k));
      d(i, j) = sum;
      d(j, i) = sum;
    }
  }
  return DistanceMatrix(d);
}

enum class Linkage { average, complete };

// Bottom-up binary dendrogram: repeatedly merge the closest active pair
// (ties to the lowest index pair) and recompute cluster distances by the
// chosen linkage. Internal ids run n..2n-2 in creation order.
inline ClassTree agglomerate(const DistanceMatrix& d, std::vector<std::string> labels = {},
                             Linkage linkage = Linkage::average) {
  const std::size_t n = d.size();
  if (n == 0) throw ValidationError("empty distance matrix");
  if (labels.empty())
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  if (labels.size() != n)
    throw ValidationError("got " + std::to_string(labels.size()) + " labels for " +
                          std::to_string(n) + " classes");

  const std::size_t total = 2 * n - 1;
  std::vector<std::vector<double>> dist(total, std::vector<double>(total, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) dist[i][j] = d(i, j);

  std::vector<ClassTree> nodes;
  std::vector<std::size_t> sizes(total, 1);
  std::vector<char> active(total, 0);
  for (std::size_t i = 0; i < n; ++i) {
    nodes.push_back(ClassTree::leaf(static_cast<int>(i), labels[i]));
    active[i] = 1;
  }

  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::size_t bi = 0, bj = 0;
    double best = std::numeric_limits<double>::infinity();
    const std::size_t limit = n + step;
    for (std::size_t i = 0; i < limit; ++i) {
      if (!active[i]) continue;
      for (std::size_t j = i + 1; j < limit; ++j) {
        if (!active[j]) continue;
        if (dist[i][j] < best) {
          best = dist[i][j];
          bi = i;
          bj = j;
        }
      }
    }

    const std::size_t m = n + step;
    for (std::size_t k = 0; k < limit; ++k) {
      if (!active[k] || k == bi || k == bj) continue;
      double v;
      if (linkage == Linkage::average) {
        v = (static_cast<double>(sizes[bi]) * dist[bi][k] +
             static_cast<double>(sizes[bj]) * dist[bj][k]) /
            static_cast<double>(sizes[bi] + sizes[bj]);
      } else {
        v = std::max(dist[bi][k], dist[bj][k]);
      }
      dist[m][k] = v;
      dist[k][m] = v;
    }
    sizes[m] = sizes[bi] + sizes[bj];
    active[bi] = 0;
    active[bj] = 0;
    active[m] = 1;
    nodes.push_back(combine({nodes[bi], nodes[bj]}, static_cast<int>(m)));
  }
  return nodes.back();
}

}  // namespace classhier
