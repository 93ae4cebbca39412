// Confusion-matrix ingestion and the similarity matrix derived from it.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace classhier {

// Invalid user-supplied data or configuration. The CLI maps this to exit 2.
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Broken internal invariant, i.e. a bug rather than bad input. Exit 1 in the CLI.
class InternalError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

// Dense row-major square matrix of doubles.
class SquareMatrix {
public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, double fill = 0.0) : n_(n), cells_(n * n, fill) {}

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return cells_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return cells_[i * n_ + j]; }

  bool operator==(const SquareMatrix&) const = default;

private:
  std::size_t n_ = 0;
  std::vector<double> cells_;
};

// Raw integer confusion counts plus class labels. counts(i, j) is the number
// of samples of true class i that the classifier predicted as class j.
class ConfusionMatrix {
public:
  ConfusionMatrix(std::vector<std::string> labels,
                  const std::vector<std::vector<std::int64_t>>& counts)
      : labels_(std::move(labels)), n_(labels_.size()) {
    if (n_ < 2) throw ValidationError("confusion matrix needs at least 2 classes");
    if (counts.size() != n_)
      throw ValidationError("confusion matrix is not square: " + std::to_string(counts.size()) +
                            " rows for " + std::to_string(n_) + " labels");
    for (std::size_t i = 0; i < n_; ++i) {
      if (labels_[i].empty()) throw ValidationError("label " + std::to_string(i) + " is empty");
      for (std::size_t j = i + 1; j < n_; ++j)
        if (labels_[i] == labels_[j])
          throw ValidationError("duplicate label \"" + labels_[i] + "\"");
    }
    cells_.reserve(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i) {
      if (counts[i].size() != n_)
        throw ValidationError("row " + std::to_string(i) + " has " +
                              std::to_string(counts[i].size()) + " entries, expected " +
                              std::to_string(n_));
      for (std::int64_t c : counts[i]) {
        if (c < 0)
          throw ValidationError("negative count in row " + std::to_string(i));
        cells_.push_back(c);
      }
    }
  }

  std::size_t size() const { return n_; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::int64_t count(std::size_t i, std::size_t j) const { return cells_[i * n_ + j]; }
  std::int64_t row_total(std::size_t i) const {
    std::int64_t t = 0;
    for (std::size_t j = 0; j < n_; ++j) t += cells_[i * n_ + j];
    return t;
  }

private:
  std::vector<std::string> labels_;
  std::vector<std::int64_t> cells_;
  std::size_t n_ = 0;
};

// Row-normalized confusion rates; every row sums to 1.
class NormalizedConfusionMatrix {
public:
  explicit NormalizedConfusionMatrix(SquareMatrix rates) : rates_(std::move(rates)) {
    const std::size_t n = rates_.size();
    for (std::size_t i = 0; i < n; ++i) {
      double sum = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double v = rates_(i, j);
        if (!(v >= 0.0)) throw ValidationError("negative or NaN rate in row " + std::to_string(i));
        sum += v;
      }
      if (std::abs(sum - 1.0) > 1e-9)
        throw ValidationError("row " + std::to_string(i) + " sums to " + std::to_string(sum) +
                              ", expected 1");
    }
  }

  std::size_t size() const { return rates_.size(); }
  double rate(std::size_t i, std::size_t j) const { return rates_(i, j); }
  const SquareMatrix& rates() const { return rates_; }

private:
  SquareMatrix rates_;
};

// Symmetric class-similarity matrix with entries in [0, 1]. Symmetry is exact
// by construction: asymmetric input within tol is averaged pairwise.
class SimilarityMatrix {
public:
  SimilarityMatrix() = default;

  explicit SimilarityMatrix(const SquareMatrix& m, double tol = 1e-9) : s_(m.size()) {
    const std::size_t n = m.size();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        if (std::abs(m(i, j) - m(j, i)) > tol)
          throw ValidationError("similarity matrix not symmetric at (" + std::to_string(i) +
                                ", " + std::to_string(j) + ")");
        const double v = i == j ? m(i, i) : (m(i, j) + m(j, i)) / 2.0;
        if (!(v >= 0.0 && v <= 1.0))
          throw ValidationError("similarity out of [0, 1] at (" + std::to_string(i) + ", " +
                                std::to_string(j) + ")");
        s_(i, j) = v;
        s_(j, i) = v;
      }
    }
  }

  std::size_t size() const { return s_.size(); }
  double operator()(std::size_t i, std::size_t j) const { return s_(i, j); }

  // Largest off-diagonal entry, 0 for matrices smaller than 2x2.
  double max_offdiagonal() const {
    double best = 0.0;
    for (std::size_t i = 0; i < s_.size(); ++i)
      for (std::size_t j = i + 1; j < s_.size(); ++j) best = std::max(best, s_(i, j));
    return best;
  }

  bool operator==(const SimilarityMatrix&) const = default;

private:
  SquareMatrix s_;
};

// Row-normalizes confusion counts into rates. Rows with zero total are an
// error: a class with no test samples has undefined confusion rates.
inline NormalizedConfusionMatrix normalize(const ConfusionMatrix& cm) {
  const std::size_t n = cm.size();
  SquareMatrix rates(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t total = cm.row_total(i);
    if (total == 0) throw ValidationError("row " + std::to_string(i) + " sums to zero");
    for (std::size_t j = 0; j < n; ++j)
      rates(i, j) = static_cast<double>(cm.count(i, j)) / static_cast<double>(total);
  }
  return NormalizedConfusionMatrix(std::move(rates));
}

// s(i, j) = (rate(i, j) + rate(j, i)) / 2, each unordered pair computed once
// and mirrored so the result is exactly symmetric.
inline SimilarityMatrix similarity(const NormalizedConfusionMatrix& nm) {
  const std::size_t n = nm.size();
  SquareMatrix s(n);
  for (std::size_t i = 0; i < n; ++i) {
    s(i, i) = nm.rate(i, i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = (nm.rate(i, j) + nm.rate(j, i)) / 2.0;
      s(i, j) = v;
      s(j, i) = v;
    }
  }
  return SimilarityMatrix(s, 0.0);
}

}  // namespace classhier
