#include "classhier/matrix.hpp"

#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace classhier;

namespace {

ConfusionMatrix make_cm(std::vector<std::vector<std::int64_t>> counts) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < counts.size(); ++i) labels.push_back("c" + std::to_string(i));
  return ConfusionMatrix(labels, counts);
}

}  // namespace

TEST(Matrix, NormalizeIdentityIsFixedPoint) {
  const auto nm = normalize(make_cm({{1, 0}, {0, 1}}));
  EXPECT_EQ(nm.rate(0, 0), 1.0);
  EXPECT_EQ(nm.rate(0, 1), 0.0);
  EXPECT_EQ(nm.rate(1, 0), 0.0);
  EXPECT_EQ(nm.rate(1, 1), 1.0);
}

TEST(Matrix, NormalizeDividesByRowTotal) {
  const auto nm = normalize(make_cm({{2, 2}, {1, 3}}));
  EXPECT_EQ(nm.rate(0, 0), 0.5);
  EXPECT_EQ(nm.rate(0, 1), 0.5);
  EXPECT_EQ(nm.rate(1, 0), 0.25);
  EXPECT_EQ(nm.rate(1, 1), 0.75);
}

TEST(Matrix, NormalizeRejectsZeroRow) {
  try {
    normalize(make_cm({{0, 0}, {1, 1}}));
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("row 0"), std::string::npos);
  }
}

TEST(Matrix, ConstructionRejectsBadShape) {
  EXPECT_THROW(make_cm({{1, 2}}), ValidationError);
  EXPECT_THROW(make_cm({{1}, {1}}), ValidationError);
  EXPECT_THROW(make_cm({{1, -2}, {3, 4}}), ValidationError);
  EXPECT_THROW(ConfusionMatrix({"a", "a"}, {{1, 2}, {3, 4}}), ValidationError);
  EXPECT_THROW(ConfusionMatrix({"a", ""}, {{1, 2}, {3, 4}}), ValidationError);
  EXPECT_THROW(ConfusionMatrix({"a"}, {{1}}), ValidationError);
}

TEST(Matrix, SimilarityAveragesMirroredRates) {
  SquareMatrix m(2);
  m(0, 0) = 0.9;
  m(0, 1) = 0.1;
  m(1, 0) = 0.3;
  m(1, 1) = 0.7;
  const auto s = similarity(NormalizedConfusionMatrix(m));
  EXPECT_EQ(s(0, 0), 0.9);
  EXPECT_EQ(s(0, 1), 0.2);
  EXPECT_EQ(s(1, 0), 0.2);
  EXPECT_EQ(s(1, 1), 0.7);
}

TEST(Matrix, SimilarityOfSymmetricInputIsUnchanged) {
  SquareMatrix m(3, 0.25);
  for (int i = 0; i < 3; ++i) m(i, i) = 0.5;
  const auto s = similarity(NormalizedConfusionMatrix(m));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(s(i, j), m(i, j));
}

// Scalar recomputation of every entry, independent of the implementation.
TEST(Matrix, SimilarityMatchesElementwiseOracle) {
  testutil::Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto cm = testutil::random_confusion(rng, 3);
    const auto nm = normalize(cm);
    const auto s = similarity(nm);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        const double expected = (nm.rate(i, j) + nm.rate(j, i)) / 2.0;
        EXPECT_EQ(s(i, j), expected);
        EXPECT_EQ(s(i, j), s(j, i));
      }
    }
  }
}

TEST(Matrix, PipelineInvariants) {
  testutil::Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform_int(2, 10));
    const auto cm = testutil::random_confusion(rng, n);
    const auto nm = normalize(cm);
    const auto s = similarity(nm);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_EQ(s(i, i), nm.rate(i, i));  // diagonal is per-class accuracy
      for (std::size_t j = 0; j < n; ++j) {
        EXPECT_EQ(s(i, j), s(j, i));
        EXPECT_GE(s(i, j), 0.0);
        EXPECT_LE(s(i, j), 1.0);
      }
    }
  }
}

// Scaling a row of counts by a positive integer leaves the rates unchanged.
TEST(Matrix, NormalizeIsRowScaleInvariant) {
  testutil::Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform_int(2, 6));
    std::vector<std::vector<std::int64_t>> counts(n, std::vector<std::int64_t>(n, 0));
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) {
      labels.push_back("c" + std::to_string(i));
      for (std::size_t j = 0; j < n; ++j) counts[i][j] = rng.uniform_int(1, 500);
    }
    const auto base = normalize(ConfusionMatrix(labels, counts));
    const std::size_t row = static_cast<std::size_t>(rng.uniform_int(0, n - 1));
    const std::int64_t k = rng.uniform_int(2, 9);
    for (std::size_t j = 0; j < n; ++j) counts[row][j] *= k;
    const auto scaled = normalize(ConfusionMatrix(labels, counts));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) EXPECT_EQ(base.rate(i, j), scaled.rate(i, j));
  }
}

TEST(Matrix, DirectSimilarityValidatesSymmetry) {
  SquareMatrix ok(2);
  ok(0, 1) = 0.2;
  ok(1, 0) = 0.2 + 1e-10;  // inside tolerance, gets exactly symmetrized
  const SimilarityMatrix s(ok);
  EXPECT_EQ(s(0, 1), s(1, 0));

  SquareMatrix bad(2);
  bad(0, 1) = 0.2;
  bad(1, 0) = 0.21;
  EXPECT_THROW(SimilarityMatrix{bad}, ValidationError);

  SquareMatrix range(2);
  range(0, 1) = 1.5;
  range(1, 0) = 1.5;
  EXPECT_THROW(SimilarityMatrix{range}, ValidationError);
}

TEST(Matrix, NormalizedMatrixRejectsBadRows) {
  SquareMatrix m(2);
  m(0, 0) = 0.5;
  m(0, 1) = 0.6;  // sums to 1.1
  m(1, 0) = 0.5;
  m(1, 1) = 0.5;
  EXPECT_THROW(NormalizedConfusionMatrix{m}, ValidationError);
}
