#include "classhier/baseline.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include "classhier/ch.hpp"
#include "classhier/io.hpp"
#include "classhier/serialize.hpp"
#include "classhier/synth.hpp"
#include "test_util.hpp"

using namespace classhier;

namespace {

ConfusionMatrix make_cm(std::vector<std::vector<std::int64_t>> counts) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < counts.size(); ++i) labels.push_back("c" + std::to_string(i));
  return ConfusionMatrix(labels, counts);
}

ConfusionMatrix demo6() {
  const auto loaded = load_matrix_file(std::string(CLASSHIER_DATA_DIR) + "/demo6.csv");
  return *loaded.counts;
}

ClassTree relabel(const ClassTree& t, const std::vector<int>& map) {
  if (t.is_leaf()) return ClassTree::leaf(map[t.id()], t.label());
  std::vector<ClassTree> kids;
  for (const auto& c : t.children()) kids.push_back(relabel(c, map));
  return ClassTree::internal(std::move(kids), t.id());
}

}  // namespace

TEST(Baselines, EuclideanDistanceBasics) {
  const auto cm = make_cm({{3, 0}, {0, 4}});
  const auto d = euclidean_distance(cm);
  EXPECT_EQ(d(0, 1), 5.0);  // 3-4-5 triangle
  EXPECT_EQ(d(0, 0), 0.0);

  const auto same = make_cm({{2, 2, 1}, {2, 2, 1}, {0, 0, 9}});
  EXPECT_EQ(euclidean_distance(same)(0, 1), 0.0);
}

TEST(Baselines, L1DistanceBasics) {
  const auto cm = make_cm({{3, 0}, {0, 4}});
  EXPECT_EQ(l1_distance(cm)(0, 1), 7.0);
  const auto same = make_cm({{2, 2, 1}, {2, 2, 1}, {0, 0, 9}});
  EXPECT_EQ(l1_distance(same)(0, 1), 0.0);
}

// Independent scalar recomputation of every pair.
TEST(Baselines, DistancesMatchElementwiseOracle) {
  testutil::Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const auto cm = testutil::random_confusion(rng, 5);
    const auto ed = euclidean_distance(cm);
    const auto l1 = l1_distance(cm);
    for (std::size_t i = 0; i < 5; ++i) {
      for (std::size_t j = 0; j < 5; ++j) {
        double sq = 0.0;
        double abs_sum = 0.0;
        for (std::size_t k = 0; k < 5; ++k) {
          const double diff = static_cast<double>(cm.count(i, k)) -
                              static_cast<double>(cm.count(j, k));
          sq += diff * diff;
          abs_sum += std::abs(diff);
        }
        EXPECT_EQ(ed(i, j), std::sqrt(sq));
        EXPECT_EQ(l1(i, j), abs_sum);
        EXPECT_EQ(ed(i, j), ed(j, i));
        EXPECT_EQ(l1(i, j), l1(j, i));
      }
    }
  }
}

TEST(Baselines, RatesVariantNormalizesFirst) {
  const auto cm = make_cm({{8, 2}, {30, 70}});
  const auto nm = normalize(cm);
  const auto d = euclidean_distance(nm);
  const double expect = std::sqrt(0.5 * 0.5 + 0.5 * 0.5);
  EXPECT_NEAR(d(0, 1), expect, 1e-15);
  EXPECT_NEAR(l1_distance(nm)(0, 1), 1.0, 1e-15);
}

TEST(Baselines, AgglomerateTwoClasses) {
  const auto t = agglomerate(euclidean_distance(make_cm({{5, 0}, {0, 5}})));
  ASSERT_EQ(t.children().size(), 2u);
  EXPECT_EQ(leaf_set(t), (std::vector<int>{0, 1}));
}

TEST(Baselines, AgglomerateMergesClosestPairFirst) {
  // d(1,2) is the strict minimum, so the first created cluster is {1,2}.
  SquareMatrix m(3);
  const auto set = [&](std::size_t i, std::size_t j, double v) {
    m(i, j) = v;
    m(j, i) = v;
  };
  set(0, 1, 5.0);
  set(0, 2, 4.0);
  set(1, 2, 1.0);
  const auto t = agglomerate(DistanceMatrix(m));
  ASSERT_EQ(t.children().size(), 2u);
  EXPECT_TRUE(t.children()[0].is_leaf());
  EXPECT_EQ(leaf_set(t.children()[1]), (std::vector<int>{1, 2}));
}

TEST(Baselines, BinaryTreeWithOneLeafPerClass) {
  testutil::Rng rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform_int(2, 12));
    const auto cm = testutil::random_confusion(rng, n);
    for (const auto& d : {euclidean_distance(cm), l1_distance(cm)}) {
      for (Linkage link : {Linkage::average, Linkage::complete}) {
        const auto t = agglomerate(d, cm.labels(), link);
        EXPECT_TRUE(is_single_inheritance(t));
        EXPECT_EQ(leaf_occurrences(t).size(), n);
        std::vector<int> all(n);
        for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<int>(i);
        EXPECT_EQ(leaf_set(t), all);
        EXPECT_EQ(max_arity(t), 2);
        EXPECT_EQ(internal_node_count(t), static_cast<int>(n) - 1);
      }
    }
  }
}

// Permuting the classes and mapping the leaves back gives the same tree, as
// long as no two distances tie.
TEST(Baselines, PermutationInvariantOnDistinctDistances) {
  testutil::Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 6;
    const auto cm = testutil::random_confusion(rng, n);
    const auto d = euclidean_distance(cm);
    std::vector<double> values;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) values.push_back(d(i, j));
    std::sort(values.begin(), values.end());
    if (std::adjacent_find(values.begin(), values.end()) != values.end()) continue;

    std::vector<int> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<int>(i);
    for (std::size_t i = n - 1; i > 0; --i)
      std::swap(perm[i], perm[static_cast<std::size_t>(rng.uniform_int(0, i))]);

    std::vector<std::vector<std::int64_t>> shuffled(n, std::vector<std::int64_t>(n, 0));
    std::vector<std::string> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      labels[i] = cm.labels()[perm[i]];
      for (std::size_t j = 0; j < n; ++j)
        shuffled[i][j] = cm.count(static_cast<std::size_t>(perm[i]),
                                  static_cast<std::size_t>(perm[j]));
    }
    const auto t_orig = agglomerate(d, cm.labels());
    const auto t_perm =
        agglomerate(euclidean_distance(ConfusionMatrix(labels, shuffled)), labels);
    EXPECT_TRUE(canonical_equal(t_orig, relabel(t_perm, perm)));
  }
}

// Turning the reference similarities into distances (1 - s off-diagonal)
// and clustering them gives a binary tree that differs structurally from
// the similarity-driven hierarchy: the 2/3/4 group comes out nested instead
// of ternary.
TEST(Baselines, GoldenAgglomerateOnOneMinusSimilarity) {
  const auto s = testutil::reference_matrix();
  SquareMatrix d(6);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j)
      if (i != j) d(i, j) = 1.0 - s(i, j);
  const auto tree = agglomerate(DistanceMatrix(d),
                                {"class0", "class1", "class2", "class3", "class4", "class5"});
  EXPECT_EQ(to_json_string(tree),
            testutil::read_file(std::string(CLASSHIER_GOLDEN_DIR) + "/agglo_one_minus_s.json"));

  HierarchyConfig cfg;
  const auto ch_tree = build_hierarchy(s, cfg);
  EXPECT_FALSE(canonical_equal(tree, ch_tree));
  EXPECT_LT(tree_similarity(tree, ch_tree), 1.0);
}

TEST(Baselines, GoldenEuclideanDendrogramOnDemoMatrix) {
  const auto tree = agglomerate(euclidean_distance(demo6()), demo6().labels());
  const std::string got = to_json_string(tree);
  const std::string golden =
      testutil::read_file(std::string(CLASSHIER_GOLDEN_DIR) + "/ed_demo6.json");
  EXPECT_EQ(got, golden);

  // The distance baseline disagrees with the similarity-driven hierarchy.
  HierarchyConfig cfg;
  const auto ch_tree = build_hierarchy(testutil::reference_matrix(), cfg);
  EXPECT_LT(tree_similarity(tree, ch_tree), 1.0);
  EXPECT_FALSE(canonical_equal(tree, ch_tree));
}
