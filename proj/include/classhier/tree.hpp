// Labeled rooted trees over base classes: the hierarchy data model.
#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "classhier/matrix.hpp"

namespace classhier {

// A class hierarchy node. Leaves carry a base-class id and its label;
// internal nodes carry an ordered list of children and a synthetic id used
// only for stable serialization. A class id may label several leaves in a
// multiple-inheritance tree.
class ClassTree {
public:
  static ClassTree leaf(int class_id, std::string label) {
    if (class_id < 0) throw ValidationError("negative class id");
    return ClassTree(class_id, std::move(label), {});
  }

  static ClassTree internal(std::vector<ClassTree> children, int synthetic_id) {
    if (children.empty()) throw ValidationError("internal node needs at least one child");
    return ClassTree(synthetic_id, "", std::move(children));
  }

  bool is_leaf() const { return children_.empty(); }
  int id() const { return id_; }
  const std::string& label() const { return label_; }
  const std::vector<ClassTree>& children() const { return children_; }

  bool operator==(const ClassTree&) const = default;

private:
  ClassTree(int id, std::string label, std::vector<ClassTree> children)
      : id_(id), label_(std::move(label)), children_(std::move(children)) {}

  int id_ = 0;
  std::string label_;
  std::vector<ClassTree> children_;
};

namespace detail {
inline void collect_leaf_ids(const ClassTree& t, std::vector<int>& out) {
  if (t.is_leaf()) {
    out.push_back(t.id());
    return;
  }
  for (const ClassTree& c : t.children()) collect_leaf_ids(c, out);
}
}  // namespace detail

// Sorted multiset of class ids at the leaves (repeats kept).
inline std::vector<int> leaf_occurrences(const ClassTree& t) {
  std::vector<int> ids;
  detail::collect_leaf_ids(t, ids);
  std::sort(ids.begin(), ids.end());
  return ids;
}

// Deduplicated, sorted set of class ids at the leaves.
inline std::vector<int> leaf_set(const ClassTree& t) {
  std::vector<int> ids = leaf_occurrences(t);
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

// True iff the two trees share at least one base class.
inline bool overlaps(const ClassTree& a, const ClassTree& b) {
  const std::vector<int> la = leaf_set(a);
  const std::vector<int> lb = leaf_set(b);
  std::vector<int> both;
  std::set_intersection(la.begin(), la.end(), lb.begin(), lb.end(), std::back_inserter(both));
  return !both.empty();
}

// New internal node with the inputs as children, in the given order.
// A single-tree list is allowed only for the final root combine.
inline ClassTree combine(std::vector<ClassTree> trees, int synthetic_id) {
  if (trees.empty()) throw ValidationError("combine: empty tree list");
  return ClassTree::internal(std::move(trees), synthetic_id);
}

// True iff no class id labels two distinct leaves.
inline bool is_single_inheritance(const ClassTree& t) {
  const std::vector<int> ids = leaf_occurrences(t);
  return std::adjacent_find(ids.begin(), ids.end()) == ids.end();
}

namespace detail {
// Total order on canonicalized trees: leaf multiset first, leaves before
// internals, then children lexicographically. Ignores labels and ids.
inline int canonical_compare(const ClassTree& a, const ClassTree& b) {
  const std::vector<int> la = leaf_occurrences(a);
  const std::vector<int> lb = leaf_occurrences(b);
  if (la != lb) return la < lb ? -1 : 1;
  if (a.is_leaf() != b.is_leaf()) return a.is_leaf() ? -1 : 1;
  if (a.is_leaf()) return 0;
  const std::size_t na = a.children().size();
  const std::size_t nb = b.children().size();
  for (std::size_t i = 0; i < std::min(na, nb); ++i) {
    const int c = canonical_compare(a.children()[i], b.children()[i]);
    if (c != 0) return c;
  }
  if (na != nb) return na < nb ? -1 : 1;
  return 0;
}
}  // namespace detail

// Canonical form: children recursively canonicalized and sorted by their
// sorted leaf multiset. Used for order-insensitive tree equality in tests;
// serialization keeps construction order.
inline ClassTree canonical_form(const ClassTree& t) {
  if (t.is_leaf()) return t;
  std::vector<ClassTree> kids;
  kids.reserve(t.children().size());
  for (const ClassTree& c : t.children()) kids.push_back(canonical_form(c));
  std::stable_sort(kids.begin(), kids.end(), [](const ClassTree& a, const ClassTree& b) {
    return detail::canonical_compare(a, b) < 0;
  });
  return ClassTree::internal(std::move(kids), t.id());
}

// Equality up to children reordering, ignoring labels and synthetic ids.
inline bool canonical_equal(const ClassTree& a, const ClassTree& b) {
  return detail::canonical_compare(canonical_form(a), canonical_form(b)) == 0;
}

inline int depth(const ClassTree& t) {
  if (t.is_leaf()) return 0;
  int d = 0;
  for (const ClassTree& c : t.children()) d = std::max(d, depth(c));
  return d + 1;
}

inline int internal_node_count(const ClassTree& t) {
  if (t.is_leaf()) return 0;
  int n = 1;
  for (const ClassTree& c : t.children()) n += internal_node_count(c);
  return n;
}

inline int max_arity(const ClassTree& t) {
  if (t.is_leaf()) return 0;
  int a = static_cast<int>(t.children().size());
  for (const ClassTree& c : t.children()) a = std::max(a, max_arity(c));
  return a;
}

// The working set of trees during hierarchy construction. groups[i] holds
// tree i's member indices in the previous round's forest (a singleton for
// trees that were not merged); sim is refreshed from those groups after
// every merge round.
struct Forest {
  std::vector<ClassTree> trees;
  SimilarityMatrix sim;
  std::vector<std::vector<std::size_t>> groups;
};

// One singleton tree per class, groups = {{0}, {1}, ...}. Labels default to
// the decimal class id.
inline Forest make_base_forest(const SimilarityMatrix& s, std::vector<std::string> labels = {}) {
  const std::size_t n = s.size();
  if (labels.empty())
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  if (labels.size() != n)
    throw ValidationError("got " + std::to_string(labels.size()) + " labels for " +
                          std::to_string(n) + " classes");
  Forest f;
  f.sim = s;
  for (std::size_t i = 0; i < n; ++i) {
    f.trees.push_back(ClassTree::leaf(static_cast<int>(i), labels[i]));
    f.groups.push_back({i});
  }
  return f;
}

}  // namespace classhier
