// Tree emitters (JSON, DOT, Newick, ASCII outline) and the JSON parser.
#pragma once

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "classhier/tree.hpp"

namespace classhier {

// Malformed input file. Messages carry enough position context for the CLI
// diagnostics. Exit 2 in the CLI.
class ParseError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

inline nlohmann::ordered_json tree_to_json(const ClassTree& t) {
  nlohmann::ordered_json j;
  j["id"] = t.id();
  if (t.is_leaf())
    j["label"] = t.label();
  else
    j["label"] = nullptr;
  j["classes"] = leaf_set(t);
  nlohmann::ordered_json kids = nlohmann::ordered_json::array();
  for (const ClassTree& c : t.children()) kids.push_back(tree_to_json(c));
  j["children"] = std::move(kids);
  return j;
}

inline std::string to_json_string(const ClassTree& t) { return tree_to_json(t).dump(2) + "\n"; }

inline ClassTree tree_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("id") || !j.contains("children"))
    throw ParseError("tree node must be an object with id and children");
  if (!j["id"].is_number_integer()) throw ParseError("tree node id must be an integer");
  const int id = j["id"].get<int>();
  const auto& kids = j["children"];
  if (!kids.is_array()) throw ParseError("children must be an array");

  ClassTree out = [&] {
    if (kids.empty()) {
      if (!j.contains("label") || !j["label"].is_string())
        throw ParseError("leaf node " + std::to_string(id) + " needs a string label");
      return ClassTree::leaf(id, j["label"].get<std::string>());
    }
    std::vector<ClassTree> children;
    for (const auto& k : kids) children.push_back(tree_from_json(k));
    return ClassTree::internal(std::move(children), id);
  }();
  if (j.contains("classes")) {
    std::vector<int> declared;
    for (const auto& c : j["classes"]) {
      if (!c.is_number_integer()) throw ParseError("classes entries must be integers");
      declared.push_back(c.get<int>());
    }
    if (declared != leaf_set(out))
      throw ParseError("classes of node " + std::to_string(id) +
                       " do not match its leaves");
  }
  return out;
}

inline ClassTree tree_from_json_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return tree_from_json(j);
}

namespace detail {

inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

inline std::string node_title(const ClassTree& t) {
  return t.is_leaf() ? t.label() : "C" + std::to_string(t.id());
}

inline void dot_nodes(const ClassTree& t, std::size_t& counter, std::ostringstream& out,
                      std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  const std::size_t me = counter++;
  if (t.is_leaf())
    out << "  n" << me << " [shape=box, label=\"" << dot_escape(t.label()) << "\"];\n";
  else
    out << "  n" << me << " [label=\"" << dot_escape(node_title(t)) << "\"];\n";
  for (const ClassTree& c : t.children()) {
    edges.emplace_back(me, counter);
    dot_nodes(c, counter, out, edges);
  }
}

inline void newick_node(const ClassTree& t, std::ostringstream& out) {
  if (t.is_leaf()) {
    out << t.label();
    return;
  }
  out << '(';
  for (std::size_t i = 0; i < t.children().size(); ++i) {
    if (i > 0) out << ',';
    newick_node(t.children()[i], out);
  }
  out << ')';
}

inline void ascii_node(const ClassTree& t, int indent, std::ostringstream& out) {
  for (int i = 0; i < indent; ++i) out << "  ";
  out << node_title(t) << '\n';
  for (const ClassTree& c : t.children()) ascii_node(c, indent + 1, out);
}

}  // namespace detail

// Directed parent->child edges; leaves are boxed and labeled, internal nodes
// carry their synthetic C<id> name. Node names are preorder positions so
// repeated classes in a multiple-inheritance tree stay distinct.
inline std::string to_dot(const ClassTree& t) {
  std::ostringstream out;
  out << "digraph hierarchy {\n";
  std::size_t counter = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  detail::dot_nodes(t, counter, out, edges);
  for (const auto& [a, b] : edges) out << "  n" << a << " -> n" << b << ";\n";
  out << "}\n";
  return out.str();
}

inline std::string to_newick(const ClassTree& t) {
  std::ostringstream out;
  detail::newick_node(t, out);
  out << ";\n";
  return out.str();
}

// Indented outline, two spaces per depth.
inline std::string to_ascii(const ClassTree& t) {
  std::ostringstream out;
  detail::ascii_node(t, 0, out);
  return out.str();
}

}  // namespace classhier
