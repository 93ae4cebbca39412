// Matrix file ingestion (CSV and JSON) and writers.
#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "classhier/matrix.hpp"
#include "classhier/serialize.hpp"

namespace classhier {

// A parsed matrix file: either integer confusion counts or a ready-made
// similarity matrix (JSON "kind": "similarity" or forced by the caller).
struct LoadedMatrix {
  std::vector<std::string> labels;
  std::optional<ConfusionMatrix> counts;
  std::optional<SimilarityMatrix> sim;

  bool is_similarity() const { return sim.has_value(); }

  SimilarityMatrix to_similarity() const {
    if (sim) return *sim;
    return similarity(normalize(*counts));
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, ',')) fields.push_back(trim(cur));
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

inline std::int64_t parse_count(const std::string& tok, std::size_t row, std::size_t col) {
  const std::string where =
      " at row " + std::to_string(row) + ", column " + std::to_string(col);
  std::int64_t v = 0;
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw ParseError("expected an integer count, got \"" + tok + "\"" + where);
  if (v < 0) throw ParseError("negative count" + where);
  return v;
}

inline double parse_real(const std::string& tok, std::size_t row, std::size_t col) {
  const std::string where =
      " at row " + std::to_string(row) + ", column " + std::to_string(col);
  double v = 0.0;
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw ParseError("expected a number, got \"" + tok + "\"" + where);
  if (std::isnan(v)) throw ParseError("NaN" + where);
  if (v < 0.0) throw ParseError("negative value" + where);
  return v;
}

}  // namespace detail

// CSV layout: a header line of n comma-separated labels, then n lines of n
// values; row i holds the predictions for true class i. Values are integer
// counts unless as_similarity is set.
inline LoadedMatrix load_matrix_csv(std::istream& in, bool as_similarity = false) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty input: missing header line");
  const std::vector<std::string> labels = detail::split_csv_line(line);
  const std::size_t n = labels.size();

  std::vector<std::vector<std::string>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    std::vector<std::string> fields = detail::split_csv_line(line);
    if (fields.size() != n)
      throw ParseError("row " + std::to_string(rows.size()) + " (line " +
                       std::to_string(lineno) + ") has " + std::to_string(fields.size()) +
                       " fields, expected " + std::to_string(n));
    rows.push_back(std::move(fields));
  }
  if (rows.size() != n)
    throw ParseError("expected " + std::to_string(n) + " data rows, got " +
                     std::to_string(rows.size()));

  LoadedMatrix out;
  out.labels = labels;
  if (as_similarity) {
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = detail::parse_real(rows[i][j], i, j);
    out.sim = SimilarityMatrix(m);
  } else {
    std::vector<std::vector<std::int64_t>> counts(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) counts[i][j] = detail::parse_count(rows[i][j], i, j);
    out.counts = ConfusionMatrix(labels, counts);
  }
  return out;
}

// JSON layout: {"labels": [...], "matrix": [[...], ...]} with an optional
// "kind" of "confusion" (default) or "similarity".
inline LoadedMatrix load_matrix_json(const nlohmann::json& j, bool force_similarity = false) {
  if (!j.is_object() || !j.contains("labels") || !j.contains("matrix"))
    throw ParseError("matrix JSON needs \"labels\" and \"matrix\"");
  std::vector<std::string> labels;
  for (const auto& l : j["labels"]) {
    if (!l.is_string()) throw ParseError("labels must be strings");
    labels.push_back(l.get<std::string>());
  }
  const std::size_t n = labels.size();
  const auto& rows = j["matrix"];
  if (!rows.is_array() || rows.size() != n)
    throw ParseError("matrix must have one row per label");

  bool as_similarity = force_similarity;
  if (j.contains("kind")) {
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "similarity")
      as_similarity = true;
    else if (kind != "confusion")
      throw ParseError("unknown matrix kind \"" + kind + "\"");
  }

  LoadedMatrix out;
  out.labels = labels;
  if (as_similarity) {
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!rows[i].is_array() || rows[i].size() != n)
        throw ParseError("row " + std::to_string(i) + " is ragged");
      for (std::size_t k = 0; k < n; ++k) {
        if (!rows[i][k].is_number())
          throw ParseError("non-numeric entry at row " + std::to_string(i));
        m(i, k) = rows[i][k].get<double>();
        if (m(i, k) < 0.0)
          throw ParseError("negative value at row " + std::to_string(i));
      }
    }
    out.sim = SimilarityMatrix(m);
  } else {
    std::vector<std::vector<std::int64_t>> counts(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
      if (!rows[i].is_array() || rows[i].size() != n)
        throw ParseError("row " + std::to_string(i) + " is ragged");
      for (std::size_t k = 0; k < n; ++k) {
        if (!rows[i][k].is_number_integer())
          throw ParseError("count at row " + std::to_string(i) + ", column " +
                           std::to_string(k) + " is not an integer");
        counts[i][k] = rows[i][k].get<std::int64_t>();
        if (counts[i][k] < 0)
          throw ParseError("negative count at row " + std::to_string(i));
      }
    }
    out.counts = ConfusionMatrix(labels, counts);
  }
  return out;
}

// Dispatches on the file extension: .json parses as JSON, anything else as CSV.
inline LoadedMatrix load_matrix_file(const std::string& path, bool force_similarity = false) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(path + ": invalid JSON: " + e.what());
    }
    return load_matrix_json(j, force_similarity);
  }
  return load_matrix_csv(in, force_similarity);
}

inline void write_counts_csv(std::ostream& out, const ConfusionMatrix& cm) {
  const std::size_t n = cm.size();
  for (std::size_t i = 0; i < n; ++i) out << (i ? "," : "") << cm.labels()[i];
  out << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out << (j ? "," : "") << cm.count(i, j);
    out << '\n';
  }
}

inline nlohmann::ordered_json counts_to_json(const ConfusionMatrix& cm) {
  nlohmann::ordered_json j;
  j["labels"] = cm.labels();
  j["kind"] = "confusion";
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < cm.size(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < cm.size(); ++k) row.push_back(cm.count(i, k));
    rows.push_back(std::move(row));
  }
  j["matrix"] = std::move(rows);
  return j;
}

inline nlohmann::ordered_json similarity_to_json(const std::vector<std::string>& labels,
                                                 const SimilarityMatrix& s) {
  nlohmann::ordered_json j;
  j["labels"] = labels;
  j["kind"] = "similarity";
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < s.size(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < s.size(); ++k) row.push_back(s(i, k));
    rows.push_back(std::move(row));
  }
  j["matrix"] = std::move(rows);
  return j;
}

}  // namespace classhier
