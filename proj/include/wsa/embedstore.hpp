#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "wsa/error.hpp"
#include "wsa/lexdata.hpp"
#include "wsa/text.hpp"

namespace wsa {

using StopwordSet = std::unordered_set<std::string>;

/// One token per line; blank lines and '#' comments ignored.
inline StopwordSet load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open " + path.string());
  StopwordSet out;
  std::string line;
  while (std::getline(in, line)) {
    const auto t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    out.insert(text::fold_case(t));
  }
  return out;
}

inline const StopwordSet& default_english_stopwords() {
  static const StopwordSet words = {
      "a",    "an",    "the",  "of",   "to",   "in",    "on",   "at",   "by",    "for",
      "with", "from",  "into", "onto", "as",   "or",    "and",  "but",  "nor",   "is",
      "are",  "was",   "were", "be",   "been", "being", "it",   "its",  "this",  "that",
      "these", "those", "which", "who", "whom", "whose", "what", "some", "any",  "such",
      "one",  "something", "someone", "than", "so", "if", "then", "up", "out", "about",
      "has",  "have",  "had",  "do",   "does", "did",   "not",  "no",   "very",  "etc"};
  return words;
}

inline bool is_zero(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

struct CosineResult {
  double value = 0;
  bool zero_vector = false;
};

/// A zero vector on either side is flagged and yields 0.
inline CosineResult cosine_checked(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size())
    throw Error(ErrorCode::DimensionMismatch, "cosine of vectors with different dimensions");
  double dot = 0, nu = 0, nv = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0.0 || nv == 0.0) return {0.0, true};
  return {std::clamp(dot / (std::sqrt(nu) * std::sqrt(nv)), -1.0, 1.0), false};
}

inline double cosine(std::span<const double> u, std::span<const double> v) {
  return cosine_checked(u, v).value;
}

class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dimension = 0) : dimension_(dimension) {}

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return vectors_.size(); }

  /// Keys are case-folded; the first vector for a folded key wins.
  void add(std::string_view token, std::vector<double> vec) {
    if (dimension_ == 0) dimension_ = vec.size();
    if (vec.size() != dimension_)
      throw Error(ErrorCode::InconsistentDimension,
                  "vector for '" + std::string(token) + "' has " + std::to_string(vec.size()) +
                      " components, table dimension is " + std::to_string(dimension_));
    vectors_.emplace(text::fold_case(token), std::move(vec));
  }

  const std::vector<double>* find(const std::string& token) const {
    const auto it = vectors_.find(token);
    return it == vectors_.end() ? nullptr : &it->second;
  }

  StopwordSet& stopwords() { return stopwords_; }
  const StopwordSet& stopwords() const { return stopwords_; }

  void scale(double c) {
    for (auto& [_, v] : vectors_)
      for (auto& x : v) x *= c;
  }

 private:
  std::size_t dimension_;
  std::unordered_map<std::string, std::vector<double>> vectors_;
  StopwordSet stopwords_;
};

/// "token v1 ... vd" per line, optionally preceded by a "count dim" header.
inline EmbeddingTable load_embeddings(const std::filesystem::path& path,
                                      std::optional<std::size_t> limit = std::nullopt) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open " + path.string());
  EmbeddingTable table;
  std::string line;
  std::size_t line_no = 0;
  std::size_t rows = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = text::split_ws(line);
    if (fields.empty()) continue;
    if (!seen_content) {
      seen_content = true;
      if (fields.size() == 2 &&
          std::all_of(fields[0].begin(), fields[0].end(), ::isdigit) &&
          std::all_of(fields[1].begin(), fields[1].end(), ::isdigit)) {
        table = EmbeddingTable(std::stoul(fields[1]));
        continue;
      }
    }
    if (limit && rows >= *limit) break;
    std::vector<double> vec;
    vec.reserve(fields.size() - 1);
    for (std::size_t k = 1; k < fields.size(); ++k) {
      try {
        vec.push_back(std::stod(fields[k]));
      } catch (const std::exception&) {
        throw Error(ErrorCode::InconsistentDimension,
                    "line " + std::to_string(line_no) + ": non-numeric component");
      }
    }
    if (vec.empty())
      throw Error(ErrorCode::InconsistentDimension, "line " + std::to_string(line_no) +
                                                        ": token without vector");
    try {
      table.add(fields[0], std::move(vec));
    } catch (const Error& e) {
      throw Error(ErrorCode::InconsistentDimension,
                  "line " + std::to_string(line_no) + ": " + e.what());
    }
    ++rows;
  }
  if (rows == 0) throw Error(ErrorCode::EmptyFile, path.string() + " holds no vectors");
  return table;
}

/// Mean of the in-vocabulary token vectors, nullopt when none is known.
inline std::optional<std::vector<double>> mean_vector(std::span<const std::string> tokens,
                                                      const EmbeddingTable& table,
                                                      bool drop_function_words) {
  std::vector<double> sum(table.dimension(), 0.0);
  std::size_t hits = 0;
  for (const auto& t : tokens) {
    if (drop_function_words && table.stopwords().count(t)) continue;
    const auto* v = table.find(t);
    if (!v) continue;
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += (*v)[k];
    ++hits;
  }
  if (hits == 0) return std::nullopt;
  for (auto& x : sum) x /= static_cast<double>(hits);
  return sum;
}

/// Cosine of the mean vectors, clamped to [0,1]; 0 when a side has no
/// in-vocabulary token.
inline double definition_similarity(const Sense& a, const Sense& b, const EmbeddingTable& table,
                                    bool drop_function_words) {
  const auto ma = mean_vector(a.tokens, table, drop_function_words);
  const auto mb = mean_vector(b.tokens, table, drop_function_words);
  if (!ma || !mb) return 0.0;
  return std::clamp(cosine(*ma, *mb), 0.0, 1.0);
}

}  // namespace wsa
