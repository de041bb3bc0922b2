#pragma once

// Weighted word-level semantic relations from an offline semantic-network
// dump. Rows: relation_kind \t token1 \t token2 \t weight.

#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>

#include "wsa/embedstore.hpp"
#include "wsa/error.hpp"
#include "wsa/lexdata.hpp"
#include "wsa/text.hpp"

namespace wsa {

enum class RelationKind { HYPERNYMY, HYPONYMY, RELATEDNESS, SYNONYMY, ANTONYMY, MERONYMY, SIMILARITY };

inline constexpr std::array<RelationKind, 7> kAllRelationKinds = {
    RelationKind::HYPERNYMY, RelationKind::HYPONYMY, RelationKind::RELATEDNESS,
    RelationKind::SYNONYMY,  RelationKind::ANTONYMY, RelationKind::MERONYMY,
    RelationKind::SIMILARITY};

inline constexpr bool is_symmetric(RelationKind k) {
  return k == RelationKind::SYNONYMY || k == RelationKind::RELATEDNESS ||
         k == RelationKind::ANTONYMY || k == RelationKind::SIMILARITY;
}

inline std::string_view to_string(RelationKind k) {
  switch (k) {
    case RelationKind::HYPERNYMY: return "hypernymy";
    case RelationKind::HYPONYMY: return "hyponymy";
    case RelationKind::RELATEDNESS: return "relatedness";
    case RelationKind::SYNONYMY: return "synonymy";
    case RelationKind::ANTONYMY: return "antonymy";
    case RelationKind::MERONYMY: return "meronymy";
    case RelationKind::SIMILARITY: return "similarity";
  }
  return "";
}

/// Accepts the kind names above (any case) and the common semantic-network
/// relation names: IsA, RelatedTo, Synonym, Antonym, PartOf, SimilarTo.
inline std::optional<RelationKind> parse_relation_kind(std::string_view s) {
  std::string t = text::fold_case(text::trim(s));
  if (t.rfind("/r/", 0) == 0) t = t.substr(3);
  static const std::map<std::string, RelationKind, std::less<>> table = {
      {"hypernymy", RelationKind::HYPERNYMY},     {"isa", RelationKind::HYPERNYMY},
      {"hyponymy", RelationKind::HYPONYMY},       {"relatedness", RelationKind::RELATEDNESS},
      {"relatedto", RelationKind::RELATEDNESS},   {"synonymy", RelationKind::SYNONYMY},
      {"synonym", RelationKind::SYNONYMY},        {"antonymy", RelationKind::ANTONYMY},
      {"antonym", RelationKind::ANTONYMY},        {"meronymy", RelationKind::MERONYMY},
      {"partof", RelationKind::MERONYMY},         {"similarity", RelationKind::SIMILARITY},
      {"similarto", RelationKind::SIMILARITY}};
  const auto it = table.find(t);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

using RelationWeights = std::array<double, 7>;

class RelationStore {
 public:
  explicit RelationStore(std::string language = {}) : language_(std::move(language)) {}

  const std::string& language() const { return language_; }
  std::size_t size() const { return edges_.size(); }

  void add(const std::string& t1, const std::string& t2, RelationKind kind, double weight) {
    edges_[key(t1, t2, kind)][static_cast<std::size_t>(kind)] += weight;
  }

  /// Symmetric kinds ignore argument order; the others are directional.
  double weight(const std::string& t1, const std::string& t2, RelationKind kind) const {
    const auto it = edges_.find(key(t1, t2, kind));
    return it == edges_.end() ? 0.0 : it->second[static_cast<std::size_t>(kind)];
  }

 private:
  static std::string key(const std::string& t1, const std::string& t2, RelationKind kind) {
    if (is_symmetric(kind) && t2 < t1) return t2 + '\t' + t1;
    return t1 + '\t' + t2;
  }

  std::string language_;
  std::unordered_map<std::string, RelationWeights> edges_;
};

struct IngestReport {
  std::size_t rows = 0;
  std::size_t accepted = 0;
  std::size_t skipped_unknown_kind = 0;
  std::size_t skipped_other_language = 0;
};

namespace detail {

/// "/c/en/cat/n" -> ("en", "cat"); plain tokens pass through with no language.
inline std::pair<std::string, std::string> split_concept(std::string_view token) {
  if (token.rfind("/c/", 0) != 0) return {"", text::fold_case(token)};
  const auto parts = text::split(token.substr(3), '/');
  if (parts.size() < 2) return {"", text::fold_case(token)};
  std::string lemma = parts[1];
  std::replace(lemma.begin(), lemma.end(), '_', ' ');
  return {parts[0], text::fold_case(lemma)};
}

}  // namespace detail

inline RelationStore parse_relation_tsv(std::string_view content, const std::string& language,
                                        IngestReport* report = nullptr) {
  RelationStore store(language);
  IngestReport r;
  std::size_t line_no = 0;
  for (auto line : text::split(content, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty() || line.front() == '#') continue;
    const auto cols = text::split(line, '\t');
    if (cols.size() != 4)
      throw Error(ErrorCode::BadColumnCount, "line " + std::to_string(line_no) + ": expected 4 "
                                             "columns, got " + std::to_string(cols.size()));
    ++r.rows;
    const auto kind = parse_relation_kind(cols[0]);
    if (!kind) {
      ++r.skipped_unknown_kind;
      continue;
    }
    const auto [lang1, t1] = detail::split_concept(text::trim(cols[1]));
    const auto [lang2, t2] = detail::split_concept(text::trim(cols[2]));
    if (!language.empty() && ((!lang1.empty() && lang1 != language) ||
                              (!lang2.empty() && lang2 != language))) {
      ++r.skipped_other_language;
      continue;
    }
    double w = 0;
    std::size_t consumed = 0;
    const std::string wtext(text::trim(cols[3]));
    try {
      w = std::stod(wtext, &consumed);
    } catch (const std::exception&) {
      consumed = 0;
    }
    if (consumed != wtext.size() || wtext.empty() || !std::isfinite(w))
      throw Error(ErrorCode::BadWeight, "line " + std::to_string(line_no) + ": '" + wtext + "'");
    store.add(t1, t2, *kind, w);
    ++r.accepted;
  }
  if (report) *report = r;
  return store;
}

inline RelationStore ingest_edges(const std::filesystem::path& path, const std::string& language,
                                  IngestReport* report = nullptr) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_relation_tsv(ss.str(), language, report);
}

/// Per kind, the summed weight over every ordered content-token pair
/// (a_i, b_j). Stopwords are skipped on both sides.
inline RelationWeights relation_weight_features(const Sense& a, const Sense& b,
                                                const RelationStore& store,
                                                const StopwordSet& stopwords = {}) {
  RelationWeights out{};
  for (const auto& ta : a.tokens) {
    if (stopwords.count(ta)) continue;
    for (const auto& tb : b.tokens) {
      if (stopwords.count(tb)) continue;
      for (auto k : kAllRelationKinds) out[static_cast<std::size_t>(k)] += store.weight(ta, tb, k);
    }
  }
  return out;
}

inline int synonym_flag(const std::string& t1, const std::string& t2, const RelationStore& store) {
  return store.weight(t1, t2, RelationKind::SYNONYMY) > 0 ? 1 : 0;
}

/// EXACT link between the sole senses when each side has exactly one.
inline std::optional<Link> hapax_links(const EntryPair& pair) {
  if (pair.left_senses.size() != 1 || pair.right_senses.size() != 1) return std::nullopt;
  Link l;
  l.source_sense = 0;
  l.target_sense = 0;
  l.relation = SemanticRelation::EXACT;
  l.score = 1.0;
  return l;
}

}  // namespace wsa
