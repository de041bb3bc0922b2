#pragma once

// Dictionary/benchmark domain model plus the loaders and writers for the
// benchmark JSON documents, 5-column dictionary TSV files and translation
// pair dumps.

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wsa/error.hpp"
#include "wsa/text.hpp"

namespace wsa {

enum class PartOfSpeech { NOUN, VERB, ADJ, ADV, OTHER };

inline constexpr std::array<PartOfSpeech, 5> kAllPos = {
    PartOfSpeech::NOUN, PartOfSpeech::VERB, PartOfSpeech::ADJ, PartOfSpeech::ADV,
    PartOfSpeech::OTHER};

/// Unknown tags map to OTHER.
inline PartOfSpeech parse_pos(std::string_view tag) {
  const std::string t = text::fold_case(text::trim(tag));
  static const std::map<std::string, PartOfSpeech, std::less<>> table = {
      {"n", PartOfSpeech::NOUN},        {"noun", PartOfSpeech::NOUN},
      {"nn", PartOfSpeech::NOUN},       {"nom", PartOfSpeech::NOUN},
      {"substantive", PartOfSpeech::NOUN}, {"substantiv", PartOfSpeech::NOUN},
      {"v", PartOfSpeech::VERB},        {"verb", PartOfSpeech::VERB},
      {"vb", PartOfSpeech::VERB},       {"a", PartOfSpeech::ADJ},
      {"adj", PartOfSpeech::ADJ},       {"adjective", PartOfSpeech::ADJ},
      {"s", PartOfSpeech::ADJ},         {"r", PartOfSpeech::ADV},
      {"adv", PartOfSpeech::ADV},       {"adverb", PartOfSpeech::ADV},
  };
  const auto it = table.find(t);
  return it == table.end() ? PartOfSpeech::OTHER : it->second;
}

inline std::string_view to_string(PartOfSpeech p) {
  switch (p) {
    case PartOfSpeech::NOUN: return "noun";
    case PartOfSpeech::VERB: return "verb";
    case PartOfSpeech::ADJ: return "adjective";
    case PartOfSpeech::ADV: return "adverb";
    case PartOfSpeech::OTHER: return "other";
  }
  return "other";
}

/// Enum order doubles as the deterministic tie-break order for classifiers.
enum class SemanticRelation { EXACT, BROADER, NARROWER, RELATED, NONE };

inline constexpr std::array<SemanticRelation, 5> kAllRelations = {
    SemanticRelation::EXACT, SemanticRelation::BROADER, SemanticRelation::NARROWER,
    SemanticRelation::RELATED, SemanticRelation::NONE};

inline constexpr SemanticRelation inverse(SemanticRelation r) {
  switch (r) {
    case SemanticRelation::BROADER: return SemanticRelation::NARROWER;
    case SemanticRelation::NARROWER: return SemanticRelation::BROADER;
    default: return r;
  }
}

inline std::string_view to_string(SemanticRelation r) {
  switch (r) {
    case SemanticRelation::EXACT: return "exact";
    case SemanticRelation::BROADER: return "broader";
    case SemanticRelation::NARROWER: return "narrower";
    case SemanticRelation::RELATED: return "related";
    case SemanticRelation::NONE: return "none";
  }
  return "none";
}

inline std::optional<SemanticRelation> parse_relation(std::string_view s) {
  const std::string t = text::fold_case(text::trim(s));
  for (auto r : kAllRelations)
    if (t == to_string(r)) return r;
  return std::nullopt;
}

inline constexpr std::size_t index_of(SemanticRelation r) { return static_cast<std::size_t>(r); }

enum class ResourceSide { LEFT, RIGHT };

struct Sense {
  std::string sense_id;
  std::string text;
  std::vector<std::string> tokens;
  ResourceSide side = ResourceSide::LEFT;

  Sense() = default;
  Sense(std::string id, std::string definition, ResourceSide s)
      : sense_id(std::move(id)), text(std::move(definition)), tokens(text::tokenize(text)),
        side(s) {}

  bool operator==(const Sense&) const = default;
};

using ClassScores = std::array<double, 5>;

struct Link {
  std::size_t source_sense = 0;  // index into left senses
  std::size_t target_sense = 0;  // index into right senses
  SemanticRelation relation = SemanticRelation::EXACT;
  double score = 1.0;
  std::optional<ClassScores> scores_by_class;

  bool operator==(const Link&) const = default;
};

/// argmax over the class distribution; ties resolve to the earlier enum value.
inline SemanticRelation argmax_relation(const ClassScores& s) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < s.size(); ++k)
    if (s[k] > s[best]) best = k;
  return kAllRelations[best];
}

struct EntryPair {
  std::string lemma;
  PartOfSpeech pos = PartOfSpeech::OTHER;
  std::string pos_tag;  // tag as written in the source file
  std::string gender;
  std::string meta_id;
  std::vector<Sense> left_senses;
  std::vector<Sense> right_senses;
  std::vector<Link> gold_links;
  std::vector<Link> candidates;  // scored candidate pairs, optional

  bool operator==(const EntryPair&) const = default;

  /// The gold relation for (i, j), NONE when unlinked. First link wins.
  SemanticRelation relation_of(std::size_t i, std::size_t j) const {
    for (const auto& l : gold_links)
      if (l.source_sense == i && l.target_sense == j) return l.relation;
    return SemanticRelation::NONE;
  }
};

/// Case-folded lemma used for pairing entries across dictionaries.
inline std::string normalize_lemma(std::string_view lemma) {
  return text::fold_case(text::trim(lemma));
}

// ---------------------------------------------------------------------------
// Benchmark JSON

struct LoadWarning {
  std::string lemma;
  std::string message;
};

struct BenchmarkDocument {
  std::vector<EntryPair> entries;
  std::vector<LoadWarning> warnings;
};

namespace detail {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string json_string(const nlohmann::json& obj, const char* key, bool required,
                               const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) {
    if (required)
      throw Error(ErrorCode::MalformedDocument, where + ": missing key '" + key + "'");
    return {};
  }
  if (!it->is_string())
    throw Error(ErrorCode::MalformedDocument, where + ": key '" + key + "' is not a string");
  return it->get<std::string>();
}

inline std::vector<Sense> parse_senses(const nlohmann::json& obj, const char* key,
                                       ResourceSide side, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_array())
    throw Error(ErrorCode::MalformedDocument, where + ": '" + key + "' must be an array");
  std::vector<Sense> senses;
  for (const auto& s : *it) {
    if (!s.is_object())
      throw Error(ErrorCode::MalformedDocument, where + ": sense is not an object");
    senses.emplace_back(json_string(s, "external_ID", false, where),
                        json_string(s, "#text", true, where), side);
  }
  return senses;
}

inline std::optional<std::size_t> find_text(const std::vector<Sense>& senses,
                                             std::string_view t) {
  for (std::size_t i = 0; i < senses.size(); ++i)
    if (senses[i].text == t) return i;
  return std::nullopt;
}

inline std::optional<ClassScores> parse_class_scores(const nlohmann::json& a,
                                                     const std::string& where) {
  const auto it = a.find("scores_by_class");
  if (it == a.end() || it->is_null()) return std::nullopt;
  if (!it->is_object())
    throw Error(ErrorCode::MalformedDocument, where + ": scores_by_class must be an object");
  ClassScores s{};
  for (auto r : kAllRelations) {
    const auto v = it->find(std::string(to_string(r)));
    if (v == it->end() || !v->is_number())
      throw Error(ErrorCode::MalformedDocument,
                  where + ": scores_by_class lacks '" + std::string(to_string(r)) + "'");
    s[index_of(r)] = v->get<double>();
  }
  return s;
}

inline std::vector<Link> parse_links(const nlohmann::json& obj, const char* key,
                                     const EntryPair& e, const std::string& where,
                                     std::vector<LoadWarning>& warnings) {
  std::vector<Link> links;
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return links;
  if (!it->is_array())
    throw Error(ErrorCode::MalformedDocument, where + ": '" + key + "' must be an array");
  for (const auto& a : *it) {
    if (!a.is_object())
      throw Error(ErrorCode::MalformedDocument, where + ": alignment is not an object");
    const auto src = json_string(a, "sense_source", true, where);
    const auto tgt = json_string(a, "sense_target", true, where);
    const auto rel_text = json_string(a, "semantic_relationship", true, where);
    const auto rel = parse_relation(rel_text);
    if (!rel)
      throw Error(ErrorCode::MalformedDocument, where + ": unknown relation '" + rel_text + "'");
    const auto i = find_text(e.left_senses, src);
    const auto j = find_text(e.right_senses, tgt);
    if (!i || !j) {
      warnings.push_back({e.lemma, std::string("DanglingAlignment: ") + key + " '" + src +
                                       "' -> '" + tgt + "' matches no sense"});
      continue;
    }
    Link l;
    l.source_sense = *i;
    l.target_sense = *j;
    l.relation = *rel;
    if (const auto sc = a.find("score"); sc != a.end() && sc->is_number())
      l.score = sc->get<double>();
    l.scores_by_class = parse_class_scores(a, where);
    links.push_back(l);
  }
  return links;
}

inline EntryPair parse_entry(const nlohmann::json& obj, std::size_t index,
                             std::vector<LoadWarning>& warnings) {
  const std::string where = "entry " + std::to_string(index);
  if (!obj.is_object()) throw Error(ErrorCode::MalformedDocument, where + " is not an object");
  EntryPair e;
  e.lemma = json_string(obj, "lemma", true, where);
  e.pos_tag = json_string(obj, "POS_tag", false, where);
  e.pos = parse_pos(e.pos_tag);
  e.gender = json_string(obj, "gender", false, where);
  e.meta_id = json_string(obj, "meta_ID", false, where);
  e.left_senses = parse_senses(obj, "resource_1_senses", ResourceSide::LEFT, where);
  e.right_senses = parse_senses(obj, "resource_2_senses", ResourceSide::RIGHT, where);
  e.gold_links = parse_links(obj, "alignment", e, where, warnings);
  e.candidates = parse_links(obj, "candidates", e, where, warnings);
  return e;
}

inline nlohmann::ordered_json link_to_json(const EntryPair& e, const Link& l) {
  if (l.source_sense >= e.left_senses.size() || l.target_sense >= e.right_senses.size())
    throw Error(ErrorCode::InvalidSenseIndex, "link out of range in entry '" + e.lemma + "'");
  nlohmann::ordered_json a;
  a["sense_source"] = e.left_senses[l.source_sense].text;
  a["sense_target"] = e.right_senses[l.target_sense].text;
  a["semantic_relationship"] = std::string(to_string(l.relation));
  if (l.score != 1.0 || l.scores_by_class) a["score"] = l.score;
  if (l.scores_by_class) {
    nlohmann::ordered_json s;
    for (auto r : kAllRelations) s[std::string(to_string(r))] = (*l.scores_by_class)[index_of(r)];
    a["scores_by_class"] = s;
  }
  return a;
}

}  // namespace detail

inline BenchmarkDocument parse_benchmark(std::string_view content) {
  BenchmarkDocument doc;
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(content);
  } catch (const nlohmann::json::parse_error&) {
    // JSON-lines fallback: one entry object per line.
    root = nlohmann::json::array();
    std::size_t line_no = 0;
    for (const auto& line : text::split(content, '\n')) {
      ++line_no;
      if (text::trim(line).empty()) continue;
      try {
        root.push_back(nlohmann::json::parse(line));
      } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::MalformedDocument,
                    "line " + std::to_string(line_no) + ": " + e.what());
      }
    }
  }
  if (root.is_object()) root = nlohmann::json::array({root});
  if (!root.is_array())
    throw Error(ErrorCode::MalformedDocument, "benchmark document must be an array of entries");
  for (std::size_t i = 0; i < root.size(); ++i)
    doc.entries.push_back(detail::parse_entry(root[i], i, doc.warnings));
  return doc;
}

inline BenchmarkDocument load_benchmark(const std::filesystem::path& path) {
  return parse_benchmark(detail::read_file(path));
}

inline std::string serialize_benchmark(const std::vector<EntryPair>& pairs) {
  nlohmann::ordered_json root = nlohmann::ordered_json::array();
  for (const auto& e : pairs) {
    nlohmann::ordered_json o;
    o["lemma"] = e.lemma;
    o["POS_tag"] = e.pos_tag.empty() ? std::string(to_string(e.pos)) : e.pos_tag;
    o["gender"] = e.gender;
    o["meta_ID"] = e.meta_id;
    for (const auto& [key, senses] :
         {std::pair{"resource_1_senses", &e.left_senses},
          std::pair{"resource_2_senses", &e.right_senses}}) {
      nlohmann::ordered_json arr = nlohmann::ordered_json::array();
      for (const auto& s : *senses) {
        nlohmann::ordered_json so;
        so["#text"] = s.text;
        so["external_ID"] = s.sense_id;
        arr.push_back(so);
      }
      o[key] = arr;
    }
    nlohmann::ordered_json links = nlohmann::ordered_json::array();
    for (const auto& l : e.gold_links) links.push_back(detail::link_to_json(e, l));
    o["alignment"] = links;
    if (!e.candidates.empty()) {
      nlohmann::ordered_json cands = nlohmann::ordered_json::array();
      for (const auto& l : e.candidates) cands.push_back(detail::link_to_json(e, l));
      o["candidates"] = cands;
    }
    root.push_back(o);
  }
  return root.dump(2) + "\n";
}

inline void save_annotations(const std::vector<EntryPair>& pairs,
                             const std::filesystem::path& path) {
  const std::string content = serialize_benchmark(pairs);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

// ---------------------------------------------------------------------------
// Dictionary TSV: entry_id \t sense_id \t lemma \t pos \t text

struct DictionaryEntry {
  std::string entry_id;
  std::string lemma;
  std::string pos_tag;
  PartOfSpeech pos = PartOfSpeech::OTHER;
  std::vector<Sense> senses;
};

using Dictionary = std::vector<DictionaryEntry>;

inline Dictionary parse_dictionary_tsv(std::string_view content, ResourceSide side) {
  Dictionary dict;
  std::map<std::pair<std::string, PartOfSpeech>, std::size_t> index;
  std::size_t line_no = 0;
  for (auto line : text::split(content, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty() || line.front() == '#') continue;
    const auto cols = text::split(line, '\t');
    if (cols.size() != 5)
      throw Error(ErrorCode::BadColumnCount, "line " + std::to_string(line_no) + ": expected 5 "
                                             "columns, got " + std::to_string(cols.size()));
    const std::string lemma(text::trim(cols[2]));
    if (lemma.empty())
      throw Error(ErrorCode::EmptyLemma, "line " + std::to_string(line_no));
    const PartOfSpeech pos = parse_pos(cols[3]);
    const auto key = std::pair{normalize_lemma(lemma), pos};
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, dict.size()).first;
      dict.push_back({cols[0], lemma, std::string(text::trim(cols[3])), pos, {}});
    }
    dict[it->second].senses.emplace_back(cols[1], cols[4], side);
  }
  return dict;
}

inline Dictionary load_dictionary_tsv(const std::filesystem::path& path, ResourceSide side) {
  return parse_dictionary_tsv(detail::read_file(path), side);
}

/// Pairs entries sharing (normalized lemma, pos). Output follows left order;
/// entries present on one side only are dropped.
inline std::vector<EntryPair> pair_dictionaries(const Dictionary& left, const Dictionary& right) {
  std::map<std::pair<std::string, PartOfSpeech>, const DictionaryEntry*> right_index;
  for (const auto& e : right) right_index.emplace(std::pair{normalize_lemma(e.lemma), e.pos}, &e);
  std::vector<EntryPair> pairs;
  for (const auto& l : left) {
    const auto it = right_index.find({normalize_lemma(l.lemma), l.pos});
    if (it == right_index.end()) continue;
    EntryPair p;
    p.lemma = l.lemma;
    p.pos = l.pos;
    p.pos_tag = l.pos_tag;
    p.meta_id = l.entry_id;
    p.left_senses = l.senses;
    p.right_senses = it->second->senses;
    for (auto& s : p.right_senses) s.side = ResourceSide::RIGHT;
    pairs.push_back(std::move(p));
  }
  return pairs;
}

// ---------------------------------------------------------------------------
// Translation pairs: manifest of "lang1 lang2 path", each TSV with
// source_lemma \t source_pos \t target_lemma \t target_pos.

struct WordNode {
  std::string lemma;
  std::string language;
  std::string pos;

  auto operator<=>(const WordNode&) const = default;
};

struct TranslationEdge {
  WordNode a;
  WordNode b;

  auto operator<=>(const TranslationEdge&) const = default;
};

inline std::vector<TranslationEdge> parse_translation_tsv(std::string_view content,
                                                          const std::string& lang1,
                                                          const std::string& lang2) {
  std::vector<TranslationEdge> edges;
  std::size_t line_no = 0;
  for (auto line : text::split(content, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty() || line.front() == '#') continue;
    const auto cols = text::split(line, '\t');
    if (cols.size() != 4)
      throw Error(ErrorCode::BadColumnCount, "line " + std::to_string(line_no) + ": expected 4 "
                                             "columns, got " + std::to_string(cols.size()));
    WordNode a{std::string(text::trim(cols[0])), lang1, text::fold_case(text::trim(cols[1]))};
    WordNode b{std::string(text::trim(cols[2])), lang2, text::fold_case(text::trim(cols[3]))};
    if (a == b) continue;
    if (b < a) std::swap(a, b);
    edges.push_back({std::move(a), std::move(b)});
  }
  return edges;
}

/// Undirected, deduplicated edge list across every file in the manifest.
/// Relative paths resolve against the manifest's directory.
inline std::vector<TranslationEdge> load_translation_pairs(const std::filesystem::path& manifest) {
  const std::string content = detail::read_file(manifest);
  std::set<TranslationEdge> unique;
  std::size_t line_no = 0;
  for (const auto& line : text::split(content, '\n')) {
    ++line_no;
    const auto t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto cols = text::split_ws(t);
    if (cols.size() != 3)
      throw Error(ErrorCode::BadColumnCount,
                  "manifest line " + std::to_string(line_no) + ": expected 'lang1 lang2 path'");
    std::filesystem::path p = cols[2];
    if (p.is_relative()) p = manifest.parent_path() / p;
    for (auto& e : parse_translation_tsv(detail::read_file(p), cols[0], cols[1]))
      unique.insert(std::move(e));
  }
  return {unique.begin(), unique.end()};
}

}  // namespace wsa
