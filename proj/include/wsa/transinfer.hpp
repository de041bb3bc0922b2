#pragma once

// Translation inference over a multilingual translation graph: chords of
// 4-cycles and weighted simple paths between two languages.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "wsa/error.hpp"
#include "wsa/lexdata.hpp"
#include "wsa/text.hpp"

namespace wsa::transinfer {

class TranslationGraph {
 public:
  TranslationGraph() = default;
  explicit TranslationGraph(const std::vector<TranslationEdge>& edges) {
    for (const auto& e : edges) add_edge(e.a, e.b);
  }

  std::size_t intern(const WordNode& w) {
    const auto [it, fresh] = index_.emplace(w, nodes_.size());
    if (fresh) {
      nodes_.push_back(w);
      adj_.emplace_back();
    }
    return it->second;
  }

  std::optional<std::size_t> find(const WordNode& w) const {
    const auto it = index_.find(w);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Self-loops are dropped.
  void add_edge(const WordNode& a, const WordNode& b) {
    if (a == b) return;
    const auto x = intern(a), y = intern(b);
    adj_[x].insert(y);
    adj_[y].insert(x);
    languages_.insert(std::minmax(a.language, b.language));
  }

  std::size_t size() const { return nodes_.size(); }
  const WordNode& node(std::size_t k) const { return nodes_[k]; }
  const std::set<std::size_t>& neighbors(std::size_t k) const { return adj_[k]; }
  bool has_edge(std::size_t a, std::size_t b) const { return adj_[a].count(b) > 0; }

  /// Language pairs that contributed at least one edge.
  const std::set<std::pair<std::string, std::string>>& language_pairs() const {
    return languages_;
  }

 private:
  std::vector<WordNode> nodes_;
  std::map<WordNode, std::size_t> index_;
  std::vector<std::set<std::size_t>> adj_;
  std::set<std::pair<std::string, std::string>> languages_;
};

enum class Provenance { CYCLE, PATH };

inline std::string_view to_string(Provenance p) { return p == Provenance::CYCLE ? "cycle" : "path"; }

struct InferredTranslation {
  WordNode source;
  WordNode target;
  double weight = 0;
  Provenance provenance = Provenance::PATH;
  std::size_t frequency = 0;
  std::size_t min_length = 0;
};

/// Every simple 4-cycle a-b-c-d, visited once (a is the smallest index and
/// b < d).
template <class Visit>
void for_each_four_cycle(const TranslationGraph& g, Visit&& visit) {
  for (std::size_t a = 0; a < g.size(); ++a)
    for (auto b : g.neighbors(a)) {
      if (b <= a) continue;
      for (auto d : g.neighbors(a)) {
        if (d <= b) continue;
        // c is a common neighbour of b and d, other than a
        for (auto c : g.neighbors(b)) {
          if (c <= a || c == d || !g.has_edge(c, d)) continue;
          visit(a, b, c, d);
        }
      }
    }
}

/// Missing src-tgt pairs among the nodes of each 4-cycle, with equal pos.
/// Output is oriented source -> target and deduplicated.
inline std::vector<InferredTranslation> infer_cycles(const TranslationGraph& g,
                                                     const std::string& src_lang,
                                                     const std::string& tgt_lang) {
  if (src_lang == tgt_lang) throw Error(ErrorCode::InvalidArgument, "source and target language are equal");
  std::set<std::pair<std::size_t, std::size_t>> found;
  for_each_four_cycle(g, [&](std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
    const std::size_t cyc[4] = {a, b, c, d};
    for (auto x : cyc)
      for (auto y : cyc) {
        if (x == y || g.has_edge(x, y)) continue;
        const auto& nx = g.node(x);
        const auto& ny = g.node(y);
        if (nx.language != src_lang || ny.language != tgt_lang || nx.pos != ny.pos) continue;
        found.emplace(x, y);
      }
  });
  std::vector<InferredTranslation> out;
  for (const auto& [x, y] : found)
    out.push_back({g.node(x), g.node(y), 1.0, Provenance::CYCLE, 1, 2});
  std::sort(out.begin(), out.end(), [](const auto& p, const auto& q) {
    return std::tie(p.source, p.target) < std::tie(q.source, q.target);
  });
  return out;
}

/// Every missing pair across languages inside some 4-cycle, unoriented.
inline std::vector<std::pair<WordNode, WordNode>> infer_cycle_chords(const TranslationGraph& g) {
  std::set<std::pair<std::size_t, std::size_t>> found;
  for_each_four_cycle(g, [&](std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
    // in a-b-c-d the chords are a-c and b-d
    for (auto [x, y] : {std::pair{a, c}, std::pair{b, d}}) {
      if (g.has_edge(x, y)) continue;
      if (g.node(x).pos != g.node(y).pos || g.node(x).language == g.node(y).language) continue;
      found.emplace(std::min(x, y), std::max(x, y));
    }
  });
  std::vector<std::pair<WordNode, WordNode>> out;
  for (const auto& [x, y] : found) out.emplace_back(g.node(x), g.node(y));
  return out;
}

struct PathOptions {
  double alpha = 0.5;
  /// Longest path considered, counted in words (vertices), like l.
  std::size_t max_len = 8;
};

/// For one source word: simple paths of matching pos that end at the first
/// target-language word reached and pass through no source- or target-
/// language word in between. Each path of l words contributes alpha^l to its
/// endpoint; weights are normalized to sum to 1.
inline std::vector<InferredTranslation> infer_paths_from(const TranslationGraph& g,
                                                         std::size_t source,
                                                         const std::string& tgt_lang,
                                                         const PathOptions& opts = {}) {
  if (!(opts.alpha > 0.0 && opts.alpha < 1.0))
    throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0,1)");
  if (opts.max_len < 2) throw Error(ErrorCode::InvalidArgument, "max_len must be >= 2");
  const WordNode& src = g.node(source);
  struct Acc {
    double raw = 0;
    std::size_t freq = 0;
    std::size_t min_len = 0;
  };
  std::map<std::size_t, Acc> acc;
  std::vector<bool> on_path(g.size(), false);
  std::size_t depth = 1;  // words on the current path
  std::function<void(std::size_t)> walk = [&](std::size_t at) {
    for (auto next : g.neighbors(at)) {
      if (on_path[next]) continue;
      const WordNode& w = g.node(next);
      if (w.pos != src.pos || w.language == src.language) continue;
      const std::size_t len = depth + 1;
      if (len > opts.max_len) continue;
      if (w.language == tgt_lang) {
        auto& a = acc[next];
        a.raw += std::pow(opts.alpha, static_cast<double>(len));
        a.min_len = a.freq == 0 ? len : std::min(a.min_len, len);
        ++a.freq;
        continue;
      }
      on_path[next] = true;
      ++depth;
      walk(next);
      --depth;
      on_path[next] = false;
    }
  };
  on_path[source] = true;
  walk(source);

  double total = 0;
  for (const auto& [_, a] : acc) total += a.raw;
  std::vector<InferredTranslation> out;
  for (const auto& [t, a] : acc)
    out.push_back({src, g.node(t), a.raw / total, Provenance::PATH, a.freq, a.min_len});
  std::sort(out.begin(), out.end(), [](const auto& p, const auto& q) {
    if (p.weight != q.weight) return p.weight > q.weight;
    return p.target < q.target;
  });
  return out;
}

/// infer_paths_from for every word of src_lang, in node-key order.
inline std::vector<InferredTranslation> infer_paths(const TranslationGraph& g,
                                                    const std::string& src_lang,
                                                    const std::string& tgt_lang,
                                                    const PathOptions& opts = {}) {
  std::vector<std::size_t> sources;
  for (std::size_t k = 0; k < g.size(); ++k)
    if (g.node(k).language == src_lang) sources.push_back(k);
  std::sort(sources.begin(), sources.end(),
            [&](std::size_t a, std::size_t b) { return g.node(a) < g.node(b); });
  std::vector<InferredTranslation> out;
  for (auto s : sources) {
    auto part = infer_paths_from(g, s, tgt_lang, opts);
    out.insert(out.end(), std::make_move_iterator(part.begin()),
               std::make_move_iterator(part.end()));
  }
  return out;
}

/// source \t source_lang \t pos \t target \t target_lang \t weight \t provenance
inline void write_lexicon_tsv(std::ostream& out, const std::vector<InferredTranslation>& xs) {
  for (const auto& x : xs)
    out << x.source.lemma << '\t' << x.source.language << '\t' << x.source.pos << '\t'
        << x.target.lemma << '\t' << x.target.language << '\t' << x.weight << '\t'
        << to_string(x.provenance) << '\n';
}

// ---------------------------------------------------------------------------
// Evaluation against a bilingual lexicon.

struct GoldPair {
  std::string source;
  std::string target;
  std::string pos;
  auto operator<=>(const GoldPair&) const = default;
};

/// source \t pos \t target \t pos (the translation-pair layout).
inline std::vector<GoldPair> parse_gold_lexicon(std::string_view content) {
  std::vector<GoldPair> out;
  for (const auto& e : parse_translation_tsv(content, "src", "tgt")) {
    const auto& s = e.a.language == "src" ? e.a : e.b;
    const auto& t = e.a.language == "src" ? e.b : e.a;
    out.push_back({s.lemma, t.lemma, s.pos});
  }
  return out;
}

struct ThresholdRow {
  double threshold = 0;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  double coverage = 0;
  std::size_t kept = 0;
};

inline std::vector<ThresholdRow> evaluate_inference(const std::vector<InferredTranslation>& inferred,
                                                    const std::vector<GoldPair>& gold,
                                                    const std::vector<double>& thresholds) {
  if (gold.empty()) throw Error(ErrorCode::EmptyGold, "gold lexicon is empty");
  const std::set<GoldPair> gold_set(gold.begin(), gold.end());
  std::set<std::pair<std::string, std::string>> gold_sources;
  for (const auto& g : gold_set) gold_sources.emplace(g.source, g.pos);
  std::vector<ThresholdRow> rows;
  for (double th : thresholds) {
    ThresholdRow r;
    r.threshold = th;
    std::set<GoldPair> kept;
    for (const auto& x : inferred)
      if (x.weight >= th) kept.insert({x.source.lemma, x.target.lemma, x.source.pos});
    std::size_t hits = 0;
    std::set<std::pair<std::string, std::string>> covered;
    for (const auto& k : kept) {
      hits += gold_set.count(k);
      if (gold_sources.count({k.source, k.pos})) covered.emplace(k.source, k.pos);
    }
    r.kept = kept.size();
    r.precision = kept.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(kept.size());
    r.recall = static_cast<double>(hits) / static_cast<double>(gold_set.size());
    r.f1 = r.precision + r.recall > 0 ? 2 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
    r.coverage = static_cast<double>(covered.size()) / static_cast<double>(gold_sources.size());
    rows.push_back(r);
  }
  return rows;
}

}  // namespace wsa::transinfer
