#pragma once

// Generated fixtures shared by the unit tests and the acceptance binary.

#include <random>
#include <string>
#include <vector>

#include "wsa/evalkit.hpp"
#include "wsa/lexdata.hpp"
#include "wsa/pipeline.hpp"

namespace wsa::fixtures {

inline Link link(std::size_t i, std::size_t j, SemanticRelation r = SemanticRelation::EXACT) {
  Link l;
  l.source_sense = i;
  l.target_sense = j;
  l.relation = r;
  return l;
}

/// Mean-vector cosine scorer, bijective greedy matching, optional token cap.
/// Embeddings come from the caller's Resources.
inline pipeline::PipelineConfig embedding_greedy(std::size_t max_tokens) {
  return pipeline::parse_config({{"textFeatures", {{{"name", "feature.WordEmbeddings"}}}},
                                 {"scorer", {{"name", "scorer.Feature"}, {"feature", "sem_sim"}}},
                                 {"matcher", {{"name", "matcher.Greedy"}, {"threshold", 0.1}}},
                                 {"maxTokens", max_tokens == 0 ? nlohmann::json("ALL")
                                                               : nlohmann::json(max_tokens)}});
}

inline pipeline::Resources with_embeddings(EmbeddingTable table) {
  pipeline::Resources r;
  r.embeddings = std::make_shared<const EmbeddingTable>(std::move(table));
  return r;
}

/// Macro F of aligning `gold` with the gold links hidden.
inline double alignment_f(const std::vector<EntryPair>& gold, const pipeline::PipelineConfig& c,
                          const pipeline::Resources& r) {
  const auto aligned = pipeline::run_alignment(c, r, gold);
  return evalkit::evaluate_links(gold, pipeline::predicted_links(aligned)).macro.f_measure;
}

struct LongGlossCase {
  std::vector<EntryPair> gold;
  pipeline::Resources resources;
};

/// One entry per case. Each sense has a topic; a word's vector is its topic
/// axis plus a small private axis. Left glosses open with 15 tokens of their
/// own topic and continue with a tail drawn from any topic; right glosses
/// list their topic's words.
inline LongGlossCase long_gloss_case(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> senses(2, 5), words(3, 6), tail(0, 60);
  const std::size_t n = senses(rng);
  std::vector<std::vector<std::string>> vocab(n);
  std::size_t total = 0;
  for (auto& v : vocab) {
    v.resize(words(rng));
    total += v.size();
  }
  EmbeddingTable table(n + total);
  std::size_t next = 0;
  for (std::size_t t = 0; t < n; ++t)
    for (auto& w : vocab[t]) {
      w = "w" + std::to_string(next);
      std::vector<double> vec(n + total, 0.0);
      vec[t] = 1.0;
      vec[n + next++] = 0.2;
      table.add(w, vec);
    }
  EntryPair p;
  p.lemma = "generated";
  p.pos = PartOfSpeech::NOUN;
  p.pos_tag = "noun";
  std::uniform_int_distribution<std::size_t> topic(0, n - 1);
  const auto pick = [&](const std::vector<std::string>& v) {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
  };
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> tokens;
    for (std::size_t k = 0; k < 15; ++k) tokens.push_back(pick(vocab[i]));
    for (std::size_t k = tail(rng); k > 0; --k) tokens.push_back(pick(vocab[topic(rng)]));
    p.left_senses.emplace_back("l" + std::to_string(i), text::join(tokens), ResourceSide::LEFT);
    p.right_senses.emplace_back("r" + std::to_string(i), text::join(vocab[i]), ResourceSide::RIGHT);
    p.gold_links.push_back(link(i, i));
  }
  return {{p}, with_embeddings(std::move(table))};
}

}  // namespace wsa::fixtures
