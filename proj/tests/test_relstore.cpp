#include <gtest/gtest.h>

#include <random>

#include "wsa/relstore.hpp"

using namespace wsa;

namespace {
const std::filesystem::path kData = WSA_TEST_DATA;
Sense sense(const std::string& t) { return {"", t, ResourceSide::LEFT}; }
double feature(const RelationWeights& w, RelationKind k) { return w[static_cast<std::size_t>(k)]; }
}  // namespace

TEST(Ingest, AccumulatesAndSkipsUnknownKinds) {
  IngestReport report;
  const auto store = ingest_edges(kData / "relations.tsv", "en", &report);
  EXPECT_DOUBLE_EQ(store.weight("a", "b", RelationKind::SYNONYMY), 3.5);
  EXPECT_DOUBLE_EQ(store.weight("b", "a", RelationKind::SYNONYMY), 3.5);
  EXPECT_EQ(store.weight("dog", "animal", RelationKind::HYPERNYMY), 1.0);
  EXPECT_EQ(store.weight("animal", "dog", RelationKind::HYPERNYMY), 0.0);
  EXPECT_EQ(report.skipped_unknown_kind, 1u);
  EXPECT_EQ(report.accepted, 4u);
}

TEST(Ingest, EmptyAndBadWeight) {
  EXPECT_EQ(parse_relation_tsv("", "en").size(), 0u);
  try {
    parse_relation_tsv("synonymy\ta\tb\theavy\n", "en");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BadWeight);
  }
}

TEST(Ingest, ConceptUrisFilteredByLanguage) {
  IngestReport r;
  const auto s = parse_relation_tsv("/r/Synonym\t/c/en/big_cat/n\t/c/en/lion\t1\n"
                                    "/r/Synonym\t/c/fr/chat\t/c/en/cat\t1\n", "en", &r);
  EXPECT_EQ(s.weight("big cat", "lion", RelationKind::SYNONYMY), 1.0);
  EXPECT_EQ(r.skipped_other_language, 1u);
}

TEST(Features, TaggedExamples) {
  const auto store = ingest_edges(kData / "relations.tsv", "en");
  for (double v : relation_weight_features(sense("river shore"), sense("money"), store)) EXPECT_EQ(v, 0.0);
  const auto w = relation_weight_features(sense("a horse gelded young"), sense("castrated male"), store);
  EXPECT_EQ(feature(w, RelationKind::SYNONYMY), 2.0);

  RelationStore two;
  two.add("x", "y", RelationKind::MERONYMY, 1);
  two.add("z", "w", RelationKind::MERONYMY, 3);
  EXPECT_EQ(feature(relation_weight_features(sense("x z"), sense("y w"), two), RelationKind::MERONYMY), 4.0);
}

TEST(Features, StopwordsExcluded) {
  RelationStore s;
  s.add("the", "cat", RelationKind::RELATEDNESS, 5);
  EXPECT_EQ(feature(relation_weight_features(sense("the"), sense("cat"), s, {"the"}), RelationKind::RELATEDNESS), 0.0);
  EXPECT_EQ(feature(relation_weight_features(sense("the"), sense("cat"), s), RelationKind::RELATEDNESS), 5.0);
}

TEST(Synonym, Flag) {
  const auto store = ingest_edges(kData / "relations.tsv", "en");
  EXPECT_EQ(synonym_flag("a", "b", store), 1);
  EXPECT_EQ(synonym_flag("a", "zzz", store), 0);
  EXPECT_EQ(synonym_flag("a", "a", store), 0);
}

TEST(Hapax, OnlyForSingleSenses) {
  EntryPair p;
  p.left_senses = {sense("x")};
  p.right_senses = {sense("y")};
  const auto l = hapax_links(p);
  ASSERT_TRUE(l);
  EXPECT_EQ(l->relation, SemanticRelation::EXACT);
  EXPECT_EQ(l->score, 1.0);
  p.left_senses.push_back(sense("z"));
  EXPECT_FALSE(hapax_links(p));
  p.left_senses.pop_back();
  p.right_senses = {sense("a"), sense("b"), sense("c")};
  EXPECT_FALSE(hapax_links(p));
}

TEST(Property, BruteForceSymmetryAndInverseClosure) {
  std::mt19937_64 rng(9);
  const std::vector<std::string> vocab = {"a", "b", "c", "d", "e"};
  std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1), kind(0, 6), len(1, 5);
  std::uniform_real_distribution<double> w(-1, 3);
  for (int it = 0; it < 200; ++it) {
    RelationStore s;
    for (int e = 0; e < 12; ++e) {
      const auto k = kAllRelationKinds[kind(rng)];
      const auto x = vocab[pick(rng)], y = vocab[pick(rng)];
      const double v = w(rng);
      s.add(x, y, k, v);
      // keep the dump closed under inversion of the directional pair
      if (k == RelationKind::HYPERNYMY) s.add(y, x, RelationKind::HYPONYMY, v);
      if (k == RelationKind::HYPONYMY) s.add(y, x, RelationKind::HYPERNYMY, v);
    }
    std::string ta, tb;
    for (auto n = len(rng); n > 0; --n) ta += vocab[pick(rng)] + " ";
    for (auto n = len(rng); n > 0; --n) tb += vocab[pick(rng)] + " ";
    const auto a = sense(ta), b = sense(tb);
    const auto ab = relation_weight_features(a, b, s);
    const auto ba = relation_weight_features(b, a, s);
    for (auto k : kAllRelationKinds) {
      double oracle = 0;
      for (const auto& x : a.tokens)
        for (const auto& y : b.tokens) oracle += s.weight(x, y, k);
      EXPECT_NEAR(feature(ab, k), oracle, 1e-12);
      if (is_symmetric(k)) {
        EXPECT_NEAR(feature(ab, k), feature(ba, k), 1e-12);
      }
    }
    EXPECT_NEAR(feature(ab, RelationKind::HYPERNYMY), feature(ba, RelationKind::HYPONYMY), 1e-12);
  }
}
