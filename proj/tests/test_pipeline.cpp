#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "fixtures.hpp"
#include "wsa/pipeline.hpp"

using namespace wsa;
using namespace wsa::pipeline;
using wsa::fixtures::link;

namespace {

const std::filesystem::path kData = WSA_TEST_DATA;

ErrorCode config_error(const nlohmann::json& j) {
  try {
    parse_config(j);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("wsa_pipeline_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST(Config, Defaults) {
  const auto c = parse_config(nlohmann::json::object());
  EXPECT_TRUE(c.basic_string);
  EXPECT_EQ(c.scorer.feature, "jaccard");
  EXPECT_EQ(c.matcher, MatcherKind::HUNGARIAN);
  EXPECT_EQ(c.max_tokens, 0u);
}

TEST(Config, RejectsUnknownPieces) {
  EXPECT_EQ(config_error({{"scorer", {{"name", "scorer.Feature"}, {"feature", "no_such_feature"}}}}),
            ErrorCode::ConfigError);
  // sem_sim needs the embedding feature block
  EXPECT_EQ(config_error({{"scorer", {{"name", "scorer.Feature"}, {"feature", "sem_sim"}}}}),
            ErrorCode::ConfigError);
  EXPECT_EQ(config_error({{"matcher", {{"name", "matcher.Magic"}}}}), ErrorCode::ConfigError);
  EXPECT_EQ(config_error({{"bogus", 1}}), ErrorCode::ConfigError);
  EXPECT_EQ(config_error({{"maxTokens", 0}}), ErrorCode::ConfigError);
  EXPECT_EQ(config_error({{"matcher", {{"name", "matcher.WBbM"}, {"lower", 3}, {"upper", 1}}}}),
            ErrorCode::ConfigError);
  EXPECT_EQ(config_error({{"scorer", {{"name", "scorer.Model"}}}}), ErrorCode::ConfigError);
  EXPECT_EQ(config_error(nlohmann::json::array()), ErrorCode::ConfigError);
}

TEST(Config, FullDescription) {
  const auto c = parse_config(
      {{"blocking", {{"name", "blocking.Headword"}}},
       {"textFeatures", {{{"name", "feature.BasicString"}}, {{"name", "feature.WordEmbeddings"}, {"embeddingPath", "vec.txt"}}}},
       {"graphFeatures", {{{"name", "feature.RelationWeights"}, {"relationPath", "rel.tsv"}, {"language", "en"}}}},
       {"scorer", {{"name", "scorer.Feature"}, {"feature", "sem_sim"}}},
       {"matcher", {{"name", "matcher.BeamSearch"}, {"beamWidth", 3}}},
       {"constraint", {{"name", "constraint.Taxonomic"}}},
       {"maxTokens", 15}},
      "/base");
  EXPECT_EQ(c.embeddings_path, "/base/vec.txt");
  EXPECT_EQ(c.relations_path, "/base/rel.tsv");
  EXPECT_EQ(c.relations_language, "en");
  EXPECT_EQ(c.matcher, MatcherKind::BEAM);
  EXPECT_EQ(c.beam_width, 3u);
  EXPECT_EQ(c.constraint, matcher::Constraint::TAXONOMIC);
  EXPECT_EQ(c.max_tokens, 15u);
}

TEST(Config, MissingResourcesSurface) {
  auto c = parse_config({{"textFeatures", {{{"name", "feature.WordEmbeddings"}, {"embeddingPath", "/nope.vec"}}}},
                         {"scorer", {{"name", "scorer.Feature"}, {"feature", "sem_sim"}}}});
  try {
    load_resources(c);
    FAIL() << "expected ResourceMissing";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ResourceMissing);
  }
  EXPECT_THROW(load_config("/nope/config.json"), Error);
}

TEST(Blocking, EveryPairIsACandidate) {
  const auto left = load_dictionary_tsv(kData / "left.tsv", ResourceSide::LEFT);
  const auto right = load_dictionary_tsv(kData / "right.tsv", ResourceSide::RIGHT);
  const auto pairs = block(left, right);
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0].left_senses.size(), 2u);
  EXPECT_EQ(pairs[0].right_senses.size(), 3u);
  EXPECT_EQ(pairs[0].candidates.size(), 6u);

  const auto aligned = run_alignment(parse_config(nlohmann::json::object()), left, right);
  ASSERT_EQ(aligned.size(), 1u);
  EXPECT_EQ(aligned[0].candidates.size(), 6u);
  for (const auto& l : aligned[0].candidates) {
    ASSERT_TRUE(l.scores_by_class);
    EXPECT_GE(l.score, 0.0);
    EXPECT_LE(l.score, 1.0);
  }
  EXPECT_LE(aligned[0].gold_links.size(), 2u);
}

TEST(Blocking, EmptyRightDictionaryGivesNoLinks) {
  const auto left = load_dictionary_tsv(kData / "left.tsv", ResourceSide::LEFT);
  EXPECT_TRUE(run_alignment(parse_config(nlohmann::json::object()), left, Dictionary{}).empty());
}

TEST(Truncation, KeepsFirstTokens) {
  std::string gloss;
  for (int k = 0; k < 30; ++k) gloss += "t" + std::to_string(k) + " ";
  const Sense s("x", gloss, ResourceSide::LEFT);
  ASSERT_EQ(s.tokens.size(), 30u);
  const auto t = truncate_sense(s, 15);
  ASSERT_EQ(t.tokens.size(), 15u);
  EXPECT_EQ(t.tokens.front(), "t0");
  EXPECT_EQ(t.tokens.back(), "t14");
  EXPECT_EQ(Sense("y", t.text, ResourceSide::LEFT).tokens, t.tokens);
  EXPECT_EQ(truncate_sense(s, 0).tokens.size(), 30u);
  EXPECT_EQ(truncate_sense(s, 40).tokens.size(), 30u);
}

TEST(Truncation, LongGlossFixture) {
  const auto gold = load_benchmark(kData / "long_gloss.json").entries;
  const auto r = fixtures::with_embeddings(load_embeddings(kData / "long_gloss.vec"));
  const double full = fixtures::alignment_f(gold, fixtures::embedding_greedy(0), r);
  const double cut = fixtures::alignment_f(gold, fixtures::embedding_greedy(15), r);
  EXPECT_DOUBLE_EQ(cut, 1.0);
  EXPECT_LT(full, cut);
  // truncation only affects scoring
  const auto aligned = run_alignment(fixtures::embedding_greedy(15), r, gold);
  EXPECT_EQ(aligned[0].left_senses[0].text, gold[0].left_senses[0].text);
  EXPECT_EQ(aligned[0].left_senses[0].tokens.size(), 45u);
}

TEST(Truncation, NeverLowersOnGeneratedFamily) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 200; ++trial) {
    const auto c = fixtures::long_gloss_case(rng);
    EXPECT_GE(fixtures::alignment_f(c.gold, fixtures::embedding_greedy(15), c.resources),
              fixtures::alignment_f(c.gold, fixtures::embedding_greedy(0), c.resources));
  }
}

TEST(Align, WorkersKeepOrder) {
  std::vector<EntryPair> entries;
  for (int k = 0; k < 20; ++k) entries.push_back(load_benchmark(kData / "long_gloss.json").entries[0]);
  const auto r = fixtures::with_embeddings(load_embeddings(kData / "long_gloss.vec"));
  auto c = fixtures::embedding_greedy(15);
  const auto serial = run_alignment(c, r, entries);
  c.workers = 4;
  const auto parallel = run_alignment(c, r, entries);
  ASSERT_EQ(serial.size(), parallel.size());
  for (std::size_t k = 0; k < serial.size(); ++k) EXPECT_EQ(serial[k].gold_links, parallel[k].gold_links);
}

TEST(Align, MatchersRespectShape) {
  const auto gold = load_benchmark(kData / "long_gloss.json").entries;
  const auto r = fixtures::with_embeddings(load_embeddings(kData / "long_gloss.vec"));
  for (const char* m : {"matcher.Hungarian", "matcher.Greedy", "matcher.WBbM"}) {
    auto c = fixtures::embedding_greedy(15);
    c.matcher = parse_config({{"matcher", {{"name", m}}}}).matcher;
    const auto out = run_alignment(c, r, gold);
    ASSERT_EQ(out.size(), 1u);
    std::set<std::size_t> lefts, rights;
    for (const auto& l : out[0].gold_links) {
      EXPECT_TRUE(lefts.insert(l.source_sense).second) << m;
      EXPECT_TRUE(rights.insert(l.target_sense).second) << m;
      EXPECT_EQ(l.source_sense, l.target_sense) << m;
    }
    EXPECT_EQ(out[0].gold_links.size(), 3u) << m;
  }
}

TEST(Align, HapaxShortcut) {
  EntryPair p;
  p.lemma = "solo";
  p.left_senses.emplace_back("a", "one performer", ResourceSide::LEFT);
  p.right_senses.emplace_back("b", "nothing in common", ResourceSide::RIGHT);
  auto c = parse_config({{"hapax", true}});
  const auto out = align_entry(p, c, Resources{});
  ASSERT_EQ(out.gold_links.size(), 1u);
  EXPECT_EQ(out.gold_links[0].relation, SemanticRelation::EXACT);
  c.hapax = false;
  EXPECT_TRUE(align_entry(p, c, Resources{}).gold_links.empty());
}

TEST(Model, TrainSaveLoadAlign) {
  // topic words with orthogonal vectors; linked glosses share a topic
  const std::vector<std::string> topics = {"river", "money", "music", "stone"};
  const auto vec_path = temp_path("topics.vec");
  {
    std::ofstream out(vec_path);
    out << topics.size() << ' ' << topics.size() << '\n';
    for (std::size_t t = 0; t < topics.size(); ++t) {
      out << topics[t];
      for (std::size_t k = 0; k < topics.size(); ++k) out << ' ' << (k == t ? 1 : 0);
      out << '\n';
    }
  }
  std::mt19937_64 rng(8);
  std::vector<EntryPair> data;
  for (int e = 0; e < 60; ++e) {
    std::vector<std::size_t> order = {0, 1, 2, 3};
    std::shuffle(order.begin(), order.end(), rng);
    EntryPair p;
    p.lemma = "w" + std::to_string(e);
    p.pos = PartOfSpeech::NOUN;
    for (std::size_t i = 0; i < 2; ++i) {
      p.left_senses.emplace_back("", topics[order[i]] + " " + topics[order[i]], ResourceSide::LEFT);
      p.right_senses.emplace_back("", topics[order[i]], ResourceSide::RIGHT);
      p.gold_links.push_back(link(i, i));
    }
    data.push_back(p);
  }
  const auto table = load_embeddings(vec_path);
  TrainOptions opts;
  opts.task = scorer::Task::BINARY;
  const auto rep = train_bundle(data, {&table, nullptr, nullptr}, opts);
  EXPECT_GT(rep.instances, data.size() * 4);
  EXPECT_GT(rep.train_rows, rep.test_rows);
  ASSERT_TRUE(rep.test_metrics);
  EXPECT_GE(rep.test_metrics->accuracy, 0.9);

  const auto model_path = temp_path("bundle.txt");
  save_bundle(rep.bundle, model_path);
  const auto back = load_bundle(model_path);
  EXPECT_EQ(back.model, rep.bundle.model);

  const auto c = parse_config({{"scorer", {{"name", "scorer.Model"}, {"modelFile", model_path.string()}}},
                               {"resources", {{"embeddings", vec_path.string()}}},
                               {"matcher", {{"name", "matcher.Hungarian"}, {"threshold", 0.5}}}});
  const auto r = load_resources(c);
  const std::vector<EntryPair> eval(data.begin(), data.begin() + 10);
  const auto aligned = run_alignment(c, r, eval);
  const auto ev = evalkit::evaluate_links(eval, predicted_links(aligned), true);
  EXPECT_GE(ev.macro.f_measure, 0.9);
  std::filesystem::remove(vec_path);
  std::filesystem::remove(model_path);
}
