#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "wsa/embedstore.hpp"

using namespace wsa;

namespace {
const std::filesystem::path kData = WSA_TEST_DATA;

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << content;
  return p;
}

Sense sense(const std::string& t) { return {"", t, ResourceSide::LEFT}; }

EmbeddingTable cat_dog() {
  EmbeddingTable t;
  t.add("cat", {1, 0});
  t.add("dog", {0, 1});
  return t;
}
}  // namespace

TEST(Load, TwoLinesWithHeader) {
  const auto t = load_embeddings(kData / "tiny.vec");
  EXPECT_EQ(t.size(), 2u);
  EXPECT_EQ(t.dimension(), 3u);
}

TEST(Load, HeaderDeclaresDimension) {
  std::string content = "10 300\n";
  for (int r = 0; r < 10; ++r) {
    content += "w" + std::to_string(r);
    for (int k = 0; k < 300; ++k) content += " 0.5";
    content += "\n";
  }
  const auto t = load_embeddings(temp_file("wsa_300.vec", content));
  EXPECT_EQ(t.dimension(), 300u);
  EXPECT_EQ(t.size(), 10u);
  EXPECT_EQ(load_embeddings(temp_file("wsa_300.vec", content), 4).size(), 4u);
}

TEST(Load, Errors) {
  std::string content = "1 300\nx";
  for (int k = 0; k < 299; ++k) content += " 1";
  try {
    load_embeddings(temp_file("wsa_bad.vec", content + "\n"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InconsistentDimension);
  }
  try {
    load_embeddings(temp_file("wsa_empty.vec", ""));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyFile);
  }
}

TEST(Cosine, TaggedExamples) {
  const std::vector<double> u = {1, 0}, v = {0, 1}, w = {1, 1}, z = {0, 0};
  EXPECT_NEAR(cosine(u, u), 1.0, 1e-12);
  EXPECT_EQ(cosine(u, v), 0.0);
  EXPECT_NEAR(cosine(u, w), 1.0 / std::sqrt(2.0), 1e-9);
  const auto r = cosine_checked(u, z);
  EXPECT_EQ(r.value, 0.0);
  EXPECT_TRUE(r.zero_vector);
}

TEST(DefinitionSimilarity, TaggedExamples) {
  const auto t = cat_dog();
  EXPECT_NEAR(definition_similarity(sense("cat dog"), sense("cat dog"), t, false), 1.0, 1e-12);
  EXPECT_EQ(definition_similarity(sense("cat"), sense("zebra"), t, false), 0.0);
  EXPECT_NEAR(definition_similarity(sense("cat"), sense("cat dog"), t, false), 1.0 / std::sqrt(2.0), 1e-9);
}

TEST(DefinitionSimilarity, LookupIsCaseFolded) {
  EmbeddingTable t;
  t.add("Cat", {1, 0});
  EXPECT_NE(t.find("cat"), nullptr);
  EXPECT_NEAR(definition_similarity(sense("CAT"), sense("cat"), t, false), 1.0, 1e-12);
}

TEST(DefinitionSimilarity, StopwordsDropped) {
  auto t = cat_dog();
  t.add("the", {0, 1});
  t.stopwords() = {"the"};
  EXPECT_NEAR(definition_similarity(sense("the cat"), sense("cat"), t, true), 1.0, 1e-12);
  EXPECT_LT(definition_similarity(sense("the cat"), sense("cat"), t, false), 1.0);
}

TEST(Property, SymmetricScaleInvariantStopwordNeutral) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  EmbeddingTable t(4);
  const std::vector<std::string> vocab = {"a", "b", "c", "d", "e", "f"};
  for (const auto& w : vocab) t.add(w, {g(rng), g(rng), g(rng), g(rng)});
  auto scaled = t;
  scaled.scale(3.7);
  std::uniform_int_distribution<std::size_t> pick(0, vocab.size()), len(1, 5);
  const auto random_sense = [&] {
    std::string s;
    for (std::size_t k = len(rng); k > 0; --k) {
      const auto i = pick(rng);
      s += (i == vocab.size() ? std::string("oov") : vocab[i]) + " ";
    }
    return sense(s);
  };
  for (int it = 0; it < 1000; ++it) {
    const auto a = random_sense(), b = random_sense();
    const double ab = definition_similarity(a, b, t, false);
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0);
    EXPECT_NEAR(ab, definition_similarity(b, a, t, false), 1e-12);
    EXPECT_NEAR(ab, definition_similarity(a, b, scaled, false), 1e-12);
    EXPECT_EQ(ab, definition_similarity(a, b, t, true));  // stopword list is empty
  }
}

TEST(Stopwords, LoadFile) {
  const auto s = load_stopwords(kData / "stopwords.txt");
  EXPECT_EQ(s.size(), 4u);
  EXPECT_TRUE(s.count("the"));
  EXPECT_TRUE(default_english_stopwords().count("the"));
}
