#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "wsa/evalkit.hpp"

using namespace wsa;
using namespace wsa::evalkit;
using wsa::oracles::alpha_oracle;
using wsa::oracles::random_table;

namespace {

using Label = std::optional<std::string>;

Sense S(const char* t) { return {"", t, ResourceSide::LEFT}; }

Link link(std::size_t i, std::size_t j, SemanticRelation r) {
  Link l;
  l.source_sense = i;
  l.target_sense = j;
  l.relation = r;
  return l;
}

}  // namespace

TEST(Macro, TaggedExamples) {
  const auto perfect = macro_prf({{2, 0, 0, 3}, {1, 0, 0, 0}});
  EXPECT_EQ(perfect.precision, 1);
  EXPECT_EQ(perfect.recall, 1);
  EXPECT_EQ(perfect.f_measure, 1);
  EXPECT_EQ(perfect.accuracy, 1);
  const auto half = macro_prf({{1, 1, 0, 0}});
  EXPECT_DOUBLE_EQ(half.precision, 0.5);
  EXPECT_DOUBLE_EQ(half.recall, 1.0);
  EXPECT_NEAR(half.f_measure, 2.0 / 3.0, 1e-12);
  const auto empty = macro_prf({{0, 0, 0, 4}});
  EXPECT_EQ(empty.precision, 0);
  EXPECT_EQ(empty.recall, 0);
  EXPECT_EQ(empty.f_measure, 0);
  EXPECT_EQ(empty.accuracy, 1);
  EXPECT_THROW(macro_prf({}), Error);
}

TEST(Classification, IdentityAndOracle) {
  const std::vector<SemanticRelation> all(kAllRelations.begin(), kAllRelations.end());
  std::vector<SemanticRelation> g = {SemanticRelation::EXACT, SemanticRelation::NONE, SemanticRelation::BROADER};
  const auto id = classification_metrics(g, g, all);
  EXPECT_EQ(id.accuracy, 1.0);
  for (std::size_t a = 0; a < 5; ++a)
    for (std::size_t b = 0; b < 5; ++b)
      if (a != b) {
        EXPECT_EQ(id.confusion.counts[a][b], 0u);
      }

  std::mt19937_64 rng(51);
  std::uniform_int_distribution<std::size_t> pick(0, 4);
  for (int it = 0; it < 100; ++it) {
    std::vector<SemanticRelation> gold(50), pred(50);
    for (auto& x : gold) x = kAllRelations[pick(rng)];
    for (auto& x : pred) x = kAllRelations[pick(rng)];
    const auto m = classification_metrics(gold, pred, all);
    std::size_t agree = 0;
    for (std::size_t k = 0; k < 50; ++k) agree += gold[k] == pred[k];
    EXPECT_EQ(m.confusion.trace(), agree);
    EXPECT_EQ(m.confusion.total(), 50u);
    EXPECT_DOUBLE_EQ(m.accuracy, static_cast<double>(agree) / 50.0);
    double f = 0;
    for (std::size_t c = 0; c < 5; ++c) {
      std::size_t gc = 0, row = 0, tp = 0, pc = 0;
      for (std::size_t k = 0; k < 50; ++k) {
        gc += gold[k] == all[c];
        pc += pred[k] == all[c];
        tp += gold[k] == all[c] && pred[k] == all[c];
      }
      for (auto x : m.confusion.counts[c]) row += x;
      EXPECT_EQ(row, gc);
      const double p = pc ? double(tp) / double(pc) : 0.0, r = gc ? double(tp) / double(gc) : 0.0;
      f += p + r > 0 ? 2 * p * r / (p + r) : 0.0;
    }
    EXPECT_NEAR(m.macro_f, f / 5.0, 1e-12);
  }
  EXPECT_THROW(classification_metrics(g, {SemanticRelation::EXACT}, all), Error);
  try {
    classification_metrics({SemanticRelation::NONE}, {SemanticRelation::NONE}, {SemanticRelation::EXACT});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownLabel);
  }
}

TEST(Classification, AlwaysNoneEqualsPrevalence) {
  std::vector<SemanticRelation> gold(10000, SemanticRelation::NONE);
  for (std::size_t k = 0; k < 3072; ++k) gold[k] = SemanticRelation::EXACT;
  const std::vector<SemanticRelation> pred(gold.size(), SemanticRelation::NONE);
  EXPECT_DOUBLE_EQ(classification_metrics(gold, pred, {SemanticRelation::EXACT, SemanticRelation::NONE}).accuracy, 0.6928);
}

TEST(Links, FullCrossProduct) {
  EntryPair p;
  p.left_senses = {S("a"), S("b")};
  p.right_senses = {S("c"), S("d")};
  p.gold_links = {link(0, 0, SemanticRelation::EXACT), link(1, 1, SemanticRelation::BROADER)};
  const std::vector<Link> pred = {link(0, 0, SemanticRelation::EXACT), link(1, 1, SemanticRelation::NARROWER),
                                  link(0, 1, SemanticRelation::RELATED)};
  const auto ev = evaluate_links({p}, {pred});
  ASSERT_EQ(ev.per_entry.size(), 1u);
  EXPECT_EQ(ev.per_entry[0].tp, 1u);
  EXPECT_EQ(ev.per_entry[0].fp, 2u);
  EXPECT_EQ(ev.per_entry[0].fn, 1u);
  EXPECT_EQ(ev.per_entry[0].tn, 1u);
  EXPECT_EQ(ev.pairs, 4u);
  EXPECT_DOUBLE_EQ(ev.pair_accuracy, 0.5);
  const auto bin = evaluate_links({p}, {pred}, true);
  EXPECT_EQ(bin.per_entry[0].tp, 2u);
  EXPECT_EQ(bin.per_entry[0].fp, 1u);
}

TEST(Alpha, PerfectAgreementIsOne) {
  AgreementTable t = {{"a", "a"}, {"b", "b"}, {"c", "c"}};
  EXPECT_EQ(krippendorff_alpha(t), 1.0);
  EXPECT_EQ(krippendorff_alpha({{"a", "a"}, {"a", "a"}}), 1.0);
}

TEST(Alpha, ToyTableMatchesOracle) {
  const AgreementTable t = {{"a", "a"}, {"a", "b"}, {"b", "b"}, {"b", "b"}};
  EXPECT_NEAR(krippendorff_alpha(t), alpha_oracle(t), 1e-9);
  EXPECT_NEAR(krippendorff_alpha(t), 1.0 - (2.0 / 8.0) / (30.0 / 56.0), 1e-12);
}

TEST(Alpha, RandomSmallTablesMatchOracle) {
  std::mt19937_64 rng(52);
  std::uniform_int_distribution<std::size_t> units(2, 8), coders(2, 4), classes(2, 4);
  for (int it = 0; it < 100; ++it) {
    auto t = random_table(rng, units(rng), coders(rng), classes(rng), 0.15);
    // guarantee two pairable units
    t[0][0] = t[0][1] = "c0";
    t[1][0] = "c1";
    t[1][1] = "c0";
    EXPECT_NEAR(krippendorff_alpha(t), alpha_oracle(t), 1e-9);
  }
}

TEST(Alpha, ChanceAgreementNearZero) {
  std::mt19937_64 rng(53);
  EXPECT_NEAR(krippendorff_alpha(random_table(rng, 10000, 2, 5, 0.0)), 0.0, 0.05);
}

TEST(Alpha, InsufficientData) {
  try {
    krippendorff_alpha({{"a", "b"}, {"a", std::nullopt}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientData);
  }
}

TEST(Property, AlphaInvariancesAndMonotonicity) {
  std::mt19937_64 rng(54);
  for (int it = 0; it < 200; ++it) {
    auto t = random_table(rng, 12, 3, 3, 0.1);
    t[0] = {"c0", "c1", "c0"};
    t[1] = {"c2", "c2", "c1"};
    const double a = krippendorff_alpha(t);
    auto relabeled = t;
    for (auto& u : relabeled)
      for (auto& v : u)
        if (v) v = *v == "c0" ? "c2" : (*v == "c2" ? "c0" : *v);
    EXPECT_NEAR(krippendorff_alpha(relabeled), a, 1e-12);
    auto swapped = t;
    for (auto& u : swapped) std::reverse(u.begin(), u.end());
    EXPECT_NEAR(krippendorff_alpha(swapped), a, 1e-12);
    auto grown = t;
    grown.push_back({"c1", "c1", "c1"});
    EXPECT_GE(krippendorff_alpha(grown), a - 1e-12);
  }
}

TEST(Confusion, Csv) {
  const auto m = classification_metrics({SemanticRelation::EXACT}, {SemanticRelation::NONE},
                                        {SemanticRelation::EXACT, SemanticRelation::NONE});
  std::ostringstream out;
  write_confusion_csv(out, m.confusion);
  EXPECT_EQ(out.str(), "gold\\pred,exact,none\nexact,0,1\nnone,0,0\n");
}
