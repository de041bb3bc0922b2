#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "wsa/rbm.hpp"

using namespace wsa;
using namespace wsa::rbm;
using wsa::oracles::random_rbm;

namespace {

std::vector<std::vector<double>> repeated(std::vector<double> v, std::size_t times) {
  return std::vector<std::vector<double>>(times, v);
}

}  // namespace

TEST(Energy, TaggedExamples) {
  Rbm zero(2, 3);
  EXPECT_EQ(zero.energy(std::vector<double>{0, 0}, std::vector<double>{0, 0, 0}), 0.0);
  Rbm r(1, 1);
  r.visible_bias()[0] = 1;
  r.hidden_bias()[0] = 1;
  r.weight(0, 0) = 1;
  EXPECT_EQ(r.energy(std::vector<double>{1}, std::vector<double>{1}), -3.0);
  std::mt19937_64 rng(1);
  const auto q = random_rbm(rng, 3, 2);
  const std::vector<double> h = {1, 0};
  EXPECT_NEAR(q.energy(std::vector<double>{0, 0, 0}, h), -q.hidden_bias()[0], 1e-15);
  try {
    q.energy(std::vector<double>{0, 0}, h);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(HiddenProb, TaggedExamples) {
  Rbm r(1, 2);
  for (double p : r.hidden_prob(std::vector<double>{1})) EXPECT_EQ(p, 0.5);
  r.hidden_bias()[0] = 20;
  r.weight(0, 1) = 2;
  const auto p = r.hidden_prob(std::vector<double>{1});
  EXPECT_NEAR(p[0], 1.0, 1e-8);
  EXPECT_NEAR(p[1], 0.88080, 1e-5);
  EXPECT_EQ(r.transform(std::vector<double>{1}), (std::vector<double>{1, 1}));
}

TEST(Train, ZeroLearningRateLeavesParameters) {
  auto r = Rbm::random(3, 2, 0.0, 5);
  const auto before = r;
  r.train_cd1(repeated({1, 0, 1}, 10), 20, 3);
  EXPECT_EQ(r, before);
}

TEST(Train, ReconstructionErrorDecreases) {
  auto r = Rbm::random(3, 2, 0.1, 5);
  const auto trace = r.train_cd1(repeated({1, 0, 1}, 10), 200, 3);
  ASSERT_EQ(trace.size(), 200u);
  EXPECT_LT(trace.back(), trace.front());
}

TEST(Train, DeterministicUnderSeed) {
  auto a = Rbm::random(4, 3, 0.1, 9), b = Rbm::random(4, 3, 0.1, 9);
  const auto data = std::vector<std::vector<double>>{{1, 0, 1, 0}, {0.5, 1, 0, 0.25}, {0, 0, 1, 1}};
  EXPECT_EQ(a.train_cd1(data, 30, 17, 2), b.train_cd1(data, 30, 17, 2));
  EXPECT_EQ(a, b);
  try {
    a.train_cd1({}, 1, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyData);
  }
}

TEST(Train, RaisesEnumeratedLikelihoodOfPattern) {
  auto r = Rbm::random(3, 2, 0.1, 5);
  const auto data = repeated({1, 0, 1}, 10);
  const double before = exact_log_likelihood(r, data);
  r.train_cd1(data, 200, 3);
  EXPECT_GT(exact_log_likelihood(r, data), before);
}

TEST(Enumeration, NormalizesOnRandomModels) {
  std::mt19937_64 rng(2);
  for (int it = 0; it < 50; ++it) {
    const auto r = random_rbm(rng, 3, 2);
    double total = 0;
    for (std::size_t vb = 0; vb < 8; ++vb) total += std::exp(exact_log_likelihood(r, {binary_state(vb, 3)}));
    EXPECT_NEAR(total, 1.0, 1e-9);
  }
}

TEST(Enumeration, ZeroModelIsUniform) {
  Rbm r(4, 3);
  for (std::size_t vb = 0; vb < 16; ++vb)
    EXPECT_NEAR(std::exp(exact_log_likelihood(r, {binary_state(vb, 4)})), 1.0 / 16.0, 1e-12);
}

TEST(Enumeration, TooLarge) {
  Rbm r(15, 6);
  try {
    log_partition(r);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooLargeToEnumerate);
  }
}

TEST(Gradient, PositivePhaseMatchesEnumeration) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 1);
  for (int it = 0; it < 50; ++it) {
    const auto r = random_rbm(rng, 3, 2);
    const std::vector<double> v = {u(rng), u(rng), u(rng)};
    const auto p = r.hidden_prob(v);
    const auto oracle = enumerated_data_term(r, v);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(v[i] * p[j], oracle[i * 2 + j], 1e-9);
  }
}

TEST(Gradient, PositivePhaseMatchesFiniteDifferences) {
  std::mt19937_64 rng(6);
  const double h = 1e-5;
  for (int it = 0; it < 20; ++it) {
    auto r = random_rbm(rng, 3, 2, 1.0);
    const auto v = binary_state(static_cast<std::size_t>(it) % 8, 3);
    const auto p = r.hidden_prob(v);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 2; ++j) {
        const double w = r.weight(i, j);
        r.weight(i, j) = w + h;
        const double up = log_unnormalized(r, v);
        r.weight(i, j) = w - h;
        const double down = log_unnormalized(r, v);
        r.weight(i, j) = w;
        EXPECT_NEAR((up - down) / (2 * h), v[i] * p[j], 1e-6);
      }
  }
}

TEST(Persistence, SaveLoadRoundTrip) {
  std::mt19937_64 rng(8);
  const auto r = random_rbm(rng, 5, 4);
  std::stringstream ss;
  r.save(ss);
  EXPECT_EQ(Rbm::load(ss), r);
  std::stringstream bad("rbm 2 2 0.1\n1 2\n");
  EXPECT_THROW(Rbm::load(bad), Error);
}
