#pragma once

// Bernoulli restricted Boltzmann machine trained with one-step contrastive
// divergence, plus exhaustive-enumeration helpers for small models.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "wsa/error.hpp"

namespace wsa::rbm {

inline double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

class Rbm {
 public:
  Rbm() = default;

  /// Zero biases, zero weights.
  Rbm(std::size_t visible, std::size_t hidden, double learning_rate = 0.1)
      : n_(visible), m_(hidden), eta_(learning_rate), w_(visible * hidden, 0.0),
        a_(visible, 0.0), b_(hidden, 0.0) {
    if (visible == 0 || hidden == 0)
      throw Error(ErrorCode::InvalidArgument, "an RBM needs at least one unit per layer");
  }

  /// Weights ~ U(-0.01, 0.01) from the seed, biases 0.
  static Rbm random(std::size_t visible, std::size_t hidden, double learning_rate,
                    std::uint64_t seed) {
    Rbm r(visible, hidden, learning_rate);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-0.01, 0.01);
    for (auto& x : r.w_) x = dist(rng);
    return r;
  }

  std::size_t visible() const { return n_; }
  std::size_t hidden() const { return m_; }
  double learning_rate() const { return eta_; }
  void set_learning_rate(double eta) { eta_ = eta; }

  /// w_ij couples visible i and hidden j; stored hidden-major (m x n).
  double& weight(std::size_t i, std::size_t j) { return w_[j * n_ + i]; }
  double weight(std::size_t i, std::size_t j) const { return w_[j * n_ + i]; }
  std::vector<double>& visible_bias() { return a_; }
  const std::vector<double>& visible_bias() const { return a_; }
  std::vector<double>& hidden_bias() { return b_; }
  const std::vector<double>& hidden_bias() const { return b_; }
  const std::vector<double>& weights() const { return w_; }

  bool operator==(const Rbm&) const = default;

  double energy(std::span<const double> v, std::span<const double> h) const {
    check(v.size(), n_, "visible");
    check(h.size(), m_, "hidden");
    double e = 0;
    for (std::size_t i = 0; i < n_; ++i) e -= a_[i] * v[i];
    for (std::size_t j = 0; j < m_; ++j) e -= b_[j] * h[j];
    for (std::size_t j = 0; j < m_; ++j)
      for (std::size_t i = 0; i < n_; ++i) e -= v[i] * h[j] * w_[j * n_ + i];
    return e;
  }

  /// p(h_j = 1 | v) = sigma(b_j + sum_i v_i w_ij)
  std::vector<double> hidden_prob(std::span<const double> v) const {
    check(v.size(), n_, "visible");
    std::vector<double> p(m_);
    for (std::size_t j = 0; j < m_; ++j) {
      double x = b_[j];
      for (std::size_t i = 0; i < n_; ++i) x += v[i] * w_[j * n_ + i];
      p[j] = sigmoid(x);
    }
    return p;
  }

  /// p(v_i = 1 | h) = sigma(a_i + sum_j h_j w_ij)
  std::vector<double> visible_prob(std::span<const double> h) const {
    check(h.size(), m_, "hidden");
    std::vector<double> p(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      double x = a_[i];
      for (std::size_t j = 0; j < m_; ++j) x += h[j] * w_[j * n_ + i];
      p[i] = sigmoid(x);
    }
    return p;
  }

  /// Binary latent features: hidden probabilities thresholded at 0.5.
  std::vector<double> transform(std::span<const double> v) const {
    auto p = hidden_prob(v);
    for (auto& x : p) x = x > 0.5 ? 1.0 : 0.0;
    return p;
  }

  /// CD-1 over shuffled mini-batches. Returns the mean squared reconstruction
  /// error of each epoch.
  std::vector<double> train_cd1(const std::vector<std::vector<double>>& data, std::size_t epochs,
                                std::uint64_t seed, std::size_t batch_size = 10) {
    if (data.empty()) throw Error(ErrorCode::EmptyData, "no training vectors");
    for (const auto& v : data) check(v.size(), n_, "visible");
    if (batch_size == 0) batch_size = 1;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<std::size_t> order(data.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;

    std::vector<double> trace;
    trace.reserve(epochs);
    std::vector<double> dw(w_.size()), da(n_), db(m_);
    std::vector<double> h_sample(m_);
    for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
      std::shuffle(order.begin(), order.end(), rng);
      double err = 0;
      for (std::size_t start = 0; start < order.size(); start += batch_size) {
        const std::size_t stop = std::min(order.size(), start + batch_size);
        std::fill(dw.begin(), dw.end(), 0.0);
        std::fill(da.begin(), da.end(), 0.0);
        std::fill(db.begin(), db.end(), 0.0);
        for (std::size_t k = start; k < stop; ++k) {
          const auto& v0 = data[order[k]];
          const auto p0 = hidden_prob(v0);
          for (std::size_t j = 0; j < m_; ++j) h_sample[j] = unif(rng) < p0[j] ? 1.0 : 0.0;
          const auto v1 = visible_prob(h_sample);
          const auto p1 = hidden_prob(v1);
          for (std::size_t j = 0; j < m_; ++j) {
            for (std::size_t i = 0; i < n_; ++i)
              dw[j * n_ + i] += v0[i] * p0[j] - v1[i] * p1[j];
            db[j] += p0[j] - p1[j];
          }
          for (std::size_t i = 0; i < n_; ++i) {
            da[i] += v0[i] - v1[i];
            err += (v0[i] - v1[i]) * (v0[i] - v1[i]);
          }
        }
        const double scale = eta_ / static_cast<double>(stop - start);
        for (std::size_t k = 0; k < w_.size(); ++k) w_[k] += scale * dw[k];
        for (std::size_t i = 0; i < n_; ++i) a_[i] += scale * da[i];
        for (std::size_t j = 0; j < m_; ++j) b_[j] += scale * db[j];
      }
      trace.push_back(err / static_cast<double>(data.size() * n_));
    }
    return trace;
  }

  void save(std::ostream& out) const {
    out << "rbm " << n_ << ' ' << m_ << ' ' << std::setprecision(17) << eta_ << '\n';
    const auto row = [&out](const std::vector<double>& xs, std::size_t from, std::size_t count) {
      for (std::size_t k = 0; k < count; ++k) out << (k ? " " : "") << xs[from + k];
      out << '\n';
    };
    row(a_, 0, n_);
    row(b_, 0, m_);
    for (std::size_t j = 0; j < m_; ++j) row(w_, j * n_, n_);
  }

  static Rbm load(std::istream& in) {
    std::string tag;
    std::size_t n = 0, m = 0;
    double eta = 0;
    if (!(in >> tag >> n >> m >> eta) || tag != "rbm")
      throw Error(ErrorCode::MalformedDocument, "expected an 'rbm n m eta' header");
    Rbm r(n, m, eta);
    const auto read = [&in](std::vector<double>& xs) {
      for (auto& x : xs)
        if (!(in >> x)) throw Error(ErrorCode::MalformedDocument, "truncated RBM parameters");
    };
    read(r.a_);
    read(r.b_);
    read(r.w_);
    return r;
  }

 private:
  static void check(std::size_t got, std::size_t want, const char* layer) {
    if (got != want)
      throw Error(ErrorCode::DimensionMismatch, std::string(layer) + " state has " +
                                                    std::to_string(got) + " entries, expected " +
                                                    std::to_string(want));
  }

  std::size_t n_ = 0;
  std::size_t m_ = 0;
  double eta_ = 0.1;
  std::vector<double> w_;
  std::vector<double> a_;
  std::vector<double> b_;
};

// ---------------------------------------------------------------------------
// Exhaustive enumeration (small models only).

inline constexpr std::size_t kMaxEnumeratedUnits = 20;

inline std::vector<double> binary_state(std::size_t bits, std::size_t width) {
  std::vector<double> s(width);
  for (std::size_t k = 0; k < width; ++k) s[k] = (bits >> k) & 1u ? 1.0 : 0.0;
  return s;
}

namespace detail {

inline void check_enumerable(const Rbm& r) {
  if (r.visible() + r.hidden() > kMaxEnumeratedUnits)
    throw Error(ErrorCode::TooLargeToEnumerate,
                "n + m = " + std::to_string(r.visible() + r.hidden()) + " exceeds " +
                    std::to_string(kMaxEnumeratedUnits));
}

inline double log_sum_exp(const std::vector<double>& xs) {
  const double hi = *std::max_element(xs.begin(), xs.end());
  double s = 0;
  for (double x : xs) s += std::exp(x - hi);
  return hi + std::log(s);
}

}  // namespace detail

/// log sum_h exp(-E(v, h)), by enumerating every binary h.
inline double log_unnormalized(const Rbm& r, std::span<const double> v) {
  detail::check_enumerable(r);
  std::vector<double> terms;
  terms.reserve(std::size_t{1} << r.hidden());
  for (std::size_t hb = 0; hb < (std::size_t{1} << r.hidden()); ++hb)
    terms.push_back(-r.energy(v, binary_state(hb, r.hidden())));
  return detail::log_sum_exp(terms);
}

/// log Z over every binary (v, h).
inline double log_partition(const Rbm& r) {
  detail::check_enumerable(r);
  std::vector<double> terms;
  for (std::size_t vb = 0; vb < (std::size_t{1} << r.visible()); ++vb) {
    const auto v = binary_state(vb, r.visible());
    for (std::size_t hb = 0; hb < (std::size_t{1} << r.hidden()); ++hb)
      terms.push_back(-r.energy(v, binary_state(hb, r.hidden())));
  }
  return detail::log_sum_exp(terms);
}

/// sum over data of log p(v), with Z by exhaustive enumeration.
inline double exact_log_likelihood(const Rbm& r, const std::vector<std::vector<double>>& data) {
  const double log_z = log_partition(r);
  double ll = 0;
  for (const auto& v : data) ll += log_unnormalized(r, v) - log_z;
  return ll;
}

/// E_{h ~ p(h|v)}[v_i h_j] by enumeration of h; returns an n x m table
/// (visible-major).
inline std::vector<double> enumerated_data_term(const Rbm& r, std::span<const double> v) {
  detail::check_enumerable(r);
  const std::size_t n = r.visible(), m = r.hidden();
  std::vector<double> logw;
  std::vector<std::vector<double>> states;
  for (std::size_t hb = 0; hb < (std::size_t{1} << m); ++hb) {
    states.push_back(binary_state(hb, m));
    logw.push_back(-r.energy(v, states.back()));
  }
  const double norm = detail::log_sum_exp(logw);
  std::vector<double> out(n * m, 0.0);
  for (std::size_t s = 0; s < states.size(); ++s) {
    const double p = std::exp(logw[s] - norm);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) out[i * m + j] += p * v[i] * states[s][j];
  }
  return out;
}

}  // namespace wsa::rbm
