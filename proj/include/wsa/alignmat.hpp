#pragma once

// Word-to-word similarity matrix between two definitions and the scalar
// features read off it.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "wsa/error.hpp"

namespace wsa::alignmat {

class AlignmentMatrix {
 public:
  AlignmentMatrix() = default;
  AlignmentMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  AlignmentMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_)
      throw Error(ErrorCode::DimensionMismatch, "matrix data does not match its shape");
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  const std::vector<double>& data() const { return data_; }

  AlignmentMatrix transpose() const {
    AlignmentMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool operator==(const AlignmentMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline double exact_match(const std::string& a, const std::string& b) { return a == b ? 1.0 : 0.0; }

template <class WordSim>
AlignmentMatrix build_matrix(std::span<const std::string> a, std::span<const std::string> b,
                             WordSim&& word_sim) {
  if (a.empty() || b.empty())
    throw Error(ErrorCode::EmptyDefinition, "alignment matrix needs two nonempty definitions");
  AlignmentMatrix s(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) s(i, j) = static_cast<double>(word_sim(a[i], b[j]));
  return s;
}

struct PrecisionFeatures {
  double forward = 0;   // f
  double backward = 0;  // b
  double harmonic = 0;  // m
};

/// Fraction of rows (resp. columns) whose normalized mass exceeds one half
/// in some cell. Zero-sum rows never qualify.
inline PrecisionFeatures precision_features(const AlignmentMatrix& s) {
  PrecisionFeatures out;
  if (s.rows() == 0 || s.cols() == 0) return out;
  std::size_t rows_ok = 0;
  for (std::size_t i = 0; i < s.rows(); ++i) {
    double sum = 0;
    for (std::size_t j = 0; j < s.cols(); ++j) sum += s(i, j);
    if (sum <= 0) continue;
    for (std::size_t j = 0; j < s.cols(); ++j)
      if (s(i, j) / sum > 0.5) {
        ++rows_ok;
        break;
      }
  }
  std::size_t cols_ok = 0;
  for (std::size_t j = 0; j < s.cols(); ++j) {
    double sum = 0;
    for (std::size_t i = 0; i < s.rows(); ++i) sum += s(i, j);
    if (sum <= 0) continue;
    for (std::size_t i = 0; i < s.rows(); ++i)
      if (s(i, j) / sum > 0.5) {
        ++cols_ok;
        break;
      }
  }
  out.forward = static_cast<double>(rows_ok) / static_cast<double>(s.rows());
  out.backward = static_cast<double>(cols_ok) / static_cast<double>(s.cols());
  const double denom = out.forward + out.backward;
  out.harmonic = denom > 0 ? 2.0 * out.forward * out.backward / denom : 0.0;
  return out;
}

/// Column mean p-max: (1/M) (sum_j max_i (s_ij / sum_i' s_i'j)^p)^(1/p).
inline double column_mean_pmax(const AlignmentMatrix& s, double p) {
  if (s.cols() == 0) return 0.0;
  double acc = 0;
  for (std::size_t j = 0; j < s.cols(); ++j) {
    double sum = 0;
    for (std::size_t i = 0; i < s.rows(); ++i) sum += s(i, j);
    if (sum <= 0) continue;
    double best = 0;
    for (std::size_t i = 0; i < s.rows(); ++i) best = std::max(best, s(i, j) / sum);
    acc += std::pow(best, p);
  }
  return std::pow(acc, 1.0 / p) / static_cast<double>(s.cols());
}

/// Column mean p-norm: (1/N) sum_i (sum_j s_ij^p)^(1/p).
inline double column_mean_pnorm(const AlignmentMatrix& s, double p) {
  if (s.rows() == 0) return 0.0;
  double acc = 0;
  for (std::size_t i = 0; i < s.rows(); ++i) {
    double row = 0;
    for (std::size_t j = 0; j < s.cols(); ++j) row += std::pow(s(i, j), p);
    acc += std::pow(row, 1.0 / p);
  }
  return acc / static_cast<double>(s.rows());
}

struct NormFeatures {
  double col_pmax = 0;
  double col_pnorm = 0;
  double row_pmax = 0;
  double row_pnorm = 0;
};

/// Row variants are the column forms applied to the transpose.
inline NormFeatures norm_features(const AlignmentMatrix& s, double p) {
  if (!(p >= 1.0)) throw Error(ErrorCode::InvalidArgument, "p must be >= 1");
  const auto t = s.transpose();
  return {column_mean_pmax(s, p), column_mean_pnorm(s, p), column_mean_pmax(t, p),
          column_mean_pnorm(t, p)};
}

inline constexpr double kEntropyFloor = 1e-10;

/// Mean of -log(s_ij^2) with s_ij floored at 1e-10.
inline double gaussian_entropy(const AlignmentMatrix& s) {
  if (s.rows() == 0 || s.cols() == 0) return 0.0;
  double acc = 0;
  for (double x : s.data()) {
    const double v = std::max(x, kEntropyFloor);
    acc += -std::log(v * v);
  }
  return acc / static_cast<double>(s.rows() * s.cols());
}

/// Indices within `window` of `center`, clipped at the sentence edges, without
/// the center itself.
inline std::vector<std::size_t> context_window(std::size_t length, std::size_t center,
                                               std::size_t window) {
  std::vector<std::size_t> out;
  const std::size_t lo = center > window ? center - window : 0;
  const std::size_t hi = std::min(length, center + window + 1);
  for (std::size_t k = lo; k < hi; ++k)
    if (k != center) out.push_back(k);
  return out;
}

/// s_ij = omega * wordSim + (1 - omega) * contextSim, where contextSim is the
/// mean word similarity over the two context windows (0 if either is empty).
template <class WordSim>
AlignmentMatrix monolingual_align(std::span<const std::string> a, std::span<const std::string> b,
                                  WordSim&& word_sim, double omega = 0.5,
                                  std::size_t window = 3) {
  if (!(omega >= 0.0 && omega <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "omega must lie in [0,1]");
  const AlignmentMatrix direct = build_matrix(a, b, word_sim);
  AlignmentMatrix out(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto wi = context_window(a.size(), i, window);
    for (std::size_t j = 0; j < b.size(); ++j) {
      const auto wj = context_window(b.size(), j, window);
      double ctx = 0;
      if (!wi.empty() && !wj.empty()) {
        for (auto m : wi)
          for (auto n : wj) ctx += direct(m, n);
        ctx /= static_cast<double>(wi.size() * wj.size());
      }
      out(i, j) = omega * direct(i, j) + (1.0 - omega) * ctx;
    }
  }
  return out;
}

struct MatrixFeatures {
  PrecisionFeatures precision;
  NormFeatures p1;
  NormFeatures p2;
  double entropy = 0;
};

inline MatrixFeatures matrix_features(const AlignmentMatrix& s) {
  return {precision_features(s), norm_features(s, 1.0), norm_features(s, 2.0),
          gaussian_entropy(s)};
}

}  // namespace wsa::alignmat
