#pragma once

// Candidate matrix -> final link set: greedy b-matching, Hungarian
// assignment, greedy bijective sweep and typed beam search.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

#include "wsa/error.hpp"
#include "wsa/lexdata.hpp"
#include "wsa/textsim.hpp"

namespace wsa::matcher {

class CandidateMatrix {
 public:
  CandidateMatrix() = default;
  CandidateMatrix(std::size_t left, std::size_t right, double fill = 0.0)
      : n_(left), m_(right), w_(left * right, fill) {}
  CandidateMatrix(std::size_t left, std::size_t right, std::vector<double> weights)
      : n_(left), m_(right), w_(std::move(weights)) {
    if (w_.size() != n_ * m_)
      throw Error(ErrorCode::DimensionMismatch, "weights do not match the matrix shape");
    for (double x : w_)
      if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "non-finite weight");
  }

  std::size_t left() const { return n_; }
  std::size_t right() const { return m_; }
  double& operator()(std::size_t i, std::size_t j) { return w_[i * m_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return w_[i * m_ + j]; }

  bool has_class_scores() const { return !scores_.empty(); }
  const ClassScores& class_scores(std::size_t i, std::size_t j) const {
    return scores_[i * m_ + j];
  }
  void set_class_scores(std::size_t i, std::size_t j, const ClassScores& s) {
    if (scores_.empty()) scores_.assign(n_ * m_, ClassScores{});
    scores_[i * m_ + j] = s;
  }

 private:
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::vector<double> w_;
  std::vector<ClassScores> scores_;
};

struct Bound {
  std::size_t lower = 0;
  std::size_t upper = 1;
};

struct BipartiteBounds {
  std::vector<Bound> left;
  std::vector<Bound> right;

  static BipartiteBounds uniform(std::size_t n, std::size_t m, Bound b = {}) {
    return {std::vector<Bound>(n, b), std::vector<Bound>(m, b)};
  }
};

struct Pair {
  std::size_t left = 0;
  std::size_t right = 0;
  double weight = 0;
  bool operator==(const Pair&) const = default;
};

inline double total_weight(const std::vector<Pair>& pairs) {
  double s = 0;
  for (const auto& p : pairs) s += p.weight;
  return s;
}

/// Every cell, by (weight desc, left asc, right asc).
inline std::vector<Pair> sorted_edges(const CandidateMatrix& c) {
  std::vector<Pair> edges;
  edges.reserve(c.left() * c.right());
  for (std::size_t i = 0; i < c.left(); ++i)
    for (std::size_t j = 0; j < c.right(); ++j) edges.push_back({i, j, c(i, j)});
  std::stable_sort(edges.begin(), edges.end(),
                   [](const Pair& a, const Pair& b) { return a.weight > b.weight; });
  return edges;
}

/// Greedy weighted bipartite b-matching. Throws MatchingImpossible when a
/// lower bound is left unmet after the sweep.
inline std::vector<Pair> wbbm_greedy(const CandidateMatrix& c, const BipartiteBounds& bounds) {
  if (bounds.left.size() != c.left() || bounds.right.size() != c.right())
    throw Error(ErrorCode::DimensionMismatch, "bounds do not cover every node");
  for (const auto* side : {&bounds.left, &bounds.right})
    for (const auto& b : *side)
      if (b.lower > b.upper) throw Error(ErrorCode::InvalidArgument, "bound with L > B");
  std::vector<std::size_t> deg_l(c.left(), 0), deg_r(c.right(), 0);
  std::vector<Pair> out;
  for (const auto& e : sorted_edges(c)) {
    if (deg_l[e.left] + 1 > bounds.left[e.left].upper) continue;
    if (deg_r[e.right] + 1 > bounds.right[e.right].upper) continue;
    ++deg_l[e.left];
    ++deg_r[e.right];
    out.push_back(e);
  }
  for (std::size_t i = 0; i < c.left(); ++i)
    if (deg_l[i] < bounds.left[i].lower)
      throw Error(ErrorCode::MatchingImpossible,
                  "left node " + std::to_string(i) + " below its lower bound");
  for (std::size_t j = 0; j < c.right(); ++j)
    if (deg_r[j] < bounds.right[j].lower)
      throw Error(ErrorCode::MatchingImpossible,
                  "right node " + std::to_string(j) + " below its lower bound");
  return out;
}

/// Maximum-weight assignment (Kuhn-Munkres with potentials on the padded
/// square cost matrix). Pairs with a dummy node are dropped.
inline std::vector<Pair> hungarian(const CandidateMatrix& c) {
  const std::size_t n = std::max(c.left(), c.right());
  if (n == 0) return {};
  double hi = 0;
  for (std::size_t i = 0; i < c.left(); ++i)
    for (std::size_t j = 0; j < c.right(); ++j) hi = std::max(hi, c(i, j));
  // cost[i][j] = hi - w, dummies cost hi (weight 0)
  const auto cost = [&](std::size_t i, std::size_t j) {
    return (i < c.left() && j < c.right()) ? hi - c(i, j) : hi;
  };
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<Pair> out;
  for (std::size_t j = 1; j <= n; ++j) {
    const std::size_t i = p[j] - 1;
    if (i < c.left() && j - 1 < c.right()) out.push_back({i, j - 1, c(i, j - 1)});
  }
  std::sort(out.begin(), out.end(),
            [](const Pair& a, const Pair& b) { return a.left < b.left; });
  return out;
}

/// One link per sense at most; pairs taken in descending order while
/// score >= threshold.
inline std::vector<Pair> greedy_bijective(const CandidateMatrix& c, double threshold) {
  std::vector<bool> used_l(c.left(), false), used_r(c.right(), false);
  std::vector<Pair> out;
  for (const auto& e : sorted_edges(c)) {
    if (e.weight < threshold) break;
    if (used_l[e.left] || used_r[e.right]) continue;
    used_l[e.left] = used_r[e.right] = true;
    out.push_back(e);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Typed beam search.

struct TypedLink {
  std::size_t left = 0;
  std::size_t right = 0;
  SemanticRelation relation = SemanticRelation::NONE;
  double score = 0;
  bool operator==(const TypedLink&) const = default;
};

enum class Constraint { NONE, TAXONOMIC };

namespace detail {

struct BeamState {
  double log_score = 0;
  std::vector<std::uint8_t> choice;  // relation index per processed pair
  std::vector<std::size_t> exact_per_left;
};

}  // namespace detail

/// Picks one relation (NONE included) per candidate pair, maximizing the sum
/// of log class scores. Pairs are visited by descending best non-NONE score;
/// TAXONOMIC allows at most one EXACT per left sense. NONE picks are omitted
/// from the output.
inline std::vector<TypedLink> beam_match(const CandidateMatrix& c, Constraint constraint,
                                         std::size_t beam_width) {
  if (beam_width == 0) throw Error(ErrorCode::InvalidArgument, "beam width must be >= 1");
  if (c.left() == 0 || c.right() == 0) return {};
  if (!c.has_class_scores())
    throw Error(ErrorCode::InvalidArgument, "beam search needs per-class scores");

  struct Cell {
    std::size_t i, j;
    double key;
  };
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < c.left(); ++i)
    for (std::size_t j = 0; j < c.right(); ++j) {
      const auto& s = c.class_scores(i, j);
      double best = 0;
      for (auto r : kAllRelations)
        if (r != SemanticRelation::NONE) best = std::max(best, s[index_of(r)]);
      cells.push_back({i, j, best});
    }
  std::stable_sort(cells.begin(), cells.end(),
                   [](const Cell& a, const Cell& b) { return a.key > b.key; });

  constexpr double kFloor = 1e-12;
  std::vector<detail::BeamState> beam(1);
  beam[0].exact_per_left.assign(c.left(), 0);
  for (const auto& cell : cells) {
    const auto& s = c.class_scores(cell.i, cell.j);
    std::vector<detail::BeamState> next;
    for (const auto& st : beam)
      for (auto r : kAllRelations) {
        if (constraint == Constraint::TAXONOMIC && r == SemanticRelation::EXACT &&
            st.exact_per_left[cell.i] >= 1)
          continue;
        detail::BeamState n = st;
        n.log_score += std::log(std::max(s[index_of(r)], kFloor));
        n.choice.push_back(static_cast<std::uint8_t>(index_of(r)));
        if (r == SemanticRelation::EXACT) ++n.exact_per_left[cell.i];
        next.push_back(std::move(n));
      }
    // score desc, then lexicographically smaller choice sequence
    std::stable_sort(next.begin(), next.end(), [](const auto& a, const auto& b) {
      if (a.log_score != b.log_score) return a.log_score > b.log_score;
      return a.choice < b.choice;
    });
    if (next.size() > beam_width) next.resize(beam_width);
    beam = std::move(next);
  }
  std::vector<TypedLink> out;
  const auto& best = beam.front();
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const auto r = kAllRelations[best.choice[k]];
    if (r == SemanticRelation::NONE) continue;
    out.push_back({cells[k].i, cells[k].j, r, c.class_scores(cells[k].i, cells[k].j)[index_of(r)]});
  }
  std::sort(out.begin(), out.end(), [](const TypedLink& a, const TypedLink& b) {
    return std::tie(a.left, a.right) < std::tie(b.left, b.right);
  });
  return out;
}

/// Jaccard over gloss word sets, Hungarian assignment, EXACT when the
/// assigned pair scores above the threshold.
inline std::vector<Link> baseline_align(const EntryPair& pair, double threshold = 0.1) {
  CandidateMatrix c(pair.left_senses.size(), pair.right_senses.size());
  for (std::size_t i = 0; i < c.left(); ++i) {
    const auto a = textsim::to_set(pair.left_senses[i].tokens);
    for (std::size_t j = 0; j < c.right(); ++j)
      c(i, j) = textsim::set_overlap(a, textsim::to_set(pair.right_senses[j].tokens),
                                     textsim::OverlapKind::JACCARD);
  }
  std::vector<Link> out;
  for (const auto& p : hungarian(c)) {
    if (!(p.weight > threshold)) continue;
    Link l;
    l.source_sense = p.left;
    l.target_sense = p.right;
    l.relation = SemanticRelation::EXACT;
    l.score = p.weight;
    out.push_back(l);
  }
  return out;
}

}  // namespace wsa::matcher
