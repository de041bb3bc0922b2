#pragma once

// Bipartite network statistics: degree, density, neighbourhood-overlap
// clustering, and the same measures over an aligned dataset.

#include <algorithm>
#include <array>
#include <ostream>
#include <set>
#include <utility>
#include <vector>

#include "wsa/error.hpp"
#include "wsa/lexdata.hpp"

namespace wsa::netstats {

class BipartiteGraph {
 public:
  BipartiteGraph(std::size_t n_u, std::size_t n_v) : adj_u_(n_u), adj_v_(n_v) {}

  std::size_t n_u() const { return adj_u_.size(); }
  std::size_t n_v() const { return adj_v_.size(); }
  std::size_t edge_count() const { return m_; }

  /// Duplicate edges are ignored; returns whether the edge is new.
  bool add_edge(std::size_t u, std::size_t v) {
    if (u >= n_u() || v >= n_v())
      throw Error(ErrorCode::InvalidArgument, "edge references a missing node");
    if (!adj_u_[u].insert(v).second) return false;
    adj_v_[v].insert(u);
    ++m_;
    return true;
  }

  bool has_edge(std::size_t u, std::size_t v) const { return adj_u_[u].count(v) > 0; }
  const std::set<std::size_t>& neighbors_u(std::size_t u) const { return adj_u_[u]; }
  const std::set<std::size_t>& neighbors_v(std::size_t v) const { return adj_v_[v]; }

 private:
  std::vector<std::set<std::size_t>> adj_u_;
  std::vector<std::set<std::size_t>> adj_v_;
  std::size_t m_ = 0;
};

struct DegreeDensity {
  double k_u = 0;
  double k_v = 0;
  double k = 0;
  double delta = 0;
};

inline DegreeDensity degree_density(std::size_t n_u, std::size_t n_v, std::size_t m) {
  if (n_u == 0 || n_v == 0) throw Error(ErrorCode::EmptySide, "a side of the graph is empty");
  const double mu = static_cast<double>(m);
  return {mu / static_cast<double>(n_u), mu / static_cast<double>(n_v),
          2.0 * mu / static_cast<double>(n_u + n_v),
          mu / (static_cast<double>(n_u) * static_cast<double>(n_v))};
}

inline DegreeDensity degree_density(const BipartiteGraph& g) {
  return degree_density(g.n_u(), g.n_v(), g.edge_count());
}

/// |A ∩ B| / |A ∪ B|, 0 when both are empty.
inline double overlap(const std::set<std::size_t>& a, const std::set<std::size_t>& b) {
  std::size_t inter = 0;
  for (auto x : a) inter += b.count(x);
  const std::size_t uni = a.size() + b.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

struct Clustering {
  std::vector<double> cc_u;  // per node of U
  std::vector<double> cc_v;  // per node of V
  double mean_u = 0;
  double mean_v = 0;
};

namespace detail {

/// For each node x on one side: mean overlap of N(x) with N(y) over the
/// second-order neighbours y != x.
inline std::vector<double> side_clustering(const std::vector<std::set<std::size_t>>& own,
                                           const std::vector<std::set<std::size_t>>& other) {
  std::vector<double> out(own.size(), 0.0);
  for (std::size_t x = 0; x < own.size(); ++x) {
    std::set<std::size_t> second;
    for (auto w : own[x])
      for (auto y : other[w])
        if (y != x) second.insert(y);
    if (second.empty()) continue;
    double acc = 0;
    for (auto y : second) acc += overlap(own[x], own[y]);
    out[x] = acc / static_cast<double>(second.size());
  }
  return out;
}

inline double mean(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double s = 0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

}  // namespace detail

inline Clustering clustering(const BipartiteGraph& g) {
  std::vector<std::set<std::size_t>> nu(g.n_u()), nv(g.n_v());
  for (std::size_t u = 0; u < g.n_u(); ++u) nu[u] = g.neighbors_u(u);
  for (std::size_t v = 0; v < g.n_v(); ++v) nv[v] = g.neighbors_v(v);
  Clustering c;
  c.cc_u = detail::side_clustering(nu, nv);
  c.cc_v = detail::side_clustering(nv, nu);
  c.mean_u = detail::mean(c.cc_u);
  c.mean_v = detail::mean(c.cc_v);
  return c;
}

// ---------------------------------------------------------------------------
// Aligned datasets

struct RelationHistogram {
  std::size_t exact = 0;
  std::size_t narrower = 0;
  std::size_t broader = 0;
  std::size_t related = 0;
  std::size_t all() const { return exact + narrower + broader + related; }
  bool operator==(const RelationHistogram&) const = default;
};

struct AlignmentStats {
  std::size_t n1 = 0;  // senses in the first resource
  std::size_t n2 = 0;
  std::size_t m = 0;   // gold links
  double k1 = 0;
  double k2 = 0;
  double k = 0;
  double delta = 0;             // m / (n1 * n2)
  double delta_candidates = 0;  // m / sum over entries of |left| * |right|
  RelationHistogram histogram;
};

inline AlignmentStats alignment_stats(const std::vector<EntryPair>& pairs) {
  AlignmentStats s;
  double possible = 0;
  for (const auto& p : pairs) {
    s.n1 += p.left_senses.size();
    s.n2 += p.right_senses.size();
    possible += static_cast<double>(p.left_senses.size()) *
                static_cast<double>(p.right_senses.size());
    for (const auto& l : p.gold_links) {
      switch (l.relation) {
        case SemanticRelation::EXACT: ++s.histogram.exact; break;
        case SemanticRelation::NARROWER: ++s.histogram.narrower; break;
        case SemanticRelation::BROADER: ++s.histogram.broader; break;
        case SemanticRelation::RELATED: ++s.histogram.related; break;
        case SemanticRelation::NONE: continue;
      }
      ++s.m;
    }
  }
  if (s.n1 > 0 && s.n2 > 0) {
    const auto dd = degree_density(s.n1, s.n2, s.m);
    s.k1 = dd.k_u;
    s.k2 = dd.k_v;
    s.k = dd.k;
    s.delta = dd.delta;
  }
  s.delta_candidates = possible > 0 ? static_cast<double>(s.m) / possible : 0.0;
  return s;
}

inline void write_stats_csv(std::ostream& out, const std::string& label, const AlignmentStats& s) {
  out << "dataset,exact,narrower,broader,related,all,n1,n2,k1,k2,k,delta,delta_candidates\n";
  out << label << ',' << s.histogram.exact << ',' << s.histogram.narrower << ','
      << s.histogram.broader << ',' << s.histogram.related << ',' << s.histogram.all() << ','
      << s.n1 << ',' << s.n2 << ',' << s.k1 << ',' << s.k2 << ',' << s.k << ',' << s.delta << ','
      << s.delta_candidates << '\n';
}

/// Graph over every sense of the dataset, one edge per gold link.
inline BipartiteGraph alignment_graph(const std::vector<EntryPair>& pairs) {
  std::size_t n1 = 0, n2 = 0;
  for (const auto& p : pairs) {
    n1 += p.left_senses.size();
    n2 += p.right_senses.size();
  }
  BipartiteGraph g(n1, n2);
  std::size_t off1 = 0, off2 = 0;
  for (const auto& p : pairs) {
    for (const auto& l : p.gold_links)
      if (l.relation != SemanticRelation::NONE) g.add_edge(off1 + l.source_sense, off2 + l.target_sense);
    off1 += p.left_senses.size();
    off2 += p.right_senses.size();
  }
  return g;
}

}  // namespace wsa::netstats
