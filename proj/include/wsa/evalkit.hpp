#pragma once

// Macro P/R/F over entries, multi-class classification metrics and
// nominal Krippendorff's alpha.

#include <algorithm>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "wsa/error.hpp"
#include "wsa/lexdata.hpp"

namespace wsa::evalkit {

struct Counts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
};

struct MacroScores {
  double precision = 0;
  double recall = 0;
  double f_measure = 0;
  double accuracy = 0;
};

inline double safe_div(double a, double b) { return b == 0 ? 0.0 : a / b; }

/// Per-entry P, R, F, A averaged over entries; 0/0 counts as 0.
inline MacroScores macro_prf(const std::vector<Counts>& entries) {
  if (entries.empty()) throw Error(ErrorCode::EmptyInput, "no entries to average");
  MacroScores out;
  for (const auto& c : entries) {
    const double p = safe_div(c.tp, c.tp + c.fp);
    const double r = safe_div(c.tp, c.tp + c.fn);
    out.precision += p;
    out.recall += r;
    out.f_measure += safe_div(2 * p * r, p + r);
    out.accuracy += safe_div(c.tp + c.tn, c.tp + c.tn + c.fp + c.fn);
  }
  const double n = static_cast<double>(entries.size());
  out.precision /= n;
  out.recall /= n;
  out.f_measure /= n;
  out.accuracy /= n;
  return out;
}

struct ConfusionMatrix {
  std::vector<SemanticRelation> classes;
  std::vector<std::vector<std::size_t>> counts;  // [gold][pred]

  std::size_t total() const {
    std::size_t t = 0;
    for (const auto& r : counts)
      for (auto x : r) t += x;
    return t;
  }
  std::size_t trace() const {
    std::size_t t = 0;
    for (std::size_t k = 0; k < counts.size(); ++k) t += counts[k][k];
    return t;
  }
};

struct ClassificationMetrics {
  double accuracy = 0;
  double macro_precision = 0;
  double macro_recall = 0;
  double macro_f = 0;
  ConfusionMatrix confusion;
};

inline ClassificationMetrics classification_metrics(const std::vector<SemanticRelation>& gold,
                                                    const std::vector<SemanticRelation>& pred,
                                                    const std::vector<SemanticRelation>& classes) {
  if (gold.size() != pred.size())
    throw Error(ErrorCode::LengthMismatch, "gold and predicted label counts differ");
  const auto idx = [&](SemanticRelation r) {
    const auto it = std::find(classes.begin(), classes.end(), r);
    if (it == classes.end())
      throw Error(ErrorCode::UnknownLabel, "label '" + std::string(to_string(r)) +
                                               "' is not among the classes");
    return static_cast<std::size_t>(it - classes.begin());
  };
  ClassificationMetrics m;
  m.confusion.classes = classes;
  m.confusion.counts.assign(classes.size(), std::vector<std::size_t>(classes.size(), 0));
  for (std::size_t k = 0; k < gold.size(); ++k) ++m.confusion.counts[idx(gold[k])][idx(pred[k])];
  const auto& c = m.confusion.counts;
  m.accuracy = safe_div(static_cast<double>(m.confusion.trace()),
                        static_cast<double>(m.confusion.total()));
  for (std::size_t k = 0; k < classes.size(); ++k) {
    std::size_t col = 0, row = 0;
    for (std::size_t o = 0; o < classes.size(); ++o) {
      col += c[o][k];
      row += c[k][o];
    }
    const double p = safe_div(static_cast<double>(c[k][k]), static_cast<double>(col));
    const double r = safe_div(static_cast<double>(c[k][k]), static_cast<double>(row));
    m.macro_precision += p;
    m.macro_recall += r;
    m.macro_f += safe_div(2 * p * r, p + r);
  }
  if (!classes.empty()) {
    const double n = static_cast<double>(classes.size());
    m.macro_precision /= n;
    m.macro_recall /= n;
    m.macro_f /= n;
  }
  return m;
}

inline void write_confusion_csv(std::ostream& out, const ConfusionMatrix& cm) {
  out << "gold\\pred";
  for (auto c : cm.classes) out << ',' << to_string(c);
  out << '\n';
  for (std::size_t g = 0; g < cm.classes.size(); ++g) {
    out << to_string(cm.classes[g]);
    for (auto x : cm.counts[g]) out << ',' << x;
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Link-level evaluation over the full sense cross product of each entry.

struct LinkEvaluation {
  std::vector<Counts> per_entry;
  MacroScores macro;
  double pair_accuracy = 0;  // micro, 5-class labels over every sense pair
  std::size_t pairs = 0;
};

/// A predicted link is a TP only if gold has the same pair with the same
/// relation. A relation mismatch counts as one FP and one FN. `binary`
/// collapses the SKOS relations into a single positive class.
inline LinkEvaluation evaluate_links(const std::vector<EntryPair>& gold,
                                     const std::vector<std::vector<Link>>& predicted,
                                     bool binary = false) {
  if (gold.size() != predicted.size())
    throw Error(ErrorCode::LengthMismatch, "gold and prediction entry counts differ");
  if (gold.empty()) throw Error(ErrorCode::EmptyInput, "no entries to evaluate");
  LinkEvaluation ev;
  std::size_t correct = 0;
  for (std::size_t e = 0; e < gold.size(); ++e) {
    const auto& g = gold[e];
    Counts c;
    for (std::size_t i = 0; i < g.left_senses.size(); ++i)
      for (std::size_t j = 0; j < g.right_senses.size(); ++j) {
        SemanticRelation gr = g.relation_of(i, j);
        SemanticRelation pr = SemanticRelation::NONE;
        for (const auto& l : predicted[e])
          if (l.source_sense == i && l.target_sense == j) {
            pr = l.relation;
            break;
          }
        if (binary) {
          if (gr != SemanticRelation::NONE) gr = SemanticRelation::EXACT;
          if (pr != SemanticRelation::NONE) pr = SemanticRelation::EXACT;
        }
        ++ev.pairs;
        if (gr == pr) ++correct;
        const bool g_pos = gr != SemanticRelation::NONE, p_pos = pr != SemanticRelation::NONE;
        if (g_pos && p_pos) {
          if (gr == pr) {
            ++c.tp;
          } else {
            ++c.fp;
            ++c.fn;
          }
        } else if (g_pos) {
          ++c.fn;
        } else if (p_pos) {
          ++c.fp;
        } else {
          ++c.tn;
        }
      }
    ev.per_entry.push_back(c);
  }
  ev.macro = macro_prf(ev.per_entry);
  ev.pair_accuracy = safe_div(static_cast<double>(correct), static_cast<double>(ev.pairs));
  return ev;
}

// ---------------------------------------------------------------------------
// Krippendorff's alpha, nominal.

/// units x annotators; nullopt marks a missing label.
using AgreementTable = std::vector<std::vector<std::optional<std::string>>>;

inline double krippendorff_alpha(const AgreementTable& table) {
  std::map<std::string, std::map<std::string, double>> o;  // coincidences
  std::size_t pairable_units = 0;
  for (const auto& unit : table) {
    std::vector<std::string> values;
    for (const auto& v : unit)
      if (v) values.push_back(*v);
    const std::size_t mu = values.size();
    if (mu < 2) continue;
    ++pairable_units;
    const double w = 1.0 / static_cast<double>(mu - 1);
    for (std::size_t a = 0; a < mu; ++a)
      for (std::size_t b = 0; b < mu; ++b)
        if (a != b) o[values[a]][values[b]] += w;
  }
  if (pairable_units < 2)
    throw Error(ErrorCode::InsufficientData, "need at least two units with two or more labels");
  std::map<std::string, double> nc;
  double n = 0;
  double disagree = 0;
  for (const auto& [c, row] : o)
    for (const auto& [k, x] : row) {
      nc[c] += x;
      n += x;
      if (c != k) disagree += x;
    }
  double expected = 0;
  for (const auto& [c, a] : nc)
    for (const auto& [k, b] : nc)
      if (c != k) expected += a * b;
  if (expected == 0) return 1.0;  // a single value everywhere
  const double d_o = disagree / n;
  const double d_e = expected / (n * (n - 1));
  return 1.0 - d_o / d_e;
}

}  // namespace wsa::evalkit
