#pragma once

// One-vs-rest hinge-loss classifier over feature rows, softmax-calibrated.

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "wsa/error.hpp"
#include "wsa/evalkit.hpp"
#include "wsa/lexdata.hpp"

namespace wsa::scorer {

enum class Task { BINARY, SKOS, SKOS_PLUS_NONE };

inline std::string_view to_string(Task t) {
  switch (t) {
    case Task::BINARY: return "binary";
    case Task::SKOS: return "skos";
    case Task::SKOS_PLUS_NONE: return "skos+none";
  }
  return "";
}

inline Task parse_task(std::string_view s) {
  if (s == "binary") return Task::BINARY;
  if (s == "skos") return Task::SKOS;
  if (s == "skos+none" || s == "all") return Task::SKOS_PLUS_NONE;
  throw Error(ErrorCode::InvalidArgument, "unknown task '" + std::string(s) + "'");
}

/// Class labels of a task. BINARY uses NONE for "unaligned" and EXACT as the
/// stand-in for "aligned".
inline std::vector<SemanticRelation> task_classes(Task t) {
  switch (t) {
    case Task::BINARY: return {SemanticRelation::NONE, SemanticRelation::EXACT};
    case Task::SKOS:
      return {SemanticRelation::EXACT, SemanticRelation::BROADER, SemanticRelation::NARROWER,
              SemanticRelation::RELATED};
    case Task::SKOS_PLUS_NONE: break;
  }
  return {kAllRelations.begin(), kAllRelations.end()};
}

/// Maps a gold relation to the task's label space; nullopt drops the row.
inline std::optional<SemanticRelation> task_label(Task t, SemanticRelation r) {
  switch (t) {
    case Task::BINARY: return r == SemanticRelation::NONE ? r : SemanticRelation::EXACT;
    case Task::SKOS:
      if (r == SemanticRelation::NONE) return std::nullopt;
      return r;
    case Task::SKOS_PLUS_NONE: return r;
  }
  return r;
}

enum class KernelKind { LINEAR, RBF, POLY };

struct KernelSpec {
  KernelKind kind = KernelKind::LINEAR;
  double gamma = 1.0;  // RBF
  int degree = 2;      // POLY
  double coef0 = 1.0;  // POLY
  std::size_t max_support = 200;

  bool operator==(const KernelSpec&) const = default;
};

struct Hyper {
  KernelSpec kernel;
  std::size_t epochs = 50;
  double learning_rate = 0.1;
  double regularization = 1e-4;
};

inline std::vector<double> softmax(std::span<const double> z) {
  std::vector<double> p(z.size());
  if (z.empty()) return p;
  const double hi = *std::max_element(z.begin(), z.end());
  double sum = 0;
  for (std::size_t k = 0; k < z.size(); ++k) sum += p[k] = std::exp(z[k] - hi);
  for (auto& x : p) x /= sum;
  return p;
}

/// First maximal index.
inline std::size_t argmax(std::span<const double> xs) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < xs.size(); ++k)
    if (xs[k] > xs[best]) best = k;
  return best;
}

class RelationModel {
 public:
  RelationModel() = default;
  RelationModel(Task task, std::size_t input_dim, KernelSpec kernel = {})
      : task_(task), classes_(task_classes(task)), input_dim_(input_dim), kernel_(kernel),
        weights_(classes_.size(), std::vector<double>(input_dim, 0.0)),
        bias_(classes_.size(), 0.0) {}

  Task task() const { return task_; }
  const std::vector<SemanticRelation>& classes() const { return classes_; }
  std::size_t input_dim() const { return input_dim_; }
  const KernelSpec& kernel() const { return kernel_; }
  std::vector<std::vector<double>>& weights() { return weights_; }
  std::vector<double>& bias() { return bias_; }
  const std::vector<std::vector<double>>& support() const { return support_; }
  void set_support(std::vector<std::vector<double>> s) { support_ = std::move(s); }

  /// Input row to the space the linear sub-models act on.
  std::vector<double> expand(std::span<const double> x) const {
    if (x.size() != input_dim_)
      throw Error(ErrorCode::DimensionMismatch, "row has " + std::to_string(x.size()) +
                                                    " features, model expects " +
                                                    std::to_string(input_dim_));
    if (kernel_.kind == KernelKind::LINEAR) return {x.begin(), x.end()};
    std::vector<double> out(support_.size());
    for (std::size_t s = 0; s < support_.size(); ++s) {
      const auto& z = support_[s];
      if (kernel_.kind == KernelKind::RBF) {
        double d2 = 0;
        for (std::size_t k = 0; k < x.size(); ++k) d2 += (x[k] - z[k]) * (x[k] - z[k]);
        out[s] = std::exp(-kernel_.gamma * d2);
      } else {
        double dot = 0;
        for (std::size_t k = 0; k < x.size(); ++k) dot += x[k] * z[k];
        out[s] = std::pow(kernel_.gamma * dot + kernel_.coef0, kernel_.degree);
      }
    }
    return out;
  }

  std::vector<double> decision_values_expanded(std::span<const double> phi) const {
    std::vector<double> z(classes_.size());
    for (std::size_t c = 0; c < classes_.size(); ++c) {
      double acc = bias_[c];
      for (std::size_t k = 0; k < phi.size(); ++k) acc += weights_[c][k] * phi[k];
      z[c] = acc;
    }
    return z;
  }

  std::vector<double> decision_values(std::span<const double> x) const {
    return decision_values_expanded(expand(x));
  }

  std::vector<double> predict(std::span<const double> x) const {
    return softmax(decision_values(x));
  }

  SemanticRelation predict_class(std::span<const double> x) const {
    const auto z = decision_values(x);
    return classes_[argmax(z)];
  }

  std::optional<std::size_t> class_index(SemanticRelation r) const {
    const auto it = std::find(classes_.begin(), classes_.end(), r);
    if (it == classes_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - classes_.begin());
  }

  bool operator==(const RelationModel&) const = default;

  void save(std::ostream& out) const {
    out << "wsa-relation-model 1\n";
    out << "task " << to_string(task_) << '\n';
    out << "kernel " << static_cast<int>(kernel_.kind) << ' ' << std::setprecision(17)
        << kernel_.gamma << ' ' << kernel_.degree << ' ' << kernel_.coef0 << ' '
        << kernel_.max_support << '\n';
    out << "dims " << input_dim_ << ' ' << (weights_.empty() ? 0 : weights_[0].size()) << ' '
        << support_.size() << '\n';
    for (const auto& s : support_) {
      for (std::size_t k = 0; k < s.size(); ++k) out << (k ? " " : "") << s[k];
      out << '\n';
    }
    for (std::size_t c = 0; c < classes_.size(); ++c) {
      out << bias_[c];
      for (double w : weights_[c]) out << ' ' << w;
      out << '\n';
    }
  }

  static RelationModel load(std::istream& in) {
    std::string tag, task_name;
    int version = 0;
    if (!(in >> tag >> version) || tag != "wsa-relation-model" || version != 1)
      throw Error(ErrorCode::MalformedDocument, "not a version-1 relation model");
    if (!(in >> tag >> task_name) || tag != "task")
      throw Error(ErrorCode::MalformedDocument, "missing task line");
    KernelSpec ks;
    int kind = 0;
    if (!(in >> tag >> kind >> ks.gamma >> ks.degree >> ks.coef0 >> ks.max_support) ||
        tag != "kernel" || kind < 0 || kind > 2)
      throw Error(ErrorCode::MalformedDocument, "bad kernel line");
    ks.kind = static_cast<KernelKind>(kind);
    std::size_t input_dim = 0, width = 0, n_support = 0;
    if (!(in >> tag >> input_dim >> width >> n_support) || tag != "dims")
      throw Error(ErrorCode::MalformedDocument, "bad dims line");
    RelationModel m(parse_task(task_name), input_dim, ks);
    const auto read = [&in](double& x) {
      if (!(in >> x)) throw Error(ErrorCode::MalformedDocument, "truncated model parameters");
    };
    m.support_.assign(n_support, std::vector<double>(input_dim));
    for (auto& s : m.support_)
      for (auto& x : s) read(x);
    for (std::size_t c = 0; c < m.classes_.size(); ++c) {
      read(m.bias_[c]);
      m.weights_[c].assign(width, 0.0);
      for (auto& w : m.weights_[c]) read(w);
    }
    return m;
  }

 private:
  Task task_ = Task::SKOS_PLUS_NONE;
  std::vector<SemanticRelation> classes_;
  std::size_t input_dim_ = 0;
  KernelSpec kernel_;
  std::vector<std::vector<double>> weights_;  // per class, over the expanded space
  std::vector<double> bias_;
  std::vector<std::vector<double>> support_;
};

struct TrainResult {
  RelationModel model;
  std::vector<double> loss_trace;  // regularized mean hinge loss after each epoch
};

namespace detail {

/// Regularized mean hinge loss of one binary sub-model, y in {-1,+1}.
inline double binary_objective(const std::vector<std::vector<double>>& phi,
                               const std::vector<int>& y, const std::vector<double>& w, double b,
                               double lambda) {
  double loss = 0;
  for (std::size_t k = 0; k < phi.size(); ++k) {
    double z = b;
    for (std::size_t d = 0; d < w.size(); ++d) z += w[d] * phi[k][d];
    loss += std::max(0.0, 1.0 - y[k] * z);
  }
  double norm = 0;
  for (double x : w) norm += x * x;
  return loss / static_cast<double>(phi.size()) + 0.5 * lambda * norm;
}

}  // namespace detail

/// Rows whose label the task drops (NONE for SKOS) are ignored. Each binary
/// sub-model runs seeded SGD; an epoch that raises its full-data objective is
/// rolled back and the step size halved, so the reported trace never rises.
inline TrainResult train(const std::vector<std::vector<double>>& rows,
                         const std::vector<SemanticRelation>& labels, Task task,
                         const Hyper& hyper, std::uint64_t seed) {
  if (rows.size() != labels.size())
    throw Error(ErrorCode::LengthMismatch, "rows and labels differ in length");
  std::vector<std::vector<double>> x;
  std::vector<SemanticRelation> y;
  for (std::size_t k = 0; k < rows.size(); ++k)
    if (const auto l = task_label(task, labels[k])) {
      x.push_back(rows[k]);
      y.push_back(*l);
    }
  if (x.empty()) throw Error(ErrorCode::EmptyDataset, "no rows usable for this task");
  const std::size_t dim = x.front().size();
  for (const auto& r : x)
    if (r.size() != dim) throw Error(ErrorCode::DimensionMismatch, "ragged feature rows");
  if (std::all_of(y.begin(), y.end(), [&](SemanticRelation r) { return r == y.front(); }))
    throw Error(ErrorCode::SingleClassData, "training data holds a single class");

  RelationModel model(task, dim, hyper.kernel);
  std::mt19937_64 rng(seed);
  if (hyper.kernel.kind != KernelKind::LINEAR) {
    std::vector<std::size_t> pick(x.size());
    std::iota(pick.begin(), pick.end(), 0);
    std::shuffle(pick.begin(), pick.end(), rng);
    pick.resize(std::min(pick.size(), std::max<std::size_t>(1, hyper.kernel.max_support)));
    std::sort(pick.begin(), pick.end());
    std::vector<std::vector<double>> support;
    for (auto k : pick) support.push_back(x[k]);
    model.set_support(std::move(support));
  }
  std::vector<std::vector<double>> phi;
  phi.reserve(x.size());
  for (const auto& r : x) phi.push_back(model.expand(r));
  const std::size_t width = phi.front().size();

  const auto& classes = model.classes();
  std::vector<std::vector<int>> targets(classes.size(), std::vector<int>(x.size()));
  for (std::size_t c = 0; c < classes.size(); ++c)
    for (std::size_t k = 0; k < x.size(); ++k) targets[c][k] = y[k] == classes[c] ? 1 : -1;

  std::vector<double> lr(classes.size(), hyper.learning_rate);
  std::vector<double> current(classes.size());
  for (std::size_t c = 0; c < classes.size(); ++c) {
    model.weights()[c].assign(width, 0.0);
    current[c] = detail::binary_objective(phi, targets[c], model.weights()[c], model.bias()[c],
                                          hyper.regularization);
  }

  TrainResult result;
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t epoch = 0; epoch < hyper.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double total = 0;
    for (std::size_t c = 0; c < classes.size(); ++c) {
      auto w = model.weights()[c];
      double b = model.bias()[c];
      for (auto k : order) {
        double z = b;
        for (std::size_t d = 0; d < width; ++d) z += w[d] * phi[k][d];
        const double shrink = 1.0 - lr[c] * hyper.regularization;
        for (auto& v : w) v *= shrink;
        if (targets[c][k] * z < 1.0) {
          for (std::size_t d = 0; d < width; ++d) w[d] += lr[c] * targets[c][k] * phi[k][d];
          b += lr[c] * targets[c][k];
        }
      }
      const double obj = detail::binary_objective(phi, targets[c], w, b, hyper.regularization);
      if (obj <= current[c]) {
        model.weights()[c] = std::move(w);
        model.bias()[c] = b;
        current[c] = obj;
      } else {
        lr[c] *= 0.5;
      }
      total += current[c];
    }
    result.loss_trace.push_back(total / static_cast<double>(classes.size()));
  }
  result.model = std::move(model);
  return result;
}

/// Argmax predictions against gold labels mapped into the model's task;
/// rows the task drops are skipped.
inline evalkit::ClassificationMetrics evaluate(const RelationModel& model,
                                               const std::vector<std::vector<double>>& rows,
                                               const std::vector<SemanticRelation>& labels) {
  if (rows.size() != labels.size())
    throw Error(ErrorCode::LengthMismatch, "rows and labels differ in length");
  std::vector<SemanticRelation> gold, pred;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto l = task_label(model.task(), labels[k]);
    if (!l) continue;
    gold.push_back(*l);
    pred.push_back(model.predict_class(rows[k]));
  }
  if (gold.empty()) throw Error(ErrorCode::EmptyTestSet, "no test rows for this task");
  return evalkit::classification_metrics(gold, pred, model.classes());
}

/// One model per task, each scored on the same test rows.
inline std::vector<std::pair<Task, evalkit::ClassificationMetrics>> evaluate_tasks(
    const std::vector<RelationModel>& models, const std::vector<std::vector<double>>& rows,
    const std::vector<SemanticRelation>& labels) {
  std::vector<std::pair<Task, evalkit::ClassificationMetrics>> out;
  for (const auto& m : models) out.emplace_back(m.task(), evaluate(m, rows, labels));
  return out;
}

}  // namespace wsa::scorer
