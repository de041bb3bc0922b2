#pragma once

// Sense-pair instances, their 21-column feature rows, relation-reversal
// augmentation and the train/test/validation min-max pipeline.

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "wsa/embedstore.hpp"
#include "wsa/error.hpp"
#include "wsa/lexdata.hpp"
#include "wsa/relstore.hpp"

namespace wsa::features {

inline constexpr std::size_t kInputColumns = 18;
inline constexpr std::size_t kTotalColumns = 21;

inline const std::array<std::string, kTotalColumns>& column_names() {
  static const std::array<std::string, kTotalColumns> names = {
      "pos_noun",      "pos_verb",       "pos_adj",        "pos_adv",
      "pos_other",     "s_len_1",        "s_len_2",        "s_len_no_func_1",
      "s_len_no_func_2", "hypernymy",    "hyponymy",       "relatedness",
      "synonymy",      "antonymy",       "meronymy",       "similarity",
      "sem_sim",       "sem_sim_no_func", "sem_bin_rel",   "sem_rel_with_none",
      "sem_rel"};
  return names;
}

struct FeatureVector {
  std::array<double, 5> pos_onehot{};
  double s_len_1 = 0;
  double s_len_2 = 0;
  double s_len_no_func_1 = 0;
  double s_len_no_func_2 = 0;
  RelationWeights rel_weights{};
  double sem_sim = 0;
  double sem_sim_no_func = 0;

  int sem_bin_rel = 0;
  SemanticRelation sem_rel_with_none = SemanticRelation::NONE;
  std::optional<SemanticRelation> sem_rel;

  std::array<double, kInputColumns> inputs() const {
    std::array<double, kInputColumns> x{};
    std::size_t k = 0;
    for (double v : pos_onehot) x[k++] = v;
    x[k++] = s_len_1;
    x[k++] = s_len_2;
    x[k++] = s_len_no_func_1;
    x[k++] = s_len_no_func_2;
    for (double v : rel_weights) x[k++] = v;
    x[k++] = sem_sim;
    x[k++] = sem_sim_no_func;
    return x;
  }

  void set_target(SemanticRelation r) {
    sem_rel_with_none = r;
    sem_bin_rel = r == SemanticRelation::NONE ? 0 : 1;
    if (r == SemanticRelation::NONE)
      sem_rel.reset();
    else
      sem_rel = r;
  }
};

/// One directed tuple (pos, s_i, s_j, relation): s_i holds `relation` to s_j.
struct Instance {
  std::string lemma;
  PartOfSpeech pos = PartOfSpeech::OTHER;
  Sense first;
  Sense second;
  SemanticRelation relation = SemanticRelation::NONE;
  bool reversed = false;

  auto key() const {
    return std::tie(lemma, pos, first.text, second.text, relation);
  }
};

struct FeatureResources {
  const EmbeddingTable* embeddings = nullptr;
  const RelationStore* relations = nullptr;
  const StopwordSet* stopwords = nullptr;
};

inline std::size_t content_length(const Sense& s, const StopwordSet* stopwords) {
  if (!stopwords) return s.tokens.size();
  return static_cast<std::size_t>(std::count_if(s.tokens.begin(), s.tokens.end(),
                                                [&](const auto& t) { return !stopwords->count(t); }));
}

inline FeatureVector extract(const Instance& inst, const FeatureResources& res) {
  FeatureVector f;
  f.pos_onehot[static_cast<std::size_t>(inst.pos)] = 1.0;
  f.s_len_1 = static_cast<double>(inst.first.tokens.size());
  f.s_len_2 = static_cast<double>(inst.second.tokens.size());
  f.s_len_no_func_1 = static_cast<double>(content_length(inst.first, res.stopwords));
  f.s_len_no_func_2 = static_cast<double>(content_length(inst.second, res.stopwords));
  if (res.relations) {
    static const StopwordSet empty;
    f.rel_weights = relation_weight_features(inst.first, inst.second, *res.relations,
                                             res.stopwords ? *res.stopwords : empty);
  }
  if (res.embeddings) {
    f.sem_sim = definition_similarity(inst.first, inst.second, *res.embeddings, false);
    if (res.stopwords) {
      const auto content_only = [&](const Sense& s) {
        Sense filtered = s;
        filtered.tokens.clear();
        for (const auto& t : s.tokens)
          if (!res.stopwords->count(t)) filtered.tokens.push_back(t);
        return filtered;
      };
      f.sem_sim_no_func = definition_similarity(content_only(inst.first),
                                                content_only(inst.second), *res.embeddings, false);
    } else {
      // fall back to the table's own stopword list
      f.sem_sim_no_func = definition_similarity(inst.first, inst.second, *res.embeddings, true);
    }
  }
  f.set_target(inst.relation);
  return f;
}

struct SenseRef {
  ResourceSide side = ResourceSide::LEFT;
  std::size_t index = 0;
};

/// Instance for (s_i, s_j) of one entry. The target is the gold relation read
/// in the requested direction.
inline Instance make_instance(const EntryPair& pair, SenseRef i, SenseRef j) {
  const auto pick = [&](SenseRef r) -> const Sense& {
    const auto& senses = r.side == ResourceSide::LEFT ? pair.left_senses : pair.right_senses;
    if (r.index >= senses.size())
      throw Error(ErrorCode::InvalidSenseIndex,
                  "sense " + std::to_string(r.index) + " of entry '" + pair.lemma + "'");
    return senses[r.index];
  };
  Instance inst;
  inst.lemma = pair.lemma;
  inst.pos = pair.pos;
  inst.first = pick(i);
  inst.second = pick(j);
  if (i.side == ResourceSide::LEFT && j.side == ResourceSide::RIGHT) {
    inst.relation = pair.relation_of(i.index, j.index);
  } else if (i.side == ResourceSide::RIGHT && j.side == ResourceSide::LEFT) {
    inst.relation = inverse(pair.relation_of(j.index, i.index));
    inst.reversed = true;
  }
  return inst;
}

inline FeatureVector extract(const EntryPair& pair, SenseRef i, SenseRef j,
                             const FeatureResources& res) {
  return extract(make_instance(pair, i, j), res);
}

/// Full left x right cross product per entry; unannotated pairs are NONE.
inline std::vector<Instance> build_instances(const std::vector<EntryPair>& pairs) {
  std::vector<Instance> out;
  for (const auto& p : pairs)
    for (std::size_t i = 0; i < p.left_senses.size(); ++i)
      for (std::size_t j = 0; j < p.right_senses.size(); ++j)
        out.push_back(make_instance(p, {ResourceSide::LEFT, i}, {ResourceSide::RIGHT, j}));
  return out;
}

/// Appends (p, s_j, s_i, inverse(r)) for each SKOS-labeled instance unless that
/// tuple is already present. NONE instances are not reversed.
inline std::vector<Instance> augment(const std::vector<Instance>& instances) {
  std::vector<Instance> out = instances;
  std::set<std::tuple<std::string, PartOfSpeech, std::string, std::string, SemanticRelation>> seen;
  for (const auto& x : instances) seen.insert(x.key());
  for (const auto& x : instances) {
    if (x.relation == SemanticRelation::NONE) continue;
    Instance r;
    r.lemma = x.lemma;
    r.pos = x.pos;
    r.first = x.second;
    r.second = x.first;
    r.relation = inverse(x.relation);
    r.reversed = !x.reversed;
    if (seen.insert(r.key()).second) out.push_back(std::move(r));
  }
  return out;
}

inline void write_csv(std::ostream& out, const std::vector<FeatureVector>& rows) {
  const auto& names = column_names();
  for (std::size_t k = 0; k < names.size(); ++k) out << (k ? "," : "") << names[k];
  out << '\n';
  for (const auto& f : rows) {
    for (double v : f.inputs()) out << v << ',';
    out << f.sem_bin_rel << ',' << to_string(f.sem_rel_with_none) << ',';
    if (f.sem_rel) out << to_string(*f.sem_rel);
    out << '\n';
  }
}

// ---------------------------------------------------------------------------

class MinMaxScaler {
 public:
  MinMaxScaler() = default;
  MinMaxScaler(std::vector<double> mins, std::vector<double> maxs)
      : mins_(std::move(mins)), maxs_(std::move(maxs)) {}

  void fit(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw Error(ErrorCode::EmptyDataset, "cannot fit a scaler on no rows");
    const std::size_t d = rows.front().size();
    mins_.assign(d, 0.0);
    maxs_.assign(d, 0.0);
    for (std::size_t k = 0; k < d; ++k) {
      mins_[k] = maxs_[k] = rows.front()[k];
      for (const auto& r : rows) {
        mins_[k] = std::min(mins_[k], r[k]);
        maxs_[k] = std::max(maxs_[k], r[k]);
      }
    }
  }

  /// Constant columns map to 0; values outside the fitted range clamp.
  std::vector<double> transform(const std::vector<double>& row) const {
    if (row.size() != mins_.size())
      throw Error(ErrorCode::DimensionMismatch, "row width differs from fitted width");
    std::vector<double> out(row.size());
    for (std::size_t k = 0; k < row.size(); ++k) {
      const double span = maxs_[k] - mins_[k];
      out[k] = span > 0 ? std::clamp((row[k] - mins_[k]) / span, 0.0, 1.0) : 0.0;
    }
    return out;
  }

  std::vector<double> inverse_transform(const std::vector<double>& row) const {
    std::vector<double> out(row.size());
    for (std::size_t k = 0; k < row.size(); ++k)
      out[k] = mins_[k] + row[k] * (maxs_[k] - mins_[k]);
    return out;
  }

  const std::vector<double>& mins() const { return mins_; }
  const std::vector<double>& maxs() const { return maxs_; }
  std::size_t width() const { return mins_.size(); }

 private:
  std::vector<double> mins_;
  std::vector<double> maxs_;
};

enum class Split { TRAIN, TEST, VALID };

struct ScaledDataset {
  std::vector<std::vector<double>> rows;  // scaled, shuffled order
  std::vector<SemanticRelation> labels;
  std::vector<Split> tags;
  std::vector<std::size_t> source_index;  // row -> index in the unshuffled input
  MinMaxScaler scaler;

  std::vector<std::size_t> indices(Split s) const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < tags.size(); ++k)
      if (tags[k] == s) out.push_back(k);
    return out;
  }
};

/// Seeded shuffle, then ratios (train, test, valid). Scaling statistics come
/// from TRAIN rows only.
inline ScaledDataset scale_and_split(const std::vector<std::vector<double>>& rows,
                                     const std::vector<SemanticRelation>& labels,
                                     std::uint64_t seed,
                                     std::array<double, 3> ratios = {0.8, 0.1, 0.1}) {
  if (rows.empty()) throw Error(ErrorCode::EmptyDataset, "no instances to split");
  if (labels.size() != rows.size())
    throw Error(ErrorCode::LengthMismatch, "rows and labels differ in length");
  if (std::abs(ratios[0] + ratios[1] + ratios[2] - 1.0) > 1e-9 ||
      std::any_of(ratios.begin(), ratios.end(), [](double r) { return r < 0; }))
    throw Error(ErrorCode::InvalidArgument, "split ratios must be nonnegative and sum to 1");
  const std::size_t n = rows.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  std::size_t n_train = static_cast<std::size_t>(std::llround(ratios[0] * static_cast<double>(n)));
  n_train = std::clamp<std::size_t>(n_train, 1, n);
  std::size_t n_test = static_cast<std::size_t>(std::llround(ratios[1] * static_cast<double>(n)));
  n_test = std::min(n_test, n - n_train);

  ScaledDataset ds;
  ds.tags.resize(n);
  ds.labels.resize(n);
  ds.source_index = order;
  std::vector<std::vector<double>> train_rows;
  for (std::size_t k = 0; k < n; ++k) {
    ds.tags[k] = k < n_train ? Split::TRAIN : (k < n_train + n_test ? Split::TEST : Split::VALID);
    ds.labels[k] = labels[order[k]];
    if (ds.tags[k] == Split::TRAIN) train_rows.push_back(rows[order[k]]);
  }
  ds.scaler.fit(train_rows);
  ds.rows.reserve(n);
  for (std::size_t k = 0; k < n; ++k) ds.rows.push_back(ds.scaler.transform(rows[order[k]]));
  return ds;
}

}  // namespace wsa::features
