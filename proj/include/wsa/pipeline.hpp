#pragma once

// Configurable linking pipeline: blocking -> lens -> features -> scorer ->
// matcher + constraint.

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "wsa/embedstore.hpp"
#include "wsa/error.hpp"
#include "wsa/evalkit.hpp"
#include "wsa/features.hpp"
#include "wsa/lexdata.hpp"
#include "wsa/matcher.hpp"
#include "wsa/rbm.hpp"
#include "wsa/relstore.hpp"
#include "wsa/scorer.hpp"
#include "wsa/textsim.hpp"

namespace wsa::pipeline {

enum class MatcherKind { HUNGARIAN, GREEDY, WBBM, BEAM };

struct ScorerSpec {
  enum class Kind { FEATURE, MODEL } kind = Kind::FEATURE;
  std::string feature = "jaccard";
  std::string model_file;
};

struct PipelineConfig {
  bool basic_string = true;
  bool word_embeddings = false;
  bool relation_weights = false;
  textsim::TextSimOptions text_options;
  ScorerSpec scorer;
  MatcherKind matcher = MatcherKind::HUNGARIAN;
  double threshold = 0.1;
  std::size_t beam_width = 5;
  matcher::Bound wbbm_bound{0, 1};
  matcher::Constraint constraint = matcher::Constraint::NONE;
  bool hapax = false;
  std::string stopwords_path;
  std::string embeddings_path;
  std::string relations_path;
  std::string relations_language;
  std::size_t max_tokens = 0;  // 0 keeps every token
  std::size_t workers = 1;
  std::uint64_t seed = 42;
};

namespace detail {

inline std::string name_of(const nlohmann::json& j, const char* where) {
  if (!j.is_object() || !j.contains("name") || !j["name"].is_string())
    throw Error(ErrorCode::ConfigError, std::string(where) + ": expected an object with a name");
  return j["name"].get<std::string>();
}

inline std::string resolve(const std::string& p, const std::filesystem::path& base) {
  if (p.empty()) return p;
  const std::filesystem::path path(p);
  return path.is_relative() && !base.empty() ? (base / path).string() : p;
}

/// Names of the scalar features a config produces.
inline std::set<std::string> produced_features(const PipelineConfig& c) {
  std::set<std::string> out;
  if (c.basic_string)
    for (const auto& n : textsim::string_feature_names()) out.insert(n);
  if (c.word_embeddings) out.insert({"sem_sim", "sem_sim_no_func"});
  if (c.relation_weights)
    for (auto k : kAllRelationKinds) out.insert(std::string(to_string(k)));
  return out;
}

}  // namespace detail

/// Parses a JSON pipeline description; `base` resolves relative resource
/// paths. Unknown components and feature names are rejected.
inline PipelineConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base = {}) {
  if (!j.is_object()) throw Error(ErrorCode::ConfigError, "config must be a JSON object");
  static const std::set<std::string> known = {
      "description", "blocking", "lenses",     "textFeatures", "graphFeatures", "scorer",
      "scorers",     "matcher",  "constraint", "hapax",        "resources",     "maxTokens",
      "workers",     "seed"};
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw Error(ErrorCode::ConfigError, "unknown config key '" + key + "'");

  PipelineConfig c;
  try {
    if (j.contains("blocking")) {
      const auto n = detail::name_of(j["blocking"], "blocking");
      if (n != "blocking.Headword" && n != "blocking.OntoLex")
        throw Error(ErrorCode::ConfigError, "unknown blocking '" + n + "'");
    }
    if (j.contains("lenses"))
      for (const auto& l : j["lenses"]) {
        const auto n = detail::name_of(l, "lenses");
        if (n != "lens.Label" && n != "lens.Definition")
          throw Error(ErrorCode::ConfigError, "unknown lens '" + n + "'");
      }
    if (j.contains("textFeatures")) {
      c.basic_string = false;
      for (const auto& f : j["textFeatures"]) {
        const auto n = detail::name_of(f, "textFeatures");
        if (n == "feature.BasicString") {
          c.basic_string = true;
          c.text_options.smoothing_alpha = f.value("smoothingAlpha", c.text_options.smoothing_alpha);
          c.text_options.ngram_order = f.value("ngramOrder", c.text_options.ngram_order);
        } else if (n == "feature.WordEmbeddings") {
          c.word_embeddings = true;
          if (f.contains("embeddingPath"))
            c.embeddings_path = detail::resolve(f["embeddingPath"].get<std::string>(), base);
        } else {
          throw Error(ErrorCode::ConfigError, "unknown text feature '" + n + "'");
        }
      }
    }
    if (j.contains("graphFeatures"))
      for (const auto& f : j["graphFeatures"]) {
        const auto n = detail::name_of(f, "graphFeatures");
        if (n != "feature.RelationWeights")
          throw Error(ErrorCode::ConfigError, "unknown graph feature '" + n + "'");
        c.relation_weights = true;
        if (f.contains("relationPath"))
          c.relations_path = detail::resolve(f["relationPath"].get<std::string>(), base);
        c.relations_language = f.value("language", c.relations_language);
      }
    nlohmann::json sc;
    if (j.contains("scorer")) sc = j["scorer"];
    else if (j.contains("scorers") && !j["scorers"].empty()) sc = j["scorers"][0];
    if (!sc.is_null()) {
      const auto n = detail::name_of(sc, "scorer");
      if (n == "scorer.Feature") {
        c.scorer.kind = ScorerSpec::Kind::FEATURE;
        c.scorer.feature = sc.value("feature", c.scorer.feature);
      } else if (n == "scorer.Model" || n == "scorer.LibSVM") {
        c.scorer.kind = ScorerSpec::Kind::MODEL;
        if (!sc.contains("modelFile"))
          throw Error(ErrorCode::ConfigError, "scorer.Model needs a modelFile");
        c.scorer.model_file = detail::resolve(sc["modelFile"].get<std::string>(), base);
      } else {
        throw Error(ErrorCode::ConfigError, "unknown scorer '" + n + "'");
      }
    }
    if (j.contains("matcher")) {
      const auto& m = j["matcher"];
      const auto n = detail::name_of(m, "matcher");
      if (n == "matcher.Hungarian") c.matcher = MatcherKind::HUNGARIAN;
      else if (n == "matcher.Greedy") c.matcher = MatcherKind::GREEDY;
      else if (n == "matcher.WBbM") c.matcher = MatcherKind::WBBM;
      else if (n == "matcher.BeamSearch") c.matcher = MatcherKind::BEAM;
      else throw Error(ErrorCode::ConfigError, "unknown matcher '" + n + "'");
      c.threshold = m.value("threshold", c.threshold);
      c.beam_width = m.value("beamWidth", c.beam_width);
      c.wbbm_bound.lower = m.value("lower", c.wbbm_bound.lower);
      c.wbbm_bound.upper = m.value("upper", c.wbbm_bound.upper);
      if (c.beam_width == 0) throw Error(ErrorCode::ConfigError, "beamWidth must be >= 1");
      if (c.wbbm_bound.lower > c.wbbm_bound.upper)
        throw Error(ErrorCode::ConfigError, "matcher bounds with lower > upper");
    }
    if (j.contains("constraint")) {
      const auto n = detail::name_of(j["constraint"], "constraint");
      if (n == "constraint.Taxonomic") c.constraint = matcher::Constraint::TAXONOMIC;
      else if (n == "constraint.None") c.constraint = matcher::Constraint::NONE;
      else throw Error(ErrorCode::ConfigError, "unknown constraint '" + n + "'");
    }
    c.hapax = j.value("hapax", false);
    if (j.contains("resources")) {
      const auto& r = j["resources"];
      if (r.contains("stopwords"))
        c.stopwords_path = detail::resolve(r["stopwords"].get<std::string>(), base);
      if (r.contains("embeddings") && c.embeddings_path.empty())
        c.embeddings_path = detail::resolve(r["embeddings"].get<std::string>(), base);
      if (r.contains("relations") && c.relations_path.empty())
        c.relations_path = detail::resolve(r["relations"].get<std::string>(), base);
      c.relations_language = r.value("language", c.relations_language);
    }
    if (j.contains("maxTokens")) {
      const auto& t = j["maxTokens"];
      if (t.is_string() && t.get<std::string>() == "ALL") c.max_tokens = 0;
      else if (t.is_number_integer() && t.get<std::int64_t>() >= 1) c.max_tokens = t.get<std::size_t>();
      else throw Error(ErrorCode::ConfigError, "maxTokens must be a positive integer or \"ALL\"");
    }
    c.workers = std::max<std::size_t>(1, j.value("workers", std::size_t{1}));
    c.seed = j.value("seed", c.seed);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, e.what());
  }

  if (c.scorer.kind == ScorerSpec::Kind::FEATURE &&
      !detail::produced_features(c).count(c.scorer.feature))
    throw Error(ErrorCode::ConfigError,
                "scorer feature '" + c.scorer.feature + "' is not produced by the configured features");
  return c;
}

inline PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ResourceMissing, "cannot open config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, path.string() + ": " + e.what());
  }
  return parse_config(j, path.parent_path());
}

// ---------------------------------------------------------------------------

/// One pair per (lemma, pos) present in both dictionaries; every sense pair
/// becomes a candidate.
inline std::vector<EntryPair> block(const Dictionary& left, const Dictionary& right) {
  auto pairs = pair_dictionaries(left, right);
  for (auto& p : pairs) {
    p.candidates.clear();
    for (std::size_t i = 0; i < p.left_senses.size(); ++i)
      for (std::size_t j = 0; j < p.right_senses.size(); ++j) {
        Link l;
        l.source_sense = i;
        l.target_sense = j;
        l.relation = SemanticRelation::NONE;
        l.score = 0.0;
        p.candidates.push_back(l);
      }
  }
  return pairs;
}

/// Keeps the first max_tokens tokens of a sense and rebuilds its text from
/// them. 0 means no limit.
inline Sense truncate_sense(const Sense& s, std::size_t max_tokens) {
  if (max_tokens == 0 || s.tokens.size() <= max_tokens) return s;
  Sense out = s;
  out.tokens.resize(max_tokens);
  out.text = text::join(out.tokens);
  return out;
}

inline Dictionary truncate_senses(const Dictionary& dict, std::size_t max_tokens) {
  Dictionary out = dict;
  for (auto& e : out)
    for (auto& s : e.senses) s = truncate_sense(s, max_tokens);
  return out;
}

inline std::vector<EntryPair> truncate_senses(const std::vector<EntryPair>& pairs,
                                              std::size_t max_tokens) {
  auto out = pairs;
  for (auto& p : out) {
    for (auto& s : p.left_senses) s = truncate_sense(s, max_tokens);
    for (auto& s : p.right_senses) s = truncate_sense(s, max_tokens);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Model bundle: scaler, optional RBM, relation model.

struct ModelBundle {
  features::MinMaxScaler scaler;
  std::optional<rbm::Rbm> latent;
  scorer::RelationModel model;

  std::vector<double> prepare(const std::vector<double>& raw) const {
    auto x = scaler.transform(raw);
    if (latent) x = latent->transform(x);
    return x;
  }

  void save(std::ostream& out) const {
    out << "wsa-model-bundle 1\n" << std::setprecision(17);
    out << "scaler " << scaler.width();
    for (double v : scaler.mins()) out << ' ' << v;
    for (double v : scaler.maxs()) out << ' ' << v;
    out << "\nrbm " << (latent ? 1 : 0) << '\n';
    if (latent) latent->save(out);
    model.save(out);
  }

  static ModelBundle load(std::istream& in) {
    std::string tag;
    int version = 0;
    if (!(in >> tag >> version) || tag != "wsa-model-bundle" || version != 1)
      throw Error(ErrorCode::MalformedDocument, "not a version-1 model bundle");
    std::size_t width = 0;
    if (!(in >> tag >> width) || tag != "scaler")
      throw Error(ErrorCode::MalformedDocument, "missing scaler");
    std::vector<double> mins(width), maxs(width);
    for (auto& v : mins)
      if (!(in >> v)) throw Error(ErrorCode::MalformedDocument, "truncated scaler");
    for (auto& v : maxs)
      if (!(in >> v)) throw Error(ErrorCode::MalformedDocument, "truncated scaler");
    ModelBundle b;
    b.scaler = features::MinMaxScaler(std::move(mins), std::move(maxs));
    int has_rbm = 0;
    if (!(in >> tag >> has_rbm) || tag != "rbm")
      throw Error(ErrorCode::MalformedDocument, "missing rbm flag");
    if (has_rbm) b.latent = rbm::Rbm::load(in);
    b.model = scorer::RelationModel::load(in);
    return b;
  }
};

inline void save_bundle(const ModelBundle& b, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  b.save(out);
  if (!out) throw Error(ErrorCode::IoFailure, "write to " + path.string() + " failed");
}

inline ModelBundle load_bundle(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ResourceMissing, "cannot open model " + path.string());
  return ModelBundle::load(in);
}

struct TrainOptions {
  scorer::Task task = scorer::Task::SKOS_PLUS_NONE;
  scorer::Hyper hyper;
  std::size_t rbm_hidden = 0;  // 0 disables the latent layer
  std::size_t rbm_epochs = 50;
  double rbm_learning_rate = 0.1;
  bool augment = true;
  std::uint64_t seed = 42;
};

struct TrainReport {
  ModelBundle bundle;
  std::size_t instances = 0;
  std::size_t train_rows = 0;
  std::size_t test_rows = 0;
  std::optional<evalkit::ClassificationMetrics> test_metrics;
};

inline std::vector<std::vector<double>> feature_rows(const std::vector<features::Instance>& xs,
                                                     const features::FeatureResources& res) {
  std::vector<std::vector<double>> rows;
  rows.reserve(xs.size());
  for (const auto& x : xs) {
    const auto in = features::extract(x, res).inputs();
    rows.emplace_back(in.begin(), in.end());
  }
  return rows;
}

/// Maps gold labels to the model's task, skipping dropped rows, and scores
/// the model's argmax predictions.
inline evalkit::ClassificationMetrics evaluate_model(const ModelBundle& b,
                                                     const std::vector<std::vector<double>>& scaled_rows,
                                                     const std::vector<SemanticRelation>& labels) {
  std::vector<std::vector<double>> x = scaled_rows;
  if (b.latent)
    for (auto& r : x) r = b.latent->transform(r);
  return scorer::evaluate(b.model, x, labels);
}

/// Instances (optionally augmented) -> 18-column rows -> seeded 80/10/10
/// split -> optional RBM -> relation model; metrics on the test split.
inline TrainReport train_bundle(const std::vector<EntryPair>& pairs,
                                const features::FeatureResources& res, const TrainOptions& opts) {
  auto inst = features::build_instances(pairs);
  if (opts.augment) inst = features::augment(inst);
  const auto rows = feature_rows(inst, res);
  std::vector<SemanticRelation> labels;
  for (const auto& x : inst) labels.push_back(x.relation);
  const auto ds = features::scale_and_split(rows, labels, opts.seed);

  TrainReport rep;
  rep.instances = inst.size();
  std::vector<std::vector<double>> train_x, test_x;
  std::vector<SemanticRelation> train_y, test_y;
  for (auto k : ds.indices(features::Split::TRAIN)) {
    train_x.push_back(ds.rows[k]);
    train_y.push_back(ds.labels[k]);
  }
  for (auto k : ds.indices(features::Split::TEST)) {
    test_x.push_back(ds.rows[k]);
    test_y.push_back(ds.labels[k]);
  }
  rep.train_rows = train_x.size();
  rep.test_rows = test_x.size();
  rep.bundle.scaler = ds.scaler;
  std::vector<std::vector<double>> model_x = train_x;
  if (opts.rbm_hidden > 0) {
    auto r = rbm::Rbm::random(features::kInputColumns, opts.rbm_hidden, opts.rbm_learning_rate,
                              opts.seed);
    r.train_cd1(train_x, opts.rbm_epochs, opts.seed);
    for (auto& x : model_x) x = r.transform(x);
    rep.bundle.latent = std::move(r);
  }
  rep.bundle.model = scorer::train(model_x, train_y, opts.task, opts.hyper, opts.seed).model;
  bool any_test = false;
  for (auto l : test_y) any_test = any_test || scorer::task_label(opts.task, l).has_value();
  if (any_test) rep.test_metrics = evaluate_model(rep.bundle, test_x, test_y);
  return rep;
}

// ---------------------------------------------------------------------------
// Alignment run

struct Resources {
  std::shared_ptr<const StopwordSet> stopwords;
  std::shared_ptr<const EmbeddingTable> embeddings;
  std::shared_ptr<const RelationStore> relations;
  std::shared_ptr<const ModelBundle> model;

  features::FeatureResources view() const {
    return {embeddings.get(), relations.get(), stopwords.get()};
  }
};

/// Loads what the config references. Missing files surface as
/// ResourceMissing; a required resource without a path does too.
inline Resources load_resources(const PipelineConfig& c) {
  Resources r;
  const auto guard = [](const std::string& what, const std::string& path, auto&& load) {
    if (path.empty()) throw Error(ErrorCode::ResourceMissing, what + " path not configured");
    try {
      return load(path);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::MissingFile)
        throw Error(ErrorCode::ResourceMissing, what + ": " + e.what());
      throw;
    }
  };
  if (!c.stopwords_path.empty())
    r.stopwords = std::make_shared<const StopwordSet>(
        guard("stopwords", c.stopwords_path, [](const std::string& p) { return load_stopwords(p); }));
  const bool model = c.scorer.kind == ScorerSpec::Kind::MODEL;
  if (c.word_embeddings || (model && !c.embeddings_path.empty()))
    r.embeddings = std::make_shared<const EmbeddingTable>(guard(
        "embeddings", c.embeddings_path, [&](const std::string& p) {
          auto t = load_embeddings(p);
          t.stopwords() = r.stopwords ? *r.stopwords : default_english_stopwords();
          return t;
        }));
  if (c.relation_weights || (model && !c.relations_path.empty()))
    r.relations = std::make_shared<const RelationStore>(guard(
        "relations", c.relations_path,
        [&](const std::string& p) { return ingest_edges(p, c.relations_language); }));
  if (model)
    r.model = std::make_shared<const ModelBundle>(
        guard("model", c.scorer.model_file, [](const std::string& p) { return load_bundle(p); }));
  return r;
}

/// Named scalar features for one sense pair.
inline std::map<std::string, double> named_features(const Sense& a, const Sense& b,
                                                    const PipelineConfig& c, const Resources& r) {
  std::map<std::string, double> out;
  if (c.basic_string) out = textsim::string_features(a, b, c.text_options).values;
  if (c.word_embeddings && r.embeddings) {
    features::Instance inst;
    inst.first = a;
    inst.second = b;
    const auto f = features::extract(inst, r.view());
    out["sem_sim"] = f.sem_sim;
    out["sem_sim_no_func"] = f.sem_sim_no_func;
  }
  if (c.relation_weights && r.relations) {
    static const StopwordSet empty;
    const auto w = relation_weight_features(a, b, *r.relations, r.stopwords ? *r.stopwords : empty);
    for (auto k : kAllRelationKinds) out[std::string(to_string(k))] = w[static_cast<std::size_t>(k)];
  }
  return out;
}

/// Class distribution for a pair: from the model, or {EXACT: s, NONE: 1-s}
/// for a single similarity feature s clamped to [0,1].
inline ClassScores score_pair(const EntryPair& p, std::size_t i, std::size_t j,
                              const PipelineConfig& c, const Resources& r) {
  ClassScores s{};
  if (c.scorer.kind == ScorerSpec::Kind::FEATURE) {
    const double w =
        std::clamp(named_features(p.left_senses[i], p.right_senses[j], c, r).at(c.scorer.feature),
                   0.0, 1.0);
    s[index_of(SemanticRelation::EXACT)] = w;
    s[index_of(SemanticRelation::NONE)] = 1.0 - w;
    return s;
  }
  const auto f = features::extract(p, {ResourceSide::LEFT, i}, {ResourceSide::RIGHT, j}, r.view());
  const auto in = f.inputs();
  const auto probs = r.model->model.predict(r.model->prepare({in.begin(), in.end()}));
  const auto& classes = r.model->model.classes();
  for (std::size_t k = 0; k < classes.size(); ++k) s[index_of(classes[k])] += probs[k];
  return s;
}

/// Probability that the pair is linked at all.
inline double link_weight(const ClassScores& s, const PipelineConfig& c, const Resources& r) {
  if (c.scorer.kind == ScorerSpec::Kind::MODEL &&
      !r.model->model.class_index(SemanticRelation::NONE))
    return *std::max_element(s.begin(), s.end());
  return 1.0 - s[index_of(SemanticRelation::NONE)];
}

/// Most likely relation other than NONE; ties go to the earlier relation.
inline SemanticRelation best_link_relation(const ClassScores& s) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < 4; ++k)
    if (s[k] > s[best]) best = k;
  return kAllRelations[best];
}

/// Aligns one entry. The result carries the chosen links in `gold_links`
/// and every scored sense pair in `candidates`; its senses keep their full
/// text even when scoring saw truncated ones.
inline EntryPair align_entry(const EntryPair& input, const PipelineConfig& c, const Resources& r) {
  EntryPair out = input;
  out.gold_links.clear();
  out.candidates.clear();
  EntryPair p = out;
  if (c.max_tokens > 0) {
    for (auto& s : p.left_senses) s = truncate_sense(s, c.max_tokens);
    for (auto& s : p.right_senses) s = truncate_sense(s, c.max_tokens);
  }
  const auto restore = [&out](EntryPair&& scored) {
    out.gold_links = std::move(scored.gold_links);
    out.candidates = std::move(scored.candidates);
    return out;
  };
  const std::size_t n = p.left_senses.size(), m = p.right_senses.size();
  if (n == 0 || m == 0) return out;
  if (c.hapax) {
    if (auto l = hapax_links(p)) {
      l->scores_by_class = ClassScores{1, 0, 0, 0, 0};
      p.candidates.push_back(*l);
      p.gold_links.push_back(*l);
      return restore(std::move(p));
    }
  }
  matcher::CandidateMatrix cm(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const auto s = score_pair(p, i, j, c, r);
      cm(i, j) = link_weight(s, c, r);
      cm.set_class_scores(i, j, s);
      Link l;
      l.source_sense = i;
      l.target_sense = j;
      l.relation = argmax_relation(s);
      l.score = cm(i, j);
      l.scores_by_class = s;
      p.candidates.push_back(l);
    }
  const auto make = [&](std::size_t i, std::size_t j, SemanticRelation rel, double score) {
    Link l;
    l.source_sense = i;
    l.target_sense = j;
    l.relation = rel;
    l.score = score;
    l.scores_by_class = cm.class_scores(i, j);
    return l;
  };
  std::vector<matcher::Pair> chosen;
  switch (c.matcher) {
    case MatcherKind::HUNGARIAN:
      for (const auto& e : matcher::hungarian(cm))
        if (e.weight > c.threshold) chosen.push_back(e);
      break;
    case MatcherKind::GREEDY: chosen = matcher::greedy_bijective(cm, c.threshold); break;
    case MatcherKind::WBBM:
      for (const auto& e : matcher::wbbm_greedy(cm, matcher::BipartiteBounds::uniform(n, m, c.wbbm_bound)))
        if (e.weight > c.threshold) chosen.push_back(e);
      break;
    case MatcherKind::BEAM:
      for (const auto& t : matcher::beam_match(cm, c.constraint, c.beam_width))
        p.gold_links.push_back(make(t.left, t.right, t.relation, t.score));
      return restore(std::move(p));
  }
  std::vector<std::size_t> exact_per_left(n, 0);
  std::sort(chosen.begin(), chosen.end(), [](const auto& a, const auto& b) {
    return std::tie(a.left, a.right) < std::tie(b.left, b.right);
  });
  for (const auto& e : chosen) {
    const auto& s = cm.class_scores(e.left, e.right);
    auto rel = best_link_relation(s);
    if (c.constraint == matcher::Constraint::TAXONOMIC && rel == SemanticRelation::EXACT &&
        exact_per_left[e.left]++ > 0) {
      // one EXACT per source sense: fall back to the best other typed relation
      auto no_exact = s;
      no_exact[index_of(SemanticRelation::EXACT)] = -1.0;
      rel = best_link_relation(no_exact);
    }
    p.gold_links.push_back(make(e.left, e.right, rel, e.weight));
  }
  return restore(std::move(p));
}

/// Entries are processed by up to `workers` threads; the output keeps the
/// input order.
inline std::vector<EntryPair> run_alignment(const PipelineConfig& c, const Resources& r,
                                            const std::vector<EntryPair>& entries) {
  std::vector<EntryPair> out(entries.size());
  const std::size_t workers = std::min(std::max<std::size_t>(1, c.workers), std::max<std::size_t>(1, entries.size()));
  if (workers == 1) {
    for (std::size_t k = 0; k < entries.size(); ++k) out[k] = align_entry(entries[k], c, r);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t k = next++; k < entries.size(); k = next++)
          out[k] = align_entry(entries[k], c, r);
      } catch (...) {
        errors[w] = std::current_exception();
        next = entries.size();
      }
    });
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

inline std::vector<EntryPair> run_alignment(const PipelineConfig& c, const Dictionary& left,
                                            const Dictionary& right) {
  const auto r = load_resources(c);
  return run_alignment(c, r, block(left, right));
}

/// Predicted links of each aligned entry, for evalkit.
inline std::vector<std::vector<Link>> predicted_links(const std::vector<EntryPair>& aligned) {
  std::vector<std::vector<Link>> out;
  out.reserve(aligned.size());
  for (const auto& p : aligned) out.push_back(p.gold_links);
  return out;
}

}  // namespace wsa::pipeline
