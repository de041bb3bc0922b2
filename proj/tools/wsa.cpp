// wsa: command-line front end for alignment, training, evaluation,
// statistics, translation inference, agreement and the curation service.

#include <csignal>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "wsa/evalkit.hpp"
#include "wsa/netstats.hpp"
#include "wsa/pipeline.hpp"
#include "wsa/service.hpp"
#include "wsa/transinfer.hpp"

namespace {

using namespace wsa;

struct ResourceArgs {
  std::string embeddings;
  std::string relations;
  std::string stopwords;
  std::string language = "en";

  void attach(CLI::App* app) {
    app->add_option("--embeddings", embeddings, "word vectors (text format)");
    app->add_option("--relations", relations, "semantic-network edge dump (TSV)");
    app->add_option("--stopwords", stopwords, "stopword list, one per line");
    app->add_option("--language", language, "language filter for the edge dump");
  }

  struct Loaded {
    StopwordSet stopwords;
    std::optional<EmbeddingTable> embeddings;
    std::optional<RelationStore> relations;
    features::FeatureResources view() const {
      return {embeddings ? &*embeddings : nullptr, relations ? &*relations : nullptr, &stopwords};
    }
  };

  Loaded load() const {
    Loaded r;
    r.stopwords = stopwords.empty() ? default_english_stopwords() : load_stopwords(stopwords);
    if (!embeddings.empty()) {
      r.embeddings = load_embeddings(embeddings);
      r.embeddings->stopwords() = r.stopwords;
    }
    if (!relations.empty()) r.relations = ingest_edges(relations, language);
    return r;
  }
};

void write_text(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path);
  out << content;
}

void print_metrics(const evalkit::ClassificationMetrics& m) {
  std::cout << "accuracy," << m.accuracy << "\nmacro_precision," << m.macro_precision
            << "\nmacro_recall," << m.macro_recall << "\nmacro_f," << m.macro_f << '\n';
  evalkit::write_confusion_csv(std::cout, m.confusion);
}

void print_link_eval(const evalkit::LinkEvaluation& ev) {
  std::cout << "pairs," << ev.pairs << "\npair_accuracy," << ev.pair_accuracy
            << "\nmacro_precision," << ev.macro.precision << "\nmacro_recall," << ev.macro.recall
            << "\naverage_f," << ev.macro.f_measure << "\naverage_accuracy," << ev.macro.accuracy
            << '\n';
}

// ---------------------------------------------------------------------------

int cmd_align(const std::string& config_path, const std::string& left, const std::string& right,
              const std::string& benchmark, const std::string& out) {
  const auto config = config_path.empty() ? pipeline::parse_config(nlohmann::json::object())
                                          : pipeline::load_config(config_path);
  const auto res = pipeline::load_resources(config);
  std::vector<EntryPair> entries;
  BenchmarkDocument gold;
  if (!benchmark.empty()) {
    gold = load_benchmark(benchmark);
    entries = gold.entries;
  } else {
    if (left.empty() || right.empty())
      throw Error(ErrorCode::InvalidArgument, "align needs --left and --right, or --benchmark");
    entries = pipeline::block(load_dictionary_tsv(left, ResourceSide::LEFT),
                              load_dictionary_tsv(right, ResourceSide::RIGHT));
  }
  const auto aligned = pipeline::run_alignment(config, res, entries);
  if (!out.empty()) write_text(out, serialize_benchmark(aligned));
  if (!benchmark.empty() && !gold.entries.empty()) {
    print_link_eval(evalkit::evaluate_links(gold.entries, pipeline::predicted_links(aligned)));
  } else if (out.empty()) {
    std::cout << serialize_benchmark(aligned);
  }
  return 0;
}

int cmd_train(const std::string& benchmark, const std::string& task, const std::string& out_model,
              std::uint64_t seed, std::size_t rbm_hidden, std::size_t epochs, double lr,
              const ResourceArgs& ra) {
  const auto doc = load_benchmark(benchmark);
  const auto res = ra.load();
  pipeline::TrainOptions opts;
  opts.task = scorer::parse_task(task);
  opts.seed = seed;
  opts.rbm_hidden = rbm_hidden;
  opts.hyper.epochs = epochs;
  opts.hyper.learning_rate = lr;
  const auto rep = pipeline::train_bundle(doc.entries, res.view(), opts);
  pipeline::save_bundle(rep.bundle, out_model);
  std::cerr << "instances " << rep.instances << ", train " << rep.train_rows << ", test "
            << rep.test_rows << '\n';
  if (rep.test_metrics) print_metrics(*rep.test_metrics);
  return 0;
}

int cmd_evaluate(const std::string& gold_path, const std::string& pred_path,
                 const std::string& model_path, bool binary, const ResourceArgs& ra) {
  const auto gold = load_benchmark(gold_path).entries;
  if (!pred_path.empty()) {
    const auto pred = load_benchmark(pred_path).entries;
    std::vector<std::vector<Link>> links;
    for (const auto& p : pred) links.push_back(p.gold_links);
    print_link_eval(evalkit::evaluate_links(gold, links, binary));
    return 0;
  }
  if (model_path.empty()) throw Error(ErrorCode::InvalidArgument, "evaluate needs --pred or --model");
  const auto bundle = pipeline::load_bundle(model_path);
  const auto res = ra.load();
  const auto inst = features::build_instances(gold);
  const auto rows = pipeline::feature_rows(inst, res.view());
  std::vector<std::vector<double>> scaled;
  std::vector<SemanticRelation> labels;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    scaled.push_back(bundle.scaler.transform(rows[k]));
    labels.push_back(inst[k].relation);
  }
  print_metrics(pipeline::evaluate_model(bundle, scaled, labels));
  return 0;
}

int cmd_stats(const std::string& benchmark, const std::string& graph) {
  if (!benchmark.empty()) {
    const auto s = netstats::alignment_stats(load_benchmark(benchmark).entries);
    netstats::write_stats_csv(std::cout, benchmark, s);
    return 0;
  }
  if (graph.empty()) throw Error(ErrorCode::InvalidArgument, "stats needs --benchmark or --graph");
  // edge list: u \t v, node names free-form
  std::ifstream in(graph);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open " + graph);
  std::map<std::string, std::size_t> us, vs;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::string line;
  while (std::getline(in, line)) {
    if (text::trim(line).empty() || line.front() == '#') continue;
    const auto cols = text::split(line, '\t');
    if (cols.size() != 2) throw Error(ErrorCode::BadColumnCount, "graph rows are 'u<TAB>v'");
    const auto u = us.emplace(cols[0], us.size()).first->second;
    const auto v = vs.emplace(cols[1], vs.size()).first->second;
    edges.emplace_back(u, v);
  }
  netstats::BipartiteGraph g(us.size(), vs.size());
  for (auto [u, v] : edges) g.add_edge(u, v);
  const auto dd = netstats::degree_density(g);
  const auto cc = netstats::clustering(g);
  std::cout << "n_u,n_v,m,k_u,k_v,k,delta,cc_u,cc_v\n"
            << g.n_u() << ',' << g.n_v() << ',' << g.edge_count() << ',' << dd.k_u << ','
            << dd.k_v << ',' << dd.k << ',' << dd.delta << ',' << cc.mean_u << ',' << cc.mean_v
            << '\n';
  return 0;
}

int cmd_infer(const std::string& manifest, const std::string& src, const std::string& tgt,
              double alpha, std::size_t max_len, const std::string& mode, const std::string& out,
              const std::string& gold, const std::vector<double>& thresholds) {
  const transinfer::TranslationGraph g(load_translation_pairs(manifest));
  std::vector<transinfer::InferredTranslation> inferred;
  if (mode == "cycle") inferred = transinfer::infer_cycles(g, src, tgt);
  else if (mode == "path") inferred = transinfer::infer_paths(g, src, tgt, {alpha, max_len});
  else throw Error(ErrorCode::InvalidArgument, "--mode is cycle or path");
  std::ostringstream ss;
  transinfer::write_lexicon_tsv(ss, inferred);
  write_text(out, ss.str());
  if (!gold.empty()) {
    std::ifstream in(gold);
    if (!in) throw Error(ErrorCode::MissingFile, "cannot open " + gold);
    std::stringstream content;
    content << in.rdbuf();
    const auto rows = transinfer::evaluate_inference(
        inferred, transinfer::parse_gold_lexicon(content.str()), thresholds);
    std::cerr << "threshold,precision,recall,f1,coverage\n";
    for (const auto& r : rows)
      std::cerr << r.threshold << ',' << r.precision << ',' << r.recall << ',' << r.f1 << ','
                << r.coverage << '\n';
  }
  return 0;
}

/// Each sense pair of each entry is one unit; an annotator who left a pair
/// unlinked labels it none.
int cmd_iaa(const std::vector<std::string>& files, bool binary) {
  if (files.size() < 2) throw Error(ErrorCode::InsufficientData, "iaa needs two or more annotation files");
  std::map<std::string, std::vector<std::optional<std::string>>> units;
  for (std::size_t a = 0; a < files.size(); ++a)
    for (const auto& e : load_benchmark(files[a]).entries)
      for (std::size_t i = 0; i < e.left_senses.size(); ++i)
        for (std::size_t j = 0; j < e.right_senses.size(); ++j) {
          const std::string key = e.lemma + '\x1f' + std::string(to_string(e.pos)) + '\x1f' +
                                  e.left_senses[i].text + '\x1f' + e.right_senses[j].text;
          auto& row = units[key];
          row.resize(files.size());
          auto r = e.relation_of(i, j);
          if (binary && r != SemanticRelation::NONE) r = SemanticRelation::EXACT;
          row[a] = std::string(binary ? (r == SemanticRelation::NONE ? "none" : "linked") : to_string(r));
        }
  evalkit::AgreementTable table;
  for (auto& [_, row] : units) table.push_back(row);
  std::cout << "units," << table.size() << "\nalpha," << evalkit::krippendorff_alpha(table) << '\n';
  return 0;
}

service::CurationServer* g_server = nullptr;

int cmd_serve(int port, const std::string& store_path, const std::string& benchmark,
              const std::string& config_path, const std::string& left, const std::string& right) {
  std::vector<EntryPair> entries;
  if (std::filesystem::exists(store_path)) {
    entries = load_benchmark(store_path).entries;
  } else if (!benchmark.empty()) {
    entries = load_benchmark(benchmark).entries;
  } else if (!left.empty() && !right.empty()) {
    const auto config = config_path.empty() ? pipeline::parse_config(nlohmann::json::object())
                                            : pipeline::load_config(config_path);
    entries = pipeline::run_alignment(config, load_dictionary_tsv(left, ResourceSide::LEFT),
                                      load_dictionary_tsv(right, ResourceSide::RIGHT));
  } else {
    throw Error(ErrorCode::InvalidArgument,
                "serve needs an existing --store, a --benchmark, or --left/--right");
  }
  service::CurationStore store(std::move(entries), store_path);
  store.flush();
  service::CurationServer server(store);
  g_server = &server;
  std::signal(SIGINT, [](int) {
    if (g_server) g_server->stop();
  });
  std::signal(SIGTERM, [](int) {
    if (g_server) g_server->stop();
  });
  std::cerr << "serving on http://127.0.0.1:" << port << '\n';
  server.serve_forever("127.0.0.1", port);
  g_server = nullptr;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"word sense alignment toolkit"};
  app.require_subcommand(1);

  std::string config, left, right, benchmark, out;
  auto* align = app.add_subcommand("align", "align two dictionaries or a benchmark file");
  align->add_option("--config", config, "pipeline JSON");
  align->add_option("--left", left, "first dictionary TSV");
  align->add_option("--right", right, "second dictionary TSV");
  align->add_option("--benchmark", benchmark, "benchmark JSON to align and score against");
  align->add_option("--out", out, "write aligned entries here");

  std::string task = "skos+none", out_model;
  std::uint64_t seed = 42;
  std::size_t rbm_hidden = 0, epochs = 50;
  double lr = 0.1;
  ResourceArgs train_res;
  auto* train = app.add_subcommand("train", "train a relation model");
  train->add_option("--benchmark", benchmark, "training benchmark JSON")->required();
  train->add_option("--task", task, "binary | skos | skos+none");
  train->add_option("--out-model", out_model, "model bundle path")->required();
  train->add_option("--seed", seed);
  train->add_option("--rbm-hidden", rbm_hidden, "hidden units of the latent RBM (0: none)");
  train->add_option("--epochs", epochs);
  train->add_option("--lr", lr);
  train_res.attach(train);

  std::string gold, pred, model;
  bool binary = false;
  ResourceArgs eval_res;
  auto* evaluate = app.add_subcommand("evaluate", "score predictions or a model against gold");
  evaluate->add_option("--gold", gold)->required();
  auto* pred_opt = evaluate->add_option("--pred", pred);
  evaluate->add_option("--model", model)->excludes(pred_opt);
  evaluate->add_flag("--binary", binary, "collapse SKOS relations into one class");
  eval_res.attach(evaluate);

  std::string graph;
  auto* stats = app.add_subcommand("stats", "network statistics");
  stats->add_option("--benchmark", benchmark);
  stats->add_option("--graph", graph, "bipartite edge list");

  std::string manifest, src, tgt, mode = "path", lexicon;
  double alpha = 0.5;
  std::size_t max_len = 8;
  std::vector<double> thresholds = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  auto* infer = app.add_subcommand("infer-translations", "infer a bilingual lexicon");
  infer->add_option("--manifest", manifest)->required();
  infer->add_option("--src", src)->required();
  infer->add_option("--tgt", tgt)->required();
  infer->add_option("--alpha", alpha);
  infer->add_option("--max-len", max_len, "longest path, in words");
  infer->add_option("--mode", mode, "cycle | path");
  infer->add_option("--out", out);
  infer->add_option("--gold", lexicon, "gold lexicon TSV for evaluation");
  infer->add_option("--thresholds", thresholds);

  std::vector<std::string> annotations;
  auto* iaa = app.add_subcommand("iaa", "Krippendorff's alpha across annotation files");
  iaa->add_option("--annotations", annotations)->required();
  iaa->add_flag("--binary", binary);

  int port = 8080;
  std::string store;
  auto* serve = app.add_subcommand("serve", "run the curation service");
  serve->add_option("--port", port);
  serve->add_option("--config", config);
  serve->add_option("--store", store)->required();
  serve->add_option("--benchmark", benchmark);
  serve->add_option("--left", left);
  serve->add_option("--right", right);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*align) return cmd_align(config, left, right, benchmark, out);
    if (*train) return cmd_train(benchmark, task, out_model, seed, rbm_hidden, epochs, lr, train_res);
    if (*evaluate) return cmd_evaluate(gold, pred, model, binary, eval_res);
    if (*stats) return cmd_stats(benchmark, graph);
    if (*infer) return cmd_infer(manifest, src, tgt, alpha, max_len, mode, out, lexicon, thresholds);
    if (*iaa) return cmd_iaa(annotations, binary);
    if (*serve) return cmd_serve(port, store, benchmark, config, left, right);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
