#pragma once

// HTTP curation service: browse aligned entries, record accept / reject /
// relabel decisions, export the benchmark document.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "wsa/error.hpp"
#include "wsa/lexdata.hpp"

namespace wsa::service {

struct Decision {
  std::size_t source = 0;
  std::size_t target = 0;
  SemanticRelation relation = SemanticRelation::EXACT;
  bool accepted = true;
};

class CurationStore {
 public:
  /// With a store path, every write rewrites that file (temp file + rename).
  explicit CurationStore(std::vector<EntryPair> entries, std::filesystem::path store = {})
      : entries_(std::move(entries)), versions_(entries_.size(), 0), store_(std::move(store)) {}

  /// Reloads a previously persisted store file.
  static CurationStore open(const std::filesystem::path& store) {
    return CurationStore(load_benchmark(store).entries, store);
  }

  std::size_t size() const {
    std::shared_lock lock(mu_);
    return entries_.size();
  }

  std::vector<EntryPair> snapshot() const {
    std::shared_lock lock(mu_);
    return entries_;
  }

  std::uint64_t version(std::size_t id) const {
    std::shared_lock lock(mu_);
    check(id);
    return versions_[id];
  }

  nlohmann::ordered_json list_json() const {
    std::shared_lock lock(mu_);
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < entries_.size(); ++k) {
      const auto& e = entries_[k];
      nlohmann::ordered_json o;
      o["id"] = k;
      o["lemma"] = e.lemma;
      o["pos"] = std::string(to_string(e.pos));
      o["senses_1"] = e.left_senses.size();
      o["senses_2"] = e.right_senses.size();
      o["links"] = e.gold_links.size();
      o["version"] = versions_[k];
      arr.push_back(o);
    }
    return arr;
  }

  nlohmann::ordered_json entry_json(std::size_t id) const {
    std::shared_lock lock(mu_);
    check(id);
    const auto& e = entries_[id];
    nlohmann::ordered_json o;
    o["id"] = id;
    o["lemma"] = e.lemma;
    o["pos"] = std::string(to_string(e.pos));
    o["version"] = versions_[id];
    for (const auto& [key, senses] : {std::pair{"senses_1", &e.left_senses},
                                      std::pair{"senses_2", &e.right_senses}}) {
      nlohmann::ordered_json arr = nlohmann::ordered_json::array();
      for (std::size_t i = 0; i < senses->size(); ++i)
        arr.push_back({{"index", i}, {"id", (*senses)[i].sense_id}, {"text", (*senses)[i].text}});
      o[key] = arr;
    }
    const auto links = [](const std::vector<Link>& ls) {
      nlohmann::ordered_json arr = nlohmann::ordered_json::array();
      for (const auto& l : ls) {
        nlohmann::ordered_json a;
        a["source"] = l.source_sense;
        a["target"] = l.target_sense;
        a["relation"] = std::string(to_string(l.relation));
        a["score"] = l.score;
        if (l.scores_by_class) {
          nlohmann::ordered_json s;
          for (auto r : kAllRelations)
            s[std::string(to_string(r))] = (*l.scores_by_class)[index_of(r)];
          a["scores_by_class"] = s;
        }
        arr.push_back(a);
      }
      return arr;
    };
    o["links"] = links(e.gold_links);
    o["candidates"] = links(e.candidates);
    return o;
  }

  /// Accepting sets the pair's single link to the given relation (a relabel
  /// when one existed); rejecting removes it. Last write wins. Returns the
  /// entry's new version.
  std::uint64_t decide(std::size_t id, const Decision& d) {
    std::unique_lock lock(mu_);
    check(id);
    auto& e = entries_[id];
    if (d.source >= e.left_senses.size() || d.target >= e.right_senses.size())
      throw Error(ErrorCode::InvalidSenseIndex, "decision references a missing sense");
    std::erase_if(e.gold_links, [&](const Link& l) {
      return l.source_sense == d.source && l.target_sense == d.target;
    });
    if (d.accepted && d.relation != SemanticRelation::NONE) {
      Link l;
      l.source_sense = d.source;
      l.target_sense = d.target;
      l.relation = d.relation;
      const auto pos = std::find_if(e.gold_links.begin(), e.gold_links.end(), [&](const Link& x) {
        return std::tie(x.source_sense, x.target_sense) > std::tie(d.source, d.target);
      });
      e.gold_links.insert(pos, l);
    }
    const auto v = ++versions_[id];
    persist_locked();
    return v;
  }

  std::string export_document() const {
    std::shared_lock lock(mu_);
    return serialize_benchmark(entries_);
  }

  void flush() const {
    std::shared_lock lock(mu_);
    persist_locked();
  }

 private:
  void check(std::size_t id) const {
    if (id >= entries_.size())
      throw Error(ErrorCode::InvalidArgument, "no entry " + std::to_string(id));
  }

  void persist_locked() const {
    if (store_.empty()) return;
    auto tmp = store_;
    tmp += ".tmp";
    save_annotations(entries_, tmp);
    std::error_code ec;
    std::filesystem::rename(tmp, store_, ec);
    if (ec) throw Error(ErrorCode::IoFailure, "cannot replace " + store_.string() + ": " + ec.message());
  }

  mutable std::shared_mutex mu_;
  std::vector<EntryPair> entries_;
  std::vector<std::uint64_t> versions_;
  std::filesystem::path store_;
};

inline Decision parse_decision(const std::string& body) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::MalformedDocument, e.what());
  }
  Decision d;
  try {
    d.source = j.at("source").get<std::size_t>();
    d.target = j.at("target").get<std::size_t>();
    d.accepted = j.value("accepted", true);
    const auto rel = j.value("relation", std::string("exact"));
    const auto r = parse_relation(rel);
    if (!r) throw Error(ErrorCode::MalformedDocument, "unknown relation '" + rel + "'");
    d.relation = *r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedDocument, e.what());
  }
  return d;
}

class CurationServer {
 public:
  explicit CurationServer(CurationStore& store) : store_(store) { routes(); }
  ~CurationServer() { stop(); }

  /// Binds and serves on a background thread. Port 0 picks a free port.
  int start(const std::string& host, int port) {
    const int bound = port == 0 ? server_.bind_to_any_port(host) : (server_.bind_to_port(host, port) ? port : -1);
    if (bound < 0) throw Error(ErrorCode::PortInUse, "cannot bind " + host + ":" + std::to_string(port));
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
    return bound;
  }

  /// Blocks until stop() is called from elsewhere.
  void serve_forever(const std::string& host, int port) {
    if (!server_.bind_to_port(host, port))
      throw Error(ErrorCode::PortInUse, "cannot bind " + host + ":" + std::to_string(port));
    server_.listen_after_bind();
    store_.flush();
  }

  void stop() {
    if (server_.is_running()) server_.stop();
    if (thread_.joinable()) thread_.join();
  }

 private:
  static void send_json(httplib::Response& res, const nlohmann::ordered_json& j, int status = 200) {
    res.status = status;
    res.set_content(j.dump(), "application/json");
  }

  static void send_error(httplib::Response& res, const Error& e) {
    int status = 400;
    if (e.code() == ErrorCode::InvalidArgument) status = 404;
    if (e.code() == ErrorCode::IoFailure) status = 500;
    send_json(res, {{"error", std::string(to_string(e.code()))}, {"message", e.what()}}, status);
  }

  template <class F>
  static void guarded(httplib::Response& res, F&& f) {
    try {
      f();
    } catch (const Error& e) {
      send_error(res, e);
    }
  }

  static std::size_t entry_id(const httplib::Request& req) {
    const std::string s = req.matches[1];
    try {
      return std::stoul(s);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "bad entry id '" + s + "'");
    }
  }

  void routes() {
    server_.Get("/api/health", [this](const httplib::Request&, httplib::Response& res) {
      send_json(res, {{"status", "ok"}, {"entries", store_.size()}});
    });
    server_.Get("/api/entries", [this](const httplib::Request&, httplib::Response& res) {
      send_json(res, store_.list_json());
    });
    server_.Get(R"(/api/entries/(\d+))", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] { send_json(res, store_.entry_json(entry_id(req))); });
    });
    server_.Post(R"(/api/entries/(\d+)/decision)",
                 [this](const httplib::Request& req, httplib::Response& res) {
                   guarded(res, [&] {
                     const auto v = store_.decide(entry_id(req), parse_decision(req.body));
                     send_json(res, {{"version", v}});
                   });
                 });
    server_.Get("/api/export", [this](const httplib::Request&, httplib::Response& res) {
      res.set_content(store_.export_document(), "application/json");
    });
  }

  CurationStore& store_;
  httplib::Server server_;
  std::thread thread_;
};

}  // namespace wsa::service
