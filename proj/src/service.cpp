// Copyright 2026 The EventNet Retrieval Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "eventnet/service.hpp"

#include <charconv>

#include "eventnet/error.hpp"
#include "eventnet/matching.hpp"
#include "eventnet/serialize.hpp"
#include "httplib.h"

namespace eventnet {

namespace {

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kParse:
    case ErrorCode::kValidation:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kEmptyPool:
      return 400;
    default:
      return 500;
  }
}

HttpResponse ok(const Json& document) { return {200, canonical(document)}; }

Json parse_body(std::string_view body) {
  Json parsed = Json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (parsed.is_discarded()) {
    throw Error(ErrorCode::kInvalidArgument, "request body is not valid JSON",
                "body");
  }
  return parsed;
}

int int_param(const std::map<std::string, std::string>& params,
              const std::string& key, int fallback) {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  int value = 0;
  const auto [ptr, ec] = std::from_chars(
      it->second.data(), it->second.data() + it->second.size(), value);
  if (ec != std::errc() || ptr != it->second.data() + it->second.size() ||
      value < 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "query parameter '" + key + "' must be a non-negative integer",
                key);
  }
  return value;
}

std::size_t body_count(const Json& request, const char* key,
                       std::size_t fallback) {
  const auto it = request.find(key);
  if (it == request.end()) return fallback;
  if (!it->is_number_integer() || it->get<long long>() < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("field '") + key + "' must be a positive integer",
                key);
  }
  return it->get<std::size_t>();
}

std::string body_string(const Json& request, const char* key) {
  const auto it = request.find(key);
  if (it == request.end() || !it->is_string()) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("field '") + key + "' must be a string", key);
  }
  return it->get<std::string>();
}

const ScoreMatrix& corpus_named(const EngineState& state,
                                const std::string& name) {
  const auto it = state.corpora.find(name);
  if (it == state.corpora.end()) {
    throw Error(ErrorCode::kNotFound, "unknown corpus '" + name + "'", name);
  }
  return it->second;
}

}  // namespace

EngineState load_engine(const ServiceConfig& config) {
  EngineState state{load_ontology(config.ontology_path), nullptr, {}};
  state.backend = make_backend(config.backend, state.tree);
  for (const auto& [name, path] : config.corpora) {
    state.corpora.emplace(name,
                          align_to_ontology(load_score_matrix(path), state.tree));
  }
  return state;
}

HttpResponse Service::handle(std::string_view method, std::string_view path,
                             const std::map<std::string, std::string>& params,
                             std::string_view body) const {
  try {
    return route(method, path, params, body);
  } catch (const Error& e) {
    return {status_for(e.code()), canonical(to_json(e))};
  } catch (const std::exception& e) {
    return {500, canonical(to_json(Error(ErrorCode::kConfig, e.what())))};
  }
}

HttpResponse Service::route(std::string_view method, std::string_view path,
                            const std::map<std::string, std::string>& params,
                            std::string_view body) const {
  const EngineState& s = *state_;
  if (method == "GET") {
    if (path == "/health") {
      return ok({{"status", "ok"}, {"stats", to_json(stats(s.tree))}});
    }
    if (path == "/ontology/stats") return ok(to_json(stats(s.tree)));
    if (path == "/ontology/tree") {
      const auto root = params.find("root");
      const std::string root_id =
          root == params.end() ? s.tree.root().id : root->second;
      return ok(subtree_json(s.tree, root_id, int_param(params, "depth", 1)));
    }
    constexpr std::string_view kNodePrefix = "/ontology/node/";
    if (path.substr(0, kNodePrefix.size()) == kNodePrefix) {
      const std::string id(path.substr(kNodePrefix.size()));
      Json doc = to_json(s.tree.node(id));
      doc["children"] = s.tree.children(id);
      doc["depth"] = s.tree.depth(id);
      return ok(doc);
    }
    if (path == "/corpora") {
      Json list = Json::array();
      for (const auto& [name, matrix] : s.corpora) {
        list.push_back({{"name", name},
                        {"videos", matrix.video_count()},
                        {"concepts", matrix.concepts().size()}});
      }
      return ok(list);
    }
  } else if (method == "POST") {
    if (path == "/match") {
      const MatchQuery query = match_query_from_json(parse_body(body));
      return ok(to_json(match_concepts(s.tree, query, *s.backend)));
    }
    if (path == "/retrieve") {
      const Json request = parse_body(body);
      const std::string name = body_string(request, "corpus");
      const ScoreMatrix& corpus = corpus_named(s, name);
      const MatchQuery query = match_query_from_json(request);
      const MatchResult match = match_concepts(s.tree, query, *s.backend);
      auto ranking = retrieve(corpus, match);
      const std::size_t top = body_count(request, "top", ranking.size());
      if (ranking.size() > top) ranking.resize(top);
      return ok({{"corpus", name},
                 {"match", to_json(match)},
                 {"ranking", to_json(ranking)}});
    }
    if (path == "/recount") {
      const Json request = parse_body(body);
      const std::string name = body_string(request, "corpus");
      const ScoreMatrix& corpus = corpus_named(s, name);
      const std::string video = body_string(request, "video");
      const auto row = corpus.video_index(video);
      if (!row) {
        throw Error(ErrorCode::kNotFound,
                    "unknown video '" + video + "' in corpus '" + name + "'",
                    video);
      }
      const std::size_t top = body_count(request, "top", 5);
      const auto scores = corpus.row(*row);
      const auto items =
          request.contains("top_events")
              ? recount_two_step(scores, corpus.concepts(), s.tree,
                                 body_count(request, "top_events", 1), top)
              : recount(scores, corpus.concepts(), s.tree, top);
      return ok({{"corpus", name},
                 {"video", video},
                 {"concepts", to_json(items)}});
    }
  }
  throw Error(ErrorCode::kNotFound,
              "no route for " + std::string(method) + " " + std::string(path),
              std::string(path));
}

HttpServer::HttpServer(std::shared_ptr<const EngineState> state)
    : service_(std::move(state)), server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::install_routes() {
  auto forward = [this](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> params;
    for (const auto& [key, value] : req.params) params.emplace(key, value);
    const HttpResponse out =
        service_.handle(req.method, req.path, params, req.body);
    res.status = out.status;
    res.set_content(out.body, "application/json");
  };
  server_->Get(".*", forward);
  server_->Post(".*", forward);
  // No SO_REUSEPORT: a second server on a busy port must fail to bind.
  server_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR,
               reinterpret_cast<const void*>(&yes), sizeof(yes));
  });
}

int HttpServer::start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = server_->bind_to_any_port(host);
  } else if (!server_->bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) {
    throw Error(ErrorCode::kIo,
                "cannot bind " + host + ":" + std::to_string(port),
                host + ":" + std::to_string(port));
  }
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return bound;
}

void HttpServer::run(const std::string& host, int port) {
  start(host, port);
  wait();
}

void HttpServer::wait() {
  if (thread_.joinable()) thread_.join();
}

void HttpServer::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace eventnet
