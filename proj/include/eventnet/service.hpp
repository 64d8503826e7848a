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

// Read-only HTTP facade over a loaded ontology and its score corpora.
//
//   GET  /health                      status + ontology stats
//   GET  /ontology/stats
//   GET  /ontology/tree?root=&depth=  nested subtree (default: root, depth 1)
//   GET  /ontology/node/<id>
//   GET  /corpora
//   POST /match     {"query", "restrict"?, "events"?, "concepts"?}
//   POST /retrieve  match fields + {"corpus", "top"?}
//   POST /recount   {"corpus", "video", "top"?, "top_events"?}
//
// Errors come back as {"code", "message", "detail"} with status 400 (bad
// request, empty pool, validation) or 404 (unknown node, corpus, video or
// route). State is loaded once and never mutated.

#ifndef EVENTNET_SERVICE_HPP_
#define EVENTNET_SERVICE_HPP_

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <thread>

#include "eventnet/ontology.hpp"
#include "eventnet/scoring.hpp"
#include "eventnet/similarity.hpp"

namespace httplib {
class Server;
}

namespace eventnet {

struct ServiceConfig {
  std::string ontology_path;
  // Corpus name -> score matrix file.
  std::map<std::string, std::string> corpora;
  BackendConfig backend;
  std::string host = "127.0.0.1";
  // 0 picks a free port.
  int port = 8080;
};

struct EngineState {
  OntologyTree tree;
  std::shared_ptr<const SimilarityBackend> backend;
  // Columns aligned to the ontology's concept order.
  std::map<std::string, ScoreMatrix> corpora;
};

// Loads and validates everything named by `config`; any failure throws.
EngineState load_engine(const ServiceConfig& config);

struct HttpResponse {
  int status = 200;
  std::string body;
};

class Service {
 public:
  explicit Service(std::shared_ptr<const EngineState> state)
      : state_(std::move(state)) {}

  // Transport-free request handling; the HTTP server is a thin shell over
  // this. `params` holds the decoded query-string parameters.
  HttpResponse handle(std::string_view method, std::string_view path,
                      const std::map<std::string, std::string>& params,
                      std::string_view body) const;

  const EngineState& state() const { return *state_; }

 private:
  HttpResponse route(std::string_view method, std::string_view path,
                     const std::map<std::string, std::string>& params,
                     std::string_view body) const;

  std::shared_ptr<const EngineState> state_;
};

// Owns an httplib server running Service on a background thread.
class HttpServer {
 public:
  explicit HttpServer(std::shared_ptr<const EngineState> state);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds and starts serving; returns the bound port. Throws Error(kIo) when
  // the address cannot be bound.
  int start(const std::string& host, int port);
  // Blocks until stop() is called from elsewhere.
  void run(const std::string& host, int port);
  // Blocks until a started server stops.
  void wait();
  void stop();

 private:
  void install_routes();

  Service service_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

}  // namespace eventnet

#endif  // EVENTNET_SERVICE_HPP_
