// Copyright 2026 The medvec Authors.
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

// HTTP front end for the distance and analogy tools.
//
//   GET /distance?word=W[&top=K]
//   GET /analogy?a=A&b=B&c=C[&top=K]
//   GET /health
//
// Result documents are {"query": ..., "results": [{"word", "similarity"}]}
// with similarities written with six decimals, the same text the CLI prints.

#ifndef MEDVEC_SERVICE_H_
#define MEDVEC_SERVICE_H_

#include <atomic>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

#include "medvec/vector_store.h"

namespace httplib {
class Server;
}

namespace medvec {

// "%.6f" rendering shared by the CLI and the service.
std::string format_similarity(double similarity);

// CLI rendering: one "word<TAB>similarity" line per result.
std::string format_result_lines(const QueryResult& result);

struct ServiceConfig {
  std::string bind_address = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::filesystem::path model_path;
  std::size_t default_k = kDefaultTopK;
  std::chrono::seconds request_timeout{30};

  void validate() const;
};

struct HttpResponse {
  int status = 200;
  std::string body;  // JSON
};

// Request handling independent of the HTTP server, so it can be tested and
// reused directly. Parameters are the decoded query-string values.
class QueryHandler {
 public:
  explicit QueryHandler(std::size_t default_k = kDefaultTopK)
      : default_k_(default_k) {}

  void set_store(std::shared_ptr<const VectorStore> store);
  bool ready() const;

  HttpResponse distance(const std::multimap<std::string, std::string>& params) const;
  HttpResponse analogy(const std::multimap<std::string, std::string>& params) const;
  HttpResponse health() const;

 private:
  std::shared_ptr<const VectorStore> store() const;

  std::size_t default_k_;
  mutable std::mutex mu_;
  std::shared_ptr<const VectorStore> store_;
};

class QueryService {
 public:
  explicit QueryService(ServiceConfig config);
  ~QueryService();

  QueryService(const QueryService&) = delete;
  QueryService& operator=(const QueryService&) = delete;

  // Binds the listening socket and returns the bound port.
  int bind();

  // Serves until stop(). Requests arriving before a model is installed get
  // 503.
  void serve();

  // Loads config.model_path and installs it.
  void load_model();
  void set_store(std::shared_ptr<const VectorStore> store);

  // Stops accepting connections; in-flight requests complete first.
  void stop();

  const QueryHandler& handler() const { return handler_; }

 private:
  ServiceConfig config_;
  QueryHandler handler_;
  std::unique_ptr<httplib::Server> server_;
  int port_ = -1;
};

}  // namespace medvec

#endif  // MEDVEC_SERVICE_H_
