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

#include "medvec/service.h"

#include <charconv>
#include <cstdio>
#include <optional>

#include <httplib.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "medvec/error.h"

namespace medvec {
namespace {

using Params = std::multimap<std::string, std::string>;
using nlohmann::json;

std::optional<std::string> param(const Params& params, const std::string& key) {
  auto it = params.find(key);
  if (it == params.end()) return std::nullopt;
  return it->second;
}

HttpResponse error_response(int status, json doc) {
  return {status, doc.dump()};
}

HttpResponse error_response(int status, const char* message) {
  return error_response(status, json{{"error", message}});
}

// Parses the optional "top" parameter; nullopt on malformed input.
std::optional<std::size_t> parse_top(const Params& params, std::size_t fallback) {
  const std::optional<std::string> raw = param(params, "top");
  if (!raw) return fallback;
  std::size_t value = 0;
  const char* first = raw->data();
  const char* last = first + raw->size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || raw->empty()) return std::nullopt;
  return value;
}

// Writes the document by hand so similarities keep their six-decimal text.
std::string result_document(const json& query, const QueryResult& result) {
  std::string body = "{\"query\":" + query.dump() + ",\"results\":[";
  for (std::size_t i = 0; i < result.size(); ++i) {
    if (i > 0) body.push_back(',');
    body += "{\"word\":" + json(result[i].word).dump() +
            ",\"similarity\":" + format_similarity(result[i].similarity) + "}";
  }
  body += "]}";
  return body;
}

void install(httplib::Response& res, const HttpResponse& r) {
  res.status = r.status;
  res.set_content(r.body, "application/json");
}

}  // namespace

std::string format_similarity(double similarity) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", similarity);
  return buf;
}

std::string format_result_lines(const QueryResult& result) {
  std::string out;
  for (const Neighbor& n : result) {
    out += n.word;
    out.push_back('\t');
    out += format_similarity(n.similarity);
    out.push_back('\n');
  }
  return out;
}

void ServiceConfig::validate() const {
  if (port < 0 || port > 65535) {
    throw ConfigError("port must be in 0..65535, got " + std::to_string(port));
  }
  if (request_timeout.count() <= 0) throw ConfigError("timeout must be > 0");
}

void QueryHandler::set_store(std::shared_ptr<const VectorStore> store) {
  std::lock_guard lock(mu_);
  store_ = std::move(store);
}

std::shared_ptr<const VectorStore> QueryHandler::store() const {
  std::lock_guard lock(mu_);
  return store_;
}

bool QueryHandler::ready() const { return store() != nullptr; }

HttpResponse QueryHandler::distance(const Params& params) const {
  const auto store = this->store();
  if (!store) return error_response(503, "model is loading");
  const std::optional<std::string> word = param(params, "word");
  if (!word || word->empty()) {
    return error_response(400, "missing parameter 'word'");
  }
  const std::optional<std::size_t> top = parse_top(params, default_k_);
  if (!top) return error_response(400, "parameter 'top' must be a non-negative integer");
  try {
    const QueryResult result = store->distance(*word, *top);
    return {200, result_document(json{{"word", *word}, {"top", *top}}, result)};
  } catch (const NotFoundError&) {
    return error_response(404, json{{"error", "word not in vocabulary"}, {"word", *word}});
  } catch (const UndefinedSimilarityError& e) {
    return error_response(422, e.what());
  }
}

HttpResponse QueryHandler::analogy(const Params& params) const {
  const auto store = this->store();
  if (!store) return error_response(503, "model is loading");
  std::string words[3];
  json missing = json::array();
  const char* names[] = {"a", "b", "c"};
  for (int i = 0; i < 3; ++i) {
    const std::optional<std::string> v = param(params, names[i]);
    if (!v || v->empty()) {
      missing.push_back(names[i]);
    } else {
      words[i] = *v;
    }
  }
  if (!missing.empty()) {
    return error_response(400, json{{"error", "missing parameters"}, {"parameters", missing}});
  }
  const std::optional<std::size_t> top = parse_top(params, default_k_);
  if (!top) return error_response(400, "parameter 'top' must be a non-negative integer");
  try {
    const QueryResult result = store->analogy(words[0], words[1], words[2], *top);
    return {200, result_document(json{{"a", words[0]},
                                      {"b", words[1]},
                                      {"c", words[2]},
                                      {"top", *top}},
                                 result)};
  } catch (const NotFoundError& e) {
    return error_response(404, json{{"error", "words not in vocabulary"}, {"words", e.words()}});
  } catch (const UndefinedSimilarityError& e) {
    return error_response(422, e.what());
  }
}

HttpResponse QueryHandler::health() const {
  const auto store = this->store();
  if (!store) return error_response(503, json{{"status", "loading"}});
  return {200, json{{"status", "ok"}, {"vocab_size", store->size()}, {"dim", store->dim()}}
                   .dump()};
}

QueryService::QueryService(ServiceConfig config)
    : config_(std::move(config)),
      handler_(config_.default_k),
      server_(std::make_unique<httplib::Server>()) {
  config_.validate();
  const auto timeout = static_cast<time_t>(config_.request_timeout.count());
  server_->set_read_timeout(timeout, 0);
  server_->set_write_timeout(timeout, 0);
  server_->Get("/distance", [this](const httplib::Request& req, httplib::Response& res) {
    install(res, handler_.distance(req.params));
  });
  server_->Get("/analogy", [this](const httplib::Request& req, httplib::Response& res) {
    install(res, handler_.analogy(req.params));
  });
  server_->Get("/health", [this](const httplib::Request&, httplib::Response& res) {
    install(res, handler_.health());
  });
  server_->set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) {
      res.set_content(json{{"error", httplib::status_message(res.status)}}.dump(),
                      "application/json");
    }
  });
  server_->set_exception_handler(
      [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string message = "internal error";
        try {
          if (ep) std::rethrow_exception(ep);
        } catch (const std::exception& e) {
          message = e.what();
        } catch (...) {
        }
        res.status = 500;
        res.set_content(json{{"error", message}}.dump(), "application/json");
      });
}

QueryService::~QueryService() { stop(); }

int QueryService::bind() {
  if (config_.port == 0) {
    port_ = server_->bind_to_any_port(config_.bind_address);
  } else {
    port_ = server_->bind_to_port(config_.bind_address, config_.port)
                ? config_.port
                : -1;
  }
  if (port_ < 0) {
    throw InputError("cannot bind " + config_.bind_address + ":" +
                     std::to_string(config_.port));
  }
  return port_;
}

void QueryService::serve() {
  if (port_ < 0) bind();
  spdlog::info("serving on {}:{}", config_.bind_address, port_);
  server_->listen_after_bind();
}

void QueryService::load_model() {
  spdlog::info("loading model {}", config_.model_path.string());
  set_store(std::make_shared<const VectorStore>(VectorStore::load(config_.model_path)));
  spdlog::info("model ready");
}

void QueryService::set_store(std::shared_ptr<const VectorStore> store) {
  handler_.set_store(std::move(store));
}

void QueryService::stop() {
  if (server_) server_->stop();
}

}  // namespace medvec
