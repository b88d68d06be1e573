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

#include <memory>
#include <random>
#include <thread>

#include <doctest.h>
#include <httplib.h>
#include <json.hpp>

#include "medvec/error.h"
#include "medvec/service.h"
#include "support/random_store.h"
#include "support/service_text.h"

using medvec::HttpResponse;
using medvec::QueryHandler;
using medvec::testing::lines_from_body;

namespace {

std::shared_ptr<const medvec::VectorStore> toy_store() {
  medvec::testing::RawModel m{{"aspirin", "headache", "fever", "ibuprofen", "pain"},
                              {{1, 0.2f, 0}, {0.9f, 0.3f, 0.1f}, {0.2f, 1, 0},
                               {0.8f, 0.1f, 0.3f}, {0, 0.4f, 1}}};
  return std::make_shared<const medvec::VectorStore>(m.store());
}

}  // namespace

TEST_SUITE("query_service") {

TEST_CASE("requests before a model is installed get 503") {
  QueryHandler h;
  CHECK_FALSE(h.ready());
  CHECK(h.distance({{"word", "aspirin"}}).status == 503);
  CHECK(h.analogy({{"a", "x"}, {"b", "y"}, {"c", "z"}}).status == 503);
  CHECK(h.health().status == 503);
}

TEST_CASE("health reports shape") {
  QueryHandler h;
  h.set_store(toy_store());
  const HttpResponse r = h.health();
  CHECK(r.status == 200);
  const auto doc = nlohmann::json::parse(r.body);
  CHECK(doc["vocab_size"] == 5);
  CHECK(doc["dim"] == 3);
}

TEST_CASE("bad parameters are 400, unknown words 404") {
  QueryHandler h;
  h.set_store(toy_store());
  CHECK(h.distance({}).status == 400);
  CHECK(h.distance({{"word", ""}}).status == 400);
  CHECK(h.distance({{"word", "aspirin"}, {"top", "-3"}}).status == 400);
  CHECK(h.distance({{"word", "aspirin"}, {"top", "3x"}}).status == 400);
  const HttpResponse missing = h.analogy({{"a", "aspirin"}});
  CHECK(missing.status == 400);
  CHECK(nlohmann::json::parse(missing.body)["parameters"] == nlohmann::json{"b", "c"});

  const HttpResponse unknown = h.distance({{"word", "zzz"}});
  CHECK(unknown.status == 404);
  CHECK(nlohmann::json::parse(unknown.body)["word"] == "zzz");
  const HttpResponse unknown3 = h.analogy({{"a", "q1"}, {"b", "aspirin"}, {"c", "q2"}});
  CHECK(unknown3.status == 404);
  CHECK(nlohmann::json::parse(unknown3.body)["words"] == nlohmann::json{"q1", "q2"});
}

TEST_CASE("results match the CLI text byte for byte") {
  const auto store = toy_store();
  QueryHandler h;
  h.set_store(store);
  const HttpResponse d = h.distance({{"word", "aspirin"}, {"top", "3"}});
  REQUIRE(d.status == 200);
  CHECK(lines_from_body(d.body) == medvec::format_result_lines(store->distance("aspirin", 3)));
  const auto doc = nlohmann::json::parse(d.body);
  CHECK(doc["query"]["word"] == "aspirin");
  CHECK(doc["results"].size() == 3);

  const HttpResponse a = h.analogy({{"a", "headache"}, {"b", "aspirin"}, {"c", "ibuprofen"}});
  REQUIRE(a.status == 200);
  CHECK(lines_from_body(a.body) ==
        medvec::format_result_lines(store->analogy("headache", "aspirin", "ibuprofen", 40)));
}

TEST_CASE("default top is 40") {
  std::mt19937_64 rng(6);
  const auto m = medvec::testing::random_model(100, 5, rng);
  QueryHandler h;
  h.set_store(std::make_shared<const medvec::VectorStore>(m.store()));
  const auto doc = nlohmann::json::parse(h.distance({{"word", m.words[0]}}).body);
  CHECK(doc["results"].size() == 40);
  CHECK(doc["query"]["top"] == 40);
}

TEST_CASE("format_similarity uses six decimals") {
  CHECK(medvec::format_similarity(0.5) == "0.500000");
  CHECK(medvec::format_similarity(-1.0 / 3) == "-0.333333");
}

TEST_CASE("service config validation") {
  medvec::ServiceConfig c;
  c.port = 70000;
  CHECK_THROWS_AS(c.validate(), medvec::ConfigError);
  c.port = 8080;
  c.request_timeout = std::chrono::seconds(0);
  CHECK_THROWS_AS(c.validate(), medvec::ConfigError);
}

TEST_CASE("HTTP round trip on an ephemeral port") {
  medvec::ServiceConfig config;
  config.port = 0;
  medvec::QueryService service(config);
  const int port = service.bind();
  REQUIRE(port > 0);
  std::thread server([&] { service.serve(); });

  httplib::Client client("127.0.0.1", port);
  client.set_connection_timeout(5);
  httplib::Result loading;
  for (int attempt = 0; attempt < 100 && !loading; ++attempt) {
    loading = client.Get("/health");
    if (!loading) std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  REQUIRE(loading);
  CHECK(loading->status == 503);

  const auto store = toy_store();
  service.set_store(store);
  auto r = client.Get("/distance?word=fever&top=2");
  REQUIRE(r);
  CHECK(r->status == 200);
  CHECK(lines_from_body(r->body) == medvec::format_result_lines(store->distance("fever", 2)));
  r = client.Get("/analogy?a=headache&b=aspirin&c=nothere");
  REQUIRE(r);
  CHECK(r->status == 404);
  r = client.Get("/elsewhere");
  REQUIRE(r);
  CHECK(r->status == 404);
  CHECK(nlohmann::json::parse(r->body).contains("error"));

  service.stop();
  server.join();
}

}  // TEST_SUITE
