// tests/unit/service_test.cc

// Copyright 2026 The interp Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "fixtures.h"
#include "interp/errors.h"
#include "interp/models/checkpoint.h"
#include "interp/service/api.h"
#include "interp/service/config.h"
#include "interp/service/server.h"

namespace interp::service {
namespace {

using nlohmann::json;

std::shared_ptr<ModelRegistry> TestRegistry() {
  auto registry = std::make_shared<ModelRegistry>();
  registry->Add("sentiment", std::shared_ptr<const Model>(testing::SentimentModel().Clone()));
  registry->Add("ner", std::shared_ptr<const Model>(testing::TaggerModel().Clone()));
  return registry;
}

class ServiceTest : public ::testing::Test {
 protected:
  ServiceTest() : service_(TestRegistry(), MethodDefaults::BuiltIn(), Limits{}) {}

  Response Post(const std::string& path, const json& body) const {
    return service_.Handle("POST", path, body.dump());
  }
  static json Body(const Response& r) { return json::parse(r.body); }

  Service service_;
};

TEST_F(ServiceTest, ModelsSortedByName) {
  const Response r = service_.Handle("GET", "/models", "");
  EXPECT_EQ(r.status, 200);
  const json body = Body(r);
  ASSERT_EQ(body.size(), 2u);
  EXPECT_EQ(body[0]["name"], "ner");
  EXPECT_EQ(body[0]["task"], "tagging");
  EXPECT_EQ(body[0]["labels"], json({"O", "LOC", "PER", "ORG"}));
  EXPECT_EQ(body[1]["name"], "sentiment");
  EXPECT_EQ(body[1]["task"], "classification");
}

TEST(Service, EmptyRegistry) {
  const Service service(std::make_shared<ModelRegistry>(), MethodDefaults::BuiltIn(), Limits{});
  const Response r = service.Handle("GET", "/models", "");
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(r.body, "[]");
}

TEST_F(ServiceTest, Predict) {
  const Response r = Post("/predict", {{"model", "sentiment"}, {"input", "this demo is amazing!"}});
  ASSERT_EQ(r.status, 200);
  const json body = Body(r);
  EXPECT_EQ(body["tokens"].size(), 5u);
  EXPECT_EQ(body["probabilities"].size(), 2u);
  EXPECT_EQ(body["prediction"], "positive");
}

TEST_F(ServiceTest, PredictMatchesLibrary) {
  const json request = {{"model", "ner"}, {"input", "we met jordan in paris"}};
  json library_request = request;
  library_request.erase("model");
  EXPECT_EQ(Post("/predict", request).body,
            PredictPayload(testing::TaggerModel(), library_request).dump());
}

TEST_F(ServiceTest, ErrorStatuses) {
  const Response unknown = Post("/predict", {{"model", "nope"}, {"input", "hi"}});
  EXPECT_EQ(unknown.status, 404);
  EXPECT_EQ(unknown.body, R"({"error":"unknown model"})");
  EXPECT_EQ(Post("/predict", {{"model", "sentiment"}, {"input", ""}}).status, 422);
  EXPECT_EQ(Post("/predict", {{"model", "sentiment"}}).status, 400);
  EXPECT_EQ(Post("/predict", {{"model", "sentiment"}, {"input", 5}}).status, 400);
  EXPECT_EQ(Post("/predict", {{"input", "hi"}}).status, 400);
  EXPECT_EQ(service_.Handle("POST", "/predict", "{not json").status, 400);
  EXPECT_EQ(service_.Handle("POST", "/predict", "[1,2]").status, 400);
  EXPECT_EQ(service_.Handle("GET", "/predict", "").status, 405);
  EXPECT_EQ(service_.Handle("GET", "/nowhere", "").status, 404);
}

TEST_F(ServiceTest, SizeLimits) {
  std::string big(11 * 1024, 'a');
  const Response too_big = Post("/predict", {{"model", "sentiment"}, {"input", big}});
  EXPECT_EQ(too_big.status, 413);
  std::string many;
  for (int i = 0; i < 257; ++i) many += "ok ";
  EXPECT_EQ(Post("/predict", {{"model", "sentiment"}, {"input", many}}).status, 422);
  std::string enough;
  for (int i = 0; i < 256; ++i) enough += "ok ";
  EXPECT_EQ(Post("/predict", {{"model", "sentiment"}, {"input", enough}}).status, 200);
}

TEST_F(ServiceTest, ErrorBodiesAreJsonWithErrorField) {
  for (const auto& r : {Post("/interpret", {{"model", "sentiment"}, {"input", "x"}, {"method", "lime"}}),
                        Post("/predict", {{"model", "sentiment"}, {"input", ""}}),
                        service_.Handle("POST", "/attack", "nonsense")}) {
    const json body = Body(r);
    ASSERT_TRUE(body.contains("error"));
    EXPECT_TRUE(body["error"].is_string());
  }
}

TEST(ErrorResponse, UnexpectedErrorsAreOpaque) {
  const Response r = ErrorResponse(std::runtime_error("secret detail"));
  EXPECT_EQ(r.status, 500);
  EXPECT_EQ(r.body, R"({"error":"internal error"})");
}

TEST_F(ServiceTest, InterpretClassificationGivesOneMap) {
  const Response r = Post("/interpret", {{"model", "sentiment"}, {"input", "a great film"}, {"method", "vanilla"}});
  ASSERT_EQ(r.status, 200);
  const json body = Body(r);
  ASSERT_TRUE(body.is_object());
  EXPECT_EQ(body["method"], "vanilla");
  EXPECT_EQ(body["scores"].size(), 3u);
}

TEST_F(ServiceTest, InterpretTaggingGivesOneMapPerEntity) {
  const Response r =
      Post("/interpret", {{"model", "ner"}, {"input", "we met jordan in paris"}, {"method", "integrated"}});
  ASSERT_EQ(r.status, 200);
  const json body = Body(r);
  ASSERT_TRUE(body.is_array());
  ASSERT_EQ(body.size(), 2u);
  EXPECT_EQ(body[0]["instance"]["label"], "PER");
  EXPECT_EQ(body[0]["instance"]["positions"], json({2}));
  EXPECT_EQ(body[1]["instance"]["label"], "LOC");
  EXPECT_EQ(body[1]["instance"]["positions"], json({4}));
  const Response one = Post("/interpret", {{"model", "ner"},
                                           {"input", "we met jordan in paris"},
                                           {"method", "integrated"},
                                           {"instance_index", 1}});
  ASSERT_EQ(one.status, 200);
  EXPECT_EQ(Body(one), body[1]);
  EXPECT_EQ(Post("/interpret", {{"model", "ner"},
                                {"input", "we met jordan in paris"},
                                {"method", "vanilla"},
                                {"instance_index", 2}})
                .status,
            400);
}

TEST_F(ServiceTest, InterpretValidation) {
  const json base = {{"model", "sentiment"}, {"input", "a great film"}};
  json lime = base;
  lime["method"] = "lime";
  EXPECT_EQ(Post("/interpret", lime).status, 400);
  json bad_key = base;
  bad_key["method"] = "integrated";
  bad_key["config"] = {{"samples", 3}};
  EXPECT_EQ(Post("/interpret", bad_key).status, 400);
  json bad_value = base;
  bad_value["method"] = "integrated";
  bad_value["config"] = {{"steps", 0}};
  EXPECT_EQ(Post("/interpret", bad_value).status, 400);
  json no_method = base;
  EXPECT_EQ(Post("/interpret", no_method).status, 400);
}

TEST_F(ServiceTest, InterpretConfigOverridesDefaults) {
  json request = {{"model", "sentiment"}, {"input", "a great film"}, {"method", "smoothgrad"},
                  {"config", {{"samples", 3}, {"sigma", 0.0}, {"seed", 4}}}};
  const Response r = Post("/interpret", request);
  ASSERT_EQ(r.status, 200);
  const json vanilla = Body(Post("/interpret", {{"model", "sentiment"}, {"input", "a great film"}, {"method", "vanilla"}}));
  EXPECT_EQ(Body(r)["scores"], vanilla["scores"]);
}

TEST_F(ServiceTest, AttackContracts) {
  const Response no_target =
      Post("/attack", {{"model", "sentiment"}, {"input", "a great film"}, {"method", "hotflip_targeted"}});
  EXPECT_EQ(no_target.status, 400);
  const Response bad_target = Post("/attack", {{"model", "sentiment"},
                                               {"input", "a great film"},
                                               {"method", "hotflip_targeted"},
                                               {"config", {{"target_label", "neutral"}}}});
  EXPECT_EQ(bad_target.status, 400);

  const Response reduce = Post("/attack", {{"model", "sentiment"}, {"input", "great"}, {"method", "input_reduction"}});
  ASSERT_EQ(reduce.status, 200);
  EXPECT_EQ(Body(reduce)["success"], true);
  EXPECT_EQ(Body(reduce)["final_tokens"], json({"great"}));
  EXPECT_EQ(Body(reduce)["steps_used"], 0);

  const Response flip = Post("/attack", {{"model", "sentiment"}, {"input", "a great film"}, {"method", "hotflip"}});
  ASSERT_EQ(flip.status, 200);
  const json body = Body(flip);
  EXPECT_TRUE(!body["trace"].empty() || (body["success"] == true && body["steps_used"] == 0));

  const Response targeted = Post("/attack", {{"model", "sentiment"},
                                             {"input", "a great film"},
                                             {"method", "hotflip_targeted"},
                                             {"config", {{"target_label", "negative"}}}});
  ASSERT_EQ(targeted.status, 200);
  EXPECT_EQ(Body(targeted)["method"], "hotflip_targeted");

  EXPECT_EQ(Post("/attack", {{"model", "sentiment"}, {"input", "a great film"}, {"method", "fgsm"}}).status,
            400);
}

TEST_F(ServiceTest, RequestsAreStateless) {
  const json a = {{"model", "ner"}, {"input", "she joined acme corp"}, {"method", "input_reduction"}};
  const json b = {{"model", "sentiment"}, {"input", "awful plot"}, {"method", "smoothgrad"}};
  const std::string first = Post("/attack", a).body;
  Post("/interpret", b);
  Post("/attack", {{"model", "sentiment"}, {"input", "awful plot"}, {"method", "hotflip"}});
  EXPECT_EQ(Post("/attack", a).body, first);
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() / ("interp_svc_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  void Write(const std::string& name, const std::string& text) {
    std::ofstream(dir_ / name) << text;
  }
  std::filesystem::path dir_;
};

TEST_F(TempDir, ParseConfigWithComments) {
  const std::string text = R"({
    // comment
    "bind": {"host": "0.0.0.0", "port": 9000},
    "cors_origin": "http://localhost:5173",
    "limits": {"max_tokens": 64},
    "models": [{"name": "s", "checkpoint": "m/s.ckpt"}],
    "defaults": {"integrated": {"steps": 32}}
  })";
  const ServiceConfig config = ParseServiceConfig(text, dir_, std::nullopt);
  EXPECT_EQ(config.host, "0.0.0.0");
  EXPECT_EQ(config.port, 9000);
  EXPECT_EQ(config.cors_origin, "http://localhost:5173");
  EXPECT_EQ(config.limits.max_tokens, 64u);
  EXPECT_EQ(config.limits.max_request_bytes, 10240u);
  ASSERT_EQ(config.models.size(), 1u);
  EXPECT_EQ(config.models[0].second, dir_ / "m/s.ckpt");
  EXPECT_EQ(config.defaults.configs["integrated"]["steps"], 32);
  EXPECT_EQ(config.defaults.configs["smoothgrad"]["samples"], 10);
}

TEST_F(TempDir, BindOverride) {
  const ServiceConfig config = ParseServiceConfig("{}", dir_, std::string("10.0.0.1:7001"));
  EXPECT_EQ(config.host, "10.0.0.1");
  EXPECT_EQ(config.port, 7001);
  EXPECT_THROW(ParseServiceConfig("{}", dir_, std::string("nohost")), ConfigError);
  EXPECT_THROW(ParseServiceConfig("{}", dir_, std::string("h:80x")), ConfigError);
  // Range is the server's concern: an unusable port is a bind failure.
  EXPECT_EQ(ParseServiceConfig("{}", dir_, std::string("h:70000")).port, 70000);

  Write("svc.json", R"({"bind": {"port": 1234}})");
  ::setenv(kBindEnvVar, "127.0.0.1:4321", 1);
  const ServiceConfig from_env = LoadServiceConfig(dir_ / "svc.json");
  ::unsetenv(kBindEnvVar);
  EXPECT_EQ(from_env.port, 4321);
  EXPECT_EQ(LoadServiceConfig(dir_ / "svc.json").port, 1234);
}

TEST_F(TempDir, BadConfigs) {
  EXPECT_THROW(ParseServiceConfig("{", dir_, std::nullopt), ConfigError);
  EXPECT_THROW(ParseServiceConfig("[]", dir_, std::nullopt), ConfigError);
  EXPECT_THROW(ParseServiceConfig(R"({"models": [{"name": "x"}]})", dir_, std::nullopt), ConfigError);
  EXPECT_THROW(ParseServiceConfig(R"({"defaults": {"lime": {}}})", dir_, std::nullopt), ConfigError);
  EXPECT_THROW(ParseServiceConfig(R"({"bind": {"port": "http"}})", dir_, std::nullopt), ConfigError);
  EXPECT_THROW(LoadServiceConfig(dir_ / "missing.json"), ConfigError);
}

TEST_F(TempDir, UnloadableCheckpointNamesEntry) {
  Write("broken.ckpt", "not a checkpoint");
  ServiceConfig config;
  config.models = {{"good", dir_ / "good.ckpt"}, {"broken", dir_ / "broken.ckpt"}};
  models::SaveCheckpoint(testing::SentimentModel(), dir_ / "good.ckpt");
  try {
    BuildRegistry(config);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("broken"), std::string::npos);
  }
}

TEST(HttpServer, ServesSameBytesAsHandler) {
  auto service = std::make_shared<const Service>(TestRegistry(), MethodDefaults::BuiltIn(), Limits{});
  HttpServer server(service, "http://ui.example");
  ASSERT_TRUE(server.Bind("127.0.0.1", 0));
  ASSERT_GT(server.port(), 0);
  std::thread thread([&] { server.Serve(); });

  httplib::Client client("127.0.0.1", server.port());
  const auto models = client.Get("/models");
  ASSERT_TRUE(models);
  EXPECT_EQ(models->status, 200);
  EXPECT_EQ(models->body, service->Handle("GET", "/models", "").body);
  EXPECT_EQ(models->get_header_value("Access-Control-Allow-Origin"), "http://ui.example");
  EXPECT_EQ(models->get_header_value("Content-Type"), "application/json");

  const std::string request =
      json{{"model", "ner"}, {"input", "we met jordan in paris"}, {"method", "smoothgrad"}}.dump();
  const auto interpret = client.Post("/interpret", request, "application/json");
  ASSERT_TRUE(interpret);
  EXPECT_EQ(interpret->status, 200);
  EXPECT_EQ(interpret->body, service->Handle("POST", "/interpret", request).body);

  const auto missing = client.Post("/predict", R"({"model":"x","input":"a"})", "application/json");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);
  EXPECT_EQ(missing->body, R"({"error":"unknown model"})");

  const auto preflight = client.Options("/attack");
  ASSERT_TRUE(preflight);
  EXPECT_LT(preflight->status, 300);
  EXPECT_FALSE(preflight->get_header_value("Access-Control-Allow-Methods").empty());

  server.Stop();
  thread.join();
  EXPECT_FALSE(server.running());
}

TEST(HttpServer, BindFailureReported) {
  auto service = std::make_shared<const Service>(std::make_shared<ModelRegistry>(),
                                                 MethodDefaults::BuiltIn(), Limits{});
  HttpServer first(service, "*");
  ASSERT_TRUE(first.Bind("127.0.0.1", 0));
  HttpServer second(service, "*");
  EXPECT_FALSE(second.Bind("127.0.0.1", first.port()));
  EXPECT_FALSE(second.Bind("127.0.0.1", 70000));
  EXPECT_FALSE(second.Bind("127.0.0.1", -1));
}

}  // namespace
}  // namespace interp::service
