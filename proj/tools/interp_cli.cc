// tools/interp_cli.cc

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

// Command-line entry points: dataset generation, training, batch
// prediction/interpretation/attacks over JSONL, and the HTTP service.
//
// Exit codes: 0 ok, 1 some batch lines failed, 2 bad flags or config,
// 3 training diverged, 4 the service could not bind.

#include <csignal>
#include <atomic>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "interp/errors.h"
#include "interp/models/architectures.h"
#include "interp/models/checkpoint.h"
#include "interp/models/datasets.h"
#include "interp/models/training.h"
#include "interp/service/api.h"
#include "interp/service/config.h"
#include "interp/service/server.h"

namespace {

using json = nlohmann::json;
using namespace interp;

constexpr int kExitOk = 0;
constexpr int kExitLineErrors = 1;
constexpr int kExitBadConfig = 2;
constexpr int kExitDiverged = 3;
constexpr int kExitBindFailed = 4;

struct TrainOptions {
  std::string config;
  std::string out;
  std::string metrics;
};

struct BatchOptions {
  std::string model;
  std::string method;
  std::string in = "-";
  std::string out = "-";
  std::size_t jobs = 1;
  std::optional<std::size_t> steps, samples, max_flips, max_iterations;
  std::optional<double> sigma;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> target;
};

template <typename T>
T ConfigField(const json& object, const char* key, T fallback) {
  if (!object.contains(key)) return fallback;
  try {
    return object[key].get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("field \"") + key + "\" has the wrong type");
  }
}

int RunTrain(const TrainOptions& opts) {
  json config;
  std::filesystem::path base;
  models::Dataset dataset;
  models::ModelSpec spec;
  models::TrainConfig train;
  std::uint64_t model_seed = 0;
  std::filesystem::path output;
  try {
    std::ifstream in(opts.config);
    if (!in) throw ConfigError("cannot read config " + opts.config);
    try {
      config = json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!config.is_object()) throw ConfigError("config must be a JSON object");
    base = std::filesystem::path(opts.config).parent_path();

    const json data = ConfigField<json>(config, "dataset", json::object());
    const auto generator = ConfigField<std::string>(data, "generator", "classification");
    const auto data_seed = ConfigField<std::uint64_t>(data, "seed", 0);
    const auto n = ConfigField<std::size_t>(data, "n", 2000);
    if (generator == "classification") {
      dataset = models::MakeSyntheticClassification(data_seed, n);
    } else if (generator == "tagging") {
      dataset = models::MakeSyntheticTagging(data_seed, n);
    } else {
      throw ConfigError("unknown dataset generator \"" + generator + "\"");
    }

    const auto arch_default =
        dataset.task == models::TaskKind::kTagging ? "tagger" : "mean_pool";
    try {
      spec.arch = models::ParseArchitecture(
          ConfigField<std::string>(config, "architecture", arch_default));
    } catch (const SchemaError& e) {
      throw ConfigError(e.what());
    }
    if (models::TaskOf(spec.arch) != dataset.task) {
      throw ConfigError("architecture does not fit the dataset's task");
    }
    spec.vocab = models::BuildVocabulary(dataset);
    spec.labels = dataset.labels;
    spec.embedding_dim = ConfigField<std::size_t>(config, "embedding_dim", 32);
    spec.hidden_dim = ConfigField<std::size_t>(config, "hidden_dim", 32);
    model_seed = ConfigField<std::uint64_t>(config, "model_seed", 0);

    const json t = ConfigField<json>(config, "training", json::object());
    train.epochs = ConfigField<std::size_t>(t, "epochs", 8);
    train.learning_rate = ConfigField<double>(t, "learning_rate", 0.5);
    train.batch_size = ConfigField<std::size_t>(t, "batch_size", 16);
    train.seed = ConfigField<std::uint64_t>(t, "seed", 0);
    if (train.batch_size == 0 || spec.embedding_dim == 0 || spec.hidden_dim == 0) {
      throw ConfigError("batch_size and dimensions must be positive");
    }

    if (!opts.out.empty()) {
      output = opts.out;
    } else {
      const auto out = ConfigField<std::string>(config, "output", "");
      if (out.empty()) throw ConfigError("config needs \"output\" (or pass --out)");
      output = std::filesystem::path(out).is_relative() ? base / out
                                                        : std::filesystem::path(out);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadConfig;
  } catch (const ContractError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadConfig;
  }

  models::TrainMetrics metrics;
  auto model = models::CreateModel(spec, model_seed);
  try {
    metrics = models::Train(*model, dataset, train);
  } catch (const TrainingDivergedError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDiverged;
  }
  try {
    models::SaveCheckpoint(*model, output);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadConfig;
  }

  nlohmann::ordered_json report;
  report["final_train_loss"] = metrics.final_train_loss;
  report["heldout_accuracy"] = metrics.heldout_accuracy;
  report["epoch_losses"] = metrics.epoch_losses;
  report["checkpoint"] = output.string();
  std::cout << report.dump() << '\n';
  if (!opts.metrics.empty()) {
    std::ofstream(opts.metrics) << report.dump() << '\n';
  }
  std::cerr << "trained " << models::ArchitectureName(spec.arch)
            << ": heldout_accuracy=" << metrics.heldout_accuracy << '\n';
  return kExitOk;
}

int RunGenerate(const std::string& task, std::uint64_t seed, std::size_t n,
                const std::string& train_out, const std::string& heldout_out) {
  models::Dataset dataset;
  try {
    if (task == "classification") {
      dataset = models::MakeSyntheticClassification(seed, n);
    } else if (task == "tagging") {
      dataset = models::MakeSyntheticTagging(seed, n);
    } else {
      std::cerr << "error: unknown task \"" << task << "\"\n";
      return kExitBadConfig;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadConfig;
  }
  auto emit = [&](const std::string& path, const std::vector<models::Example>& ex) {
    if (path == "-") {
      models::WriteJsonl(std::cout, ex, dataset.task);
    } else {
      std::ofstream out(path);
      models::WriteJsonl(out, ex, dataset.task);
    }
  };
  emit(train_out, dataset.train);
  if (!heldout_out.empty()) emit(heldout_out, dataset.heldout);
  return kExitOk;
}

enum class BatchKind { kPredict, kInterpret, kAttack };

json FlagConfig(const BatchOptions& opts) {
  json cfg = json::object();
  if (opts.steps) cfg["steps"] = *opts.steps;
  if (opts.samples) cfg["samples"] = *opts.samples;
  if (opts.sigma) cfg["sigma"] = *opts.sigma;
  if (opts.seed) cfg["seed"] = *opts.seed;
  if (opts.max_flips) cfg["max_flips"] = *opts.max_flips;
  if (opts.max_iterations) cfg["max_iterations"] = *opts.max_iterations;
  if (opts.target) cfg["target_label"] = *opts.target;
  return cfg;
}

// Output lines for one input line.
std::vector<std::string> ProcessLine(BatchKind kind, const models::Model& model,
                                     const BatchOptions& opts,
                                     const json& flag_config,
                                     const service::MethodDefaults& defaults,
                                     const std::string& line, bool& failed) {
  try {
    json request = json::parse(line);
    if (!request.is_object()) throw SchemaError("request body must be a JSON object");
    request.erase("model");
    nlohmann::ordered_json payload;
    if (kind == BatchKind::kPredict) {
      payload = service::PredictPayload(model, request);
    } else {
      request["method"] = opts.method;
      if (!flag_config.empty()) {
        json cfg = request.value("config", json::object());
        if (!cfg.is_object()) throw SchemaError("\"config\" must be an object");
        for (const auto& [k, v] : flag_config.items()) cfg[k] = v;
        request["config"] = cfg;
      }
      payload = kind == BatchKind::kInterpret
                    ? service::InterpretPayload(model, request, defaults)
                    : service::AttackPayload(model, request, defaults);
    }
    std::vector<std::string> out;
    if (payload.is_array()) {
      for (const auto& item : payload) out.push_back(item.dump());
    } else {
      out.push_back(payload.dump());
    }
    return out;
  } catch (const std::exception& e) {
    failed = true;
    return {service::ErrorResponse(e).body};
  }
}

int RunBatch(BatchKind kind, const BatchOptions& opts) {
  std::unique_ptr<models::Model> model;
  try {
    model = models::LoadCheckpoint(opts.model);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadConfig;
  }
  std::vector<std::string> lines;
  {
    std::ifstream file;
    std::istream* in = &std::cin;
    if (opts.in != "-") {
      file.open(opts.in);
      if (!file) {
        std::cerr << "error: cannot read " << opts.in << '\n';
        return kExitBadConfig;
      }
      in = &file;
    }
    for (std::string line; std::getline(*in, line);) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      lines.push_back(std::move(line));
    }
  }

  const json flag_config = FlagConfig(opts);
  const auto defaults = service::MethodDefaults::BuiltIn();
  std::vector<std::vector<std::string>> results(lines.size());
  std::vector<char> failed(lines.size(), 0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < lines.size(); i = next++) {
      bool f = false;
      results[i] = ProcessLine(kind, *model, opts, flag_config, defaults, lines[i], f);
      failed[i] = f;
    }
  };
  const std::size_t jobs = std::max<std::size_t>(1, opts.jobs);
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (opts.out != "-") {
    file.open(opts.out);
    if (!file) {
      std::cerr << "error: cannot write " << opts.out << '\n';
      return kExitBadConfig;
    }
    out = &file;
  }
  std::size_t failures = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (const auto& l : results[i]) *out << l << '\n';
    if (failed[i]) {
      ++failures;
      std::cerr << "line " << (i + 1) << ": " << results[i].front() << '\n';
    }
  }
  out->flush();
  return failures == 0 ? kExitOk : kExitLineErrors;
}

int RunServe(const std::string& config_path) {
  service::ServiceConfig config;
  std::shared_ptr<service::ModelRegistry> registry;
  try {
    config = service::LoadServiceConfig(config_path);
    registry = service::BuildRegistry(config);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadConfig;
  }

  // Signals are taken synchronously by a dedicated thread.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  auto svc = std::make_shared<service::Service>(registry, config.defaults,
                                                config.limits);
  service::HttpServer server(svc, config.cors_origin);
  if (!server.Bind(config.host, config.port)) {
    std::cerr << "error: cannot bind " << config.host << ':' << config.port << '\n';
    return kExitBindFailed;
  }
  std::cerr << "listening on " << config.host << ':' << server.port() << '\n';

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    std::cerr << "shutting down\n";
    server.Stop();
  });
  server.Serve();
  // Serve only returns after Stop, which only the waiter calls.
  waiter.join();
  return kExitOk;
}

void AddBatchFlags(CLI::App* cmd, BatchOptions& opts, bool needs_method) {
  cmd->add_option("--model", opts.model, "checkpoint file")->required();
  if (needs_method) cmd->add_option("--method", opts.method, "method name")->required();
  cmd->add_option("--in", opts.in, "input JSONL, '-' for stdin");
  cmd->add_option("--out", opts.out, "output JSONL, '-' for stdout");
  cmd->add_option("--jobs", opts.jobs, "worker threads");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gradient-based interpretation and attacks for small text models"};
  app.require_subcommand(1);

  TrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "train a model from a config file");
  train_cmd->add_option("--config", train.config, "training config (JSON)")->required();
  train_cmd->add_option("--out", train.out, "checkpoint path, overrides the config");
  train_cmd->add_option("--metrics", train.metrics, "also write metrics JSON here");

  std::string gen_task = "classification", gen_train = "-", gen_heldout;
  std::uint64_t gen_seed = 0;
  std::size_t gen_n = 1000;
  auto* gen_cmd = app.add_subcommand("generate", "emit a synthetic dataset as JSONL");
  gen_cmd->add_option("--task", gen_task, "classification or tagging");
  gen_cmd->add_option("--seed", gen_seed);
  gen_cmd->add_option("--n", gen_n);
  gen_cmd->add_option("--train-out", gen_train, "train split, '-' for stdout");
  gen_cmd->add_option("--heldout-out", gen_heldout, "held-out split");

  BatchOptions predict_opts, interpret_opts, attack_opts;
  auto* predict_cmd = app.add_subcommand("predict", "batch predictions over JSONL");
  AddBatchFlags(predict_cmd, predict_opts, false);

  auto* interpret_cmd =
      app.add_subcommand("interpret", "batch saliency maps (vanilla, integrated, smoothgrad)");
  AddBatchFlags(interpret_cmd, interpret_opts, true);
  interpret_cmd->add_option("--steps", interpret_opts.steps, "integrated gradients steps");
  interpret_cmd->add_option("--samples", interpret_opts.samples, "smoothgrad samples");
  interpret_cmd->add_option("--sigma", interpret_opts.sigma, "smoothgrad noise stddev");
  interpret_cmd->add_option("--seed", interpret_opts.seed, "smoothgrad seed");

  auto* attack_cmd = app.add_subcommand(
      "attack", "batch attacks (hotflip, hotflip_targeted, input_reduction)");
  AddBatchFlags(attack_cmd, attack_opts, true);
  attack_cmd->add_option("--max-flips", attack_opts.max_flips);
  attack_cmd->add_option("--target", attack_opts.target, "target label for hotflip_targeted");
  attack_cmd->add_option("--max-iterations", attack_opts.max_iterations);

  std::string serve_config;
  auto* serve_cmd = app.add_subcommand("serve", "run the JSON HTTP service");
  serve_cmd->add_option("--config", serve_config, "service config (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadConfig;
  }

  if (*train_cmd) return RunTrain(train);
  if (*gen_cmd) return RunGenerate(gen_task, gen_seed, gen_n, gen_train, gen_heldout);
  if (*predict_cmd) return RunBatch(BatchKind::kPredict, predict_opts);
  if (*interpret_cmd) return RunBatch(BatchKind::kInterpret, interpret_opts);
  if (*attack_cmd) return RunBatch(BatchKind::kAttack, attack_opts);
  if (*serve_cmd) return RunServe(serve_config);
  return kExitBadConfig;
}
