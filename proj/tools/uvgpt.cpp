// Copyright 2026 The UVGPT Authors
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


// uvgpt: command-line front end.
//
//   uvgpt process --prompt "<text>" [--integrate|--no-integrate] [--trace out.jsonl]
//                 [--dump-plan] <image...>
//   uvgpt serve  [--port N]
//   uvgpt worker --model NAME [--port N] [--fixtures DIR]
//
// Exit codes: 0 success, 1 usage error, 2 execution failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "uvgpt/core/json.hpp"
#include "uvgpt/gateway/gateway.hpp"
#include "uvgpt/gateway/image_io.hpp"
#include "uvgpt/gateway/server.hpp"
#include "uvgpt/worker/http_worker.hpp"
#include "uvgpt/worker/mock_worker.hpp"

namespace {

using namespace uvgpt;

constexpr int kUsage = 1;
constexpr int kFailed = 2;

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

Registry load_registry(const std::string& path) {
  if (!path.empty()) return load_registry_file(path);
  if (const auto p = env("UVGPT_REGISTRY")) return load_registry_file(*p);
  return builtin_registry();
}

// UVGPT_WORKERS holds either a path to the worker list or the JSON itself.
BackendMap load_backends(const Registry& registry, const std::string& fixtures) {
  const auto workers = env("UVGPT_WORKERS");
  if (!workers) return mock_backends(registry, fixtures);
  const auto first = workers->find_first_not_of(" \t\n");
  const Json list = first != std::string::npos && (*workers)[first] == '['
                        ? Json::parse(*workers)
                        : Json::parse(read_binary_file(*workers));
  return backends_from_json(list, registry);
}

void write_trace(const std::string& path, const ExecutionTrace& trace) {
  if (path.empty()) return;
  std::ofstream out(path, std::ios::trunc);
  out << trace_to_jsonl(trace);
}

struct Common {
  std::string registry;
  std::string fixtures;
};

int run_process(const Common& common, const std::string& prompt,
                const std::vector<std::string>& images, std::optional<bool> integrate,
                const std::string& trace_path, bool dump_plan, const std::string& output_dir) {
  if (images.empty()) {
    std::cerr << "uvgpt process: at least one image is required\n";
    return kUsage;
  }
  GatewayConfig config = config_from_env();
  if (!output_dir.empty()) config.output_dir = output_dir;
  const Registry registry = load_registry(common.registry);
  Pipeline pipeline(registry, load_backends(registry, common.fixtures), config);

  GeneralizedRequest request;
  request.prompt = prompt;
  for (const auto& p : images) request.images.push_back({p, {}, {}});
  request.options.integrate = integrate;
  if (dump_plan) {
    request.options.on_plan = [](const TaskPlan& plan) {
      std::cout << plan_to_json(plan).dump(2) << std::endl;
    };
  }
  try {
    const auto result = pipeline.process(request);
    write_trace(trace_path, result.execution.trace);
    std::cout << result.manifest.dump(2) << std::endl;
    return 0;
  } catch (const GatewayError& e) {
    std::cerr << "uvgpt: " << to_string(e.code()) << ": " << e.what() << "\n";
    if (e.trace()) {
      write_trace(trace_path, *e.trace());
      std::cerr << trace_to_jsonl(*e.trace());
    }
    return http_status(e.code()) == 400 ? kUsage : kFailed;
  }
}

int run_serve(const Common& common, std::optional<int> port) {
  GatewayConfig config = config_from_env();
  const Registry registry = load_registry(common.registry);
  auto pipeline = std::make_shared<const Pipeline>(registry, load_backends(registry, common.fixtures),
                                                   config);
  GatewayServer server(pipeline);
  const int p = port.value_or(config.port);
  std::cerr << "uvgpt gateway listening on 0.0.0.0:" << p << std::endl;
  server.listen(p);
  return 0;
}

int run_worker(const Common& common, const std::string& model, int port) {
  const Registry registry = load_registry(common.registry);
  const auto descriptor = registry.find(model);
  if (!descriptor) {
    std::cerr << "uvgpt worker: unknown model " << model << "\n";
    return kUsage;
  }
  auto store = std::make_shared<const FixtureStore>(common.fixtures);
  auto backend = std::make_shared<MockWorker>(*descriptor, store, fault_mode_from_env(model));
  WorkerServer server(backend);
  std::cerr << "uvgpt worker " << model << " listening on 0.0.0.0:" << port << std::endl;
  server.listen(port);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vision task orchestrator"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--registry", common.registry, "Model registry JSON (default: UVGPT_REGISTRY or built-in mocks)");
  app.add_option("--fixtures", common.fixtures, "Directory of <stem>.truth.json files for mock workers");

  auto* process = app.add_subcommand("process", "Run a prompt over images");
  std::string prompt;
  std::vector<std::string> images;
  bool integrate = false;
  bool no_integrate = false;
  std::string trace_path;
  std::string output_dir;
  bool dump_plan = false;
  process->add_option("--prompt", prompt, "Instruction text")->required();
  process->add_option("images", images, "Input images (.ppm or .png)");
  auto* yes = process->add_flag("--integrate", integrate, "Combine all outputs into one image");
  process->add_flag("--no-integrate", no_integrate, "Keep per-image outputs only")->excludes(yes);
  process->add_option("--trace", trace_path, "Write the execution trace as JSON lines");
  process->add_option("--output-dir", output_dir, "Where annotated files go (default: next to inputs)");
  process->add_flag("--dump-plan", dump_plan, "Print the task plan before executing");

  auto* serve = app.add_subcommand("serve", "Run the HTTP gateway");
  std::optional<int> port;
  serve->add_option("--port", port, "Listen port (default: UVGPT_PORT or 8080)");

  auto* worker = app.add_subcommand("worker", "Serve a mock model worker over HTTP");
  std::string model;
  int worker_port = 9000;
  worker->add_option("--model", model, "Registry name of the model")->required();
  worker->add_option("--port", worker_port, "Listen port");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*process) {
      std::optional<bool> want;
      if (integrate) want = true;
      if (no_integrate) want = false;
      return run_process(common, prompt, images, want, trace_path, dump_plan, output_dir);
    }
    if (*serve) return run_serve(common, port);
    if (*worker) return run_worker(common, model, worker_port);
  } catch (const std::exception& e) {
    std::cerr << "uvgpt: " << e.what() << "\n";
    return kFailed;
  }
  return kUsage;
}
