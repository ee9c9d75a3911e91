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


#include "uvgpt/gateway/gateway.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "uvgpt/compositor/compositor.hpp"
#include "uvgpt/gateway/image_io.hpp"
#include "uvgpt/parser/parser.hpp"
#include "uvgpt/planner/planner.hpp"
#include "uvgpt/worker/http_worker.hpp"
#include "uvgpt/worker/mock_worker.hpp"

namespace uvgpt {

namespace fs = std::filesystem;

namespace {

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

double env_double(const char* name, double fallback) {
  const auto v = env(name);
  if (!v) return fallback;
  try {
    return std::stod(*v);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string(name) + " is not a number: " + *v);
  }
}

bool blank(const std::string& s) {
  return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

struct LoadedImage {
  ImageRef ref;
  RasterImage raster;
  std::string dir;  // where outputs go
};

LoadedImage load_image(const RequestImage& r, const std::string& output_dir) {
  const std::string name = r.filename.empty() ? r.path : r.filename;
  if (name.empty()) throw GatewayError(GatewayErrc::BadRequest, "image without path or filename");
  if (media_kind_from_name(name) == MediaKind::Video) {
    throw GatewayError(GatewayErrc::UnsupportedMedia, name + ": video input is not supported");
  }
  std::string bytes = r.bytes;
  if (bytes.empty()) {
    if (r.path.empty() || !fs::is_regular_file(r.path)) {
      throw GatewayError(GatewayErrc::BadRequest, "no such image file: " + name);
    }
    bytes = read_binary_file(r.path);
  }
  LoadedImage out;
  try {
    out.raster = decode_image(bytes);
  } catch (const RasterError& e) {
    const auto code = e.code() == RasterErrc::UnsupportedFormat ? GatewayErrc::UnsupportedMedia
                                                               : GatewayErrc::BadRequest;
    throw GatewayError(code, name + ": " + e.what());
  }
  out.ref = {fs::path(name).stem().string(), r.path.empty() ? name : r.path, out.raster.width,
             out.raster.height};
  if (!output_dir.empty()) {
    out.dir = output_dir;
  } else if (r.bytes.empty()) {
    out.dir = fs::path(r.path).parent_path().string();
  }
  if (out.dir.empty()) out.dir = ".";
  return out;
}

std::string join(const std::string& dir, const std::string& file) {
  return (fs::path(dir) / file).string();
}

}  // namespace

GatewayConfig config_from_json(const Json& j, GatewayConfig c) {
  if (const auto it = j.find("selector"); it != j.end()) {
    c.weights.lambda = it->value("lambda", c.weights.lambda);
    c.weights.mu = it->value("mu", c.weights.mu);
    c.weights.nu = it->value("nu", c.weights.nu);
  }
  if (const auto it = j.find("verify"); it != j.end()) {
    c.thresholds.min_confidence = it->value("conf_threshold", c.thresholds.min_confidence);
    c.thresholds.min_mask_iou = it->value("mask_iou", c.thresholds.min_mask_iou);
  }
  if (const auto it = j.find("retry"); it != j.end()) {
    c.retry.max_attempts = it->value("max_attempts", c.retry.max_attempts);
  }
  c.max_parallel = j.value("max_parallel", c.max_parallel);
  c.output_dir = j.value("output_dir", c.output_dir);
  c.port = j.value("port", c.port);
  return c;
}

GatewayConfig config_from_env() {
  GatewayConfig c;
  if (const auto path = env("UVGPT_CONFIG")) {
    std::ifstream in(*path);
    if (!in) throw std::runtime_error("cannot open config " + *path);
    c = config_from_json(Json::parse(in), c);
  }
  c.weights.lambda = env_double("UVGPT_LAMBDA", c.weights.lambda);
  c.weights.mu = env_double("UVGPT_MU", c.weights.mu);
  c.weights.nu = env_double("UVGPT_NU", c.weights.nu);
  c.port = static_cast<int>(env_double("UVGPT_PORT", c.port));
  if (const auto dir = env("UVGPT_OUTPUT_DIR")) c.output_dir = *dir;
  return c;
}

Registry builtin_registry() {
  Registry r;
  r.register_model({"yolo-mock",
                    {Capability::Detect},
                    Vocabulary::fixed({"person", "dog", "cat", "bird", "horse", "sheep", "cow",
                                       "elephant", "bear", "zebra", "giraffe", "frog", "boat",
                                       "car", "bus", "guitar", "lemon", "bridge"}),
                    1.0,
                    0.95});
  r.register_model({"dino-mock", {Capability::Detect}, Vocabulary::open_set(), 3.0, 0.9});
  r.register_model(
      {"sam-mock", {Capability::Segment, Capability::PromptSegment}, Vocabulary::open_set(), 4.0, 0.95});
  return r;
}

BackendMap mock_backends(const Registry& registry, const std::string& fixtures_dir) {
  auto store = std::make_shared<const FixtureStore>(fixtures_dir);
  BackendMap out;
  for (const auto& d : registry.snapshot()) {
    out[d.name] = std::make_shared<MockWorker>(d, store, fault_mode_from_env(d.name));
  }
  return out;
}

BackendMap backends_from_json(const Json& j, const Registry& registry, bool check_remote) {
  if (!j.is_array()) throw std::invalid_argument("worker list must be a JSON array");
  std::map<std::string, std::shared_ptr<const FixtureStore>> stores;
  BackendMap out;
  for (const auto& e : j) {
    const auto name = e.at("name").get<std::string>();
    const auto descriptor = registry.find(name);
    if (!descriptor) {
      throw RegistryError(RegistryErrc::UnknownModel, "worker " + name + " is not registered");
    }
    if (e.value("mock", false)) {
      const auto dir = e.value("fixtures", std::string{});
      auto& store = stores[dir];
      if (!store) store = std::make_shared<const FixtureStore>(dir);
      FaultMode fault = fault_mode_from_env(name);
      if (e.value("fault", std::string{}) == "empty_detections") fault = FaultMode::EmptyDetections;
      if (e.value("fault", std::string{}) == "misaligned_masks") fault = FaultMode::MisalignedMasks;
      out[name] = std::make_shared<MockWorker>(*descriptor, store, fault);
    } else {
      auto worker = std::make_shared<HttpWorker>(
          WorkerEndpoint{name, e.at("url").get<std::string>(), e.value("timeout_ms", 5000)});
      if (check_remote) check_capabilities(*worker, registry);
      out[name] = std::move(worker);
    }
  }
  return out;
}

std::string to_string(GatewayErrc code) {
  switch (code) {
    case GatewayErrc::BadRequest: return "bad_request";
    case GatewayErrc::UnsupportedMedia: return "unsupported_media";
    case GatewayErrc::Infeasible: return "infeasible";
    case GatewayErrc::ExecutionFailed: return "execution_failed";
    case GatewayErrc::TargetNotFound: return "target_not_found";
    case GatewayErrc::NoWorkers: return "no_workers";
  }
  return "unknown";
}

int http_status(GatewayErrc code) {
  switch (code) {
    case GatewayErrc::BadRequest:
    case GatewayErrc::UnsupportedMedia: return 400;
    case GatewayErrc::Infeasible:
    case GatewayErrc::ExecutionFailed:
    case GatewayErrc::TargetNotFound: return 422;
    case GatewayErrc::NoWorkers: return 503;
  }
  return 500;
}

Json GatewayError::body() const {
  Json j = {{"error", {{"code", to_string(code_)}, {"message", what()}}}};
  if (trace_) j["trace"] = trace_to_json(*trace_, true);
  return j;
}

namespace {

RequestOptions options_from_json(const Json& j) {
  RequestOptions o;
  if (j.contains("integrate")) o.integrate = j.at("integrate").get<bool>();
  if (j.contains("conf_threshold")) o.conf_threshold = j.at("conf_threshold").get<double>();
  o.dump_plan = j.value("dump_plan", false);
  o.inline_images = j.value("inline_images", false);
  return o;
}

template <typename F>
auto bad_request_on_json_error(F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw GatewayError(GatewayErrc::BadRequest, std::string("malformed request: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw GatewayError(GatewayErrc::BadRequest, std::string("malformed request: ") + e.what());
  }
}

}  // namespace

GeneralizedRequest generalized_from_json(const Json& j) {
  return bad_request_on_json_error([&] {
    GeneralizedRequest r;
    r.prompt = j.value("prompt", std::string{});
    for (const auto& img : j.value("images", Json::array())) {
      RequestImage ri;
      if (img.is_string()) {
        ri.path = img.get<std::string>();
      } else {
        ri.path = img.value("path", std::string{});
        ri.filename = img.value("filename", std::string{});
        if (img.contains("b64")) ri.bytes = base64_decode(img.at("b64").get<std::string>());
      }
      r.images.push_back(std::move(ri));
    }
    if (j.contains("options")) r.options = options_from_json(j.at("options"));
    return r;
  });
}

SpecificRequest specific_from_json(const Json& j) {
  return bad_request_on_json_error([&] {
    SpecificRequest r;
    r.object_name = j.value("object_name", std::string{});
    r.image_location = j.value("image_location", std::string{});
    if (j.contains("options")) r.options = options_from_json(j.at("options"));
    return r;
  });
}

Pipeline::Pipeline(Registry registry, BackendMap backends, GatewayConfig config,
                   std::shared_ptr<const SemanticResolver> resolver)
    : registry_(std::move(registry)),
      backends_(std::move(backends)),
      config_(std::move(config)),
      resolver_(resolver ? std::move(resolver) : default_resolver()) {}

PipelineResult Pipeline::process(const GeneralizedRequest& request) const {
  if (blank(request.prompt)) throw GatewayError(GatewayErrc::BadRequest, "empty prompt");
  if (request.images.empty()) throw GatewayError(GatewayErrc::BadRequest, "no images");

  const auto& opts = request.options;
  const std::string out_dir = opts.output_dir.empty() ? config_.output_dir : opts.output_dir;
  std::vector<LoadedImage> loaded;
  std::vector<ImageRef> refs;
  for (const auto& r : request.images) {
    loaded.push_back(load_image(r, out_dir));
    refs.push_back(loaded.back().ref);
  }
  if (backends_.empty() || registry_.empty()) {
    throw GatewayError(GatewayErrc::NoWorkers, "no model workers are configured");
  }

  PipelineResult result;
  IntentSet intents;
  try {
    intents = parse(request.prompt, *resolver_);
    result.plan = plan(intents, refs, PlanOptions{opts.integrate.value_or(true)});
  } catch (const ParseError& e) {
    throw GatewayError(GatewayErrc::BadRequest, std::string("cannot parse prompt: ") + e.what());
  } catch (const PlanError& e) {
    throw GatewayError(GatewayErrc::BadRequest, std::string("cannot plan prompt: ") + e.what());
  }

  if (opts.on_plan) opts.on_plan(result.plan);

  try {
    result.selection = select(result.plan, registry_, config_.weights, resolver_.get());
  } catch (const RegistryError& e) {
    throw GatewayError(GatewayErrc::Infeasible, e.what());
  }

  ExecutionOptions exec;
  exec.thresholds = config_.thresholds;
  if (opts.conf_threshold) exec.thresholds.min_confidence = *opts.conf_threshold;
  exec.weights = config_.weights;
  exec.retry = config_.retry;
  exec.resolver = resolver_;
  exec.max_parallel = config_.max_parallel;
  exec.loader = [&loaded](const ImageRef& ref) {
    for (const auto& l : loaded) {
      if (l.ref == ref) return l.raster;
    }
    return RasterImage(ref.width, ref.height);
  };
  try {
    result.execution =
        execute(result.plan, refs, result.selection.assignment, registry_, backends_, exec);
  } catch (const ExecutionError& e) {
    switch (e.code()) {
      case ExecErrc::TargetNotFound:
        throw GatewayError(GatewayErrc::TargetNotFound, e.what(), e.trace());
      case ExecErrc::InvalidInput:
        throw GatewayError(GatewayErrc::BadRequest, e.what(), e.trace());
      default:
        throw GatewayError(GatewayErrc::ExecutionFailed, to_string(e.code()) + ": " + e.what(),
                           e.trace());
    }
  }

  auto& scene = result.execution.scene;
  Json images = Json::array();
  for (auto& r : scene.images) {
    const auto index = static_cast<std::size_t>(
        std::find(refs.begin(), refs.end(), r.image) - refs.begin());
    const std::string dir = loaded[index].dir;
    const std::string result_path = join(dir, r.image.id + ".result.json");
    Json entry = {{"image", r.image.id},
                  {"result", result_path},
                  {"detections", r.detections.size()},
                  {"masks", r.masks.size()},
                  {"not_found", r.not_found}};
    if (r.rendered) {
      r.rendered_path = join(dir, r.image.id + ".annotated.ppm");
      entry["annotated"] = r.rendered_path;
      const auto bytes = encode_ppm(*r.rendered);
      if (opts.write_files) write_file(r.rendered_path, bytes);
      if (opts.inline_images) entry["annotated_b64"] = base64_encode(bytes);
    }
    if (opts.write_files) write_file(result_path, image_result_to_json(r).dump(2) + "\n");
    images.push_back(std::move(entry));
  }

  Json& m = result.manifest;
  m["images"] = std::move(images);
  m["scene"] = scene_to_json(scene);
  m["assignment"] = assignment_to_json(result.selection.assignment);
  m["score"] = result.selection.score.total();
  m["trace"] = trace_to_json(result.execution.trace, false);
  m["integrated"] = nullptr;
  if (scene.integrated) {
    const std::string path = join(loaded.front().dir, "integrated.annotated.ppm");
    const auto bytes = encode_ppm(*scene.integrated);
    if (opts.write_files) write_file(path, bytes);
    m["integrated"] = path;
    if (opts.inline_images) m["integrated_b64"] = base64_encode(bytes);
  }
  if (opts.dump_plan) m["plan"] = plan_to_json(result.plan);
  return result;
}

PipelineResult Pipeline::label(const SpecificRequest& request) const {
  if (blank(request.object_name)) throw GatewayError(GatewayErrc::BadRequest, "empty object name");
  if (blank(request.image_location)) {
    throw GatewayError(GatewayErrc::BadRequest, "empty image location");
  }
  GeneralizedRequest g;
  g.prompt = "find all " + request.object_name;
  g.images.push_back({request.image_location, {}, {}});
  g.options = request.options;
  return process(g);
}

}  // namespace uvgpt
