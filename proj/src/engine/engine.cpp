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

#include "uvgpt/engine/engine.hpp"

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <exception>
#include <filesystem>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "uvgpt/compositor/compositor.hpp"
#include "uvgpt/planner/planner.hpp"

namespace uvgpt {

std::string to_string(ExecErrc code) {
  switch (code) {
    case ExecErrc::InvalidInput: return "invalid_input";
    case ExecErrc::AllAttemptsFailed: return "all_attempts_failed";
    case ExecErrc::BackendUnreachable: return "backend_unreachable";
    case ExecErrc::TargetNotFound: return "target_not_found";
  }
  return "unknown";
}

RasterImage default_image_loader(const ImageRef& image) {
  if (!image.path.empty() && std::filesystem::path(image.path).extension() == ".ppm") {
    return read_ppm_file(image.path);
  }
  return RasterImage(image.width, image.height);
}

namespace {

struct TaskOutput {
  std::string model;  // model that produced the accepted output
  std::vector<Detection> detections;
  std::vector<InstanceMask> masks;
  bool not_found = false;
  std::optional<RasterImage> image;  // Render / Integrate
};

struct AttemptFailure {
  bool transport = false;
  bool coverage_only = false;
};

class Executor {
 public:
  Executor(const TaskPlan& plan, std::span<const ImageRef> images, const Assignment& assignment,
           const Registry& registry, const BackendMap& backends, const ExecutionOptions& options)
      : plan_(plan),
        images_(images),
        assignment_(assignment),
        registry_(registry),
        backends_(backends),
        options_(options),
        resolver_(options.resolver ? options.resolver : default_resolver()),
        loader_(options.loader ? options.loader : ImageLoader(default_image_loader)),
        outputs_(plan.tasks.size()) {}

  ExecutionResult run() {
    check_inputs();
    if (options_.max_parallel <= 1 || plan_.tasks.size() <= 1) {
      for (const auto& t : plan_.tasks) {
        try {
          outputs_[t.id] = run_task(t);
        } catch (...) {
          record_failure(t.id, std::current_exception());
          break;
        }
      }
    } else {
      run_parallel();
    }
    if (failure_) {
      try {
        std::rethrow_exception(failure_);
      } catch (ExecutionError& e) {
        throw ExecutionError(e.code(), e.what(), e.task_id(), sorted_trace(), e.target());
      }
    }
    ExecutionResult result;
    result.trace = sorted_trace();
    result.scene = assemble_scene();
    return result;
  }

 private:
  void check_inputs() {
    try {
      validate_plan(plan_);
    } catch (const PlanError& e) {
      throw ExecutionError(ExecErrc::InvalidInput, std::string("invalid plan: ") + e.what());
    }
    for (const auto& t : plan_.tasks) {
      if (t.image && (*t.image < 0 || static_cast<std::size_t>(*t.image) >= images_.size())) {
        throw ExecutionError(ExecErrc::InvalidInput,
                             "task " + std::to_string(t.id) + " refers to a missing image", t.id);
      }
      if (t.image) {
        const auto& img = images_[*t.image];
        if (img.width <= 0 || img.height <= 0) {
          throw ExecutionError(ExecErrc::InvalidInput, "image " + img.id + " has no size", t.id);
        }
      }
      if (needs_model(t) && !assignment_.models.contains(t.id)) {
        throw ExecutionError(ExecErrc::InvalidInput,
                             "task " + std::to_string(t.id) + " has no assigned model", t.id);
      }
    }
  }

  void run_parallel() {
    const std::size_t n = plan_.tasks.size();
    std::vector<int> waiting(n, 0);
    std::vector<std::vector<int>> dependents(n);
    std::set<int> ready;
    for (const auto& t : plan_.tasks) {
      waiting[t.id] = static_cast<int>(t.depends_on.size());
      for (int d : t.depends_on) dependents[d].push_back(t.id);
      if (t.depends_on.empty()) ready.insert(t.id);
    }

    std::mutex m;
    std::condition_variable cv;
    std::size_t finished = 0;
    bool stop = false;

    auto worker = [&] {
      std::unique_lock lock(m);
      while (true) {
        cv.wait(lock, [&] { return stop || !ready.empty() || finished == n; });
        if (stop || ready.empty()) return;
        const int id = *ready.begin();
        ready.erase(ready.begin());
        lock.unlock();
        std::exception_ptr err;
        std::optional<TaskOutput> out;
        try {
          out = run_task(plan_.tasks[id]);
        } catch (...) {
          err = std::current_exception();
        }
        lock.lock();
        ++finished;
        if (err) {
          record_failure(id, err);
          stop = true;
        } else {
          outputs_[id] = std::move(out);
          for (int d : dependents[id]) {
            if (--waiting[d] == 0) ready.insert(d);
          }
        }
        cv.notify_all();
      }
    };

    const auto count = std::min<std::size_t>(static_cast<std::size_t>(options_.max_parallel), n);
    std::vector<std::thread> pool;
    pool.reserve(count);
    for (std::size_t i = 0; i < count; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  void record_failure(int task_id, std::exception_ptr err) {
    std::lock_guard lock(failure_mutex_);
    if (!failure_ || task_id < failure_task_) {
      failure_ = err;
      failure_task_ = task_id;
    }
  }

  ExecutionTrace sorted_trace() {
    std::lock_guard lock(trace_mutex_);
    ExecutionTrace trace;
    trace.steps = steps_;
    std::sort(trace.steps.begin(), trace.steps.end(), [](const TraceStep& a, const TraceStep& b) {
      return std::tie(a.task_id, a.attempt) < std::tie(b.task_id, b.attempt);
    });
    return trace;
  }

  void add_step(TraceStep step) {
    std::lock_guard lock(trace_mutex_);
    steps_.push_back(std::move(step));
  }

  // Model order for a task: the assigned model, then the rest of the
  // capable models by cost. Models without a backend are not retried.
  std::vector<std::string> attempt_order(const VisionTask& task,
                                         const std::optional<std::string>& excluded) const {
    std::vector<std::string> order;
    auto push = [&](const std::string& name) {
      if (excluded && name == *excluded) return;
      if (std::find(order.begin(), order.end(), name) != order.end()) return;
      order.push_back(name);
    };
    push(assignment_.at(task.id));
    try {
      for (const auto& m : candidates(task, registry_, options_.weights, resolver_.get())) {
        if (backends_.contains(m.name)) push(m.name);
      }
    } catch (const RegistryError&) {
      // no capable model at all; the assigned one still gets its attempt
    }
    return order;
  }

  const TaskOutput& output_of(int task_id) const { return *outputs_[task_id]; }

  const VisionTask* detect_dep(const VisionTask& task) const {
    for (int d : task.depends_on) {
      if (plan_.tasks[d].verb == Verb::Detect) return &plan_.tasks[d];
    }
    return nullptr;
  }

  VerifyContext verify_context(const ImageRef& img) const {
    return {img.width, img.height, options_.thresholds, resolver_.get()};
  }

  TaskOutput run_task(const VisionTask& task) {
    switch (task.verb) {
      case Verb::Detect:
      case Verb::Segment:
        return run_model_task(task);
      case Verb::Render:
        return run_render(task);
      case Verb::Integrate:
        return run_integrate(task);
    }
    throw ExecutionError(ExecErrc::InvalidInput, "unknown verb", task.id);
  }

  TaskOutput run_model_task(const VisionTask& task) {
    const ImageRef& img = images_[*task.image];
    std::optional<std::string> excluded;
    const TaskOutput* det = nullptr;
    if (task.verb == Verb::Segment) {
      det = &output_of(detect_dep(task)->id);
      if (det->not_found || det->detections.empty()) {
        TaskOutput skipped;
        skipped.not_found = true;
        return skipped;
      }
      if (task.constraints.contains(Constraint::DistinctModels)) excluded = det->model;
    }

    const auto order = attempt_order(task, excluded);
    std::vector<AttemptFailure> failures;
    const int budget = std::max(1, options_.retry.max_attempts);
    for (int attempt = 1; attempt <= budget && attempt <= static_cast<int>(order.size());
         ++attempt) {
      const std::string& model = order[attempt - 1];
      TraceStep step{task.id, model, attempt, {}, 0.0};
      const auto t0 = std::chrono::steady_clock::now();
      TaskOutput out;
      AttemptFailure failure;
      try {
        const auto it = backends_.find(model);
        if (it == backends_.end() || !it->second) {
          throw WorkerError(WorkerErrc::Unreachable, "no worker for " + model);
        }
        if (task.verb == Verb::Detect) {
          step.verification = attempt_detect(task, img, *it->second, out);
        } else {
          step.verification = attempt_segment(task, img, model, *det, *it->second, out);
        }
        failure.coverage_only = std::all_of(
            step.verification.checks.begin(), step.verification.checks.end(),
            [](const Check& c) { return c.pass || c.name == "coverage"; });
      } catch (const WorkerError& e) {
        step.verification.checks = {{"transport", false, to_string(e.code()) + ": " + e.what()}};
        step.verification.verdict = Verdict::Fail;
        failure.transport =
            e.code() == WorkerErrc::Unreachable || e.code() == WorkerErrc::Timeout;
      } catch (const std::exception& e) {
        step.verification.checks = {{"worker", false, e.what()}};
        step.verification.verdict = Verdict::Fail;
      }
      step.elapsed_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      const Verdict verdict = step.verification.verdict;
      add_step(std::move(step));
      if (verdict != Verdict::Fail) {
        out.model = model;
        out.not_found = verdict == Verdict::NotFoundOk;
        return out;
      }
      failures.push_back(failure);
    }
    throw exhausted(task, failures);
  }

  ExecutionError exhausted(const VisionTask& task, const std::vector<AttemptFailure>& failures) {
    const std::string where = "task " + std::to_string(task.id) + " (" + to_string(task.verb) +
                              " " + (task.target ? to_string(*task.target) : std::string{}) + ")";
    if (failures.empty()) {
      return ExecutionError(ExecErrc::AllAttemptsFailed, where + ": no model to try", task.id,
                            {}, task.target);
    }
    const bool all_transport = std::all_of(failures.begin(), failures.end(),
                                           [](const auto& f) { return f.transport; });
    if (all_transport) {
      return ExecutionError(ExecErrc::BackendUnreachable, where + ": no worker reachable",
                            task.id, {}, task.target);
    }
    const bool all_coverage = std::all_of(failures.begin(), failures.end(), [](const auto& f) {
      return !f.transport && f.coverage_only;
    });
    if (task.verb == Verb::Detect && all_coverage) {
      return ExecutionError(ExecErrc::TargetNotFound,
                            where + ": target not found after " + std::to_string(failures.size()) +
                                " attempt(s)",
                            task.id, {}, task.target);
    }
    return ExecutionError(ExecErrc::AllAttemptsFailed,
                          where + ": " + std::to_string(failures.size()) + " attempt(s) failed",
                          task.id, {}, task.target);
  }

  VerificationReport attempt_detect(const VisionTask& task, const ImageRef& img,
                                    WorkerBackend& backend, TaskOutput& out) {
    DetectRequest req;
    req.image = ImagePayload::from(img);
    req.classes = class_filter(*task.target, *resolver_);
    req.conf_threshold = options_.thresholds.min_confidence;
    const auto resp = backend.detect(req);
    auto v = verify_detect(task, resp.detections, verify_context(img));
    out.detections = std::move(v.selected);
    return v.report;
  }

  VerificationReport attempt_segment(const VisionTask& task, const ImageRef& img,
                                     const std::string& model, const TaskOutput& det,
                                     WorkerBackend& backend, TaskOutput& out) {
    const auto descriptor = registry_.find(model);
    const bool by_box = !descriptor || descriptor->can(Capability::Segment);

    SegmentRequest req;
    req.image = ImagePayload::from(img);
    SegmentOutput seg;
    for (const auto& d : det.detections) seg.boxes.push_back(d.bbox);
    if (by_box) {
      req.boxes = seg.boxes;
      seg.masks = backend.segment(req).masks;
    } else {
      req.prompt = task.target->kind == TargetSpec::Kind::Named ? task.target->name
                                                                 : det.detections.front().class_label;
      seg.masks = match_prompt_masks(backend.segment(req).masks, seg.boxes, img);
    }
    auto report = verify(task, seg, verify_context(img));
    if (report.verdict == Verdict::Pass) {
      for (std::size_t k = 0; k < seg.masks.size(); ++k) {
        const auto& m = seg.masks[k];
        out.masks.emplace_back(det.detections[k].instance_id, m.width, m.height, m.rle);
      }
    }
    return report;
  }

  // Prompt-only segmenters return masks in their own order. Each box takes
  // the unused valid mask that overlaps it most (ties: earlier mask); a box
  // with no overlapping mask ends the list so the count check fails.
  static std::vector<MaskPayload> match_prompt_masks(const std::vector<MaskPayload>& masks,
                                                     const std::vector<BBox>& boxes,
                                                     const ImageRef& img) {
    std::vector<std::optional<InstanceMask>> decoded;
    for (const auto& m : masks) {
      if (m.width == img.width && m.height == img.height && check_runs(m.rle, m.width, m.height).empty()) {
        decoded.emplace_back(InstanceMask(m.instance_id, m.width, m.height, m.rle));
      } else {
        decoded.emplace_back();
      }
    }
    std::vector<bool> used(masks.size(), false);
    std::vector<MaskPayload> out;
    for (const auto& box : boxes) {
      int best = -1;
      double best_iou = 0.0;
      for (std::size_t i = 0; i < masks.size(); ++i) {
        if (used[i] || !decoded[i]) continue;
        const double v = mask_iou(*decoded[i], box);
        if (v > best_iou) {
          best_iou = v;
          best = static_cast<int>(i);
        }
      }
      if (best < 0) break;
      used[best] = true;
      out.push_back(masks[best]);
    }
    return out;
  }

  TaskOutput run_render(const VisionTask& task) {
    const auto image_index = *task.image;
    std::vector<int> parts(task.depends_on.begin(), task.depends_on.end());
    const auto r = assemble_image(image_index, parts);
    std::vector<Detection> boxed;
    for (const auto& [detect_id, dets] : r.boxed_by_task) {
      boxed.insert(boxed.end(), dets.begin(), dets.end());
    }
    TaskOutput out;
    try {
      const RasterImage base = loader_(images_[image_index]);
      out.image = render_annotations(base, boxed, r.result.masks);
    } catch (const std::exception& e) {
      throw ExecutionError(ExecErrc::InvalidInput,
                           "cannot render " + images_[image_index].id + ": " + e.what(), task.id);
    }
    return out;
  }

  TaskOutput run_integrate(const VisionTask& task) {
    std::vector<RasterImage> frames;
    for (int d : task.depends_on) {
      if (output_of(d).image) frames.push_back(*output_of(d).image);
    }
    TaskOutput out;
    out.image = integrate(frames);
    return out;
  }

  struct Assembled {
    ImageResult result;
    std::map<int, std::vector<Detection>> boxed_by_task;  // Detect tasks with draw_boxes
  };

  // Gathers the outputs of the given Detect/Segment tasks of one image and
  // renumbers instances from 0 in task-id order.
  Assembled assemble_image(int image_index, std::vector<int> task_ids) const {
    std::sort(task_ids.begin(), task_ids.end());
    Assembled a;
    a.result.image = images_[image_index];
    std::map<std::pair<int, int>, int> renumber;  // (detect task, worker id) -> id
    int next = 0;
    for (int id : task_ids) {
      const auto& t = plan_.tasks[id];
      if (t.verb != Verb::Detect || !outputs_[id]) continue;
      const auto& out = output_of(id);
      if (out.not_found) {
        if (t.target) a.result.not_found.push_back(*t.target);
        continue;
      }
      for (const auto& d : out.detections) {
        Detection copy = d;
        copy.instance_id = next++;
        renumber[{id, d.instance_id}] = copy.instance_id;
        if (t.draw_boxes) a.boxed_by_task[id].push_back(copy);
        a.result.detections.push_back(std::move(copy));
      }
    }
    for (int id : task_ids) {
      const auto& t = plan_.tasks[id];
      if (t.verb != Verb::Segment || !outputs_[id]) continue;
      const auto* dep = detect_dep(t);
      for (const auto& m : output_of(id).masks) {
        const auto it = renumber.find({dep->id, m.instance_id()});
        if (it != renumber.end()) a.result.masks.push_back(m.with_id(it->second));
      }
    }
    std::sort(a.result.masks.begin(), a.result.masks.end(),
              [](const auto& x, const auto& y) { return x.instance_id() < y.instance_id(); });
    return a;
  }

  SceneResult assemble_scene() const {
    std::map<int, std::vector<int>> by_image;
    std::map<int, int> render_of;
    for (const auto& t : plan_.tasks) {
      if (!t.image) continue;
      by_image[*t.image].push_back(t.id);
      if (t.verb == Verb::Render) render_of[*t.image] = t.id;
    }
    SceneResult scene;
    for (const auto& [image_index, ids] : by_image) {
      auto a = assemble_image(image_index, ids);
      if (const auto it = render_of.find(image_index); it != render_of.end()) {
        a.result.rendered = output_of(it->second).image;
      }
      scene.images.push_back(std::move(a.result));
    }
    for (const auto& t : plan_.tasks) {
      if (t.verb == Verb::Integrate) scene.integrated = output_of(t.id).image;
    }
    return scene;
  }

  const TaskPlan& plan_;
  std::span<const ImageRef> images_;
  const Assignment& assignment_;
  const Registry& registry_;
  const BackendMap& backends_;
  const ExecutionOptions& options_;
  std::shared_ptr<const SemanticResolver> resolver_;
  ImageLoader loader_;

  std::vector<std::optional<TaskOutput>> outputs_;
  std::mutex trace_mutex_;
  std::vector<TraceStep> steps_;
  std::mutex failure_mutex_;
  std::exception_ptr failure_;
  int failure_task_ = -1;
};

}  // namespace

ExecutionResult execute(const TaskPlan& plan, std::span<const ImageRef> images,
                        const Assignment& assignment, const Registry& registry,
                        const BackendMap& backends, const ExecutionOptions& options) {
  return Executor(plan, images, assignment, registry, backends, options).run();
}

}  // namespace uvgpt
