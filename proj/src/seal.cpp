#include "vstar/seal.hpp"

#include <cmath>
#include <future>

namespace vstar {

std::vector<Rect> VisualWorkingMemory::target_locations() const {
  std::vector<Rect> out;
  for (const auto& t : searched_targets)
    if (t.present && t.box) out.push_back(*t.box);
  return out;
}

std::size_t VisualWorkingMemory::found_count() const { return target_locations().size(); }

Json vwm_to_json(const VisualWorkingMemory& vwm) {
  Json j;
  j["question"] = vwm.question;
  j["global_image"] = {{"path", vwm.global_image.path}, {"extent", rect_to_json(vwm.global_image.extent)}};
  j["searched_targets"] = Json::array();
  for (const auto& t : vwm.searched_targets) {
    Json tj;
    tj["name"] = t.name;
    tj["present"] = t.present;
    tj["crop"] = t.crop ? rect_to_json(t.crop->region) : Json(nullptr);
    j["searched_targets"].push_back(tj);
  }
  j["target_locations"] = Json::array();
  for (const auto& t : vwm.searched_targets) {
    if (!t.present || !t.box) continue;
    j["target_locations"].push_back({{"name", t.name}, {"box", rect_to_json(*t.box)}});
  }
  return j;
}

std::string_view to_string(Projection p) { return p == Projection::Linear ? "linear" : "resampler"; }

int token_count(Projection p) { return p == Projection::Linear ? 256 : 32; }

int ProjectionChoice::total_tokens() const {
  int total = token_count(global);
  for (Projection p : targets) total += token_count(p);
  return total;
}

Json projection_to_json(const ProjectionChoice& p) {
  Json j;
  j["global"] = std::string(to_string(p.global));
  j["targets"] = Json::array();
  for (Projection t : p.targets) j["targets"].push_back(std::string(to_string(t)));
  j["total_tokens"] = p.total_tokens();
  return j;
}

ProjectionChoice projection_policy(std::size_t n, ProjectionVariant variant) {
  ProjectionChoice c;
  if (n == 0) return c;
  if (variant == ProjectionVariant::TrainingTime) {
    if (n == 1) {
      c.global = Projection::Resampler;
      c.targets = {Projection::Linear};
    } else {
      c.global = Projection::Linear;
      c.targets.assign(n, Projection::Resampler);
    }
    return c;
  }
  if (n <= 2) {
    c.global = Projection::Resampler;
    c.targets.assign(n, Projection::Linear);
  } else {
    c.global = Projection::Resampler;
    c.targets.assign(n, Projection::Resampler);
  }
  return c;
}

std::string render_vwm_prompt(const VisualWorkingMemory& vwm) {
  std::string out = "<Image>\n";
  if (!vwm.searched_targets.empty()) {
    out += "Additional visual information to focus on: \n";
    for (const auto& t : vwm.searched_targets) {
      if (t.present && t.box) {
        const auto c = t.box->corners();
        out += t.name + " <Object> at location [" + std::to_string(c[0]) + ", " + std::to_string(c[1]) + ", " +
               std::to_string(c[2]) + ", " + std::to_string(c[3]) + "]; \n";
      } else {
        out += t.name + " not existent in the image; \n";
      }
    }
  }
  out += vwm.question;
  return out;
}

ImageRegion crop_target(const ImageRef& image, const Rect& box, double margin_frac) {
  if (box.w <= 0 || box.h <= 0) throw InvalidArgument("crop_target: degenerate box");
  if (!(margin_frac >= 0.0)) throw InvalidArgument("crop_target: negative margin");
  const auto mx = static_cast<std::int64_t>(std::llround(margin_frac * static_cast<double>(box.w)));
  const auto my = static_cast<std::int64_t>(std::llround(margin_frac * static_cast<double>(box.h)));
  const Rect grown = Rect::from_corners(box.x - mx, box.y - my, box.right() + mx, box.bottom() + my);
  const Rect clipped = intersection(grown, image.extent);
  if (clipped.w <= 0 || clipped.h <= 0) throw InvalidArgument("crop_target: box outside image");
  return {image.path, clipped};
}

SealResult seal_answer(VqaBackend& vqa, const PerceptionBackend& search_backend, const ImageRef& image,
                       const std::string& question, const SearchParams& p, const SealOptions& options) {
  p.validate();
  SealResult result;
  result.vwm.question = question;
  result.vwm.global_image = image;

  std::vector<std::string> targets;
  try {
    targets = vqa.list_missing_targets(image, question);
  } catch (const std::exception& e) {
    throw SealAborted(std::string("vqa: ") + e.what(), result.vwm);
  }

  struct Attempt {
    std::optional<SearchOutcome> outcome;
    std::optional<SearchTrace> partial;
    std::string error;
  };
  auto run_one = [&](const std::string& target) {
    Attempt a;
    try {
      a.outcome = vstar_search(search_backend, image.extent, target, p);
    } catch (const SearchAborted& e) {
      a.partial = e.partial();
      a.error = e.what();
    } catch (const Error& e) {
      a.error = e.what();
    }
    return a;
  };

  std::vector<Attempt> attempts;
  if (options.concurrent_searches && targets.size() > 1) {
    std::vector<std::future<Attempt>> futures;
    for (const auto& t : targets) futures.push_back(std::async(std::launch::async, run_one, t));
    for (auto& f : futures) attempts.push_back(f.get());
  } else {
    for (const auto& t : targets) attempts.push_back(run_one(t));
  }

  for (std::size_t i = 0; i < targets.size(); ++i) {
    const std::string& name = targets[i];
    Attempt& a = attempts[i];
    if (!a.outcome) {
      result.search_errors.push_back(name + ": " + a.error);
      if (a.partial) result.traces.push_back(*a.partial);
      result.vwm.searched_targets.push_back({name, false, std::nullopt, std::nullopt});
      continue;
    }
    const SearchTrace& trace = a.outcome->trace;
    result.traces.push_back(trace);
    if (!a.outcome->located) {
      result.vwm.searched_targets.push_back({name, false, std::nullopt, std::nullopt});
      continue;
    }
    std::vector<Detection> found = trace.root_detections;
    if (found.empty()) found.push_back(*a.outcome->located);
    for (const auto& d : found)
      result.vwm.searched_targets.push_back({name, true, d.box, crop_target(image, d.box, options.crop_margin)});
  }

  result.projection = projection_policy(result.vwm.found_count(), options.projection);
  result.prompt = render_vwm_prompt(result.vwm);
  try {
    result.response = vqa.answer(result.prompt);
  } catch (const std::exception& e) {
    throw SealAborted(std::string("vqa: ") + e.what(), result.vwm);
  }
  return result;
}

}  // namespace vstar
