#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vstar/error.hpp"
#include "vstar/geometry.hpp"
#include "vstar/json_io.hpp"
#include "vstar/perception.hpp"
#include "vstar/search.hpp"

namespace vstar {

/// The global image as the pipeline sees it: where it lives and its extent.
struct ImageRef {
  std::string path;
  Rect extent;
};

/// A rectangular region of a source image.
struct ImageRegion {
  std::string source;
  Rect region;
  friend bool operator==(const ImageRegion&, const ImageRegion&) = default;
};

struct SearchedTarget {
  std::string name;
  bool present = false;
  /// Located box in the root frame; absent targets carry neither field.
  std::optional<Rect> box;
  std::optional<ImageRegion> crop;
};

/// Question, global image, searched target crops and their locations.
struct VisualWorkingMemory {
  std::string question;
  ImageRef global_image;
  std::vector<SearchedTarget> searched_targets;

  std::vector<Rect> target_locations() const;
  std::size_t found_count() const;
};

Json vwm_to_json(const VisualWorkingMemory& vwm);

enum class Projection { Linear, Resampler };
std::string_view to_string(Projection p);
/// Visual tokens kept per slot: 256 for Linear, 32 for Resampler.
int token_count(Projection p);

struct ProjectionChoice {
  Projection global = Projection::Linear;
  std::vector<Projection> targets;
  int total_tokens() const;
  friend bool operator==(const ProjectionChoice&, const ProjectionChoice&) = default;
};

Json projection_to_json(const ProjectionChoice& p);

enum class ProjectionVariant {
  /// No targets: global Linear. One or two: targets Linear, global
  /// Resampler. More: everything Resampler.
  Inference,
  /// Training-time rule: targets Linear only when there is exactly one;
  /// otherwise global Linear and targets Resampler.
  TrainingTime,
};

ProjectionChoice projection_policy(std::size_t num_found_targets,
                                   ProjectionVariant variant = ProjectionVariant::Inference);

/// The exact input sequence handed to the answering model.
std::string render_vwm_prompt(const VisualWorkingMemory& vwm);

/// Region around `box` grown by `margin_frac` of its size on every side and
/// clipped to the image. Throws InvalidArgument for zero-area boxes.
ImageRegion crop_target(const ImageRef& image, const Rect& box, double margin_frac = 0.2);

/// The question-answering model.
class VqaBackend {
 public:
  virtual ~VqaBackend() = default;
  /// Targets needed but missing from the global view; empty when the
  /// question can be answered directly.
  virtual std::vector<std::string> list_missing_targets(const ImageRef& image, std::string_view question) = 0;
  virtual std::string answer(std::string_view prompt) = 0;
};

/// Fixed target list and canned answer; records every prompt it receives.
class ScriptedVqa : public VqaBackend {
 public:
  ScriptedVqa(std::vector<std::string> targets, std::string answer)
      : targets_(std::move(targets)), answer_(std::move(answer)) {}

  std::vector<std::string> list_missing_targets(const ImageRef&, std::string_view) override { return targets_; }
  std::string answer(std::string_view prompt) override {
    prompts_.emplace_back(prompt);
    return answer_;
  }
  const std::vector<std::string>& prompts() const { return prompts_; }

 private:
  std::vector<std::string> targets_;
  std::string answer_;
  std::vector<std::string> prompts_;
};

struct SealOptions {
  double crop_margin = 0.2;
  ProjectionVariant projection = ProjectionVariant::Inference;
  /// Run the per-target searches on separate threads.
  bool concurrent_searches = false;
};

struct SealResult {
  std::string response;
  VisualWorkingMemory vwm;
  std::vector<SearchTrace> traces;
  ProjectionChoice projection;
  std::string prompt;
  /// Per-target search failures, as "<target>: <message>".
  std::vector<std::string> search_errors;
};

/// Answering-model failure; carries the memory built so far.
class SealAborted : public Error {
 public:
  SealAborted(const std::string& what, VisualWorkingMemory partial) : Error(what), partial_(std::move(partial)) {}
  const VisualWorkingMemory& partial() const { return partial_; }

 private:
  VisualWorkingMemory partial_;
};

/// List missing targets, search for each from a fresh queue, fill the
/// working memory, then answer from the rendered prompt.
SealResult seal_answer(VqaBackend& vqa, const PerceptionBackend& search_backend, const ImageRef& image,
                       const std::string& question, const SearchParams& p, const SealOptions& options = {});

}  // namespace vstar
