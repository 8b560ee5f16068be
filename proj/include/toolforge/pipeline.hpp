#pragma once

#include <optional>

#include "toolforge/scenario.hpp"

namespace toolforge {

/// Fully processed scenario: fitted reference and parts plus the ranked
/// builds, with wall-clock timings for the fitting and scoring stages.
struct RankedScenario {
  ReferenceTool reference;
  std::vector<CandidatePart> parts;
  std::vector<CandidateBuild> builds;
  std::optional<AttachmentLibrary> library;  // as used for ranking
  ScoreWeights weights;
  std::optional<WorldModel> world;
  double fit_seconds = 0.0;
  double score_seconds = 0.0;
};

/// Loads clouds, fits a superquadric to every reference component and part
/// (in parallel when enabled), and ranks all ordered part tuples.
/// With ignore_library the attachment term is dropped from the ranking, the
/// regime used when attachments are not known in advance.
RankedScenario run_rank(const Scenario& scenario, const PipelineConfig& config,
                        bool ignore_library = false);

/// Replays the build-and-validate loop over an already ranked scenario.
AttemptLog run_simulate(const RankedScenario& ranked, bool unknown_attachments);

}  // namespace toolforge
