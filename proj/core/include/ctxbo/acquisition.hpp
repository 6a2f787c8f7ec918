#pragma once

// Improvement-based acquisition rules, all stated for maximization.
//
//   gamma = (mu - f* -/+ margin) / sigma
//   PI    = Phi(gamma)
//   EI    = (mu - f* -/+ margin) Phi(gamma) + sigma phi(gamma)
//
// AEI replaces the fixed margin with the contextual variance
// c_v = mean_posterior_variance / max(|f*|, 1e-3), so the exploration margin
// tracks how uncertain the model is on average over the search box.

#include <span>
#include <string>
#include <string_view>

#include "ctxbo/types.hpp"

namespace ctxbo {

enum class AcquisitionKind { pi, ei, aei };

/// Which sign the margin takes inside the improvement.
///  raise_target: target is f* + margin (larger margin explores more).
///  lower_target: margin is added to mu - f*, which lowers the improvement target.
enum class MarginConvention { raise_target, lower_target };

[[nodiscard]] std::string_view to_string(AcquisitionKind k);
[[nodiscard]] AcquisitionKind acquisition_kind_from_string(std::string_view s);
[[nodiscard]] std::string_view to_string(MarginConvention c);
[[nodiscard]] MarginConvention margin_convention_from_string(std::string_view s);

struct AcquisitionSpec {
  AcquisitionKind kind = AcquisitionKind::ei;
  double margin = 0.0;  // ignored by AEI
  MarginConvention convention = MarginConvention::raise_target;

  void validate() const;
  /// Short display name: "AEI", "EI-0.3", "PI-0.0".
  [[nodiscard]] std::string label() const;

  friend bool operator==(const AcquisitionSpec&, const AcquisitionSpec&) = default;
};

/// Model state at one candidate, in the GP's standardized output space.
struct PosteriorSummary {
  double mean = 0.0;
  double sigma = 0.0;
  double incumbent = 0.0;
  double mean_posterior_variance = 0.0;
};

[[nodiscard]] double normal_pdf(double z);
[[nodiscard]] double normal_cdf(double z);

/// Standardized improvement. Returns +/-inf (or 0) when sigma == 0.
[[nodiscard]] double improvement(const PosteriorSummary& s, double margin, MarginConvention convention);

[[nodiscard]] double probability_of_improvement(const PosteriorSummary& s, const AcquisitionSpec& spec);

/// Closed-form EI. For AEI the margin is contextual_variance(s); for EI it is spec.margin.
[[nodiscard]] double expected_improvement(const PosteriorSummary& s, const AcquisitionSpec& spec);

[[nodiscard]] double contextual_variance(double mean_posterior_variance, double incumbent);

[[nodiscard]] double contextual_improvement(const PosteriorSummary& s, MarginConvention convention);

/// Elementwise scores. All summaries must share one incumbent and one
/// mean posterior variance.
[[nodiscard]] Vector score(std::span<const PosteriorSummary> batch, const AcquisitionSpec& spec);

}  // namespace ctxbo
