#include "ctxbo/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

namespace ctxbo {

namespace {

constexpr double kIncumbentFloor = 1e-3;

// mu - f* with the margin applied under the chosen convention.
double signed_gain(const PosteriorSummary& s, double margin, MarginConvention convention) {
  return convention == MarginConvention::raise_target ? s.mean - s.incumbent - margin
                                                      : s.mean - s.incumbent + margin;
}

double effective_margin(const PosteriorSummary& s, const AcquisitionSpec& spec) {
  return spec.kind == AcquisitionKind::aei
             ? contextual_variance(s.mean_posterior_variance, s.incumbent)
             : spec.margin;
}

double ei_with_margin(const PosteriorSummary& s, double margin, MarginConvention convention) {
  const double gain = signed_gain(s, margin, convention);
  if (!(s.sigma > 0.0)) return std::max(0.0, gain);
  const double z = gain / s.sigma;
  return std::max(0.0, gain * normal_cdf(z) + s.sigma * normal_pdf(z));
}

}  // namespace

std::string_view to_string(AcquisitionKind k) {
  switch (k) {
    case AcquisitionKind::pi: return "pi";
    case AcquisitionKind::ei: return "ei";
    case AcquisitionKind::aei: return "aei";
  }
  return "?";
}

AcquisitionKind acquisition_kind_from_string(std::string_view s) {
  if (s == "pi" || s == "PI") return AcquisitionKind::pi;
  if (s == "ei" || s == "EI") return AcquisitionKind::ei;
  if (s == "aei" || s == "AEI") return AcquisitionKind::aei;
  throw InvalidArgument("unknown acquisition '" + std::string(s) + "' (expected pi, ei or aei)");
}

std::string_view to_string(MarginConvention c) {
  return c == MarginConvention::raise_target ? "raise-target" : "lower-target";
}

MarginConvention margin_convention_from_string(std::string_view s) {
  if (s == "raise-target") return MarginConvention::raise_target;
  if (s == "lower-target") return MarginConvention::lower_target;
  throw InvalidArgument("unknown margin convention '" + std::string(s) +
                        "' (expected raise-target or lower-target)");
}

void AcquisitionSpec::validate() const {
  if (!(margin >= 0.0) || !std::isfinite(margin)) {
    throw InvalidArgument("acquisition: margin must be a finite value >= 0");
  }
  if (kind == AcquisitionKind::aei && margin != 0.0) {
    throw InvalidArgument("acquisition: AEI computes its own margin; epsilon must be 0");
  }
}

std::string AcquisitionSpec::label() const {
  if (kind == AcquisitionKind::aei) return "AEI";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s-%g", kind == AcquisitionKind::pi ? "PI" : "EI", margin);
  std::string out(buf);
  // "EI-0" reads poorly next to "EI-0.3"; keep one decimal at least.
  if (out.find('.') == std::string::npos && out.find('e') == std::string::npos) out += ".0";
  return out;
}

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double z) {
  return std::clamp(0.5 * std::erfc(-z / std::numbers::sqrt2), 0.0, 1.0);
}

double improvement(const PosteriorSummary& s, double margin, MarginConvention convention) {
  const double gain = signed_gain(s, margin, convention);
  if (!(s.sigma > 0.0)) {
    if (gain > 0.0) return std::numeric_limits<double>::infinity();
    if (gain < 0.0) return -std::numeric_limits<double>::infinity();
    return 0.0;
  }
  return gain / s.sigma;
}

double probability_of_improvement(const PosteriorSummary& s, const AcquisitionSpec& spec) {
  const double gain = signed_gain(s, spec.margin, spec.convention);
  if (!(s.sigma > 0.0)) return gain > 0.0 ? 1.0 : 0.0;
  return normal_cdf(gain / s.sigma);
}

double expected_improvement(const PosteriorSummary& s, const AcquisitionSpec& spec) {
  return ei_with_margin(s, effective_margin(s, spec), spec.convention);
}

double contextual_variance(double mean_posterior_variance, double incumbent) {
  return std::max(0.0, mean_posterior_variance) / std::max(std::abs(incumbent), kIncumbentFloor);
}

double contextual_improvement(const PosteriorSummary& s, MarginConvention convention) {
  return improvement(s, contextual_variance(s.mean_posterior_variance, s.incumbent), convention);
}

Vector score(std::span<const PosteriorSummary> batch, const AcquisitionSpec& spec) {
  Vector out(static_cast<Eigen::Index>(batch.size()));
  if (batch.empty()) return out;
  const double incumbent = batch.front().incumbent;
  const double mpv = batch.front().mean_posterior_variance;
  for (const auto& s : batch) {
    if (s.incumbent != incumbent || s.mean_posterior_variance != mpv) {
      throw InvalidArgument("score: batch mixes incumbents or mean posterior variances");
    }
  }

  if (spec.kind == AcquisitionKind::pi) {
    for (std::size_t i = 0; i < batch.size(); ++i) {
      out(static_cast<Eigen::Index>(i)) = probability_of_improvement(batch[i], spec);
    }
    return out;
  }
  const double margin =
      spec.kind == AcquisitionKind::aei ? contextual_variance(mpv, incumbent) : spec.margin;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = ei_with_margin(batch[i], margin, spec.convention);
  }
  return out;
}

}  // namespace ctxbo
