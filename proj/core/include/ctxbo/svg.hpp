#pragma once

// Dependency-free SVG line plots of best-so-far traces.

#include <ostream>
#include <string>

#include "ctxbo/runner.hpp"

namespace ctxbo {

/// Mean best-so-far per strategy (class "mean-trace") over a shaded band
/// between the 10th and 90th bootstrap percentiles (class "band"). Each
/// series carries data-strategy="<label>".
void render_study_plot(std::ostream& out, const StudySummary& study);

/// One light-grey path per margin (class "eps-trace") and the adaptive mean
/// trace in black (class "adaptive-trace").
void render_sweep_plot(std::ostream& out, const SweepResult& sweep);

void write_study_plot(const std::string& path, const StudySummary& study);
void write_sweep_plot(const std::string& path, const SweepResult& sweep);

}  // namespace ctxbo
