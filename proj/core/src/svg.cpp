#include "ctxbo/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <vector>

#include "ctxbo/report.hpp"

namespace ctxbo {

namespace {

constexpr double kWidth = 760.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 84.0;
constexpr double kRight = 170.0;
constexpr double kTop = 36.0;
constexpr double kBottom = 56.0;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  // Avoid "-0.00" so output does not depend on the sign of tiny values.
  if (std::string_view(buf) == "-0.00") return "0.00";
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

double nice_step(double range, int target) {
  const double raw = range / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double f = raw / mag;
  const double step = f <= 1.0 ? 1.0 : f <= 2.0 ? 2.0 : f <= 5.0 ? 5.0 : 10.0;
  return step * mag;
}

class Frame {
 public:
  Frame(std::size_t points, double lo, double hi) : points_(points) {
    if (!(hi > lo)) {
      const double pad = std::max(1e-3, 0.05 * std::abs(lo));
      lo -= pad;
      hi += pad;
    }
    const double margin = 0.05 * (hi - lo);
    lo_ = lo - margin;
    hi_ = hi + margin;
  }

  [[nodiscard]] double x(std::size_t i) const {
    const double span = points_ > 1 ? static_cast<double>(points_ - 1) : 1.0;
    return kLeft + (kWidth - kLeft - kRight) * static_cast<double>(i) / span;
  }
  [[nodiscard]] double y(double v) const {
    return kTop + (kHeight - kTop - kBottom) * (hi_ - v) / (hi_ - lo_);
  }

  void axes(std::ostream& out, const std::string& title) const {
    const double x0 = kLeft;
    const double x1 = kWidth - kRight;
    const double y0 = kHeight - kBottom;
    const double y1 = kTop;
    out << "<g class=\"axes\" stroke=\"#333333\" stroke-width=\"1\" fill=\"none\">\n";
    out << "<rect x=\"" << num(x0) << "\" y=\"" << num(y1) << "\" width=\"" << num(x1 - x0)
        << "\" height=\"" << num(y0 - y1) << "\"/>\n";
    out << "</g>\n";

    out << "<g class=\"ticks\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#333333\">\n";
    const double ystep = nice_step(hi_ - lo_, 5);
    for (double v = std::ceil(lo_ / ystep) * ystep; v <= hi_ + 1e-12 * ystep; v += ystep) {
      out << "<line x1=\"" << num(x0 - 4) << "\" y1=\"" << num(y(v)) << "\" x2=\"" << num(x0)
          << "\" y2=\"" << num(y(v)) << "\" stroke=\"#333333\"/>\n";
      out << "<text x=\"" << num(x0 - 7) << "\" y=\"" << num(y(v) + 4)
          << "\" text-anchor=\"end\">" << tick_label(v) << "</text>\n";
    }
    const double xstep = std::max(1.0, nice_step(static_cast<double>(points_), 8));
    for (double it = xstep; it <= static_cast<double>(points_) + 1e-9; it += xstep) {
      const double px = x(static_cast<std::size_t>(it) - 1);
      out << "<line x1=\"" << num(px) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(px)
          << "\" y2=\"" << num(y0 + 4) << "\" stroke=\"#333333\"/>\n";
      out << "<text x=\"" << num(px) << "\" y=\"" << num(y0 + 17)
          << "\" text-anchor=\"middle\">" << tick_label(it) << "</text>\n";
    }
    out << "</g>\n";

    out << "<g class=\"labels\" font-family=\"sans-serif\" fill=\"#000000\">\n";
    out << "<text class=\"x-label\" x=\"" << num(0.5 * (x0 + x1)) << "\" y=\""
        << num(kHeight - 14) << "\" font-size=\"13\" text-anchor=\"middle\">iteration</text>\n";
    out << "<text class=\"y-label\" x=\"18\" y=\"" << num(0.5 * (y0 + y1))
        << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << num(0.5 * (y0 + y1)) << ")\">best objective value</text>\n";
    out << "<text class=\"title\" x=\"" << num(0.5 * (x0 + x1)) << "\" y=\"22\" font-size=\"14\" "
        << "text-anchor=\"middle\">" << escape(title) << "</text>\n";
    out << "</g>\n";
  }

  [[nodiscard]] std::string polyline(const std::vector<double>& values) const {
    std::string d;
    for (std::size_t i = 0; i < values.size(); ++i) {
      d += i == 0 ? "M" : " L";
      d += num(x(i)) + "," + num(y(values[i]));
    }
    return d;
  }

 private:
  std::size_t points_;
  double lo_ = 0.0;
  double hi_ = 1.0;
};

void header(std::ostream& out) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\""
      << num(kHeight) << "\" viewBox=\"0 0 " << num(kWidth) << ' ' << num(kHeight) << "\">\n";
  out << "<rect class=\"background\" x=\"0\" y=\"0\" width=\"" << num(kWidth) << "\" height=\""
      << num(kHeight) << "\" fill=\"#ffffff\"/>\n";
}

void legend_entry(std::ostream& out, std::size_t row, const std::string& color,
                  const std::string& label) {
  const double x = kWidth - kRight + 14;
  const double y = kTop + 10 + 18.0 * static_cast<double>(row);
  out << "<line class=\"legend-swatch\" x1=\"" << num(x) << "\" y1=\"" << num(y) << "\" x2=\""
      << num(x + 22) << "\" y2=\"" << num(y) << "\" stroke=\"" << color
      << "\" stroke-width=\"2\"/>\n";
  out << "<text class=\"legend-label\" x=\"" << num(x + 28) << "\" y=\"" << num(y + 4)
      << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(label) << "</text>\n";
}

std::string title_for(const StudySummary& study) {
  return study.objective + " (" + std::string(to_string(study.direction)) + ")";
}

}  // namespace

void render_study_plot(std::ostream& out, const StudySummary& study) {
  if (study.strategies.empty()) throw InvalidArgument("plot: study has no strategies");
  std::size_t points = 0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& s : study.strategies) {
    points = std::max(points, s.mean_trace.size());
    for (std::size_t i = 0; i < s.mean_trace.size(); ++i) {
      lo = std::min({lo, s.mean_trace[i], s.bands[i].low, s.bands[i].high});
      hi = std::max({hi, s.mean_trace[i], s.bands[i].low, s.bands[i].high});
    }
  }
  if (points == 0) throw InvalidArgument("plot: empty traces");
  const Frame frame(points, lo, hi);

  header(out);
  frame.axes(out, title_for(study));
  for (std::size_t k = 0; k < study.strategies.size(); ++k) {
    const auto& s = study.strategies[k];
    const std::string color = kPalette[k % std::size(kPalette)];
    std::string band;
    for (std::size_t i = 0; i < s.bands.size(); ++i) {
      band += (i == 0 ? "M" : " L") + num(frame.x(i)) + "," + num(frame.y(s.bands[i].high));
    }
    for (std::size_t i = s.bands.size(); i-- > 0;) {
      band += " L" + num(frame.x(i)) + "," + num(frame.y(s.bands[i].low));
    }
    band += " Z";
    out << "<g class=\"series\" data-strategy=\"" << escape(s.strategy) << "\">\n";
    out << "<path class=\"band\" d=\"" << band << "\" fill=\"" << color
        << "\" fill-opacity=\"0.18\" stroke=\"" << color
        << "\" stroke-opacity=\"0.3\" stroke-width=\"0.5\"/>\n";
    out << "<path class=\"mean-trace\" d=\"" << frame.polyline(s.mean_trace)
        << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "</g>\n";
  }
  out << "<g class=\"legend\">\n";
  for (std::size_t k = 0; k < study.strategies.size(); ++k) {
    legend_entry(out, k, kPalette[k % std::size(kPalette)], study.strategies[k].strategy);
  }
  out << "</g>\n</svg>\n";
}

void render_sweep_plot(std::ostream& out, const SweepResult& sweep) {
  std::size_t points = sweep.adaptive_mean_trace.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  auto extend = [&](const std::vector<double>& t) {
    points = std::max(points, t.size());
    for (double v : t) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  };
  for (const auto& t : sweep.fixed_mean_traces) extend(t);
  extend(sweep.adaptive_mean_trace);
  if (points == 0) throw InvalidArgument("plot: empty sweep");
  const Frame frame(points, lo, hi);

  header(out);
  frame.axes(out, "margin sweep, " + title_for(sweep.study));
  out << "<g class=\"eps-traces\">\n";
  for (std::size_t k = 0; k < sweep.fixed_mean_traces.size(); ++k) {
    out << "<path class=\"eps-trace\"";
    if (k < sweep.epsilons.size()) out << " data-epsilon=\"" << tick_label(sweep.epsilons[k]) << "\"";
    out << " d=\"" << frame.polyline(sweep.fixed_mean_traces[k])
        << "\" fill=\"none\" stroke=\"#c8c8c8\" stroke-width=\"1.2\"/>\n";
  }
  out << "</g>\n";
  out << "<path class=\"adaptive-trace\" data-strategy=\"AEI\" d=\""
      << frame.polyline(sweep.adaptive_mean_trace)
      << "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"2.2\"/>\n";
  out << "<g class=\"legend\">\n";
  legend_entry(out, 0, "#c8c8c8", "EI, fixed margin");
  legend_entry(out, 1, "#000000", "AEI");
  out << "</g>\n</svg>\n";
}

void write_study_plot(const std::string& path, const StudySummary& study) {
  std::ostringstream out;
  render_study_plot(out, study);
  write_file(path, out.str());
}

void write_sweep_plot(const std::string& path, const SweepResult& sweep) {
  std::ostringstream out;
  render_sweep_plot(out, sweep);
  write_file(path, out.str());
}

}  // namespace ctxbo
