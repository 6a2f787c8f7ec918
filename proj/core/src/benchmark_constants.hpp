#pragma once

#include <array>

// Published constants for the built-in benchmark functions. Each known optimum
// is re-checked by self_test_objectives(), which guards against transcription
// errors here.

namespace ctxbo::constants {

struct BraninConstants {
  double a, b, c, r, s, t;
};
extern const BraninConstants branin;
extern const std::array<std::array<double, 2>, 3> branin_minimizers;
extern const double branin_minimum;

extern const std::array<std::array<double, 2>, 2> camelback_minimizers;
extern const double camelback_minimum;

extern const std::array<double, 4> hartmann6_alpha;
extern const std::array<std::array<double, 6>, 4> hartmann6_a;
extern const std::array<std::array<double, 6>, 4> hartmann6_p;
extern const std::array<double, 6> hartmann6_maximizer;
extern const double hartmann6_maximum;

}  // namespace ctxbo::constants
