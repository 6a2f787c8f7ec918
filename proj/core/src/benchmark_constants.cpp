#include "benchmark_constants.hpp"

#include <numbers>

namespace ctxbo::constants {

using std::numbers::pi;

const BraninConstants branin{
    1.0, 5.1 / (4.0 * pi * pi), 5.0 / pi, 6.0, 10.0, 1.0 / (8.0 * pi),
};
const std::array<std::array<double, 2>, 3> branin_minimizers{{
    {-pi, 12.275},
    {pi, 2.275},
    {9.42478, 2.475},
}};
const double branin_minimum = 0.397887;

const std::array<std::array<double, 2>, 2> camelback_minimizers{{
    {0.0898, -0.7126},
    {-0.0898, 0.7126},
}};
const double camelback_minimum = -1.0316;

const std::array<double, 4> hartmann6_alpha{1.0, 1.2, 3.0, 3.2};
const std::array<std::array<double, 6>, 4> hartmann6_a{{
    {10.0, 3.0, 17.0, 3.5, 1.7, 8.0},
    {0.05, 10.0, 17.0, 0.1, 8.0, 14.0},
    {3.0, 3.5, 1.7, 10.0, 17.0, 8.0},
    {17.0, 8.0, 0.05, 10.0, 0.1, 14.0},
}};
const std::array<std::array<double, 6>, 4> hartmann6_p{{
    {0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886},
    {0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991},
    {0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650},
    {0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381},
}};
const std::array<double, 6> hartmann6_maximizer{0.20169, 0.150011, 0.476874,
                                                0.275332, 0.311652, 0.6573};
const double hartmann6_maximum = 3.32237;

}  // namespace ctxbo::constants
