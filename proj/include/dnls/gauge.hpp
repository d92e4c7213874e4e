#pragma once

#include "dnls/potential.hpp"

namespace dnls {

// int_x^X |u|^2 by cumulative trapezoid from the right grid end
std::vector<double> tail_integral(const Potential& u);

// q = u exp(i eps int_x^inf |u|^2)
Potential gauge_forward(const Potential& u, int eps);
// u = q exp(-i eps int_x^inf |q|^2); exact inverse since |q| = |u|
Potential gauge_inverse(const Potential& q, int eps);

} // namespace dnls
