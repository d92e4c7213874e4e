#pragma once

#include "dnls/potential.hpp"

namespace dnls {

// i q_t + q_xx + i eps q^2 conj(q)_x + |q|^4 q / 2 = 0 with eps = -1 on a
// periodic box, integrating-factor RK4 (Lawson) with 3/2-padded products.
struct PdeOptions {
    double L = 120.0; // box [-L/2, L/2)
    int N = 1024;
    double eps = -1.0;
    double blowup_factor = 10.0;
};

struct PdeRun {
    double L = 0, dt = 0;
    int N = 0;
    std::string scheme = "IF-RK4";
    std::vector<double> x;                  // box grid
    std::vector<double> t;                  // snapshot times
    std::vector<std::vector<cplx>> q;       // snapshots
    std::vector<double> l2;                 // ||q||_2^2 at the snapshots
};

// dt may be negative (backward run); snapshots at the requested times (same sign as dt)
PdeRun step_dnls2(const Potential& q0, const std::vector<double>& times, double dt, const PdeOptions& opt = {});
PdeRun step_dnls2(const std::vector<cplx>& q0_box, const std::vector<double>& times, double dt,
                  const PdeOptions& opt = {});

// box grid of the options
std::vector<double> box_grid(const PdeOptions& opt);

} // namespace dnls
