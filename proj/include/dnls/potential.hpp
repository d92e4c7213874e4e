#pragma once

#include "dnls/common.hpp"

#include <optional>

namespace dnls {

// analytic family A sech(x) exp(i sum_k phase[k] x^k)
struct SechFamily {
    cplx A{0.3, 0.0};
    std::vector<double> phase;
    cplx operator()(double x) const;
};

struct Potential {
    double X = 30.0;         // grid spans [-X, X]
    std::vector<double> x;   // uniform
    std::vector<cplx> q;
    std::optional<SechFamily> family;

    int size() const { return int(x.size()); }
    double h() const { return x[1] - x[0]; }

    static Potential sampled(const SechFamily& f, double X = 30.0, int J = 12001);
    static Potential zero(double X = 30.0, int J = 12001);

    // discrete estimate of ||q||_{H^{2,2}} (L2 of q, q'', x^2 q)
    double h22_norm() const;
    double l2_norm_sq() const;
    // |q| at the grid ends, checked against the truncation tolerance
    void validate(double tail_tol = 1e-10) const;

    // value by local cubic interpolation (x outside grid -> 0)
    cplx at(double xx) const;

    // conj(q(-x)) on the same grid
    Potential mirror() const;
};

} // namespace dnls
