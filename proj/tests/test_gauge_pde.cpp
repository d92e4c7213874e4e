#include "doctest.h"

#include "dnls/gauge.hpp"
#include "dnls/pde_oracle.hpp"

#include <cmath>

using namespace dnls;

namespace {

Potential sech(double A, int J = 6001) { return Potential::sampled(SechFamily{A, {}}, 30.0, J); }

double maxdiff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double m = 0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace

TEST_CASE("gauge: tail integral of A sech against A^2 (1 - tanh x)") {
    const double A = 0.7;
    auto u = sech(A);
    auto I = tail_integral(u);
    double err = 0;
    for (int j = 0; j < u.size(); j += 7) {
        // the grid stops at X = 30, which drops A^2 (1 - tanh 30) ~ 4e-27
        double exact = A * A * (std::tanh(30.0) - std::tanh(u.x[j]));
        err = std::max(err, std::abs(I[j] - exact));
    }
    CHECK(err < 1e-5);
    CHECK(I.back() == 0.0);
}

TEST_CASE("gauge: zero maps to zero, L2 norm kept") {
    auto z = gauge_forward(Potential::zero(), -1);
    for (auto v : z.q) CHECK(v == cplx(0));
    auto u = sech(0.8);
    CHECK(gauge_forward(u, 1).l2_norm_sq() == doctest::Approx(u.l2_norm_sq()).epsilon(1e-14));
}

TEST_CASE("gauge: forward then inverse is the identity and keeps |q|") {
    for (int eps : {-1, 1}) {
        auto u = sech(1.0);
        for (int j = 0; j < u.size(); ++j) u.q[j] *= std::exp(I_unit * 0.3 * u.x[j]);
        auto q = gauge_forward(u, eps);
        auto back = gauge_inverse(q, eps);
        CHECK(maxdiff(back.q, u.q) < 1e-14);
        for (int j = 0; j < u.size(); j += 100) CHECK(std::abs(std::abs(q.q[j]) - std::abs(u.q[j])) < 1e-15);
        // right end: no phase
        CHECK(std::abs(q.q.back() - u.q.back()) == 0.0);
    }
    CHECK_THROWS_AS(gauge_forward(sech(1.0), 0), std::invalid_argument);
}

TEST_CASE("gauge: phase at the left end is eps times the mass") {
    auto u = sech(0.5);
    auto q = gauge_forward(u, -1);
    double mass = tail_integral(u)[0];
    cplx ph = q.q[0] / u.q[0];
    CHECK(std::abs(ph - std::exp(-I_unit * mass)) < 1e-12);
    CHECK(mass == doctest::Approx(0.5).epsilon(1e-6)); // 2 A^2 = 0.5
}

TEST_CASE("pde: zero stays zero") {
    PdeOptions o;
    o.N = 256;
    auto r = step_dnls2(std::vector<cplx>(256, 0.0), {0.1}, 1e-2, o);
    for (auto v : r.q[0]) CHECK(v == cplx(0));
}

TEST_CASE("pde: plane wave c e^{i(kx - w t)}, w = k^2 + k|c|^2 - |c|^4/2") {
    PdeOptions o;
    o.N = 128;
    o.L = 2 * PI;
    auto x = box_grid(o);
    for (int m : {-2, 1, 3}) {
        double k = m;
        cplx c(0.6, 0.2);
        double c2 = std::norm(c);
        double w = k * k + k * c2 - c2 * c2 / 2;
        std::vector<cplx> q0(o.N);
        for (int j = 0; j < o.N; ++j) q0[j] = c * std::exp(I_unit * k * x[j]);
        const double t = 0.4;
        auto r = step_dnls2(q0, {t}, 1e-3, o);
        std::vector<cplx> ex(o.N);
        for (int j = 0; j < o.N; ++j) ex[j] = c * std::exp(I_unit * (k * x[j] - w * t));
        CHECK(maxdiff(r.q[0], ex) < 1e-10);
    }
}

TEST_CASE("pde: mass conservation, fourth order in dt, time reversibility") {
    auto q3 = sech(0.3);
    auto run3 = step_dnls2(q3, {0.25, 0.5, 0.75, 1.0}, 1e-3);
    for (double m : run3.l2) CHECK(std::abs(m - 0.18) < 1e-6);

    auto q = sech(1.0);
    const double dts[3] = {0.05, 0.025, 0.0125};
    auto ref = step_dnls2(q, {0.5}, dts[2] / 8);
    std::vector<double> errs;
    for (double dt : dts) {
        auto r = step_dnls2(q, {0.5}, dt);
        errs.push_back(maxdiff(r.q[0], ref.q[0]));
        CHECK(std::abs(r.l2[0] - 2.0) < 1e-6);
    }
    for (int i = 0; i + 1 < 3; ++i) {
        double p = std::log2(errs[i] / errs[i + 1]);
        CHECK(p >= 3.8);
        CHECK(p < 4.6);
    }
    auto fw = step_dnls2(q, {0.25}, 1e-3);
    auto bw = step_dnls2(fw.q[0], {-0.25}, -1e-3);
    std::vector<cplx> q0(fw.x.size());
    for (size_t j = 0; j < q0.size(); ++j) q0[j] = q.at(fw.x[j]);
    CHECK(maxdiff(bw.q[0], q0) < 1e-10);
}

TEST_CASE("pde: blow-up guard and bad arguments") {
    PdeOptions o;
    o.N = 256;
    o.blowup_factor = 1.01;
    // a strongly focused packet grows past 1% quickly
    auto x = box_grid(o);
    std::vector<cplx> q0(o.N);
    for (int j = 0; j < o.N; ++j) q0[j] = 1.5 * std::exp(-x[j] * x[j]) * std::exp(-I_unit * x[j] * x[j]);
    CHECK_THROWS_AS(step_dnls2(q0, {0.5}, 1e-3, o), NumericError);
    CHECK_THROWS_AS(step_dnls2(q0, {0.5}, 0.0, o), std::invalid_argument);
    CHECK_THROWS_AS(step_dnls2(q0, {-0.5}, 1e-3, o), std::invalid_argument);
}
