#include "doctest.h"

#include "dnls/scattering.hpp"

#include <boost/numeric/odeint.hpp>
#include <random>

using namespace dnls;

namespace {

Potential sech(double A, int J = 6001) { return Potential::sampled(SechFamily{A, {}}, 30.0, J); }

// reference m+ at x by adaptive Dormand-Prince integration of the ODE from +X
M2 ode_mplus(const SechFamily& f, cplx z, double X, double x) {
    using State = std::array<double, 8>;
    auto rhs = [&](const State& s, State& ds, double y) {
        M2 m;
        m << cplx(s[0], s[1]), cplx(s[2], s[3]), cplx(s[4], s[5]), cplx(s[6], s[7]);
        cplx q = f(y);
        double p = 0.5 * std::norm(q);
        M2 sig, Q, P;
        sig << 1, 0, 0, -1;
        Q << 0, q, -std::conj(q), 0;
        P << I_unit * p, 0, 0, -I_unit * p;
        M2 dm = -I_unit * z * z * (sig * m - m * sig) + (z * Q + P) * m;
        for (int k = 0; k < 4; ++k) {
            ds[2 * k] = dm(k / 2, k % 2).real();
            ds[2 * k + 1] = dm(k / 2, k % 2).imag();
        }
    };
    State s{1, 0, 0, 0, 0, 0, 1, 0};
    namespace ode = boost::numeric::odeint;
    ode::integrate_adaptive(ode::make_controlled<ode::runge_kutta_dopri5<State>>(1e-13, 1e-13), rhs, s, X, x, -1e-3);
    M2 m;
    m << cplx(s[0], s[1]), cplx(s[2], s[3]), cplx(s[4], s[5]), cplx(s[6], s[7]);
    return m;
}

} // namespace

TEST_CASE("jost: zero potential gives identity") {
    auto q = Potential::zero();
    auto jp = jost_solve(q, cplx(0.7, 0.2));
    double err = 0;
    for (int j = 0; j < q.size(); j += 50)
        err = std::max({err, maxabs(jp.mp[j] - M2::Identity()), maxabs(jp.mm[j] - M2::Identity())});
    CHECK(err == 0.0);
}

TEST_CASE("jost: zeta = 0 decouples") {
    double A = 0.8;
    auto q = sech(A);
    auto jp = jost_solve(q, 0.0);
    double err = 0, off = 0;
    for (int j = 0; j < q.size(); j += 97) {
        // int_x^inf A^2 sech^2 = A^2 (1 - tanh x)
        cplx ref = std::exp(-0.5 * I_unit * A * A * (1.0 - std::tanh(q.x[j])));
        err = std::max(err, std::abs(jp.mp[j](0, 0) - ref));
        off = std::max(off, std::abs(jp.mp[j](1, 0)));
    }
    CHECK(err < 1e-9);
    CHECK(off == 0.0);
}

TEST_CASE("jost: agrees with adaptive ODE integration, det = 1") {
    SechFamily f{0.3, {}};
    auto q = sech(0.3);
    cplx z = 1.0;
    auto jp = jost_solve(q, z);
    for (double x : {2.0, 0.0, -3.0}) {
        int j = grid_index(q, x + 1e-9);
        M2 ref = ode_mplus(f, z, 30.0, q.x[j]);
        CHECK(maxabs(jp.mp[j] - ref) < 1e-9);
    }
    double det_err = 0;
    for (int j = 0; j < q.size(); ++j)
        det_err = std::max({det_err, std::abs(jp.mp[j].determinant() - 1.0), std::abs(jp.mm[j].determinant() - 1.0)});
    CHECK(det_err < 1e-9);
}

TEST_CASE("transition: trivial and closed-form anchors") {
    auto c0 = transition_coeffs(Potential::zero(), 0.4);
    CHECK(std::abs(c0.a - 1.0) == 0.0);
    CHECK(std::abs(c0.b) == 0.0);
    CHECK(std::abs(c0.bb) == 0.0);
    for (double A : {0.1, 0.3, 1.0}) {
        auto c = transition_coeffs(sech(A), 0.0);
        CHECK(std::abs(c.a - std::exp(-0.5 * I_unit * 2.0 * A * A)) < 1e-8);
    }
    auto c = transition_coeffs(sech(0.3), 0.7);
    CHECK(std::abs(c.a * c.ab - c.b * c.bb - 1.0) < 1e-9);
    CHECK(std::abs(c.a - c.a_alt) < 1e-9);
    CHECK(std::abs(c.ab - c.ab_alt) < 1e-9);
}

TEST_CASE("transition: symmetry suite on R and iR") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(0.05, 2.0);
    auto q = Potential::sampled(SechFamily{0.3, {0.0, 0.2, 0.05}});
    for (int i = 0; i < 6; ++i) {
        double s = U(rng);
        for (cplx z : {cplx(s, 0), cplx(0, s)}) {
            auto c = transition_coeffs(q, z), cm = transition_coeffs(q, -z), cc = transition_coeffs(q, std::conj(z));
            CHECK(std::abs(cm.a - c.a) < 1e-9);
            CHECK(std::abs(c.ab - std::conj(cc.a)) < 1e-9);
            CHECK(std::abs(cm.b + c.b) < 1e-9);
            CHECK(std::abs(c.bb + std::conj(cc.b)) < 1e-9);
            if (z.real() == 0) CHECK(std::abs(std::norm(c.a) - std::norm(c.b) - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("reflection: arithmetic and guard") {
    TransitionCoeffs c{0.5, 2.0, 1.0, 0.0, 0.1, 2.0, 1.0};
    auto r = reflection(c);
    CHECK(std::abs(r.r - 0.05) < 1e-15);
    c.a = 1e-9;
    CHECK_THROWS_AS(reflection(c), NumericError);
}

TEST_CASE("to_lambda: identities") {
    auto q0 = Potential::zero();
    auto L0 = to_lambda(q0, 2.0, 0.0);
    CHECK(std::abs(L0.alpha - 1.0) == 0.0);
    CHECK(std::abs(L0.rho) == 0.0);
    auto q = sech(0.3);
    for (double lam : {0.3, 1.7, 4.0, -2.5}) {
        auto L = to_lambda(q, lam, 0.5);
        CHECK(std::abs(std::norm(L.alpha) + lam * std::norm(L.beta) - 1.0) < 1e-9);
        auto c = transition_coeffs(q, sqrt_branch(lam));
        CHECK(L.alpha == c.a);
        // lambda-form march gives the same alpha
        CHECK(std::abs(alpha_lambda(q, lam) - L.alpha) < 1e-10);
    }
}

TEST_CASE("choose_cutoff: matches a direct tail scan") {
    CHECK(choose_cutoff(Potential::zero(), 1.0) == -30.0);
    for (double A : {0.3, 1.0}) {
        auto q = sech(A);
        double R = 1.0;
        double x0 = choose_cutoff(q, R);
        // tail of R A sech (dominant since A/2 <= R): R A (pi/2 - gd(x))
        auto tail = [&](double x) { return R * A * (PI / 2 - 2 * std::atan(std::tanh(x / 2))); };
        int j = grid_index(q, x0 + 1e-9);
        CHECK(tail(q.x[j]) < 0.45 + 1e-6);
        CHECK(tail(q.x[j - 1]) > 0.45 - 1e-6);
        CHECK(choose_cutoff(q, 2 * R) >= x0);
    }
}

TEST_CASE("choose_radius: zero-free data returns the floor") {
    CHECK(choose_radius(Potential::zero()) == 1.0);
    CHECK(choose_radius(sech(0.3)) == 1.0);
}
