#include "doctest.h"

#include "dnls/evolution.hpp"

using namespace dnls;

namespace {

Potential sech(double A, int J = 3001) { return Potential::sampled(SechFamily{A, {}}, 30.0, J); }

double dist(const M2& a, const M2& b) { return (a - b).cwiseAbs().maxCoeff(); }

JumpField lambda_data(double A, int n = 24) {
    LambdaLayout lay;
    lay.n_segment = lay.n_arc = lay.n_tail = n;
    return factorize_jump(assemble_jump(build_scattering_data(sech(A), {}, lay)));
}

} // namespace

TEST_CASE("evolution: t = 0 is the identity and the phase law") {
    auto jf = lambda_data(0.3);
    auto e0 = evolve_jump(jf, 0.0);
    for (size_t i = 0; i < jf.J.size(); ++i)
        for (size_t j = 0; j < jf.J[i].size(); ++j) CHECK(dist(e0.J[i][j], jf.J[i][j]) == 0.0);
    // rho = 1 at lambda = 1, t = pi/2: phase e^{-2 pi i} = 1
    cplx ph = std::exp(-4.0 * I_unit * 1.0 * (PI / 2));
    CHECK(std::abs(ph - 1.0) < 1e-14);
}

TEST_CASE("evolution: group law, moduli on the real axis, zero patterns") {
    auto jf = lambda_data(0.3);
    auto a = evolve_jump(evolve_jump(jf, 0.1), 0.15);
    auto b = evolve_jump(jf, 0.25);
    CHECK(b.t == doctest::Approx(0.25));
    for (size_t i = 0; i < jf.J.size(); ++i) {
        auto z = jf.graph.arcs[i].points();
        for (size_t j = 0; j < jf.J[i].size(); ++j) {
            CHECK(dist(a.J[i][j], b.J[i][j]) < 1e-12 * (1 + b.J[i][j].cwiseAbs().maxCoeff()));
            CHECK(b.J[i][j](0, 0) == jf.J[i][j](0, 0));
            CHECK(b.J[i][j](1, 1) == jf.J[i][j](1, 1));
            CHECK(std::abs(b.J[i][j].determinant() - 1.0) < 1e-10 * (1 + b.J[i][j].cwiseAbs().maxCoeff()));
            for (int e = 0; e < 4; ++e) {
                int r = e / 2, c = e % 2;
                if (jf.Jp[i][j](r, c) == cplx(0)) CHECK(b.Jp[i][j](r, c) == cplx(0));
                if (jf.Jm[i][j](r, c) == cplx(0)) CHECK(b.Jm[i][j](r, c) == cplx(0));
            }
            if (std::isfinite(z[j].real()) && z[j].imag() == 0) {
                CHECK(std::abs(std::abs(b.J[i][j](0, 1)) - std::abs(jf.J[i][j](0, 1))) < 1e-14);
                CHECK(std::abs(std::abs(b.J[i][j](1, 0)) - std::abs(jf.J[i][j](1, 0))) < 1e-14);
            }
        }
    }
}

TEST_CASE("evolution: zeta law agrees with the lambda law at lambda = zeta^2") {
    auto q = sech(0.3);
    auto sigma = build_zeta_contour(1.0, 16, 16);
    auto vf = factorize_zeta_jump(assemble_zeta_jump(q, 1500, sigma));
    double t = 0.37;
    auto ev = evolve_zeta(vf, t);
    for (size_t i = 0; i < vf.J.size(); ++i) {
        auto z = sigma.arcs[i].points();
        for (size_t j = 0; j < vf.J[i].size(); ++j) {
            if (!std::isfinite(z[j].real())) continue;
            cplx l = z[j] * z[j];
            cplx e = std::exp(-4.0 * I_unit * l * l * t);
            CHECK(std::abs(ev.J[i][j](0, 1) - e * vf.J[i][j](0, 1)) < 1e-12 * (1 + std::abs(vf.J[i][j](0, 1))));
            CHECK(std::abs(ev.J[i][j](1, 0) - vf.J[i][j](1, 0) / e) < 1e-12 * (1 + std::abs(vf.J[i][j](1, 0) / e)));
        }
    }
}

TEST_CASE("evolution: b-law against a finite difference of the phase, a unchanged") {
    // b(t) = e^{-4i zeta^4 t} b solves b' = -4i zeta^4 b
    cplx z(0.8, 0.3), b0(0.2, -0.1);
    auto b = [&](double t) { return std::exp(-4.0 * I_unit * std::pow(z, 4) * t) * b0; };
    double h = 1e-5, t = 0.3;
    cplx fd = (b(t + h) - b(t - h)) / (2 * h);
    CHECK(std::abs(fd - (-4.0 * I_unit * std::pow(z, 4) * b(t))) < 1e-8);
}
