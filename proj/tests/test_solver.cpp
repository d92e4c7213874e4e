#include "doctest.h"

#include "dnls/chebyshev.hpp"
#include "dnls/reconstruction.hpp"

#include <cmath>

using namespace dnls;

namespace {

Potential sech(double A, int J = 6001) { return Potential::sampled(SechFamily{A, {}}, 30.0, J); }

double dist(const M2& a, const M2& b) { return (a - b).cwiseAbs().maxCoeff(); }

// one spectral pair per amplitude, shared by the cases below
const SpectralPair& pair_for(double A) {
    static std::map<double, SpectralPair> cache;
    auto it = cache.find(A);
    if (it == cache.end()) it = cache.emplace(A, direct_map(sech(A))).first;
    return it->second;
}

JumpField resampled(const SpectralPair& sp, double x, double t) {
    auto lay = choose_layout(sp.right.graph.S_inf, sp.Lambda1, x, t);
    return resample_jump(evolve_jump(sp.right, t), lay);
}

} // namespace

TEST_CASE("split_W: nilpotent parts rebuild the x-conjugated jump") {
    auto jf = resampled(pair_for(0.3), 0.7, 0.1);
    const double x = 0.7;
    auto w = split_W(jf, x);
    for (size_t i = 0; i < jf.J.size(); ++i) {
        auto z = jf.graph.arcs[i].points();
        for (size_t j = 0; j < z.size(); ++j) {
            if (!std::isfinite(z[j].real())) continue;
            CHECK(w.Wp[i][j].diagonal().cwiseAbs().maxCoeff() == 0.0);
            CHECK((w.Wp[i][j] * w.Wp[i][j]).cwiseAbs().maxCoeff() == 0.0);
            CHECK((w.Wm[i][j] * w.Wm[i][j]).cwiseAbs().maxCoeff() == 0.0);
            M2 Jx = jf.J[i][j];
            cplx e = std::exp(-2.0 * I_unit * z[j] * x);
            Jx(0, 1) *= e;
            Jx(1, 0) /= e;
            CHECK(dist(jump_from_W(w.Wp[i][j], w.Wm[i][j]), Jx) < 1e-12 * (1 + Jx.cwiseAbs().maxCoeff()));
        }
    }
}

TEST_CASE("solver: W = 0 gives nu = (1, 0) and sigma_min = 1") {
    auto g = build_lambda_contour(1.0, 16, 16);
    BCSolver s(g);
    WPair w;
    for (const Arc& A : g.arcs) {
        w.Wp.emplace_back(A.n, M2::Zero());
        w.Wm.emplace_back(A.n, M2::Zero());
    }
    auto nu = s.solve(w, true);
    CHECK((nu.nu1.array() - 1.0).abs().maxCoeff() == 0.0);
    CHECK(nu.nu2.cwiseAbs().maxCoeff() == 0.0);
    CHECK(nu.sigma_min == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(reconstruct_point(s, nu, w) == cplx(0));
}

TEST_CASE("solver: Neumann series, nu2 linear and nu1 - 1 quadratic in the weight size") {
    auto jf = resampled(pair_for(0.3), 0.0, 0.0);
    BCSolver s(jf.graph);
    auto w = split_W(jf, 0.0);
    auto scaled = [&](double e) {
        WPair v = w;
        for (auto* side : {&v.Wp, &v.Wm})
            for (auto& arc : *side)
                for (auto& m : arc) m *= e;
        return s.solve(v);
    };
    auto a = scaled(1e-3), b = scaled(2e-3);
    double r2 = b.nu2.cwiseAbs().maxCoeff() / a.nu2.cwiseAbs().maxCoeff();
    double r1 = (b.nu1.array() - 1.0).abs().maxCoeff() / (a.nu1.array() - 1.0).abs().maxCoeff();
    CHECK(r2 == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(r1 == doctest::Approx(4.0).epsilon(1e-2));
    CHECK(a.residual < 1e-12);
}

TEST_CASE("solver: second row and the residual of a real solve") {
    auto jf = resampled(pair_for(1.0), 0.5, 0.0);
    BCSolver s(jf.graph);
    auto w = split_W(jf, 0.5);
    auto r1 = s.solve(w, true), r2 = s.solve_row2(w);
    CHECK(r1.residual < 1e-10);
    CHECK(r2.residual < 1e-10);
    CHECK(r1.sigma_min > 0.05);
    CHECK(r1.sigma_min <= 1.0 + 1e-12);
    // dense operator and the block solve agree
    CMat A = s.op(w);
    CVec nu(2 * s.disc().N), rhs = CVec::Zero(2 * s.disc().N);
    nu << r1.nu1, r1.nu2;
    rhs.head(s.disc().N).setOnes();
    CHECK((A * nu - rhs).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("regularizer: Hermite data, first-order matching at +-S") {
    CHECK(regularizer_degree(1.0, 0.5) == 6);
    int n = regularizer_degree(1.2, 14.0);
    double a = std::abs(cplx(1.2, -2.4)), b = std::abs(cplx(14.0, -2.4));
    CHECK(std::pow(a / b, n) * std::pow(14.0 / 1.2, 3) <= 1e-12);
    CHECK(std::pow(a / b, n - 1) * std::pow(14.0 / 1.2, 3) > 1e-12);

    auto h = hermite_cubic(1.0, 2.0, -1.0, -1.0, 0.5, 3.0);
    auto p = [&](double z) { return h[0] + z * (h[1] + z * (h[2] + z * h[3])); };
    auto dp = [&](double z) { return h[1] + z * (2.0 * h[2] + z * 3.0 * h[3]); };
    CHECK(std::abs(p(1.0) - 2.0) < 1e-14);
    CHECK(std::abs(dp(1.0) + 1.0) < 1e-14);
    CHECK(std::abs(p(-1.0) - 0.5) < 1e-14);
    CHECK(std::abs(dp(-1.0) - 3.0) < 1e-14);

    const SpectralPair& sp = pair_for(0.3);
    auto jf = resampled(sp, 0.0, 0.0);
    auto reg = build_regularizer(jf, 8);
    const double S = jf.graph.S_inf;
    // omega1 against the ray J+ (1,0) just beyond S: mismatch O(delta^2)
    int ray = -1;
    for (size_t i = 0; i < jf.graph.arcs.size(); ++i) {
        const Arc& A = jf.graph.arcs[i];
        if (arc_role(A, S) == ArcRole::RealOuter && std::abs(A.at(-1.0) - S) < 1e-12) ray = int(i);
    }
    REQUIRE(ray >= 0);
    const Arc& A = jf.graph.arcs[ray];
    CVec f(A.n);
    for (int j = 0; j < A.n; ++j) f[j] = jf.Jp[ray][j](1, 0);
    auto mismatch = [&](double d) {
        double s = A.inverse(S + d).real();
        cplx v = cheb::interp_row(A.n, s).cwiseProduct(f).sum();
        return std::abs(v - reg.omega[0].entry(S + d));
    };
    double m1 = mismatch(2e-2), m2 = mismatch(1e-2);
    CHECK(mismatch(0.0) < 1e-12);
    CHECK(std::log2(m1 / m2) >= 1.9);
}

TEST_CASE("regularized contour reproduces the reconstruction") {
    const SpectralPair& sp0 = pair_for(0.3);
    const double t = 0.25, x = 0.5;
    auto sp = evolve_pair(sp0, t);
    auto lay = choose_layout(sp.right.graph.S_inf, sp.Lambda1, x, t);
    auto jf = resample_jump(sp.right, lay);
    auto reg = build_regularizer(jf, regularizer_degree(jf.graph.S_inf, sp.Lambda1));
    auto gm = build_modified_contour(jf.graph.S_inf, 0.5 * jf.graph.S_inf, lay);
    auto jm = regularize_jump(jf, reg, gm);
    BCSolver sm(gm), sg(jf.graph);
    auto wm = split_W(jm, x), wg = split_W(jf, x);
    cplx qm = reconstruct_point(sm, sm.solve(wm), wm);
    cplx qg = reconstruct_point(sg, sg.solve(wg), wg);
    CHECK(std::abs(qm - qg) < 1e-8);
}

TEST_CASE("reconstruction: round trip at t = 0 and the mirror overlap") {
    const double A = 0.3;
    InverseMap im(pair_for(A));
    std::vector<double> xs{-4.0, -1.5, -0.25, 0.0, 0.8, 2.5, 6.0};
    auto r = im.run(xs);
    std::vector<cplx> ex;
    for (double x : xs) ex.push_back(A / std::cosh(x));
    CHECK(rel_l2(r.q, ex) < 1e-7);
    CHECK(r.overlap_ok);
    CHECK(r.overlap_error < 1e-8);
    for (auto& d : r.diag) {
        CHECK(d.residual < 1e-10);
        CHECK(d.sigma_min > 0.05);
    }
    // far right: exponentially small values still resolved
    CHECK(std::abs(im.right(20.0) - A / std::cosh(20.0)) < 1e-11);
}

TEST_CASE("reconstruction: x0 and R do not change q") {
    auto q = sech(0.3);
    DirectOptions o;
    o.params.R = 1.3;
    o.params.x0 = 2.0;
    auto sp = direct_map(q, o);
    CHECK(sp.R == doctest::Approx(1.3));
    InverseMap a(pair_for(0.3)), b(sp);
    for (double x : {-1.0, 0.0, 1.5}) CHECK(std::abs(a.at(x) - b.at(x)) < 1e-8);
}

TEST_CASE("resample: Chebyshev transfer agrees with direct assembly") {
    auto q = sech(0.3);
    const SpectralPair& sp = pair_for(0.3);
    LambdaLayout lay{48, 80, 96, 32, sp.Lambda1};
    auto rs = resample_jump(sp.right, lay);
    ScatteringParams p;
    p.R = sp.R;
    p.x0 = sp.x0;
    auto direct = factorize_jump(assemble_jump(build_scattering_data(q, p, lay)));
    REQUIRE(rs.J.size() == direct.J.size());
    double err = 0;
    for (size_t i = 0; i < rs.J.size(); ++i)
        for (size_t j = 0; j < rs.J[i].size(); ++j) err = std::max(err, dist(rs.J[i][j], direct.J[i][j]));
    CHECK(err < 1e-9);
}

TEST_CASE("layout: multiples of 16, growing with |x| and t") {
    auto a = choose_layout(1.0, 10.0, 0.0, 0.0), b = choose_layout(1.0, 10.0, 5.0, 0.0),
         c = choose_layout(1.0, 10.0, 0.0, 0.5);
    for (auto& l : {a, b, c}) {
        CHECK(l.n_segment % 16 == 0);
        CHECK(l.n_arc % 16 == 0);
        CHECK(l.n_near % 16 == 0);
        CHECK(l.n_tail >= 16);
    }
    CHECK(b.n_near > a.n_near);
    CHECK(c.n_near > a.n_near);
    CHECK(choose_layout(1.0, 10.0, 0.0, 0.0, 2.0).n_near > a.n_near);
}

TEST_CASE("zeta plane: nu/mu correspondence, limit formula, Lax equation") {
    auto q = sech(0.3);
    const SpectralPair& sp = pair_for(0.3);
    InverseMap im(sp);
    int j0 = grid_index(q, sp.x0);
    auto sigma = build_zeta_contour(sp.R, 64, 96);
    auto vf = factorize_zeta_jump(assemble_zeta_jump(q, j0, sigma));
    BCSolver zs(vf.graph);
    const double x = 0.7;
    auto w = split_W(vf, x);
    auto mu = zs.solve(w);
    auto s = im.solve(false, x, false);
    CHECK(zeta_crosscheck(*s.solver, s.nu, zs, mu) < 1e-8);
    cplx ql = reconstruct_limit(zs, mu, w), qp = reconstruct_point(*s.solver, s.nu, s.w);
    CHECK(std::abs(ql - qp) < 1e-8);
    CHECK(std::abs(qp - 0.3 / std::cosh(x)) < 1e-9);

    auto qf = [](double y) { return cplx(0.3 / std::cosh(y)); };
    std::vector<cplx> probes{cplx(0.4, 1.9), cplx(-1.7, 0.6), cplx(2.5, -0.8)};
    auto r1 = lax_consistency(vf, qf, x, 2e-2, probes), r2 = lax_consistency(vf, qf, x, 1e-2, probes);
    CHECK(r1.residual < 1e-4);
    CHECK(r2.residual < 1e-4);
    CHECK(std::log2(r1.residual / r2.residual) > 1.8);
    CHECK(lax_consistency(vf, qf, x, 1e-3, probes).residual < 1e-4);
}
