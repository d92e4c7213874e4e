#include "dnls/rhp_solver.hpp"
#include "dnls/chebyshev.hpp"

#include <cmath>
#include <functional>

namespace dnls {

namespace {

M2 phase_conj(const M2& A, cplx e) {
    // e^{-i lambda x ad sigma} A with e = e^{-2 i lambda x}
    M2 B = A;
    B(0, 1) *= e;
    B(1, 0) /= e;
    return B;
}

int quant16(double n) { return std::max(16, int(std::ceil(n / 16.0)) * 16); }

} // namespace

WPair split_W(const JumpField& jf, double x) {
    if (!jf.has_factors()) throw std::invalid_argument("split_W needs factored jumps");
    WPair w;
    w.x = x;
    w.t = jf.t;
    bool zeta = jf.graph.kind == ContourKind::Zeta;
    for (size_t i = 0; i < jf.graph.arcs.size(); ++i) {
        auto z = jf.graph.arcs[i].points();
        std::vector<M2> P(z.size(), M2::Zero()), M(z.size(), M2::Zero());
        for (size_t j = 0; j < z.size(); ++j) {
            if (!std::isfinite(z[j].real())) continue;
            cplx l = zeta ? z[j] * z[j] : z[j];
            cplx e = std::exp(-2.0 * I_unit * l * x);
            P[j] = phase_conj(jf.Jp[i][j], e) - M2::Identity();
            M[j] = M2::Identity() - phase_conj(jf.Jm[i][j], e);
            // the factors are unipotent: keep the diagonal exactly zero
            P[j].diagonal().setZero();
            M[j].diagonal().setZero();
        }
        w.Wp.push_back(P);
        w.Wm.push_back(M);
    }
    return w;
}

M2 jump_from_W(const M2& Wp, const M2& Wm) { return (M2::Identity() - Wm).inverse() * (M2::Identity() + Wp); }

cplx RationalFactor::entry(cplx z) const {
    cplx p_ = p[0] + z * (p[1] + z * (p[2] + z * p[3]));
    return p_ / std::pow(z - z0, n);
}

M2 RationalFactor::value(cplx z) const {
    if (!std::isfinite(z.real())) return M2::Identity();
    return upper ? dnls::upper(entry(z)) : lower(entry(z));
}

M2 RationalFactor::inverse(cplx z) const {
    if (!std::isfinite(z.real())) return M2::Identity();
    return upper ? dnls::upper(-entry(z)) : lower(-entry(z));
}

std::array<cplx, 4> hermite_cubic(cplx a, cplx fa, cplx dfa, cplx b, cplx fb, cplx dfb) {
    Eigen::Matrix4cd M;
    Eigen::Vector4cd r;
    M << 1.0, a, a * a, a * a * a, 0.0, 1.0, 2.0 * a, 3.0 * a * a, 1.0, b, b * b, b * b * b, 0.0, 1.0, 2.0 * b,
        3.0 * b * b;
    r << fa, dfa, fb, dfb;
    auto lu = M.fullPivLu();
    if (!lu.isInvertible()) throw NumericError("singular Hermite system");
    Eigen::Vector4cd c = lu.solve(r);
    return {c[0], c[1], c[2], c[3]};
}

Regularizer build_regularizer(const JumpField& jf, int n) {
    if (!jf.has_factors()) throw std::invalid_argument("build_regularizer needs factored jumps");
    const ContourGraph& g = jf.graph;
    const double S = g.S_inf;
    Regularizer reg;
    reg.S_inf = S;
    struct Spec {
        ArcRole role;
        bool plus;
        int r, c;
        bool upper;
        cplx z0;
    };
    const cplx up = 2.0 * I_unit * S, dn = -2.0 * I_unit * S;
    const Spec spec[4] = {
        {ArcRole::RealOuter, true, 1, 0, false, dn},  // Omega1: J+ on the rays
        {ArcRole::RealOuter, false, 0, 1, true, up},  // Omega2: J- on the rays
        {ArcRole::RealInner, false, 1, 0, false, dn}, // Omega3: J- on the segment
        {ArcRole::RealInner, true, 0, 1, true, up},   // Omega4: J+ on the segment
    };
    for (int k = 0; k < 4; ++k) {
        const Spec& sp = spec[k];
        std::vector<CVec> samples;
        std::vector<ArcRole> roles;
        for (size_t i = 0; i < g.arcs.size(); ++i) {
            roles.push_back(arc_role(g.arcs[i], S));
            CVec v = CVec::Zero(g.arcs[i].n);
            if (roles.back() == sp.role) {
                const auto& F = sp.plus ? jf.Jp[i] : jf.Jm[i];
                for (int j = 0; j < g.arcs[i].n; ++j) v[j] = F[j](sp.r, sp.c);
            }
            samples.push_back(v);
        }
        cplx val[2], der[2];
        for (int e = 0; e < 2; ++e) {
            double a = e == 0 ? S : -S;
            int node = g.node_of(a);
            if (node < 0) throw std::logic_error("missing node at +-S_inf");
            NodeTrace tr = node_trace(g, node, samples, 2);
            bool found = false;
            for (size_t i = 0; i < tr.inc.size(); ++i)
                if (roles[tr.inc[i].arc] == sp.role) {
                    val[e] = tr.f[i][0];
                    der[e] = tr.f[i][1];
                    found = true;
                    break;
                }
            if (!found) throw std::logic_error("no real arc at a circle node");
        }
        RationalFactor& w = reg.omega[k];
        w.z0 = sp.z0;
        w.n = n;
        w.upper = sp.upper;
        cplx a = S, b = -S;
        cplx ua = std::pow(a - w.z0, n), ub = std::pow(b - w.z0, n);
        cplx ua1 = std::pow(a - w.z0, n - 1), ub1 = std::pow(b - w.z0, n - 1);
        w.p = hermite_cubic(a, val[0] * ua, der[0] * ua + double(n) * val[0] * ua1, b, val[1] * ub,
                            der[1] * ub + double(n) * val[1] * ub1);
    }
    return reg;
}

int regularizer_degree(double S, double L1, double tol) {
    if (!(L1 > S)) return 6;
    const double a = std::abs(cplx(S, -2 * S)), b = std::abs(cplx(L1, -2 * S));
    int n = 6;
    while (n < 64 && std::pow(a / b, n) * std::pow(L1 / S, 3) > tol) ++n;
    return n;
}

JumpField regularize_jump(const JumpField& jf, const Regularizer& reg, const ContourGraph& gm) {
    if (!jf.has_factors()) throw std::invalid_argument("regularize_jump needs factored jumps");
    const auto& w = reg.omega;
    JumpField out;
    out.graph = gm;
    out.t = jf.t;
    for (const Arc& A : gm.arcs) {
        auto z = A.points();
        std::vector<M2> J(A.n, M2::Identity()), P = J, M = J;
        if (A.kind != ArcKind::Elliptical) {
            int src = -1;
            for (size_t i = 0; i < jf.graph.arcs.size(); ++i)
                if (jf.graph.arcs[i].name == A.name) src = int(i);
            if (src < 0 || jf.graph.arcs[src].n != A.n) throw std::invalid_argument("layouts differ: " + A.name);
            const bool reversed = A.name == "segment";
            ArcRole role = arc_role(A, reg.S_inf);
            for (int j = 0; j < A.n; ++j) {
                int js = reversed ? A.n - 1 - j : j;
                cplx l = z[j];
                const M2 &Jp = jf.Jp[src][js], &Jm = jf.Jm[src][js], &J0 = jf.J[src][js];
                switch (role) {
                case ArcRole::RealOuter:
                    P[j] = Jp * w[0].inverse(l);
                    M[j] = Jm * w[1].inverse(l);
                    break;
                case ArcRole::RealInner:
                    P[j] = Jm * w[2].inverse(l);
                    M[j] = Jp * w[3].inverse(l);
                    break;
                case ArcRole::CircleUpper: P[j] = w[2].value(l) * J0 * w[0].inverse(l); break;
                case ArcRole::CircleLower: M[j] = (w[1].value(l) * J0 * w[3].inverse(l)).inverse(); break;
                case ArcRole::Identity: break;
                }
                J[j] = M[j].inverse() * P[j];
            }
        }
        out.J.push_back(J);
        out.Jp.push_back(P);
        out.Jm.push_back(M);
    }
    return out;
}

BCSolver::BCSolver(const ContourGraph& g) : g_(std::make_unique<ContourGraph>(g)) {
    d_ = Discretization::make(*g_);
    auto pr = boundary_projectors(d_);
    Cp_ = std::move(pr.first);
    Cm_ = std::move(pr.second);
}

void BCSolver::flatten(const WPair& w, std::vector<M2>& Wp, std::vector<M2>& Wm) const {
    Wp.assign(d_.N, M2::Zero());
    Wm.assign(d_.N, M2::Zero());
    if (w.Wp.size() != g_->arcs.size()) throw std::invalid_argument("weights do not match the contour");
    for (size_t c = 0; c < d_.arcs.size(); ++c) {
        int a = d_.arcs[c];
        for (int j = 0; j < g_->arcs[a].n; ++j) {
            Wp[d_.off[c] + j] = w.Wp[a][j];
            Wm[d_.off[c] + j] = w.Wm[a][j];
        }
    }
}

CMat BCSolver::op(const WPair& w) const {
    std::vector<M2> Wp, Wm;
    flatten(w, Wp, Wm);
    CMat A = -build_bc_operator(Wp, Wm, Cp_, Cm_);
    A.diagonal().array() += 1.0;
    return A;
}

namespace {

std::vector<int> finite_index(const std::vector<bool>& at_inf) {
    std::vector<int> K;
    const int N = int(at_inf.size());
    for (int c = 0; c < 2; ++c)
        for (int k = 0; k < N; ++k)
            if (!at_inf[k]) K.push_back(c * N + k);
    return K;
}

using Apply = std::function<CVec(const CVec&)>;

// smallest singular value of diag(wt) A diag(wt)^{-1} by inverse power
// iteration, given solves with A and A^H
double sigma_inverse_iteration(const Apply& solve, const Apply& solve_adj, const RVec& wt, const CVec& start) {
    const CVec w = wt.cast<cplx>();
    CVec v = start / start.norm();
    double est = 0;
    for (int it = 0; it < 80; ++it) {
        CVec y = solve(v.cwiseQuotient(w)).cwiseProduct(w);
        CVec u = solve_adj(y.cwiseProduct(w)).cwiseQuotient(w);
        double nu = u.norm();
        if (!(nu > 0) || !std::isfinite(nu)) throw NumericError("sigma_min iteration broke down");
        double next = std::sqrt(nu);
        v = u / nu;
        bool done = it > 3 && std::abs(next - est) < 1e-8 * next;
        est = next;
        if (done) break;
    }
    return 1.0 / est;
}

CVec adj_solve(const Eigen::PartialPivLU<CMat>& lu, const CVec& b) {
    // A^H u = b  <=>  A^T conj(u) = conj(b)
    return CVec(lu.transpose().solve(CVec(b.conjugate()))).conjugate();
}

} // namespace

double sigma_min_weighted(const CMat& A, const CVec& quad, const std::vector<bool>& at_inf) {
    std::vector<int> K = finite_index(at_inf);
    const int N = int(at_inf.size()), n = int(K.size());
    CMat B(n, n);
    RVec wt(n);
    for (int i = 0; i < n; ++i) {
        wt[i] = std::sqrt(std::abs(quad[K[i] % N]));
        for (int j = 0; j < n; ++j) B(i, j) = A(K[i], K[j]);
    }
    Eigen::PartialPivLU<CMat> lu(B);
    return sigma_inverse_iteration([&](const CVec& b) { return CVec(lu.solve(b)); },
                                   [&](const CVec& b) { return adj_solve(lu, b); }, wt, CVec::Ones(n));
}

void BCSolver::blocks(const WPair& w, CMat& B10, CMat& B01) const {
    std::vector<M2> Wp, Wm;
    flatten(w, Wp, Wm);
    const int N = d_.N;
    CVec m10(N), p10(N), m01(N), p01(N);
    for (int k = 0; k < N; ++k) {
        m10[k] = Wm[k](1, 0);
        p10[k] = Wp[k](1, 0);
        m01[k] = Wm[k](0, 1);
        p01[k] = Wp[k](0, 1);
    }
    B10 = Cp_.M * m10.asDiagonal();
    B10 += Cm_.M * p10.asDiagonal();
    B01 = Cp_.M * m01.asDiagonal();
    B01 += Cm_.M * p01.asDiagonal();
}

BCSolution BCSolver::solve(const WPair& w, bool with_sigma) const {
    // W is strictly triangular, so the operator is block off-diagonal:
    // nu1 - B10 nu2 = 1, nu2 - B01 nu1 = 0
    const int N = d_.N;
    CMat B10, B01;
    blocks(w, B10, B01);
    CMat Sc = -B10 * B01;
    Sc.diagonal().array() += 1.0;
    Eigen::PartialPivLU<CMat> lu(Sc);
    BCSolution s;
    s.x = w.x;
    s.t = w.t;
    s.nu1 = lu.solve(CVec::Ones(N));
    s.nu2 = B01 * s.nu1;
    s.residual = (s.nu1 - B10 * s.nu2 - CVec::Ones(N)).cwiseAbs().maxCoeff();
    if (!std::isfinite(s.residual)) throw NumericError("Beals-Coifman solve produced non-finite values");
    if (with_sigma) {
        s.sigma_min = sigma_from_schur(lu, B10, B01);
        if (s.sigma_min < 1e-8) throw NumericError("near-singular RHP at x = " + std::to_string(w.x));
    }
    return s;
}

BCSolution BCSolver::solve_row2(const WPair& w) const {
    // nu1 - B10 nu2 = 0, nu2 - B01 nu1 = 1
    const int N = d_.N;
    CMat B10, B01;
    blocks(w, B10, B01);
    CMat Sc = -B01 * B10;
    Sc.diagonal().array() += 1.0;
    BCSolution s;
    s.x = w.x;
    s.t = w.t;
    s.nu2 = Eigen::PartialPivLU<CMat>(Sc).solve(CVec::Ones(N));
    s.nu1 = B10 * s.nu2;
    s.residual = (s.nu2 - B01 * s.nu1 - CVec::Ones(N)).cwiseAbs().maxCoeff();
    return s;
}

double BCSolver::sigma_from_schur(const Eigen::PartialPivLU<CMat>& lu, const CMat& B10, const CMat& B01) const {
    const int N = d_.N;
    RVec wt(2 * N);
    CVec start = CVec::Zero(2 * N);
    for (int k = 0; k < N; ++k) {
        bool inf = d_.at_inf[k];
        wt[k] = wt[N + k] = inf ? 1.0 : std::sqrt(std::abs(d_.quad[k]));
        // the identity block at infinite nodes decouples; keep it out of the iteration
        if (!inf) start[k] = start[N + k] = 1.0;
    }
    auto solve = [&](const CVec& b) {
        CVec f = b.head(N), g = b.tail(N);
        CVec x1 = lu.solve(CVec(f + B10 * g));
        CVec out(2 * N);
        out << x1, g + B01 * x1;
        return out;
    };
    auto solve_adj = [&](const CVec& b) {
        CVec f = b.head(N), g = b.tail(N);
        CVec u1 = adj_solve(lu, f + B01.adjoint() * g);
        CVec out(2 * N);
        out << u1, g + B10.adjoint() * u1;
        return out;
    };
    return sigma_inverse_iteration(solve, solve_adj, wt, start);
}

double BCSolver::null_space_diag(const WPair& w) const {
    CMat B10, B01;
    blocks(w, B10, B01);
    CMat Sc = -B10 * B01;
    Sc.diagonal().array() += 1.0;
    Eigen::PartialPivLU<CMat> lu(Sc);
    return sigma_from_schur(lu, B10, B01);
}

LambdaLayout choose_layout(double S, double L1, double x, double t, double res) {
    LambdaLayout lay;
    auto rate = [&](double l) { return std::abs(2 * x + 8 * l * t); };
    double ws = std::max(rate(S), rate(-S)) * S;
    lay.n_segment = quant16(res * (1.2 * ws + 40));
    lay.n_arc = quant16(res * (1.2 * (2 * std::abs(x) * S + 8 * S * S * std::abs(t)) + 48));
    lay.n_tail = quant16(res * 24);
    if (L1 > S) {
        lay.Lambda1 = L1;
        double wn = std::max({rate(S), rate(L1), rate(-S), rate(-L1)}) * (L1 - S) / 2;
        lay.n_near = quant16(res * (1.2 * wn + 40));
    }
    return lay;
}

double choose_Lambda1(const Potential& q, int j0, double S, double tol) {
    double l = std::max(2.0 * S, S + 1.0);
    int quiet = 0;
    for (int k = 0; k < 60; ++k, l *= 1.2) {
        double worst = 0;
        for (double s : {1.0, -1.0}) {
            LambdaPoint p = lambda_point(q, j0, s * l, NeedPlus0 | NeedPlus1);
            worst = std::max(worst, std::abs(p.beta / p.alpha));
        }
        quiet = worst < tol ? quiet + 1 : 0;
        if (quiet == 2) return l / 1.2;
    }
    return l;
}

std::array<cplx, 2> nu_at(const BCSolver& s, const BCSolution& nu, cplx l) {
    const Discretization& d = s.disc();
    for (size_t c = 0; c < d.arcs.size(); ++c) {
        const Arc& A = s.graph().arcs[d.arcs[c]];
        cplx w = A.inverse(l);
        if (std::abs(w.imag()) > 1e-9 || std::abs(w.real()) > 1 + 1e-12) continue;
        double sr = std::clamp(w.real(), -1.0, 1.0);
        CVec row = cheb::interp_row(A.n, sr);
        return {row.cwiseProduct(nu.nu1.segment(d.off[c], A.n)).sum(),
                row.cwiseProduct(nu.nu2.segment(d.off[c], A.n)).sum()};
    }
    throw std::invalid_argument("point is not on the contour");
}

double zeta_crosscheck(const BCSolver& gamma, const BCSolution& nu, const BCSolver& sigma, const BCSolution& mu) {
    const Discretization& d = sigma.disc();
    double dev = 0;
    for (size_t c = 0; c < d.arcs.size(); ++c) {
        const Arc& A = sigma.graph().arcs[d.arcs[c]];
        for (int j = 1; j + 1 < A.n; ++j) {
            cplx z = d.z[c][j];
            if (!std::isfinite(z.real())) continue;
            auto v = nu_at(gamma, nu, z * z);
            int k = d.off[c] + j;
            dev = std::max(dev, std::abs(mu.nu1[k] - v[0]));
            dev = std::max(dev, std::abs(mu.nu2[k] - z * v[1]));
        }
    }
    return dev;
}

} // namespace dnls
