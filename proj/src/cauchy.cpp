#include "dnls/cauchy.hpp"
#include "dnls/chebyshev.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace dnls {

namespace {

const cplx TPI = 2.0 * PI * I_unit;

double mu(int k) { return (k == 1) ? 0.0 : (1.0 + (k % 2 ? -1.0 : 1.0)) / (1.0 - double(k) * k); }

CVec P_poly(int n, cplx x) {
    CVec P(n);
    P[0] = 0.0;
    if (n > 1) P[1] = 1.0 / (PI * I_unit);
    for (int k = 1; k + 1 < n; ++k) P[k + 1] = 2.0 * x * P[k] - P[k - 1] + mu(k) / (PI * I_unit);
    return P;
}

const Eigen::MatrixXcd& coeff_T(int n) {
    // transpose of values -> coefficients, cached per size
    static std::map<int, Eigen::MatrixXcd> cache;
    static std::mutex mx;
    std::lock_guard<std::mutex> lk(mx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, cheb::values_to_coeffs(n).transpose().cast<cplx>()).first;
    return it->second;
}

} // namespace

namespace psi {

CVec off(int n, cplx w) {
    if (!std::isfinite(std::abs(w)) || std::abs(w) > 1e100) return CVec::Zero(n);
    cplx r = std::sqrt(w - 1.0) * std::sqrt(w + 1.0);
    cplx big = std::abs(w + r) >= std::abs(w - r) ? w + r : w - r;
    double aJ = 1.0 / std::abs(big);
    cplx L0 = std::log((w - 1.0) / (w + 1.0)) / TPI;
    CVec y(n);
    if (n * std::log(aJ) >= -3.0 * std::log(10.0) || n <= 2) {
        y[0] = L0;
        if (n > 1) y[1] = 1.0 / (PI * I_unit) + w * L0;
        for (int k = 1; k + 1 < n; ++k) y[k + 1] = 2.0 * w * y[k] - y[k - 1] + mu(k) / (PI * I_unit);
        return y;
    }
    int K = n + int(std::ceil(40.0 / -std::log(aJ))) + 2;
    std::vector<cplx> cp(K + 1), dp(K + 1), sol(K + 2);
    cplx b = -2.0 * w;
    for (int k = 1; k <= K; ++k) {
        cplx rhs = mu(k) / (PI * I_unit);
        if (k == 1) rhs -= L0;
        cplx den = (k == 1) ? b : b - cp[k - 1];
        cp[k] = 1.0 / den;
        dp[k] = (k == 1) ? rhs / den : (rhs - dp[k - 1]) / den;
    }
    sol[K + 1] = 0;
    for (int k = K; k >= 1; --k) sol[k] = dp[k] - cp[k] * sol[k + 1];
    y[0] = L0;
    for (int k = 1; k < n; ++k) y[k] = sol[k];
    return y;
}

CVec interval(int n, double x, int side) {
    cplx L = (std::log((1.0 - x) / (1.0 + x)) + double(side) * PI * I_unit) / TPI;
    CVec T = cheb::chebT(n, x);
    return T * L + P_poly(n, x);
}

CVec endpoint(int n, int e, cplx logterm) {
    CVec T = cheb::chebT(n, double(e));
    cplx sing = (logterm - std::log(2.0)) / TPI;
    if (e < 0) sing = -sing;
    return T * sing + P_poly(n, double(e));
}

} // namespace psi

Discretization Discretization::make(const ContourGraph& g) {
    std::vector<int> ids;
    for (int i = 0; i < int(g.arcs.size()); ++i)
        if (g.arcs[i].kind != ArcKind::Elliptical) ids.push_back(i);
    return make(g, ids);
}

Discretization Discretization::make(const ContourGraph& g, const std::vector<int>& ids) {
    Discretization d;
    d.g = &g;
    d.arcs = ids;
    int N = 0;
    for (int i : ids) {
        d.off.push_back(N);
        N += g.arcs[i].n;
    }
    d.N = N;
    d.quad = CVec::Zero(N);
    d.at_inf.assign(N, false);
    for (size_t c = 0; c < ids.size(); ++c) {
        const Arc& a = g.arcs[ids[c]];
        d.s.push_back(a.params());
        d.z.push_back(a.points());
        RVec w = cheb::cc_weights(a.n);
        for (int j = 0; j < a.n; ++j) {
            bool inf = std::isnan(d.z.back()[j].real());
            d.at_inf[d.off[c] + j] = inf;
            d.quad[d.off[c] + j] = inf ? cplx(0) : w[j] * a.dz(d.s.back()[j]);
        }
    }
    return d;
}

int Discretization::carrier_of(int arc) const {
    for (size_t c = 0; c < arcs.size(); ++c)
        if (arcs[c] == arc) return int(c);
    return -1;
}

cplx Discretization::point(int k) const {
    for (size_t c = arcs.size(); c-- > 0;)
        if (k >= off[c]) return z[c][k - off[c]];
    return 0;
}

namespace {

// regular part of the transform at the Mobius pole parameter, as a row
CVec pole_row(const Arc& a) {
    if (a.kind == ArcKind::Segment) return CVec::Zero(a.n);
    const auto& CT = coeff_T(a.n);
    cplx p = a.pole_param();
    CVec row;
    if (a.kind == ArcKind::Ray) {
        int e = a.inward ? -1 : 1;
        row = CT * psi::endpoint(a.n, e, 0.0);
        row[e > 0 ? a.n - 1 : 0] = 0.0; // density vanishes at infinity
    } else {
        row = CT * psi::off(a.n, p);
    }
    return row;
}

void zero_inf(const Arc& a, CVec& row) {
    if (a.kind == ArcKind::Ray) row[a.inward ? 0 : a.n - 1] = 0.0;
}

} // namespace

CVec arc_cauchy_row(const Arc& a, cplx z) {
    if (!a.mobius()) throw std::logic_error("no Cauchy row for elliptical arcs");
    cplx w = a.inverse(z);
    if (std::abs(w.imag()) < 1e-14 && std::abs(w.real()) <= 1.0) throw NumericError("target on the contour");
    CVec row = coeff_T(a.n) * psi::off(a.n, w) - pole_row(a);
    zero_inf(a, row);
    return row;
}

CauchyMatrix boundary_projector(const Discretization& d, int side) {
    const ContourGraph& g = *d.g;
    CauchyMatrix C;
    C.side = side;
    C.M = CMat::Zero(d.N, d.N);
    // per source arc: Chebyshev-space rows for every target node, mapped to
    // values in one product at the end
    for (size_t ci = 0; ci < d.arcs.size(); ++ci) {
        const Arc& A = g.arcs[d.arcs[ci]];
        CMat Psi = CMat::Zero(d.N, A.n);
        for (size_t cb = 0; cb < d.arcs.size(); ++cb) {
            const Arc& B = g.arcs[d.arcs[cb]];
            for (int j = 0; j < B.n; ++j) {
                int row = d.off[cb] + j;
                if (d.at_inf[row]) continue;
                cplx zt = d.z[cb][j];
                bool end_node = (j == 0 || j == B.n - 1);
                CVec r;
                if (ci == cb) {
                    if (!end_node) {
                        r = psi::interval(A.n, d.s[ci][j], side);
                    } else {
                        int e = j == 0 ? -1 : 1;
                        cplx dz = A.dz(double(e));
                        // approaching along the arc itself from the chosen side
                        cplx lt = -std::log(std::abs(dz)) + double(e > 0 ? side : -side) * PI * I_unit;
                        r = psi::endpoint(A.n, e, lt);
                    }
                } else {
                    int e = 0;
                    if (end_node) {
                        if (A.start_finite() && std::abs(A.start() - zt) < 1e-12) e = -1;
                        if (A.end_finite() && std::abs(A.end() - zt) < 1e-12) e = 1;
                    }
                    if (e != 0) {
                        // direction leaving the node along B
                        cplx t = B.dz(j == 0 ? -1.0 : 1.0);
                        cplx dir = (j == 0 ? 1.0 : -1.0) * t / std::abs(t);
                        cplx dz = A.dz(double(e));
                        cplx lt = e > 0 ? std::log(dir / dz) : std::log(-dir / dz);
                        r = psi::endpoint(A.n, e, lt);
                    } else {
                        r = psi::off(A.n, A.inverse(zt));
                    }
                }
                Psi.row(row) = r.transpose();
            }
        }
        CMat blk = Psi * coeff_T(A.n).transpose();
        CVec prow = pole_row(A);
        for (int row = 0; row < d.N; ++row)
            if (!d.at_inf[row]) blk.row(row) -= prow.transpose();
        if (A.kind == ArcKind::Ray) blk.col(A.inward ? 0 : A.n - 1).setZero();
        C.M.block(0, d.off[ci], d.N, A.n) = blk;
    }
    return C;
}

std::pair<CauchyMatrix, CauchyMatrix> boundary_projectors(const Discretization& d) {
    return {boundary_projector(d, 1), boundary_projector(d, -1)};
}

CVec offcontour_row(const Discretization& d, cplx z) {
    CVec row = CVec::Zero(d.N);
    for (size_t c = 0; c < d.arcs.size(); ++c) {
        const Arc& A = d.g->arcs[d.arcs[c]];
        for (int j = 0; j < A.n; ++j)
            if (!d.at_inf[d.off[c] + j] && std::abs(d.z[c][j] - z) < 1e-10) throw NumericError("target too close to the contour");
        row.segment(d.off[c], A.n) = arc_cauchy_row(A, z);
    }
    return row;
}

cplx cauchy_offcontour(const Discretization& d, const CVec& density, cplx z) {
    return offcontour_row(d, z).cwiseProduct(density).sum();
}

CMat build_bc_operator(const std::vector<M2>& Wp, const std::vector<M2>& Wm, const CauchyMatrix& Cp,
                       const CauchyMatrix& Cm) {
    const int N = int(Wp.size());
    if (int(Wm.size()) != N || Cp.M.rows() != N || Cm.M.rows() != N) throw std::invalid_argument("shape mismatch");
    CMat op = CMat::Zero(2 * N, 2 * N);
    // output component c, input component r: C+ diag(Wm_rc) + C- diag(Wp_rc)
    for (int c = 0; c < 2; ++c)
        for (int r = 0; r < 2; ++r) {
            CVec dm(N), dp(N);
            for (int k = 0; k < N; ++k) {
                dm[k] = Wm[k](r, c);
                dp[k] = Wp[k](r, c);
            }
            if (dm.cwiseAbs().maxCoeff() == 0 && dp.cwiseAbs().maxCoeff() == 0) continue;
            op.block(c * N, r * N, N, N) = Cp.M * dm.asDiagonal() + Cm.M * dp.asDiagonal();
        }
    return op;
}

} // namespace dnls
