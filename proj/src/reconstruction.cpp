#include "dnls/reconstruction.hpp"
#include "dnls/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace dnls {

SpectralPair direct_map(const Potential& q, const DirectOptions& opt) {
    SpectralPair sp;
    auto one = [&](const Potential& p, const ScatteringParams& par, JumpField& jf, double& L1, double& R, double& x0) {
        double Rr, xx;
        int j0;
        choose_parameters(p, par, Rr, xx, j0);
        ScatteringParams fixed = par;
        fixed.R = Rr;
        fixed.x0 = xx;
        L1 = choose_Lambda1(p, j0, Rr * Rr);
        LambdaLayout lay = opt.master;
        lay.Lambda1 = L1;
        ScatteringData sd = build_scattering_data(p, fixed, lay);
        jf = factorize_jump(assemble_jump(sd));
        R = sd.R;
        x0 = sd.x0;
    };
    one(q, opt.params, sp.right, sp.Lambda1, sp.R, sp.x0);
    one(q.mirror(), opt.params_mirror, sp.mirror, sp.Lambda1_mirror, sp.R_mirror, sp.x0_mirror);
    return sp;
}

SpectralPair evolve_pair(const SpectralPair& sp, double t) {
    SpectralPair out = sp;
    out.right = evolve_jump(sp.right, t);
    out.mirror = evolve_jump(sp.mirror, -t);
    return out;
}

JumpField resample_jump(const JumpField& jf, const LambdaLayout& lay) {
    JumpField j0 = evolve_jump(jf, -jf.t);
    j0.t = 0;
    JumpField out;
    out.graph = build_lambda_contour(jf.graph.S_inf, lay);
    out.graph.R = jf.graph.R;
    for (const Arc& A : out.graph.arcs) {
        int src = -1;
        for (size_t i = 0; i < j0.graph.arcs.size(); ++i)
            if (j0.graph.arcs[i].name == A.name) src = int(i);
        if (src < 0) throw std::invalid_argument("no source arc for " + A.name);
        const Arc& B = j0.graph.arcs[src];
        if (std::abs(A.at(0.3) - B.at(0.3)) > 1e-12 * (1 + std::abs(A.at(0.3))))
            throw std::invalid_argument("arc geometry differs: " + A.name);
        std::vector<CVec> comp(4, CVec(B.n));
        for (int j = 0; j < B.n; ++j)
            for (int e = 0; e < 4; ++e) comp[e][j] = j0.J[src][j](e / 2, e % 2);
        RVec s = A.params();
        std::vector<M2> J(A.n);
        for (int j = 0; j < A.n; ++j) {
            CVec row = cheb::interp_row(B.n, s[j]);
            for (int e = 0; e < 4; ++e) J[j](e / 2, e % 2) = row.cwiseProduct(comp[e]).sum();
        }
        out.J.push_back(J);
    }
    return evolve_jump(factorize_jump(out), jf.t);
}

cplx reconstruct_point(const BCSolver& s, const BCSolution& nu, const WPair& w) {
    std::vector<M2> Wp, Wm;
    s.flatten(w, Wp, Wm);
    const Discretization& d = s.disc();
    cplx acc = 0;
    for (int k = 0; k < d.N; ++k) acc += d.quad[k] * (nu.nu1[k] * (Wp[k] + Wm[k])(0, 1) + nu.nu2[k] * (Wp[k] + Wm[k])(1, 1));
    return -acc / PI;
}

namespace {

// first row of M(z) = e + C(nu (W+ + W-))(z)
std::array<cplx, 2> m_row(const BCSolver& s, const BCSolution& nu, const std::vector<M2>& Wp,
                          const std::vector<M2>& Wm, cplx z, int row) {
    const Discretization& d = s.disc();
    CVec r = offcontour_row(d, z);
    std::array<cplx, 2> m{row == 0 ? cplx(1) : cplx(0), row == 1 ? cplx(1) : cplx(0)};
    for (int k = 0; k < d.N; ++k) {
        if (d.at_inf[k]) continue;
        M2 W = Wp[k] + Wm[k];
        cplx a = nu.nu1[k], b = nu.nu2[k];
        m[0] += r[k] * (a * W(0, 0) + b * W(1, 0));
        m[1] += r[k] * (a * W(0, 1) + b * W(1, 1));
    }
    return m;
}

} // namespace

cplx reconstruct_limit(const BCSolver& sigma, const BCSolution& mu, const WPair& w) {
    std::vector<M2> Wp, Wm;
    sigma.flatten(w, Wp, Wm);
    const double R = sigma.graph().R;
    const cplx dir = std::polar(1.0, PI / 8);
    // z M12(z) = c + d z^-2 + e z^-4 + ...: eliminate d and e
    Eigen::Matrix3cd A;
    Eigen::Vector3cd b;
    int i = 0;
    for (double m : {10.0, 20.0, 40.0}) {
        cplx z = m * R * dir;
        cplx u = 1.0 / (z * z);
        A.row(i) << 1.0, u, u * u;
        b[i] = z * m_row(sigma, mu, Wp, Wm, z, 0)[1];
        ++i;
    }
    Eigen::Vector3cd c = A.partialPivLu().solve(b);
    return 2.0 * I_unit * c[0];
}

InverseMap::InverseMap(SpectralPair data, InverseOptions opt) : data_(std::move(data)), opt_(opt) {}

InverseMap::Entry& InverseMap::entry(bool mirror, double xs) {
    const JumpField& master = mirror ? data_.mirror : data_.right;
    double L1 = mirror ? data_.Lambda1_mirror : data_.Lambda1;
    LambdaLayout lay = choose_layout(master.graph.S_inf, L1, xs, master.t, opt_.resolution);
    if (extent_ >= std::abs(xs)) {
        LambdaLayout a = choose_layout(master.graph.S_inf, L1, extent_, master.t, opt_.resolution);
        LambdaLayout b = choose_layout(master.graph.S_inf, L1, -extent_, master.t, opt_.resolution);
        lay.n_segment = std::max(a.n_segment, b.n_segment);
        lay.n_arc = std::max(a.n_arc, b.n_arc);
        lay.n_near = std::max(a.n_near, b.n_near);
        lay.n_tail = std::max(a.n_tail, b.n_tail);
    }
    auto key = std::make_tuple(mirror, lay.n_segment, lay.n_arc, lay.n_near, lay.n_tail);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
        Entry e;
        e.jf = resample_jump(master, lay);
        e.solver = std::make_unique<BCSolver>(e.jf.graph);
        // keep the cache bounded: layouts grow with |x|, old ones are rarely revisited
        if (cache_.size() >= 6) cache_.erase(cache_.begin());
        it = cache_.emplace(key, std::move(e)).first;
    }
    return it->second;
}

InverseMap::Solved InverseMap::solve(bool mirror, double xs, bool with_sigma) {
    Entry& e = entry(mirror, xs);
    Solved out{e.solver.get(), {}, split_W(e.jf, xs)};
    out.nu = e.solver->solve(out.w, with_sigma);
    return out;
}

cplx InverseMap::value(bool mirror, double x, PointDiag* d) {
    double xs = mirror ? -x : x;
    Solved s = solve(mirror, xs, opt_.with_sigma && d);
    cplx q = reconstruct_point(*s.solver, s.nu, s.w);
    if (d) {
        d->x = x;
        d->residual = s.nu.residual;
        d->sigma_min = s.nu.sigma_min;
        d->nodes = s.solver->disc().N;
        d->mirror = mirror;
    }
    return mirror ? std::conj(q) : q;
}

cplx InverseMap::right(double x, PointDiag* d) { return value(false, x, d); }
cplx InverseMap::left(double x, PointDiag* d) { return value(true, x, d); }
cplx InverseMap::at(double x, PointDiag* d) { return value(x < opt_.a_split, x, d); }

InverseResult InverseMap::run(const std::vector<double>& xs) {
    InverseResult r;
    r.x = xs;
    extent_ = -1;
    if (opt_.shared_layout) {
        if (opt_.layout_extent >= 0) {
            extent_ = opt_.layout_extent;
        } else {
            for (double x : xs) extent_ = std::max(extent_, std::abs(x));
            if (opt_.check_overlap) extent_ = std::max(extent_, std::abs(opt_.a_split) + 1.0);
        }
    }
    for (double x : xs) {
        PointDiag d;
        r.q.push_back(at(x, &d));
        r.diag.push_back(d);
    }
    if (opt_.check_overlap) {
        r.overlap_error = 0;
        for (int k = -2; k <= 2; ++k) {
            double x = opt_.a_split + 0.5 * k;
            r.overlap_error = std::max(r.overlap_error, std::abs(right(x) - left(x)));
        }
        r.overlap_ok = r.overlap_error <= opt_.overlap_tol;
    }
    extent_ = -1;
    return r;
}

InverseResult inverse_map(const SpectralPair& sp, const std::vector<double>& xs, const InverseOptions& opt,
                          int threads) {
    InverseOptions o = opt;
    if (o.shared_layout && o.layout_extent < 0) {
        o.layout_extent = 0;
        for (double x : xs) o.layout_extent = std::max(o.layout_extent, std::abs(x));
        if (o.check_overlap) o.layout_extent = std::max(o.layout_extent, std::abs(o.a_split) + 1.0);
    }
    threads = std::clamp(threads, 1, std::max(1, int(xs.size())));
    if (threads == 1) {
        InverseMap m(sp, o);
        return m.run(xs);
    }
    InverseOptions worker = o;
    worker.check_overlap = false;
    std::vector<InverseResult> parts(threads);
    std::vector<std::exception_ptr> errs(threads);
    std::vector<std::thread> pool;
    const size_t chunk = (xs.size() + threads - 1) / threads;
    for (int k = 0; k < threads; ++k)
        pool.emplace_back([&, k] {
            try {
                size_t a = std::min(xs.size(), k * chunk), b = std::min(xs.size(), a + chunk);
                InverseMap m(sp, worker);
                parts[k] = m.run(std::vector<double>(xs.begin() + a, xs.begin() + b));
            } catch (...) {
                errs[k] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    InverseResult r;
    for (auto& p : parts) {
        r.x.insert(r.x.end(), p.x.begin(), p.x.end());
        r.q.insert(r.q.end(), p.q.begin(), p.q.end());
        r.diag.insert(r.diag.end(), p.diag.begin(), p.diag.end());
    }
    if (o.check_overlap) {
        InverseMap m(sp, o);
        r.overlap_error = m.run({}).overlap_error;
        r.overlap_ok = r.overlap_error <= o.overlap_tol;
    }
    return r;
}

double rel_l2(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("grids differ");
    double num = 0, den = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(b[i]);
    }
    return den > 0 ? std::sqrt(num / den) : std::sqrt(num);
}

double l2(const std::vector<cplx>& a, const std::vector<cplx>& b, double h) {
    if (a.size() != b.size()) throw std::invalid_argument("grids differ");
    double num = 0;
    for (size_t i = 0; i < a.size(); ++i) num += std::norm(a[i] - b[i]);
    return std::sqrt(num * h);
}

LaxReport lax_consistency(const JumpField& vf, const std::function<cplx(double)>& q, double x, double h,
                          const std::vector<cplx>& probes) {
    if (vf.graph.kind != ContourKind::Zeta) throw std::invalid_argument("lax_consistency needs zeta-plane data");
    BCSolver s(vf.graph);
    // M(x, zeta) at the probes for x - h, x, x + h
    std::vector<std::vector<M2>> M(3);
    for (int k = 0; k < 3; ++k) {
        double xx = x + (k - 1) * h;
        WPair w = split_W(vf, xx);
        BCSolution r1 = s.solve(w), r2 = s.solve_row2(w);
        std::vector<M2> Wp, Wm;
        s.flatten(w, Wp, Wm);
        for (cplx z : probes) {
            auto a = m_row(s, r1, Wp, Wm, z, 0), b = m_row(s, r2, Wp, Wm, z, 1);
            M2 m;
            m << a[0], a[1], b[0], b[1];
            M[k].push_back(m);
        }
    }
    cplx qx = q(x);
    M2 Q, P, sig;
    Q << 0, qx, -std::conj(qx), 0;
    P << 0.5 * I_unit * std::norm(qx), 0, 0, -0.5 * I_unit * std::norm(qx);
    sig << 1, 0, 0, -1;
    LaxReport rep;
    rep.h = h;
    for (size_t i = 0; i < probes.size(); ++i) {
        cplx z = probes[i];
        const M2& m = M[1][i];
        M2 dm = (M[2][i] - M[0][i]) / (2 * h);
        M2 rhs = -I_unit * z * z * (sig * m - m * sig) + (z * Q + P) * m;
        rep.residual = std::max(rep.residual, (dm - rhs).cwiseAbs().maxCoeff());
    }
    return rep;
}

} // namespace dnls
