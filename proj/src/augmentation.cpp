#include "dnls/augmentation.hpp"
#include "dnls/chebyshev.hpp"

#include <cmath>

namespace dnls {

ArcRole arc_role(const Arc& a, double S) {
    switch (a.kind) {
    case ArcKind::Elliptical: return ArcRole::Identity;
    case ArcKind::Circular: return a.at(0.0).imag() > 0 ? ArcRole::CircleUpper : ArcRole::CircleLower;
    default: break;
    }
    cplx m = a.at(0.0);
    if (std::abs(m.imag()) > 1e-12 * (1 + std::abs(m))) throw std::invalid_argument("arc off the real axis: " + a.name);
    return std::abs(m.real()) > S ? ArcRole::RealOuter : ArcRole::RealInner;
}

LambdaPoint lambda_point(const Potential& q, int j0, cplx l, unsigned need) {
    LambdaPoint p;
    p.lambda = l;
    Kernel k = Kernel::lambda_form(l);
    const double xl = q.x.front(), x0 = q.x[j0];
    if (need & NeedPlus0) {
        JostColumn c = march_column(q, k, 0, true);
        p.alpha = c.d[0];
        p.gamma = std::exp(-k.kappa * xl) * c.o[0];
        p.alpha0 = c.d[j0];
        p.gamma0 = std::exp(-k.kappa * x0) * c.o[j0];
    }
    if (need & NeedPlus1) {
        JostColumn c = march_column(q, k, 1, true);
        p.alpha_b = c.d[0];
        p.beta = std::exp(k.kappa * xl) * c.o[0];
        p.alpha0_b = c.d[j0];
        p.beta0 = std::exp(k.kappa * x0) * c.o[j0];
    }
    if (need & NeedMinus0) p.n21m = march_column(q, k, 0, false, j0).o[j0];
    if (need & NeedMinus1) p.n12m = march_column(q, k, 1, false, j0).o[j0];
    return p;
}

int alpha0b_winding(const Potential& q, int j0, double S) {
    Potential q0 = q;
    for (int j = 0; j < j0; ++j) q0.q[j] = 0.0;
    auto f = [&](cplx l) { return march_column(q0, Kernel::lambda_form(l), 1, true, j0).d[j0]; };
    return winding_number(f, {
        [&](double t) { return cplx(-S + 2 * S * t, 0); },
        [&](double t) { return S * std::polar(1.0, PI * t); },
    });
}

void choose_parameters(const Potential& q, const ScatteringParams& p, double& R, double& x0, int& j0) {
    R = p.R > 0 ? p.R : choose_radius(q, p.margin, p.R_min);
    double S = R * R;
    x0 = p.x0 > -1e299 ? p.x0 : choose_cutoff(q, R, p.cutoff_bound);
    j0 = grid_index(q, x0);
    // the cutoff potential must not support zeros inside the disc; move x0 right until it does not
    for (int tries = 0;; ++tries) {
        if (alpha0b_winding(q, j0, S) == 0) break;
        if (tries > 40 || j0 + int(1.0 / q.h()) >= q.size()) throw NumericError("cutoff potential has zeros in the disc");
        j0 += int(std::round(1.0 / q.h()));
    }
    x0 = q.x[j0];
}

namespace {

void fill_samples(const Potential& q, ScatteringData& sd) {
    const ContourGraph& g = sd.graph;
    sd.role.clear();
    sd.arc.assign(g.arcs.size(), {});
    for (size_t i = 0; i < g.arcs.size(); ++i) {
        const Arc& a = g.arcs[i];
        ArcRole r = arc_role(a, sd.S_inf);
        sd.role.push_back(r);
        auto z = a.points();
        int n = a.n;
        ArcSamples& s = sd.arc[i];
        auto finite = [](cplx w) { return std::isfinite(w.real()); };
        switch (r) {
        case ArcRole::RealOuter:
            s.rho = s.alpha = s.alpha_b = CVec::Zero(n);
            for (int j = 0; j < n; ++j) {
                if (!finite(z[j])) { s.alpha[j] = s.alpha_b[j] = 1.0; continue; }
                LambdaPoint p = lambda_point(q, sd.j0, z[j].real(), NeedPlus0 | NeedPlus1);
                if (std::abs(p.alpha) < 1e-8) throw NumericError("spectral singularity proximity on the real rays");
                s.rho[j] = p.beta / p.alpha;
                s.alpha[j] = p.alpha;
                s.alpha_b[j] = p.alpha_b;
            }
            break;
        case ArcRole::RealInner:
            s.rho0 = CVec::Zero(n);
            for (int j = 0; j < n; ++j) {
                LambdaPoint p = lambda_point(q, sd.j0, z[j].real(), NeedPlus0 | NeedPlus1);
                s.rho0[j] = p.beta0 / p.alpha0;
            }
            break;
        case ArcRole::CircleUpper:
            s.inv_ab = s.inv_ab0 = s.n21m = CVec::Zero(n);
            for (int j = 0; j < n; ++j) {
                LambdaPoint p = lambda_point(q, sd.j0, z[j], NeedPlus1 | NeedMinus0);
                s.inv_ab[j] = 1.0 / p.alpha_b;
                s.inv_ab0[j] = 1.0 / p.alpha0_b;
                s.n21m[j] = p.n21m;
            }
            break;
        case ArcRole::CircleLower:
            s.inv_a = s.inv_a0 = s.n12m = CVec::Zero(n);
            for (int j = 0; j < n; ++j) {
                LambdaPoint p = lambda_point(q, sd.j0, z[j], NeedPlus0 | NeedMinus1);
                s.inv_a[j] = 1.0 / p.alpha;
                s.inv_a0[j] = 1.0 / p.alpha0;
                s.n12m[j] = p.n12m;
            }
            break;
        case ArcRole::Identity: break;
        }
    }
}

} // namespace

ScatteringData build_scattering_data(const Potential& q, const ScatteringParams& p, const LambdaLayout& lay) {
    ScatteringData sd;
    choose_parameters(q, p, sd.R, sd.x0, sd.j0);
    sd.S_inf = sd.R * sd.R;
    sd.graph = build_lambda_contour(sd.S_inf, lay);
    fill_samples(q, sd);
    return sd;
}

ScatteringData resample(const Potential& q, const ScatteringData& base, const LambdaLayout& lay) {
    ScatteringData sd;
    sd.R = base.R;
    sd.S_inf = base.S_inf;
    sd.x0 = base.x0;
    sd.j0 = base.j0;
    sd.graph = build_lambda_contour(sd.S_inf, lay);
    fill_samples(q, sd);
    return sd;
}

M2 ray_jump(cplx l, cplx r) {
    M2 J;
    cplx lr = l * std::conj(r);
    J << 1.0 + r * lr, r, lr, 1.0;
    return J;
}

M2 segment_jump(cplx l, cplx r) {
    M2 J;
    cplx lr = l * std::conj(r);
    J << 1.0, -r, -lr, 1.0 + r * lr;
    return J;
}

JumpField assemble_jump(const ScatteringData& sd) {
    JumpField jf;
    jf.graph = sd.graph;
    jf.t = 0;
    const double x0 = sd.x0;
    for (size_t i = 0; i < sd.graph.arcs.size(); ++i) {
        const Arc& a = sd.graph.arcs[i];
        auto z = a.points();
        const ArcSamples& s = sd.arc[i];
        std::vector<M2> J(a.n, M2::Identity());
        for (int j = 0; j < a.n; ++j) {
            cplx l = z[j];
            if (!std::isfinite(l.real())) continue;
            switch (sd.role[i]) {
            case ArcRole::RealOuter: J[j] = ray_jump(l, s.rho[j]); break;
            case ArcRole::RealInner: J[j] = segment_jump(l, s.rho0[j]); break;
            case ArcRole::CircleUpper:
                J[j] = lower(std::exp(-2.0 * I_unit * x0 * l) * s.n21m[j] * s.inv_ab[j] * s.inv_ab0[j]);
                break;
            case ArcRole::CircleLower:
                J[j] = upper(-std::exp(2.0 * I_unit * x0 * l) * s.n12m[j] * s.inv_a[j] * s.inv_a0[j]);
                break;
            case ArcRole::Identity: break;
            }
        }
        jf.J.push_back(J);
    }
    return jf;
}

JumpField factorize_jump(JumpField jf) {
    const double S = jf.graph.S_inf;
    jf.Jp.clear();
    jf.Jm.clear();
    for (size_t i = 0; i < jf.graph.arcs.size(); ++i) {
        ArcRole r = arc_role(jf.graph.arcs[i], S);
        // the reversed segment of the modified contour factors like the rays
        bool reversed_seg = r == ArcRole::RealInner && jf.graph.arcs[i].start().real() < 0;
        std::vector<M2> P, M;
        for (const M2& J : jf.J[i]) {
            M2 p = M2::Identity(), m = M2::Identity();
            switch (r) {
            case ArcRole::RealOuter:
                m = upper(-J(0, 1));
                p = lower(J(1, 0));
                break;
            case ArcRole::RealInner:
                if (reversed_seg) { m = upper(-J(0, 1)); p = lower(J(1, 0)); }
                else { m = lower(-J(1, 0)); p = upper(J(0, 1)); }
                break;
            case ArcRole::CircleUpper: p = J; break;
            case ArcRole::CircleLower: m = J.inverse(); break;
            case ArcRole::Identity: break;
            }
            P.push_back(p);
            M.push_back(m);
        }
        jf.Jp.push_back(P);
        jf.Jm.push_back(M);
    }
    return jf;
}

ProductResidual check_product_condition(const JumpField& jf, cplx z) {
    const ContourGraph& g = jf.graph;
    int node = g.node_of(z);
    if (node < 0) throw std::invalid_argument("no contour node at the given point");
    // entries of J as separate sample sets, traced to first order
    std::vector<std::vector<CVec>> comp(4, std::vector<CVec>(g.arcs.size()));
    for (size_t i = 0; i < g.arcs.size(); ++i)
        for (int e = 0; e < 4; ++e) {
            comp[e][i] = CVec(g.arcs[i].n);
            for (int j = 0; j < g.arcs[i].n; ++j) comp[e][i][j] = jf.J[i][j](e / 2, e % 2);
        }
    std::vector<NodeTrace> tr;
    for (int e = 0; e < 4; ++e) tr.push_back(node_trace(g, node, comp[e], 2));
    const auto& inc = g.nodes[node].inc;
    M2 P = M2::Identity(), dP = M2::Zero();
    for (size_t i = 0; i < inc.size(); ++i) {
        M2 A, B;
        for (int e = 0; e < 4; ++e) {
            A(e / 2, e % 2) = tr[e].f[i][0];
            B(e / 2, e % 2) = tr[e].f[i][1];
        }
        if (inc[i].incoming) {
            M2 Ai = A.inverse();
            B = -Ai * B * Ai;
            A = Ai;
        }
        dP = dP * A + P * B;
        P = P * A;
    }
    ProductResidual r;
    r.order0 = (P - M2::Identity()).cwiseAbs().maxCoeff();
    r.order1 = dP.cwiseAbs().maxCoeff();
    return r;
}

JumpField left_conjugate(const JumpField& jf, const ScatteringData& sd) {
    JumpField out = jf;
    for (size_t i = 0; i < jf.graph.arcs.size(); ++i) {
        if (sd.role.at(i) != ArcRole::RealOuter) continue;
        const ArcSamples& s = sd.arc[i];
        auto conj_one = [&](const M2& J, int j) {
            cplx a = s.alpha[j], ab = s.alpha_b[j];
            if (std::abs(a) < 1e-8 || std::abs(ab) < 1e-8) throw NumericError("left conjugation: delta too small");
            M2 sm_inv, sp_inv;
            sm_inv << a, 0, 0, 1.0 / a;      // s_- = diag(1/alpha, alpha)
            sp_inv << ab, 0, 0, 1.0 / ab;    // s_+ = diag(1/alpha-breve, alpha-breve)
            return M2(sm_inv * J * sp_inv);
        };
        for (int j = 0; j < jf.graph.arcs[i].n; ++j) out.J[i][j] = conj_one(jf.J[i][j], j);
        if (jf.has_factors())
            for (int j = 0; j < jf.graph.arcs[i].n; ++j) {
                // triangularity flips: tilde J = lower(lambda conj(r)) upper(r)
                const M2& T = out.J[i][j];
                out.Jm[i][j] = lower(-T(1, 0));
                out.Jp[i][j] = upper(T(0, 1));
            }
    }
    return out;
}

namespace {

enum class ZetaRole { Ray, Inner, LowerArc, UpperArc };

ZetaRole zeta_role(const Arc& a) {
    if (a.kind == ArcKind::Ray) return ZetaRole::Ray;
    if (a.kind == ArcKind::Segment) return ZetaRole::Inner;
    cplx m = a.at(0.0);
    return m.real() * m.imag() > 0 ? ZetaRole::LowerArc : ZetaRole::UpperArc;
}

} // namespace

JumpField assemble_zeta_jump(const Potential& q, int j0, const ContourGraph& g) {
    if (g.kind != ContourKind::Zeta) throw std::invalid_argument("assemble_zeta_jump needs the zeta contour");
    JumpField vf;
    vf.graph = g;
    const double x0 = q.x[j0];
    for (const Arc& a : g.arcs) {
        auto z = a.points();
        std::vector<M2> V(a.n, M2::Identity());
        ZetaRole r = zeta_role(a);
        for (int j = 0; j < a.n; ++j) {
            cplx w = z[j];
            if (!std::isfinite(w.real())) continue;
            Kernel k = Kernel::zeta_form(w);
            cplx ph = std::exp(k.kappa * x0); // e^{2 i zeta^2 x0}
            switch (r) {
            case ZetaRole::Ray: {
                Reflection rf = reflection(transition_coeffs(q, w));
                V[j] << 1.0 - rf.r * rf.rb, rf.r, -rf.rb, 1.0;
                break;
            }
            case ZetaRole::Inner: {
                JostColumn c0 = march_column(q, k, 0, true, j0), c1 = march_column(q, k, 1, true, j0);
                cplx r0 = ph * c1.o[j0] / c0.d[j0];
                cplx rb0 = c0.o[j0] / ph / c1.d[j0];
                V[j] << 1.0, -r0, rb0, 1.0 - r0 * rb0;
                break;
            }
            case ZetaRole::LowerArc: {
                JostColumn c1 = march_column(q, k, 1, true);
                cplx m21 = march_column(q, k, 0, false, j0).o[j0];
                V[j] = lower(m21 / ph / (c1.d[0] * c1.d[j0]));
                break;
            }
            case ZetaRole::UpperArc: {
                JostColumn c0 = march_column(q, k, 0, true);
                cplx m12 = march_column(q, k, 1, false, j0).o[j0];
                V[j] = upper(-ph * m12 / (c0.d[0] * c0.d[j0]));
                break;
            }
            }
        }
        vf.J.push_back(V);
    }
    return vf;
}

JumpField factorize_zeta_jump(JumpField vf) {
    vf.Jp.clear();
    vf.Jm.clear();
    for (size_t i = 0; i < vf.graph.arcs.size(); ++i) {
        ZetaRole r = zeta_role(vf.graph.arcs[i]);
        std::vector<M2> P, M;
        for (const M2& V : vf.J[i]) {
            M2 p = M2::Identity(), m = M2::Identity();
            switch (r) {
            case ZetaRole::Ray: m = upper(-V(0, 1)); p = lower(V(1, 0)); break;
            case ZetaRole::Inner: m = lower(-V(1, 0)); p = upper(V(0, 1)); break;
            case ZetaRole::LowerArc: p = V; break;
            case ZetaRole::UpperArc: m = V.inverse(); break;
            }
            P.push_back(p);
            M.push_back(m);
        }
        vf.Jp.push_back(P);
        vf.Jm.push_back(M);
    }
    return vf;
}

namespace {
nlohmann::json mats_json(const std::vector<M2>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const M2& m : v) {
        nlohmann::json e = nlohmann::json::array();
        for (int k = 0; k < 4; ++k) e.push_back({m(k / 2, k % 2).real(), m(k / 2, k % 2).imag()});
        a.push_back(e);
    }
    return a;
}
std::vector<M2> mats_from(const nlohmann::json& a) {
    std::vector<M2> v;
    for (auto& e : a) {
        M2 m;
        for (int k = 0; k < 4; ++k) m(k / 2, k % 2) = cplx(e[k][0].get<double>(), e[k][1].get<double>());
        v.push_back(m);
    }
    return v;
}
} // namespace

nlohmann::json to_json(const JumpField& jf) {
    nlohmann::json j;
    j["t"] = jf.t;
    j["contour"] = to_json(jf.graph);
    j["arcs"] = nlohmann::json::array();
    for (size_t i = 0; i < jf.graph.arcs.size(); ++i) {
        nlohmann::json a;
        a["name"] = jf.graph.arcs[i].name;
        nlohmann::json nodes = nlohmann::json::array();
        for (cplx z : jf.graph.arcs[i].points()) {
            if (std::isfinite(z.real())) nodes.push_back({z.real(), z.imag()});
            else nodes.push_back(nullptr);
        }
        a["nodes"] = nodes;
        a["J"] = mats_json(jf.J[i]);
        if (jf.has_factors()) {
            a["Jp"] = mats_json(jf.Jp[i]);
            a["Jm"] = mats_json(jf.Jm[i]);
        }
        j["arcs"].push_back(a);
    }
    return j;
}

JumpField jump_from_json(const nlohmann::json& j) {
    JumpField jf;
    jf.t = j.at("t").get<double>();
    jf.graph = contour_from_json(j.at("contour"));
    for (auto& a : j.at("arcs")) {
        jf.J.push_back(mats_from(a.at("J")));
        if (a.contains("Jp")) {
            jf.Jp.push_back(mats_from(a.at("Jp")));
            jf.Jm.push_back(mats_from(a.at("Jm")));
        }
    }
    if (jf.J.size() != jf.graph.arcs.size()) throw InputError("jump field does not match its contour");
    return jf;
}

} // namespace dnls
