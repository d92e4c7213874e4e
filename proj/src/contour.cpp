#include "dnls/contour.hpp"
#include "dnls/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dnls {

namespace {
const cplx NaNc{std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};

double wrap2pi(double a) {
    a = std::fmod(a, 2 * PI);
    if (a < 0) a += 2 * PI;
    if (a >= 2 * PI - 1e-14) a = 0;
    return a;
}
} // namespace

void Arc::mobius_coeffs(cplx& a, cplx& b, cplx& c, cplx& d) const {
    switch (kind) {
    case ArcKind::Segment:
        a = 0.5 * (z1 - z0); b = 0.5 * (z0 + z1); c = 0; d = 1;
        return;
    case ArcKind::Ray:
        if (!inward) { a = z1 * scale - z0; b = z0 + z1 * scale; c = -1; d = 1; }
        else { a = z0 - z1 * scale; b = z0 + z1 * scale; c = 1; d = 1; }
        return;
    case ArcKind::Circular: {
        double tau = std::tan((th1 - th0) / 4);
        cplx e = radius * std::polar(1.0, 0.5 * (th0 + th1));
        a = I_unit * tau * (e - center);
        b = center + e;
        c = -I_unit * tau;
        d = 1;
        return;
    }
    case ArcKind::Elliptical:
        throw std::logic_error("elliptical arc has no Mobius form");
    }
}

cplx Arc::at(cplx s) const {
    if (kind == ArcKind::Elliptical) {
        cplx th = th0 + (th1 - th0) * (s + 1.0) / 2.0;
        return center + rx * std::cos(th) + I_unit * ry * std::sin(th);
    }
    cplx a, b, c, d;
    mobius_coeffs(a, b, c, d);
    return (a * s + b) / (c * s + d);
}

cplx Arc::dz(cplx s) const {
    if (kind == ArcKind::Elliptical) {
        cplx th = th0 + (th1 - th0) * (s + 1.0) / 2.0;
        return (-rx * std::sin(th) + I_unit * ry * std::cos(th)) * (th1 - th0) / 2.0;
    }
    cplx a, b, c, d;
    mobius_coeffs(a, b, c, d);
    cplx den = c * s + d;
    return (a * d - b * c) / (den * den);
}

cplx Arc::inverse(cplx z) const {
    cplx a, b, c, d;
    mobius_coeffs(a, b, c, d);
    return (d * z - b) / (a - c * z);
}

cplx Arc::pole_param() const {
    cplx a, b, c, d;
    mobius_coeffs(a, b, c, d);
    if (c == 0.0) return NaNc;
    return -d / c;
}

namespace {
// remove rounding noise from constructed endpoints (e.g. cos(pi))
cplx clean(cplx z, double scale) {
    double re = std::abs(z.real()) < 1e-14 * scale ? 0.0 : z.real();
    double im = std::abs(z.imag()) < 1e-14 * scale ? 0.0 : z.imag();
    return {re, im};
}
} // namespace

cplx Arc::start() const { return start_finite() ? clean(at(-1.0), std::abs(at(-1.0)) + radius + rx) : NaNc; }
cplx Arc::end() const { return end_finite() ? clean(at(1.0), std::abs(at(1.0)) + radius + rx) : NaNc; }

Arc Arc::reversed() const {
    Arc r = *this;
    switch (kind) {
    case ArcKind::Segment: std::swap(r.z0, r.z1); break;
    case ArcKind::Ray: r.inward = !inward; break;
    default: std::swap(r.th0, r.th1); break;
    }
    // left and right sides trade places
    std::swap(r.left, r.right);
    return r;
}

RVec Arc::params() const { return cheb::lobatto(n); }

std::vector<cplx> Arc::points() const {
    RVec s = params();
    std::vector<cplx> z(n);
    for (int j = 0; j < n; ++j) {
        bool inf = kind == ArcKind::Ray && ((!inward && j == n - 1) || (inward && j == 0));
        z[j] = inf ? NaNc : at(s[j]);
    }
    // exact endpoints
    if (start_finite()) z[0] = start();
    if (end_finite()) z[n - 1] = end();
    return z;
}

int ContourGraph::total_points() const {
    int t = 0;
    for (auto& a : arcs) t += a.n;
    return t;
}

int ContourGraph::node_of(cplx z) const {
    for (size_t k = 0; k < nodes.size(); ++k)
        if (std::abs(nodes[k].z - z) < 1e-12 * std::max(1.0, std::abs(z))) return int(k);
    return -1;
}

void ContourGraph::build_nodes() {
    nodes.clear();
    struct End { cplx z; int arc; bool incoming; };
    std::vector<End> ends;
    for (int i = 0; i < int(arcs.size()); ++i) {
        if (arcs[i].start_finite()) ends.push_back({arcs[i].start(), i, false});
        if (arcs[i].end_finite()) ends.push_back({arcs[i].end(), i, true});
    }
    std::vector<bool> used(ends.size(), false);
    for (size_t e = 0; e < ends.size(); ++e) {
        if (used[e]) continue;
        std::vector<size_t> grp{e};
        for (size_t f = e + 1; f < ends.size(); ++f)
            if (!used[f] && std::abs(ends[f].z - ends[e].z) < 1e-12) grp.push_back(f);
        if (grp.size() < 2) continue;
        Node nd;
        nd.z = ends[e].z;
        for (size_t f : grp) {
            used[f] = true;
            const Arc& a = arcs[ends[f].arc];
            // chord direction a short way into the arc; separates tangent ties by curvature
            cplx s = ends[f].incoming ? cplx(1.0 - 1e-5) : cplx(-1.0 + 1e-5);
            double ang = wrap2pi(std::arg(a.at(s) - nd.z));
            nd.inc.push_back({ends[f].arc, ends[f].incoming, ang});
        }
        std::sort(nd.inc.begin(), nd.inc.end(), [](auto& x, auto& y) { return x.angle < y.angle; });
        nodes.push_back(nd);
    }
}

std::string ContourGraph::region_at(cplx z) const {
    double best = 1e300;
    const Arc* ba = nullptr;
    double bs = 0;
    for (auto& a : arcs) {
        const int M = 4096;
        for (int m = 1; m < M; ++m) {
            double s = -1.0 + 2.0 * m / M;
            double d = std::abs(a.at(s) - z);
            if (d < best) { best = d; ba = &a; bs = s; }
        }
    }
    // local refinement by ternary search
    double lo = std::max(-1.0, bs - 2.0 / 4096), hi = std::min(1.0 - 1e-12, bs + 2.0 / 4096);
    for (int it = 0; it < 100; ++it) {
        double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
        if (std::abs(ba->at(m1) - z) < std::abs(ba->at(m2) - z)) hi = m2; else lo = m1;
    }
    double s = 0.5 * (lo + hi);
    cplx t = ba->dz(s);
    double side = (std::conj(t) * (z - ba->at(s))).imag();
    return side > 0 ? ba->left : ba->right;
}

bool ContourGraph::complete(std::string* why) const {
    auto fail = [&](const std::string& w) { if (why) *why = w; return false; };
    for (auto& a : arcs) {
        if (!region_sign.count(a.left) || !region_sign.count(a.right)) return fail("unlabelled region on " + a.name);
        if (region_sign.at(a.left) != 1 || region_sign.at(a.right) != -1) return fail("sign convention broken on " + a.name);
        if (a.n < 4) return fail("fewer than 4 nodes on " + a.name);
    }
    // every coinciding endpoint must be a node
    for (size_t i = 0; i < arcs.size(); ++i)
        for (cplx e : {arcs[i].start(), arcs[i].end()}) {
            if (std::isnan(e.real())) continue;
            int hits = 0;
            for (size_t k = 0; k < arcs.size(); ++k)
                for (cplx f : {arcs[k].start(), arcs[k].end()})
                    if (!std::isnan(f.real()) && std::abs(e - f) < 1e-12) ++hits;
            if (hits > 1 && node_of(e) < 0) return fail("missing node");
        }
    for (auto& nd : nodes) {
        int m = int(nd.inc.size());
        for (int i = 0; i < m; ++i) {
            auto& p = nd.inc[i];
            auto& q = nd.inc[(i + 1) % m];
            const Arc& A = arcs[p.arc];
            const Arc& B = arcs[q.arc];
            // sector ccw after p, seen from p and from q
            std::string after = p.incoming ? A.right : A.left;
            std::string before = q.incoming ? B.left : B.right;
            if (after != before) return fail("inconsistent faces at node");
        }
    }
    return true;
}

namespace {

Arc ray(cplx z0, cplx dir, bool inward, double L, int n, std::string l, std::string r, std::string name) {
    Arc a;
    a.kind = ArcKind::Ray; a.z0 = z0; a.z1 = dir; a.inward = inward; a.scale = L; a.n = n;
    a.left = l; a.right = r; a.name = name;
    return a;
}
Arc seg(cplx z0, cplx z1, int n, std::string l, std::string r, std::string name) {
    Arc a;
    a.kind = ArcKind::Segment; a.z0 = z0; a.z1 = z1; a.n = n;
    a.left = l; a.right = r; a.name = name;
    return a;
}
Arc circ(double rad, double th0, double th1, int n, std::string l, std::string r, std::string name) {
    Arc a;
    a.kind = ArcKind::Circular; a.center = 0; a.radius = rad; a.th0 = th0; a.th1 = th1; a.n = n;
    a.left = l; a.right = r; a.name = name;
    return a;
}

} // namespace

ContourGraph build_zeta_contour(double R, int nb, int nr) {
    if (!(R > 0)) throw std::invalid_argument("R must be positive");
    ContourGraph g;
    g.kind = ContourKind::Zeta;
    g.R = R;
    g.S_inf = R * R;
    double L = 2 * R;
    cplx i = I_unit;
    g.arcs = {
        ray(R, 1.0, false, L, nr, "O1a", "O2b", "ray_+R"),
        ray(-R, -1.0, false, L, nr, "O1b", "O2a", "ray_-R"),
        ray(i * R, i, true, L, nr, "O1a", "O2a", "ray_+iR"),
        ray(-i * R, -i, true, L, nr, "O1b", "O2b", "ray_-iR"),
        seg(R, 0.0, nb, "O4b", "O3a", "seg_+R"),
        seg(-R, 0.0, nb, "O4a", "O3b", "seg_-R"),
        seg(0.0, i * R, nb, "O4a", "O3a", "seg_+iR"),
        seg(0.0, -i * R, nb, "O4b", "O3b", "seg_-iR"),
        circ(R, PI / 2, 0, nb, "O1a", "O3a", "arc_q1"),
        circ(R, -PI / 2, -PI, nb, "O1b", "O3b", "arc_q3"),
        circ(R, PI / 2, PI, nb, "O4a", "O2a", "arc_q2"),
        circ(R, -PI / 2, 0, nb, "O4b", "O2b", "arc_q4"),
    };
    g.region_sign = {{"O1a", 1}, {"O1b", 1}, {"O4a", 1}, {"O4b", 1},
                     {"O2a", -1}, {"O2b", -1}, {"O3a", -1}, {"O3b", -1}};
    g.build_nodes();
    return g;
}

ContourGraph build_lambda_contour(double S, int nb, int nr) {
    if (!(S > 0)) throw std::invalid_argument("S_inf must be positive");
    ContourGraph g;
    g.kind = ContourKind::Lambda;
    g.S_inf = S;
    g.R = std::sqrt(S);
    g.arcs = {
        ray(S, 1.0, false, 2 * S, nr, "Omega1", "Omega2", "ray_right"),
        ray(-S, -1.0, true, 2 * S, nr, "Omega1", "Omega2", "ray_left"),
        seg(S, -S, nb, "Omega4", "Omega3", "segment"),
        circ(S, PI, 0, nb, "Omega1", "Omega3", "arc_upper"),
        circ(S, -PI, 0, nb, "Omega4", "Omega2", "arc_lower"),
    };
    g.region_sign = {{"Omega1", 1}, {"Omega2", -1}, {"Omega3", -1}, {"Omega4", 1}};
    g.build_nodes();
    return g;
}

ContourGraph build_modified_contour(double S, double ax, double ay, int nb, int nr) {
    if (!(ax > 0) || !(ay > 0)) throw std::invalid_argument("degenerate ellipse");
    if (std::abs(ax - S) > 1e-12 * S) throw std::invalid_argument("ellipse must pass through +-S_inf");
    if (!(ay < S)) throw std::invalid_argument("ellipse must lie inside the circle");
    ContourGraph g = build_lambda_contour(S, nb, nr);
    g.kind = ContourKind::Modified;
    g.arcs[2] = seg(-S, S, nb, "Lens_up", "Lens_low", "segment");
    Arc eu, el;
    eu.kind = el.kind = ArcKind::Elliptical;
    eu.center = el.center = 0;
    eu.rx = el.rx = ax;
    eu.ry = el.ry = ay;
    eu.th0 = 0; eu.th1 = PI;   // +S -> -S over the top
    el.th0 = 0; el.th1 = -PI;  // +S -> -S under the bottom
    eu.n = el.n = nb;
    eu.left = "Lens_up"; eu.right = "Omega3"; eu.name = "ellipse_upper";
    el.left = "Omega4"; el.right = "Lens_low"; el.name = "ellipse_lower";
    g.arcs.push_back(eu);
    g.arcs.push_back(el);
    g.region_sign["Lens_up"] = 1;
    g.region_sign["Lens_low"] = -1;
    g.build_nodes();
    return g;
}

ContourGraph build_lambda_contour(double S, const LambdaLayout& lay) {
    if (!(lay.Lambda1 > S)) {
        ContourGraph g = build_lambda_contour(S, lay.n_segment, lay.n_tail);
        for (int k : {3, 4}) g.arcs[k].n = lay.n_arc;
        g.build_nodes();
        return g;
    }
    ContourGraph g;
    g.kind = ContourKind::Lambda;
    g.S_inf = S;
    g.R = std::sqrt(S);
    double L1 = lay.Lambda1;
    g.arcs = {
        seg(S, L1, lay.n_near, "Omega1", "Omega2", "near_right"),
        ray(L1, 1.0, false, L1, lay.n_tail, "Omega1", "Omega2", "ray_right"),
        ray(-L1, -1.0, true, L1, lay.n_tail, "Omega1", "Omega2", "ray_left"),
        seg(-L1, -S, lay.n_near, "Omega1", "Omega2", "near_left"),
        seg(S, -S, lay.n_segment, "Omega4", "Omega3", "segment"),
        circ(S, PI, 0, lay.n_arc, "Omega1", "Omega3", "arc_upper"),
        circ(S, -PI, 0, lay.n_arc, "Omega4", "Omega2", "arc_lower"),
    };
    g.region_sign = {{"Omega1", 1}, {"Omega2", -1}, {"Omega3", -1}, {"Omega4", 1}};
    g.build_nodes();
    return g;
}

ContourGraph build_modified_contour(double S, double ay, const LambdaLayout& lay) {
    if (!(ay > 0) || !(ay < S)) throw std::invalid_argument("ellipse must lie inside the circle");
    ContourGraph g = build_lambda_contour(S, lay);
    g.kind = ContourKind::Modified;
    for (auto& a : g.arcs)
        if (a.name == "segment") a = seg(-S, S, lay.n_segment, "Lens_up", "Lens_low", "segment");
    Arc eu, el;
    eu.kind = el.kind = ArcKind::Elliptical;
    eu.center = el.center = 0;
    eu.rx = el.rx = S;
    eu.ry = el.ry = ay;
    eu.th0 = 0; eu.th1 = PI;
    el.th0 = 0; el.th1 = -PI;
    eu.n = el.n = lay.n_arc;
    eu.left = "Lens_up"; eu.right = "Omega3"; eu.name = "ellipse_upper";
    el.left = "Omega4"; el.right = "Lens_low"; el.name = "ellipse_lower";
    g.arcs.push_back(eu);
    g.arcs.push_back(el);
    g.region_sign["Lens_up"] = 1;
    g.region_sign["Lens_low"] = -1;
    g.build_nodes();
    return g;
}

NodeTrace node_trace(const ContourGraph& g, int node, const std::vector<CVec>& samples, int k) {
    const Node& nd = g.nodes.at(node);
    NodeTrace t;
    t.node = nd.z;
    t.inc = nd.inc;
    for (auto& in : nd.inc) {
        const Arc& a = g.arcs[in.arc];
        if (int(samples.at(in.arc).size()) != a.n) throw std::invalid_argument("missing incident-arc data");
        RVec s = a.params();
        Eigen::MatrixXd D = cheb::diff_matrix(a.n);
        CVec inv_dz(a.n);
        for (int j = 0; j < a.n; ++j) {
            cplx d = a.dz(s[j]);
            inv_dz[j] = std::isfinite(std::abs(d)) ? 1.0 / d : 0.0;
        }
        CVec gcur = samples[in.arc];
        for (int j = 0; j < a.n; ++j)
            if (!std::isfinite(std::abs(gcur[j]))) gcur[j] = 0.0;
        int idx = in.incoming ? a.n - 1 : 0;
        std::vector<cplx> vals;
        for (int j = 0; j < k; ++j) {
            vals.push_back(gcur[idx]);
            gcur = (D.cast<cplx>() * gcur).cwiseProduct(inv_dz);
        }
        t.f.push_back(vals);
    }
    int m = int(nd.inc.size());
    for (int i = 0; i < m; ++i) {
        const Arc& A = g.arcs[nd.inc[i].arc];
        t.sector_sign.push_back(g.region_sign.at(nd.inc[i].incoming ? A.right : A.left));
    }
    return t;
}

double check_zero_sum(const NodeTrace& t, int k) {
    double res = 0;
    for (int j = 0; j < k; ++j) {
        cplx s = 0;
        for (size_t i = 0; i < t.inc.size(); ++i) {
            if (int(t.f[i].size()) <= j) throw std::invalid_argument("missing incident-arc data");
            s += (t.inc[i].incoming ? 1.0 : -1.0) * t.f[i][j];
        }
        res = std::max(res, std::abs(s));
    }
    return res;
}

double check_matching_pm(const NodeTrace& t, int side, int k) {
    double res = 0;
    int m = int(t.inc.size());
    for (int i = 0; i < m; ++i) {
        if (t.sector_sign[i] != side) continue;
        int i2 = (i + 1) % m;
        for (int j = 0; j < k; ++j) {
            if (int(t.f[i].size()) <= j || int(t.f[i2].size()) <= j) throw std::invalid_argument("missing incident-arc data");
            res = std::max(res, std::abs(t.f[i][j] - t.f[i2][j]));
        }
    }
    return res;
}

namespace {
nlohmann::json cj(cplx z) { return {z.real(), z.imag()}; }
cplx jc(const nlohmann::json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }
const char* kind_name(ArcKind k) {
    switch (k) {
    case ArcKind::Segment: return "segment";
    case ArcKind::Ray: return "ray";
    case ArcKind::Circular: return "circular-arc";
    default: return "elliptical-arc";
    }
}
} // namespace

nlohmann::json to_json(const ContourGraph& g) {
    nlohmann::json j;
    j["kind"] = g.kind == ContourKind::Zeta ? "zeta" : g.kind == ContourKind::Lambda ? "lambda" : "modified";
    j["R"] = g.R;
    j["S_inf"] = g.S_inf;
    for (auto& a : g.arcs) {
        j["arcs"].push_back({{"kind", kind_name(a.kind)}, {"name", a.name}, {"z0", cj(a.z0)}, {"z1", cj(a.z1)},
                             {"inward", a.inward}, {"center", cj(a.center)}, {"radius", a.radius}, {"rx", a.rx},
                             {"ry", a.ry}, {"th0", a.th0}, {"th1", a.th1}, {"scale", a.scale}, {"n", a.n},
                             {"left", a.left}, {"right", a.right}});
    }
    for (auto& nd : g.nodes) {
        nlohmann::json jn;
        jn["z"] = cj(nd.z);
        for (auto& in : nd.inc) jn["incident"].push_back({{"arc", in.arc}, {"incoming", in.incoming}, {"angle", in.angle}});
        j["nodes"].push_back(jn);
    }
    j["regions"] = g.region_sign;
    return j;
}

ContourGraph contour_from_json(const nlohmann::json& j) {
    ContourGraph g;
    std::string k = j.at("kind");
    g.kind = k == "zeta" ? ContourKind::Zeta : k == "lambda" ? ContourKind::Lambda : ContourKind::Modified;
    g.R = j.at("R");
    g.S_inf = j.at("S_inf");
    for (auto& ja : j.at("arcs")) {
        Arc a;
        std::string kn = ja.at("kind");
        a.kind = kn == "segment" ? ArcKind::Segment : kn == "ray" ? ArcKind::Ray
                 : kn == "circular-arc" ? ArcKind::Circular : ArcKind::Elliptical;
        a.name = ja.at("name");
        a.z0 = jc(ja.at("z0"));
        a.z1 = jc(ja.at("z1"));
        a.inward = ja.at("inward");
        a.center = jc(ja.at("center"));
        a.radius = ja.at("radius");
        a.rx = ja.at("rx");
        a.ry = ja.at("ry");
        a.th0 = ja.at("th0");
        a.th1 = ja.at("th1");
        a.scale = ja.at("scale");
        a.n = ja.at("n");
        a.left = ja.at("left");
        a.right = ja.at("right");
        g.arcs.push_back(a);
    }
    if (j.contains("nodes"))
        for (auto& jn : j.at("nodes")) {
            Node nd;
            nd.z = jc(jn.at("z"));
            for (auto& ji : jn.at("incident")) nd.inc.push_back({ji.at("arc"), ji.at("incoming"), ji.at("angle")});
            g.nodes.push_back(nd);
        }
    g.region_sign = j.at("regions").get<std::map<std::string, int>>();
    return g;
}

} // namespace dnls
