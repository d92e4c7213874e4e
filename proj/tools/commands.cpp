#include "commands.hpp"

#include "dnls/gauge.hpp"

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace dnls::cli {

using nlohmann::json;

std::vector<double> XGrid::points() const {
    std::vector<double> xs;
    int n = int(std::floor((max - min) / step + 1e-9));
    for (int k = 0; k <= n; ++k) xs.push_back(min + k * step);
    return xs;
}

namespace {

template <class T>
T get_or(const json& j, const char* key, T def) {
    if (!j.contains(key) || j[key].is_null()) return def;
    try {
        return j[key].get<T>();
    } catch (const json::exception& e) {
        throw InputError(std::string("config: bad value for '") + key + "': " + e.what());
    }
}

void only_keys(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
    if (!j.is_object()) throw InputError("config: " + where + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : keys) ok = ok || it.key() == k;
        if (!ok) throw InputError("config: unknown key '" + it.key() + "' in " + where);
    }
}

void positive(double v, const char* what) {
    if (!(v > 0)) throw InputError(std::string("config: ") + what + " must be positive");
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string t_tag(double t) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", t);
    return buf;
}

class Writer {
public:
    explicit Writer(fs::path dir) : dir_(std::move(dir)) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw InputError("cannot create output directory " + dir_.string());
    }
    void text(const std::string& name, const std::string& body) {
        std::ofstream f(dir_ / name, std::ios::binary);
        f << body;
        if (!f) throw InputError("cannot write " + (dir_ / name).string());
        files_.push_back(name);
    }
    void json_file(const std::string& name, const json& j) { text(name, j.dump(2) + "\n"); }
    const std::vector<std::string>& files() const { return files_; }
    const fs::path& dir() const { return dir_; }

private:
    fs::path dir_;
    std::vector<std::string> files_;
};

std::string potential_csv(const std::vector<double>& x, const std::vector<cplx>& q) {
    std::ostringstream s;
    s << "x,re_q,im_q\n";
    for (size_t i = 0; i < x.size(); ++i) s << num(x[i]) << ',' << num(q[i].real()) << ',' << num(q[i].imag()) << '\n';
    return s.str();
}

std::vector<double> to_vec(const json& j, const char* what) {
    if (j.is_number()) return {j.get<double>()};
    if (!j.is_array()) throw InputError(std::string("config: ") + what + " must be a number or a list");
    std::vector<double> v;
    for (auto& e : j) {
        if (!e.is_number()) throw InputError(std::string("config: ") + what + " entries must be numbers");
        v.push_back(e.get<double>());
    }
    return v;
}

Potential read_csv_potential(const fs::path& p) {
    std::ifstream f(p);
    if (!f) throw InputError("cannot open potential file " + p.string());
    std::string line;
    std::vector<double> x;
    std::vector<cplx> q;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#' || std::isalpha(static_cast<unsigned char>(line[0]))) continue;
        double a, b, c;
        char s1, s2;
        std::istringstream is(line);
        if (!(is >> a >> s1 >> b >> s2 >> c)) throw InputError("malformed line in " + p.string() + ": " + line);
        x.push_back(a);
        q.emplace_back(b, c);
    }
    if (x.size() < 16) throw InputError("potential file has too few samples: " + p.string());
    double h = (x.back() - x.front()) / double(x.size() - 1);
    for (size_t i = 1; i < x.size(); ++i)
        if (std::abs(x[i] - x[i - 1] - h) > 1e-9 * (1 + std::abs(h))) throw InputError("potential grid is not uniform");
    if (std::abs(x.front() + x.back()) > 1e-9 * (1 + std::abs(x.back())))
        throw InputError("potential grid must be symmetric [-X, X]");
    Potential P;
    P.X = x.back();
    P.x = x;
    P.q = q;
    return P;
}

LambdaLayout scaled(LambdaLayout l, double res) {
    auto q16 = [&](int n) { return std::max(16, int(std::ceil(n * res / 16.0)) * 16); };
    l.n_segment = q16(l.n_segment);
    l.n_arc = q16(l.n_arc);
    l.n_near = q16(l.n_near);
    l.n_tail = q16(l.n_tail);
    return l;
}

DirectOptions direct_options(const RunConfig& c, double res) {
    DirectOptions o;
    o.params.margin = o.params_mirror.margin = c.margin;
    o.params.R_min = o.params_mirror.R_min = c.R_min;
    if (c.R) o.params.R = o.params_mirror.R = *c.R;
    if (c.x0) o.params.x0 = *c.x0;
    o.master = scaled(c.master, res);
    return o;
}

InverseOptions inverse_options(const RunConfig& c, double res) {
    InverseOptions o;
    o.resolution = res;
    o.a_split = c.a_split;
    o.overlap_tol = c.tol_overlap;
    return o;
}

json layout_json(const JumpField& jf) {
    json j;
    for (const Arc& A : jf.graph.arcs) j[A.name] = A.n;
    return j;
}

// sup over |zeta| <= R of int_{x0}^X max|entries of zeta Q + P|
double cutoff_bound(const Potential& q, double R, double x0) {
    double s = 0;
    for (int j = 0; j + 1 < q.size(); ++j) {
        if (q.x[j + 1] <= x0) continue;
        auto f = [&](int k) { return std::max(R * std::abs(q.q[k]), 0.5 * std::norm(q.q[k])); };
        s += 0.5 * q.h() * (f(j) + f(j + 1));
    }
    return s;
}

json pair_summary(const SpectralPair& sp, const Potential& q) {
    auto side = [&](const JumpField& jf, double R, double x0, double L1, const Potential& p) {
        json s;
        s["R"] = R;
        s["S_inf"] = jf.graph.S_inf;
        s["x0"] = x0;
        s["Lambda1"] = L1;
        s["node_counts"] = layout_json(jf);
        s["cutoff_bound"] = cutoff_bound(p, R, x0);
        json pc = json::array();
        for (double sg : {1.0, -1.0}) {
            auto r = check_product_condition(jf, sg * jf.graph.S_inf);
            pc.push_back({{"node", sg * jf.graph.S_inf}, {"order0", r.order0}, {"order1", r.order1}});
        }
        s["product_condition"] = pc;
        return s;
    };
    json j;
    j["right"] = side(sp.right, sp.R, sp.x0, sp.Lambda1, q);
    j["mirror"] = side(sp.mirror, sp.R_mirror, sp.x0_mirror, sp.Lambda1_mirror, q.mirror());
    return j;
}

std::string rho_csv(const JumpField& jf) {
    std::ostringstream s;
    s << "piece,lambda,re_rho,im_rho\n";
    for (size_t i = 0; i < jf.graph.arcs.size(); ++i) {
        const Arc& A = jf.graph.arcs[i];
        ArcRole r = arc_role(A, jf.graph.S_inf);
        if (r != ArcRole::RealOuter && r != ArcRole::RealInner) continue;
        auto z = A.points();
        for (int j = 0; j < A.n; ++j) {
            if (!std::isfinite(z[j].real())) continue;
            // rays carry rho in J12, the segment -rho0
            cplx v = r == ArcRole::RealOuter ? jf.J[i][j](0, 1) : -jf.J[i][j](0, 1);
            s << (r == ArcRole::RealOuter ? "rho" : "rho0") << ',' << num(z[j].real()) << ',' << num(v.real()) << ','
              << num(v.imag()) << '\n';
        }
    }
    return s.str();
}

void write_manifest(const fs::path& dir, const std::string& hash, const std::string& command, const RunConfig& c,
                    const Flags& f, const std::vector<std::string>& files, const json& extra) {
    json m = json::object();
    fs::path p = dir / "manifest.json";
    if (fs::exists(p)) {
        std::ifstream in(p);
        try {
            m = json::parse(in);
        } catch (const json::exception&) {
            m = json::object();
        }
    }
    json e;
    e["config"] = c.raw;
    e["resolution"] = f.resolution;
    e["t"] = c.t;
    e["artifacts"][command] = files;
    for (auto it = extra.begin(); it != extra.end(); ++it) e[it.key()] = it.value();
    if (m.contains(hash)) {
        // keep artifacts of other subcommands run with the same config
        json& old = m[hash];
        if (old.contains("artifacts"))
            for (auto it = old["artifacts"].begin(); it != old["artifacts"].end(); ++it)
                if (it.key() != command) e["artifacts"][it.key()] = it.value();
    }
    m[hash] = e;
    std::ofstream out(p);
    out << m.dump(2) << '\n';
    if (!out) throw InputError("cannot write " + p.string());
}

std::string prefix(const std::string& hash) { return hash.substr(0, 12); }

} // namespace

RunConfig parse_config(const json& j, const fs::path& base) {
    RunConfig c;
    c.raw = j;
    c.base = base;
    only_keys(j, {"potential", "contour", "R", "x0", "margin", "R_min", "t", "x", "a_split", "tolerances", "pde"},
              "config");
    if (!j.contains("potential")) throw InputError("config: missing 'potential'");
    c.potential = j["potential"];
    only_keys(c.potential, {"type", "A", "A_im", "phase", "X", "J", "path"}, "potential");
    std::string type = get_or<std::string>(c.potential, "type", "sech");
    if (type != "sech" && type != "zero" && type != "csv") throw InputError("config: potential type must be sech, zero or csv");
    if (type == "csv" && !c.potential.contains("path")) throw InputError("config: csv potential needs 'path'");
    if (j.contains("contour")) {
        const json& k = j["contour"];
        only_keys(k, {"n_segment", "n_arc", "n_near", "n_tail"}, "contour");
        c.master.n_segment = get_or(k, "n_segment", c.master.n_segment);
        c.master.n_arc = get_or(k, "n_arc", c.master.n_arc);
        c.master.n_near = get_or(k, "n_near", c.master.n_near);
        c.master.n_tail = get_or(k, "n_tail", c.master.n_tail);
        for (int n : {c.master.n_segment, c.master.n_arc, c.master.n_near, c.master.n_tail})
            if (n < 8) throw InputError("config: node counts must be at least 8");
    }
    if (j.contains("R") && !j["R"].is_null()) c.R = get_or(j, "R", 0.0);
    if (j.contains("x0") && !j["x0"].is_null()) c.x0 = get_or(j, "x0", 0.0);
    if (c.R) positive(*c.R, "R");
    c.margin = get_or(j, "margin", c.margin);
    c.R_min = get_or(j, "R_min", c.R_min);
    positive(c.margin, "margin");
    positive(c.R_min, "R_min");
    if (j.contains("t")) c.t = to_vec(j["t"], "t");
    if (c.t.empty()) throw InputError("config: empty t list");
    if (j.contains("x")) {
        const json& x = j["x"];
        only_keys(x, {"min", "max", "step"}, "x");
        c.x.min = get_or(x, "min", c.x.min);
        c.x.max = get_or(x, "max", c.x.max);
        c.x.step = get_or(x, "step", c.x.step);
        positive(c.x.step, "x.step");
        if (!(c.x.max >= c.x.min)) throw InputError("config: x.max < x.min");
    }
    c.a_split = get_or(j, "a_split", c.a_split);
    if (j.contains("tolerances")) {
        const json& t = j["tolerances"];
        only_keys(t, {"overlap", "roundtrip", "tail"}, "tolerances");
        c.tol_overlap = get_or(t, "overlap", c.tol_overlap);
        c.tol_roundtrip = get_or(t, "roundtrip", c.tol_roundtrip);
        c.tol_tail = get_or(t, "tail", c.tol_tail);
        positive(c.tol_overlap, "tolerances.overlap");
        positive(c.tol_roundtrip, "tolerances.roundtrip");
        positive(c.tol_tail, "tolerances.tail");
    }
    double X = get_or(c.potential, "X", 30.0);
    positive(X, "potential.X");
    c.pde.L = 4 * X;
    if (j.contains("pde")) {
        const json& p = j["pde"];
        only_keys(p, {"N", "L", "dt", "stride"}, "pde");
        c.pde.N = get_or(p, "N", c.pde.N);
        c.pde.L = get_or(p, "L", c.pde.L);
        c.pde_dt = get_or(p, "dt", c.pde_dt);
        c.pde_stride = get_or(p, "stride", c.pde_stride);
        positive(c.pde.L, "pde.L");
        positive(c.pde_dt, "pde.dt");
        if (c.pde.N < 16 || c.pde.N % 2) throw InputError("config: pde.N must be even and >= 16");
        if (c.pde_stride < 1) throw InputError("config: pde.stride must be >= 1");
    }
    return c;
}

RunConfig load_config(const fs::path& path) {
    std::ifstream f(path);
    if (!f) throw InputError("cannot open config " + path.string());
    json j;
    try {
        j = json::parse(f);
    } catch (const json::exception& e) {
        throw InputError("config is not valid JSON: " + std::string(e.what()));
    }
    return parse_config(j, path.parent_path());
}

Potential make_potential(const RunConfig& c) {
    const json& p = c.potential;
    std::string type = get_or<std::string>(p, "type", "sech");
    double X = get_or(p, "X", 30.0);
    int J = get_or(p, "J", 12001);
    if (J < 101) throw InputError("config: potential.J too small");
    Potential q;
    if (type == "zero") {
        q = Potential::zero(X, J);
    } else if (type == "sech") {
        SechFamily f{cplx(get_or(p, "A", 0.3), get_or(p, "A_im", 0.0)), get_or(p, "phase", std::vector<double>{})};
        q = Potential::sampled(f, X, J);
    } else {
        fs::path path = get_or<std::string>(p, "path", "");
        if (path.is_relative()) path = c.base / path;
        q = read_csv_potential(path);
    }
    try {
        q.validate(c.tol_tail);
    } catch (const std::exception& e) {
        throw InputError(std::string("potential: ") + e.what());
    }
    return q;
}

std::string config_hash(const RunConfig& c, double resolution) {
    std::string s = c.raw.dump() + "|res=" + num(resolution);
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int n = 0;
    EVP_Digest(s.data(), s.size(), md, &n, EVP_sha256(), nullptr);
    std::string hex;
    char b[3];
    for (unsigned i = 0; i < n; ++i) {
        std::snprintf(b, sizeof b, "%02x", md[i]);
        hex += b;
    }
    return hex;
}

int cmd_direct(const RunConfig& c, const Flags& f) {
    Potential q = make_potential(c);
    SpectralPair sp = direct_map(q, direct_options(c, f.resolution));
    std::string h = config_hash(c, f.resolution);
    Writer w(f.out);
    std::string p = prefix(h);
    json spec;
    spec["right"] = to_json(sp.right);
    spec["mirror"] = to_json(sp.mirror);
    w.json_file(p + "_spectral.json", spec);
    w.text(p + "_rho.csv", rho_csv(sp.right));
    json summary = pair_summary(sp, q);
    w.json_file(p + "_direct.json", summary);
    write_manifest(w.dir(), h, "direct", c, f, w.files(), {{"direct", summary}});
    return 0;
}

int cmd_evolve_invert(const RunConfig& c, const Flags& f) {
    Potential q = make_potential(c);
    SpectralPair sp = direct_map(q, direct_options(c, f.resolution));
    std::string h = config_hash(c, f.resolution);
    Writer w(f.out);
    std::string p = prefix(h);
    json runs = json::array();
    auto xs = c.x.points();
    bool overlap_ok = true;
    for (double t : c.t) {
        auto r = inverse_map(evolve_pair(sp, t), xs, inverse_options(c, f.resolution), f.threads);
        w.text(p + "_q_t" + t_tag(t) + ".csv", potential_csv(r.x, r.q));
        std::ostringstream d;
        d << "x,branch,residual,sigma_min,nodes\n";
        for (auto& e : r.diag)
            d << num(e.x) << ',' << (e.mirror ? "mirror" : "right") << ',' << num(e.residual) << ','
              << num(e.sigma_min) << ',' << e.nodes << '\n';
        w.text(p + "_diag_t" + t_tag(t) + ".csv", d.str());
        runs.push_back({{"t", t}, {"overlap_error", r.overlap_error}, {"overlap_ok", r.overlap_ok}});
        overlap_ok = overlap_ok && r.overlap_ok;
    }
    json summary = pair_summary(sp, q);
    summary["runs"] = runs;
    w.json_file(p + "_evolve.json", summary);
    write_manifest(w.dir(), h, "evolve-invert", c, f, w.files(), {{"direct", pair_summary(sp, q)}, {"runs", runs}});
    if (!overlap_ok) {
        std::cerr << "left/right overlap above tolerance\n";
        return 1;
    }
    return 0;
}

int cmd_roundtrip(const RunConfig& c, const Flags& f) {
    Potential q = make_potential(c);
    SpectralPair sp = direct_map(q, direct_options(c, f.resolution));
    std::string h = config_hash(c, f.resolution);
    Writer w(f.out);
    std::string p = prefix(h);
    auto xs = c.x.points();
    auto r = inverse_map(sp, xs, inverse_options(c, f.resolution), f.threads);
    std::vector<cplx> ref;
    for (double x : xs) ref.push_back(q.at(x));
    double mx = 0;
    for (size_t i = 0; i < xs.size(); ++i) mx = std::max(mx, std::abs(r.q[i] - ref[i]));
    std::ostringstream s;
    s << "x,re_q_in,im_q_in,re_q_out,im_q_out\n";
    for (size_t i = 0; i < xs.size(); ++i)
        s << num(xs[i]) << ',' << num(ref[i].real()) << ',' << num(ref[i].imag()) << ',' << num(r.q[i].real())
          << ',' << num(r.q[i].imag()) << '\n';
    w.text(p + "_roundtrip.csv", s.str());
    double rel = rel_l2(r.q, ref);
    json rep = {{"rel_l2", rel},
                {"l2_error", l2(r.q, ref, c.x.step)},
                {"max_error", mx},
                {"overlap_error", r.overlap_error},
                {"tolerance", c.tol_roundtrip},
                {"pass", rel <= c.tol_roundtrip && r.overlap_ok}};
    w.json_file(p + "_roundtrip.json", rep);
    write_manifest(w.dir(), h, "roundtrip", c, f, w.files(), {{"direct", pair_summary(sp, q)}, {"roundtrip", rep}});
    return rep["pass"].get<bool>() ? 0 : 1;
}

int cmd_compare_pde(const RunConfig& c, const Flags& f) {
    Potential q = make_potential(c);
    std::string h = config_hash(c, f.resolution);
    std::vector<double> ts;
    for (double t : c.t)
        if (t > 0) ts.push_back(t);
    std::sort(ts.begin(), ts.end());
    if (ts.empty()) throw InputError("compare-pde needs a positive t");
    auto t0 = std::chrono::steady_clock::now();
    PdeRun pde = step_dnls2(q, ts, c.pde_dt, c.pde);
    double pde_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    SpectralPair sp = direct_map(q, direct_options(c, f.resolution));
    std::vector<int> idx;
    std::vector<double> xs;
    for (int j = 0; j < pde.N; j += c.pde_stride)
        if (pde.x[j] >= c.x.min - 1e-12 && pde.x[j] <= c.x.max + 1e-12) {
            idx.push_back(j);
            xs.push_back(pde.x[j]);
        }
    if (xs.empty()) throw InputError("compare-pde: no box points inside the x range");
    const double hx = pde.L / pde.N * c.pde_stride;
    Writer w(f.out);
    std::string p = prefix(h);
    json rows = json::array();
    std::ostringstream s;
    s << "t,x,re_ist,im_ist,re_pde,im_pde\n";
    for (size_t k = 0; k < ts.size(); ++k) {
        auto a = std::chrono::steady_clock::now();
        auto r = inverse_map(evolve_pair(sp, ts[k]), xs, inverse_options(c, f.resolution), f.threads);
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - a).count();
        std::vector<cplx> ref;
        for (int j : idx) ref.push_back(pde.q[k][j]);
        double mx = 0;
        for (size_t i = 0; i < xs.size(); ++i) {
            mx = std::max(mx, std::abs(r.q[i] - ref[i]));
            s << num(ts[k]) << ',' << num(xs[i]) << ',' << num(r.q[i].real()) << ',' << num(r.q[i].imag()) << ','
              << num(ref[i].real()) << ',' << num(ref[i].imag()) << '\n';
        }
        rows.push_back({{"t", ts[k]},
                        {"l2_error", l2(r.q, ref, hx)},
                        {"max_error", mx},
                        {"runtime_s", secs},
                        {"pde_l2_drift", std::abs(pde.l2[k] - q.l2_norm_sq())},
                        {"overlap_error", r.overlap_error}});
    }
    w.text(p + "_compare.csv", s.str());
    json rep = {{"pde", {{"N", pde.N}, {"L", pde.L}, {"dt", pde.dt}, {"scheme", pde.scheme}, {"runtime_s", pde_s}}},
                {"errors", rows}};
    w.json_file(p + "_compare.json", rep);
    json det = rows;
    for (auto& r : det) r.erase("runtime_s");
    write_manifest(w.dir(), h, "compare-pde", c, f, w.files(), {{"direct", pair_summary(sp, q)}, {"compare", det}});
    return 0;
}

int cmd_diag(const RunConfig& c, const Flags& f) {
    Potential q = make_potential(c);
    SpectralPair sp = direct_map(q, direct_options(c, f.resolution));
    std::string h = config_hash(c, f.resolution);
    Writer w(f.out);
    std::string p = prefix(h);
    json d = pair_summary(sp, q);
    d["h22_norm"] = q.h22_norm();
    d["l2_norm_sq"] = q.l2_norm_sq();
    d["alpha0b_winding"] = alpha0b_winding(q, grid_index(q, sp.x0), sp.right.graph.S_inf);
    // Schwarz symmetry of the zeta-plane jump off the real line
    auto sigma = build_zeta_contour(sp.R, 32, 32);
    auto vf = assemble_zeta_jump(q, grid_index(q, sp.x0), sigma);
    double schwarz = 0, min_eig = 1e300;
    for (size_t i = 0; i < sigma.arcs.size(); ++i) {
        auto z = sigma.arcs[i].points();
        for (int j = 0; j < sigma.arcs[i].n; ++j) {
            cplx zz = z[j];
            if (!std::isfinite(zz.real()) || sigma.node_of(zz) >= 0) continue;
            const M2& v = vf.J[i][j];
            if (std::abs(zz.imag()) < 1e-14) {
                Eigen::SelfAdjointEigenSolver<M2> es(M2(v + v.adjoint()));
                min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
                continue;
            }
            for (size_t k = 0; k < sigma.arcs.size(); ++k) {
                auto y = sigma.arcs[k].points();
                for (int m = 0; m < sigma.arcs[k].n; ++m)
                    if (std::isfinite(y[m].real()) && std::abs(y[m] - std::conj(zz)) < 1e-12)
                        schwarz = std::max(schwarz, (vf.J[k][m] - v.adjoint()).cwiseAbs().maxCoeff());
            }
        }
    }
    d["schwarz_defect"] = schwarz;
    d["real_line_min_eig"] = min_eig;
    std::ostringstream s;
    s << "t,x,branch,residual,sigma_min,nodes\n";
    json sweeps = json::array();
    auto xs = c.x.points();
    for (double t : c.t) {
        auto r = inverse_map(evolve_pair(sp, t), xs, inverse_options(c, f.resolution), f.threads);
        double smin = 1e300;
        for (auto& e : r.diag) {
            smin = std::min(smin, e.sigma_min);
            s << num(t) << ',' << num(e.x) << ',' << (e.mirror ? "mirror" : "right") << ',' << num(e.residual) << ','
              << num(e.sigma_min) << ',' << e.nodes << '\n';
        }
        sweeps.push_back({{"t", t}, {"sigma_min", smin}, {"overlap_error", r.overlap_error}});
    }
    d["sweeps"] = sweeps;
    w.text(p + "_sigma.csv", s.str());
    w.json_file(p + "_diag.json", d);
    write_manifest(w.dir(), h, "diag", c, f, w.files(), {{"diag", d}});
    return 0;
}

int run(int argc, char** argv) {
    CLI::App app{"Inverse scattering solver for the derivative NLS equation"};
    app.require_subcommand(1);
    Flags f;
    auto add = [&](const char* name, const char* help) {
        auto* s = app.add_subcommand(name, help);
        s->add_option("-c,--config", f.config, "JSON run config")->required();
        s->add_option("-o,--out", f.out, "output directory")->required();
        s->add_option("-r,--resolution", f.resolution, "node-count multiplier")->check(CLI::PositiveNumber);
        s->add_option("-j,--threads", f.threads, "threads for x sweeps")->check(CLI::PositiveNumber);
        return s;
    };
    auto* direct = add("direct", "scattering data and jump matrices");
    auto* evolve = add("evolve-invert", "evolve to each t and reconstruct q on the x grid");
    auto* round = add("roundtrip", "t = 0 reconstruction against the input");
    auto* pde = add("compare-pde", "IST against the PDE integrator");
    auto* diag = add("diag", "invariants and sigma_min sweeps");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    try {
        RunConfig c = load_config(f.config);
        if (direct->parsed()) return cmd_direct(c, f);
        if (evolve->parsed()) return cmd_evolve_invert(c, f);
        if (round->parsed()) return cmd_roundtrip(c, f);
        if (pde->parsed()) return cmd_compare_pde(c, f);
        if (diag->parsed()) return cmd_diag(c, f);
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

} // namespace dnls::cli
