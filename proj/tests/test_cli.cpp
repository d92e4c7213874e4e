#include "doctest.h"

#include "commands.hpp"

#include <fstream>
#include <sstream>

using namespace dnls;
using namespace dnls::cli;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("dnls_cli_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

fs::path write_config(const fs::path& dir, const json& j) {
    fs::path p = dir / "config.json";
    std::ofstream(p) << j.dump();
    return p;
}

int invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "dnls");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return run(int(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

json manifest(const fs::path& out) { return json::parse(slurp(out / "manifest.json")); }

std::vector<std::vector<double>> csv_numbers(const fs::path& p) {
    std::ifstream f(p);
    std::string line;
    std::getline(f, line);
    std::vector<std::vector<double>> rows;
    while (std::getline(f, line)) {
        std::vector<double> r;
        std::stringstream s(line);
        std::string cell;
        while (std::getline(s, cell, ',')) {
            try {
                r.push_back(std::stod(cell));
            } catch (...) {
                r.push_back(0.0);
            }
        }
        rows.push_back(r);
    }
    return rows;
}

const json small_x = {{"min", -1.0}, {"max", 1.0}, {"step", 1.0}};

} // namespace

TEST_CASE("cli: zero potential emits an all-zero rho file") {
    auto dir = scratch("zero");
    json cfg = {{"potential", {{"type", "zero"}}}, {"contour", {{"n_near", 32}}}};
    auto c = write_config(dir, cfg);
    CHECK(invoke({"direct", "-c", c.string(), "-o", (dir / "out").string()}) == 0);
    auto m = manifest(dir / "out");
    REQUIRE(m.size() == 1);
    std::string hash = m.begin().key();
    CHECK(hash == config_hash(load_config(c), 1.0));
    auto rows = csv_numbers(dir / "out" / (hash.substr(0, 12) + "_rho.csv"));
    CHECK(rows.size() > 100);
    for (auto& r : rows) {
        CHECK(r[2] == 0.0);
        CHECK(r[3] == 0.0);
    }
    CHECK(m[hash]["direct"]["right"]["R"] == 1.0);
}

TEST_CASE("cli: recorded (R, x0) satisfy the cutoff tail bound") {
    auto dir = scratch("sech");
    const double A = 0.8;
    json cfg = {{"potential", {{"type", "sech"}, {"A", A}}}};
    auto c = write_config(dir, cfg);
    CHECK(invoke({"direct", "-c", c.string(), "-o", (dir / "out").string()}) == 0);
    auto m = manifest(dir / "out");
    const json& d = m.begin().value()["direct"]["right"];
    double R = d["R"], x0 = d["x0"];
    // sup_{|zeta| <= R} int_{x0}^inf max|zeta Q + P| for A sech, by Simpson on a fine grid
    auto g = [&](double y) {
        double s = A / std::cosh(y);
        return std::max(R * s, 0.5 * s * s);
    };
    auto tail = [&](double a) {
        const int n = 200000;
        const double b = 30.0, hh = (b - a) / n;
        double I = g(a) + g(b);
        for (int k = 1; k < n; ++k) I += (k % 2 ? 4 : 2) * g(a + k * hh);
        return I * hh / 3;
    };
    double I = tail(x0);
    CHECK(I < 0.45);
    // smallest such grid point: two steps to the left the bound fails
    CHECK(tail(x0 - 0.02) >= 0.45);
    CHECK(double(d["cutoff_bound"]) == doctest::Approx(I).epsilon(1e-4));
}

TEST_CASE("cli: missing input file -> exit 2, no artifacts") {
    auto dir = scratch("missing");
    json cfg = {{"potential", {{"type", "csv"}, {"path", "nope.csv"}}}};
    auto c = write_config(dir, cfg);
    auto out = dir / "out";
    CHECK(invoke({"direct", "-c", c.string(), "-o", out.string()}) == 2);
    CHECK(!fs::exists(out));
    CHECK(invoke({"direct", "-c", (dir / "absent.json").string(), "-o", out.string()}) == 2);
    CHECK(!fs::exists(out));
}

TEST_CASE("cli: schema violations are input errors") {
    auto dir = scratch("schema");
    auto out = (dir / "out").string();
    for (json cfg : {json{{"potential", {{"type", "sech"}}}, {"colour", 1}},
                     json{{"potential", {{"type", "sech"}}}, {"tolerances", {{"overlap", -1.0}}}},
                     json{{"potential", {{"type", "gauss"}}}}, json{{"t", {0.1}}}}) {
        auto c = write_config(dir, cfg);
        CHECK(invoke({"direct", "-c", c.string(), "-o", out}) == 2);
    }
    CHECK_THROWS_AS(parse_config(json{{"potential", {{"type", "sech"}}}, {"x", {{"step", 0.0}}}}), InputError);
}

TEST_CASE("cli: csv potential input matches the analytic family") {
    auto dir = scratch("csvin");
    auto q = Potential::sampled(SechFamily{0.3, {}}, 25.0, 2501);
    {
        std::ofstream f(dir / "q.csv");
        f << "x,re_q,im_q\n";
        f.precision(17);
        for (int j = 0; j < q.size(); ++j) f << q.x[j] << ',' << q.q[j].real() << ',' << q.q[j].imag() << '\n';
    }
    json cfg = {{"potential", {{"type", "csv"}, {"path", "q.csv"}}}, {"x", small_x}};
    auto rc = load_config(write_config(dir, cfg));
    auto p = make_potential(rc);
    CHECK(p.size() == 2501);
    for (int j = 0; j < p.size(); j += 50) {
        CHECK(p.q[j] == q.q[j]);
        CHECK(p.x[j] == doctest::Approx(q.x[j]).epsilon(1e-15));
    }
}

TEST_CASE("cli: evolve-invert files per t, sigma column, t = 0 round trip, determinism") {
    auto dir = scratch("evolve");
    json cfg = {{"potential", {{"type", "sech"}, {"A", 0.3}}}, {"t", {0.0, 0.25}}, {"x", small_x}};
    auto c = write_config(dir, cfg);
    auto out1 = dir / "a", out2 = dir / "b";
    CHECK(invoke({"evolve-invert", "-c", c.string(), "-o", out1.string()}) == 0);
    CHECK(invoke({"evolve-invert", "-c", c.string(), "-o", out2.string(), "-j", "2"}) == 0);
    std::string p = manifest(out1).begin().key().substr(0, 12);
    for (const char* t : {"0", "0.25"}) {
        auto q = out1 / (p + "_q_t" + t + ".csv");
        REQUIRE(fs::exists(q));
        CHECK(slurp(q) == slurp(out2 / (p + "_q_t" + t + ".csv")));
        std::string head = slurp(out1 / (p + "_diag_t" + t + ".csv")).substr(0, 40);
        CHECK(head.find("sigma_min") != std::string::npos);
    }
    auto rows = csv_numbers(out1 / (p + "_q_t0.csv"));
    REQUIRE(rows.size() == 3);
    for (auto& r : rows) CHECK(std::abs(cplx(r[1], r[2]) - 0.3 / std::cosh(r[0])) < 1e-8);
    auto m = manifest(out1).begin().value();
    CHECK(m["artifacts"]["evolve-invert"].size() == 5);
}

TEST_CASE("cli: compare-pde report schema, zero potential, refinement") {
    auto dir = scratch("pde");
    json zero = {{"potential", {{"type", "zero"}}}, {"t", {0.5}}, {"x", small_x}, {"contour", {{"n_near", 32}}}};
    auto c0 = write_config(dir, zero);
    CHECK(invoke({"compare-pde", "-c", c0.string(), "-o", (dir / "z").string()}) == 0);
    std::string pz = manifest(dir / "z").begin().key().substr(0, 12);
    auto rz = json::parse(slurp(dir / "z" / (pz + "_compare.json")));
    CHECK(rz["errors"][0]["l2_error"] == 0.0);
    CHECK(rz["errors"][0]["max_error"] == 0.0);

    json cfg = {{"potential", {{"type", "sech"}, {"A", 0.3}}},
                {"t", {0.5}},
                {"x", {{"min", -1.0}, {"max", 1.0}, {"step", 1.0}}},
                {"pde", {{"stride", 32}}}};
    auto c = write_config(dir, cfg);
    double err[2];
    int k = 0;
    for (const char* res : {"0.5", "1"}) {
        auto out = dir / (std::string("r") + res);
        CHECK(invoke({"compare-pde", "-c", c.string(), "-o", out.string(), "-r", res}) == 0);
        std::string p = manifest(out).begin().key().substr(0, 12);
        auto r = json::parse(slurp(out / (p + "_compare.json")));
        const json& e = r["errors"][0];
        for (const char* key : {"t", "l2_error", "max_error", "runtime_s"}) CHECK(e.contains(key));
        CHECK(e["t"] == 0.5);
        err[k++] = e["l2_error"];
    }
    CHECK(err[1] < err[0]);
    CHECK(err[1] < 1e-6);
}
