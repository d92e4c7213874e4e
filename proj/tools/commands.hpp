#pragma once

#include "dnls/pde_oracle.hpp"
#include "dnls/reconstruction.hpp"

#include <json.hpp>

#include <filesystem>

namespace dnls::cli {

namespace fs = std::filesystem;

struct XGrid {
    double min = -10, max = 10, step = 0.1;
    std::vector<double> points() const;
};

struct RunConfig {
    nlohmann::json raw;      // as read, used for the hash
    fs::path base;           // directory of the config file (relative paths)
    nlohmann::json potential;
    LambdaLayout master{64, 64, 160, 32, 0};
    std::optional<double> R, x0;
    double margin = 0.25, R_min = 1.0;
    std::vector<double> t{0.0};
    XGrid x;
    double a_split = 0;
    double tol_overlap = 1e-5, tol_roundtrip = 1e-6, tol_tail = 1e-10;
    PdeOptions pde;
    double pde_dt = 1e-3;
    int pde_stride = 2;
};

struct Flags {
    fs::path config, out;
    double resolution = 1.0;
    int threads = 1;
};

// throws InputError on schema violations
RunConfig parse_config(const nlohmann::json& j, const fs::path& base = {});
RunConfig load_config(const fs::path& path);
Potential make_potential(const RunConfig& c);

// sha256 of the canonical config dump and the resolution multiplier
std::string config_hash(const RunConfig& c, double resolution);

int cmd_direct(const RunConfig& c, const Flags& f);
int cmd_evolve_invert(const RunConfig& c, const Flags& f);
int cmd_roundtrip(const RunConfig& c, const Flags& f);
int cmd_compare_pde(const RunConfig& c, const Flags& f);
int cmd_diag(const RunConfig& c, const Flags& f);

// full command-line entry: parses flags, maps exceptions to exit codes
int run(int argc, char** argv);

} // namespace dnls::cli
