#pragma once

#include "dnls/evolution.hpp"
#include "dnls/rhp_solver.hpp"

#include <map>

namespace dnls {

// Right-normalised jump data of q and of its mirror p(x) = conj(q(-x)); the
// mirror serves x below the split point. Both carry their own R, x0 and Lambda1.
struct SpectralPair {
    JumpField right, mirror; // factored, on the master layout
    double Lambda1 = 0, Lambda1_mirror = 0;
    double R = 1, x0 = 0, R_mirror = 1, x0_mirror = 0;
};

struct DirectOptions {
    ScatteringParams params, params_mirror;
    LambdaLayout master{64, 64, 160, 32, 0}; // Lambda1 filled in per potential
};
SpectralPair direct_map(const Potential& q, const DirectOptions& opt = {});
// right data forward by t; the mirror solves the equation backward in time
SpectralPair evolve_pair(const SpectralPair& sp, double t);

// jump data on another layout of the same contour family (per-arc Chebyshev
// interpolation of the t = 0 data, time phase reapplied exactly)
JumpField resample_jump(const JumpField& jf, const LambdaLayout& lay);

// q(x) = (-1/pi int nu (W+ + W-))_12
cplx reconstruct_point(const BCSolver& s, const BCSolution& nu, const WPair& w);

// zeta-plane solve and q = 2i lim zeta M12 by Richardson extrapolation along
// |zeta| in {10, 20, 40} R on the ray arg zeta = pi/8
cplx reconstruct_limit(const BCSolver& sigma, const BCSolution& mu, const WPair& w);

struct InverseOptions {
    double resolution = 1.0;
    double a_split = 0.0;
    double overlap_tol = 1e-5;
    bool check_overlap = true;
    bool with_sigma = true;
    // batch runs share one layout sized for the largest |x| of the batch;
    // layout_extent >= 0 fixes that |x| bound instead
    bool shared_layout = true;
    double layout_extent = -1;
};

struct PointDiag {
    double x = 0, residual = 0, sigma_min = -1;
    int nodes = 0;
    bool mirror = false;
};

struct InverseResult {
    std::vector<double> x;
    std::vector<cplx> q;
    std::vector<PointDiag> diag;
    double overlap_error = -1;
    bool overlap_ok = true;
};

// Solves per x with layouts chosen from (x, t); projectors are cached per layout.
class InverseMap {
public:
    explicit InverseMap(SpectralPair data, InverseOptions opt = {});
    // right-normalised value at x (valid for x >= a, any fixed a; used for x >= a_split)
    cplx right(double x, PointDiag* d = nullptr);
    // mirror value: conj of the mirror reconstruction at -x
    cplx left(double x, PointDiag* d = nullptr);
    cplx at(double x, PointDiag* d = nullptr);
    InverseResult run(const std::vector<double>& xs);
    const SpectralPair& data() const { return data_; }
    const InverseOptions& options() const { return opt_; }

    struct Solved {
        const BCSolver* solver;
        BCSolution nu;
        WPair w;
    };
    // solve at xs on the right data (mirror = false) or on the mirror data
    Solved solve(bool mirror, double xs, bool with_sigma);

private:
    struct Entry {
        JumpField jf;
        std::unique_ptr<BCSolver> solver;
    };
    Entry& entry(bool mirror, double xs);
    double extent_ = -1; // shared-layout |x| bound, < 0 when unused
    cplx value(bool mirror, double x, PointDiag* d);
    SpectralPair data_;
    InverseOptions opt_;
    std::map<std::tuple<bool, int, int, int, int>, Entry> cache_;
};

// threads > 1 splits xs into contiguous chunks, one InverseMap each; the
// shared layout is fixed from the whole batch so results do not depend on threads
InverseResult inverse_map(const SpectralPair& sp, const std::vector<double>& xs, const InverseOptions& opt = {},
                          int threads = 1);

// relative L2 distance on a common uniform grid
double rel_l2(const std::vector<cplx>& a, const std::vector<cplx>& b);
double l2(const std::vector<cplx>& a, const std::vector<cplx>& b, double h);

// Lax x-equation residual of the zeta-plane solution: centered differences of
// M(x, zeta) at off-contour probe points against (-i zeta^2 ad sigma + zeta Q + P) M
struct LaxReport {
    double residual = 0;
    double h = 0;
};
LaxReport lax_consistency(const JumpField& vf, const std::function<cplx(double)>& q, double x, double h,
                          const std::vector<cplx>& probes);

} // namespace dnls
