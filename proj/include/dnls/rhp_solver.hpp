#pragma once

#include "dnls/augmentation.hpp"
#include "dnls/cauchy.hpp"

#include <memory>

namespace dnls {

// Nilpotent weights W+ = J_{x,+} - I, W- = I - J_{x,-} per arc and node, where
// J_x = e^{-i lambda x ad sigma} J (lambda = zeta^2 on the zeta contour).
struct WPair {
    double x = 0, t = 0;
    std::vector<std::vector<M2>> Wp, Wm;
};
WPair split_W(const JumpField& jf, double x);
// (I - W-)^{-1} (I + W+)
M2 jump_from_W(const M2& Wp, const M2& Wm);

// omega = I + E p(z)/(z - z0)^n per region of the lambda plane, E the upper or
// lower unit entry; p cubic, fixed by first-order Hermite data at +-S_inf.
struct RationalFactor {
    cplx z0 = 0;
    int n = 6;
    bool upper = true;
    std::array<cplx, 4> p{}; // p(z) = p0 + p1 z + p2 z^2 + p3 z^3
    cplx entry(cplx z) const;
    M2 value(cplx z) const;
    M2 inverse(cplx z) const;
};

struct Regularizer {
    double S_inf = 1;
    // Omega1 .. Omega4: lower(-2iS), upper(+2iS), lower(-2iS), upper(+2iS)
    std::array<RationalFactor, 4> omega;
};
Regularizer build_regularizer(const JumpField& jf, int n = 6);
// cubic through (a, fa, dfa) and (b, fb, dfb)
std::array<cplx, 4> hermite_cubic(cplx a, cplx fa, cplx dfa, cplx b, cplx fb, cplx dfb);

// smallest n >= 6 for which |omega - I| at +-Lambda1 is below tol relative to the
// matched data: beyond Lambda1 the oscillating O(lambda^{3-n}) tail of omega is
// not resolved by the mapped rays
int regularizer_degree(double S_inf, double Lambda1, double tol = 1e-12);

// jump factors of the modified contour built from factored data on Gamma
JumpField regularize_jump(const JumpField& jf, const Regularizer& reg, const ContourGraph& gm);

struct BCSolution {
    double x = 0, t = 0;
    CVec nu1, nu2;      // per collocation node
    double residual = 0;
    double sigma_min = -1;
};

// Beals-Coifman solver for a fixed contour layout: projectors are built once.
class BCSolver {
public:
    explicit BCSolver(const ContourGraph& g);
    const ContourGraph& graph() const { return *g_; }
    const Discretization& disc() const { return d_; }
    // (I - C_W) nu = (1, 0); with_sigma adds the smallest singular value of
    // I - C_W in the quadrature-weighted L2 norm
    BCSolution solve(const WPair& w, bool with_sigma = false) const;
    double null_space_diag(const WPair& w) const;
    // second row: (I - C_W) nu = (0, 1)
    BCSolution solve_row2(const WPair& w) const;
    // flatten per-arc weights onto the collocation nodes
    void flatten(const WPair& w, std::vector<M2>& Wp, std::vector<M2>& Wm) const;
    CMat op(const WPair& w) const;
    // off-diagonal blocks of C_W: component 1 from component 2 and vice versa
    void blocks(const WPair& w, CMat& B10, CMat& B01) const;

private:
    double sigma_from_schur(const Eigen::PartialPivLU<CMat>& lu, const CMat& B10, const CMat& B01) const;

    std::unique_ptr<ContourGraph> g_;
    Discretization d_;
    CauchyMatrix Cp_, Cm_;
};

// sigma_min of the operator from its LU, weights sqrt|quad| (infinite nodes dropped)
double sigma_min_weighted(const CMat& A, const CVec& quad, const std::vector<bool>& at_inf);

// node layout for a solve at (x, t): oscillation-resolving counts, quantized to 16
LambdaLayout choose_layout(double S_inf, double Lambda1, double x, double t, double resolution = 1.0);
// smallest ladder point beyond which |rho| stays below tol on both rays (the
// marcher's noise floor is near 1e-16)
double choose_Lambda1(const Potential& q, int j0, double S_inf, double tol = 1e-14);

// nu on Gamma at an arbitrary contour point (per-arc barycentric interpolation)
std::array<cplx, 2> nu_at(const BCSolver& s, const BCSolution& nu, cplx lambda);
// max over Sigma nodes of |mu11(zeta) - nu11(zeta^2)| and |mu12(zeta) - zeta nu12(zeta^2)|
double zeta_crosscheck(const BCSolver& gamma, const BCSolution& nu, const BCSolver& sigma, const BCSolution& mu);

} // namespace dnls
