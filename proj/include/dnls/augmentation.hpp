#pragma once

#include "dnls/contour.hpp"
#include "dnls/scattering.hpp"

namespace dnls {

// Which jump formula an arc of the lambda contour carries.
enum class ArcRole { RealOuter, RealInner, CircleUpper, CircleLower, Identity };
ArcRole arc_role(const Arc& a, double S_inf);

// Pointwise lambda-plane data of q and of its cutoff q_{x0} (grid index j0).
// gamma = lambda * beta-breve.
struct LambdaPoint {
    cplx lambda;
    cplx alpha = 1, alpha_b = 1, beta = 0, gamma = 0;
    cplx alpha0 = 1, alpha0_b = 1, beta0 = 0, gamma0 = 0;
    cplx n12m = 0, n21m = 0;
};
enum LambdaNeed : unsigned { NeedPlus0 = 1, NeedPlus1 = 2, NeedMinus0 = 4, NeedMinus1 = 8, NeedAll = 15 };
LambdaPoint lambda_point(const Potential& q, int j0, cplx lambda, unsigned need = NeedAll);

struct ScatteringParams {
    double margin = 0.25, R_min = 1.0, cutoff_bound = 0.45;
    double R = 0;            // > 0 overrides choose_radius
    double x0 = -1e300;      // > -1e300 overrides choose_cutoff
};

// The component functions sampled on the arcs of a lambda contour. Entries
// not used by an arc's formula stay empty.
struct ArcSamples {
    CVec rho, rho0;                     // real axis outside / inside the circle
    CVec alpha, alpha_b;                // real axis outside
    CVec inv_ab, inv_ab0, n21m;         // upper arc
    CVec inv_a, inv_a0, n12m;           // lower arc
};

struct ScatteringData {
    double R = 1, S_inf = 1, x0 = 0;
    int j0 = 0;
    ContourGraph graph;
    std::vector<ArcRole> role;
    std::vector<ArcSamples> arc;
};

// R and x0 only (radius ladder, cutoff scan, winding check of alpha0-breve)
void choose_parameters(const Potential& q, const ScatteringParams& p, double& R, double& x0, int& j0);
// winding of alpha0-breve along the boundary of the upper half disc |lambda| <= S
int alpha0b_winding(const Potential& q, int j0, double S);

ScatteringData build_scattering_data(const Potential& q, const ScatteringParams& p, const LambdaLayout& lay);
// same parameters, samples on another layout
ScatteringData resample(const Potential& q, const ScatteringData& sd, const LambdaLayout& lay);

struct JumpField {
    ContourGraph graph;
    double t = 0;
    std::vector<std::vector<M2>> J, Jp, Jm; // per arc, per node
    bool has_factors() const { return !Jp.empty(); }
};

// pointwise jumps on the real axis outside / inside the circle
M2 ray_jump(cplx lambda, cplx rho);
M2 segment_jump(cplx lambda, cplx rho0);

JumpField assemble_jump(const ScatteringData& sd);
JumpField factorize_jump(JumpField jf);

struct ProductResidual {
    double order0 = 0, order1 = 0;
};
// product of the oriented jumps around the node at z (one of +-S_inf) against I,
// as value and first derivative of the Taylor product
ProductResidual check_product_condition(const JumpField& jf, cplx node);

// left-normalised jumps s_-^{-1} J s_+^{-1}, s = diag(1/delta, delta); delta is
// alpha-breve above the real axis and alpha below. Only the real rays (outer
// regions on both sides) are conjugated; other arcs are copied.
JumpField left_conjugate(const JumpField& jf, const ScatteringData& sd);

// zeta-plane jump v on Sigma from zeta-plane data (r = b-breve/a, r-breve = b/a-breve
// and their cutoff versions), independent of the lambda route
JumpField assemble_zeta_jump(const Potential& q, int j0, const ContourGraph& sigma);
// rays: v = upper(r) lower(-r-breve); inner segments: v = lower(r0-breve) upper(-r0);
// arcs in the first and third quadrant carry v+ = v, the others v- = v^{-1}
JumpField factorize_zeta_jump(JumpField vf);

nlohmann::json to_json(const JumpField& jf);
JumpField jump_from_json(const nlohmann::json& j);

} // namespace dnls
