#pragma once

#include "dnls/potential.hpp"

#include <functional>

namespace dnls {

// Column system of the spectral problem, written generically so the same
// marcher serves the zeta form (A = zeta, B = -zeta, kappa = 2i zeta^2) and
// the lambda form (A = 1, B = -lambda, kappa = 2i lambda).
struct Kernel {
    cplx A, B, kappa;
    static Kernel zeta_form(cplx z) { return {z, -z, 2.0 * I_unit * z * z}; }
    static Kernel lambda_form(cplx l) { return {1.0, -l, 2.0 * I_unit * l}; }
};

// one column of m+ (plus = true, normalized at +X) or m- (normalized at -X);
// d = diagonal entry, o = off-diagonal entry, indexed like the grid.
// Entries outside [stop, J-1] (plus) or [0, stop] (minus) are left unset.
struct JostColumn {
    std::vector<cplx> d, o;
};
JostColumn march_column(const Potential& q, const Kernel& k, int col, bool plus, int stop = -1);

struct JostPair {
    cplx zeta;
    std::vector<M2> mp, mm;
};
JostPair jost_solve(const Potential& q, cplx zeta);

struct TransitionCoeffs {
    cplx zeta;
    cplx a, ab, b, bb;       // a, a-breve, b, b-breve
    cplx a_alt, ab_alt;      // same quantities via m- (second representation)
};
TransitionCoeffs transition_coeffs(const Potential& q, cplx zeta);

struct Reflection {
    cplx r, rb;
};
// throws NumericError("spectral singularity proximity") when |a| or |a-breve| < tol
Reflection reflection(const TransitionCoeffs& c, double tol = 1e-8);

struct LambdaCoeffs {
    cplx lambda;
    cplx alpha, alpha_b, beta, rho;
    cplx n12m, n21m;    // n-(x0, lambda) entries
};
LambdaCoeffs to_lambda(const Potential& q, cplx lambda, double x0);

// alpha(lambda) = a(sqrt(lambda)) through the lambda-form march (Im lambda <= 0)
cplx alpha_lambda(const Potential& q, cplx lambda);

// winding number of f along a closed chain of parameterized pieces t in [0, 1]
int winding_number(const std::function<cplx(cplx)>& f, const std::vector<std::function<cplx(double)>>& pieces,
                   int samples = 128);

// winding number of alpha on the boundary of {S < |lambda| < S_big, Im lambda < 0}
int alpha_zero_count_outside(const Potential& q, double S, double S_big);

double choose_radius(const Potential& q, double margin = 0.25, double R_min = 1.0);

// tail integral of max(R|q|, |q|^2/2) from each grid point to X
std::vector<double> cutoff_tail(const Potential& q, double R);
double choose_cutoff(const Potential& q, double R, double bound = 0.45);

// grid index of the largest grid point <= x
int grid_index(const Potential& q, double x);

} // namespace dnls
