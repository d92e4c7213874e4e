#pragma once

#include "dnls/contour.hpp"

namespace dnls {

// Collocation layout over the arcs that carry densities. Elliptical arcs of the
// modified contour carry an identity jump and are left out by default.
struct Discretization {
    const ContourGraph* g = nullptr;
    std::vector<int> arcs;              // carrier arc ids
    std::vector<int> off;               // global offset per carrier
    std::vector<std::vector<cplx>> z;   // node points (NaN at infinity)
    std::vector<RVec> s;
    int N = 0;
    CVec quad;                          // weights for int u(lambda) dlambda
    std::vector<bool> at_inf;           // per global node

    static Discretization make(const ContourGraph& g);
    static Discretization make(const ContourGraph& g, const std::vector<int>& arcs);
    int carrier_of(int arc) const;
    cplx point(int k) const;
};

struct CauchyMatrix {
    CMat M;
    int side = -1;
};

// exact Cauchy integrals of T_k on [-1,1] (times 1/(2 pi i))
namespace psi {
CVec off(int n, cplx w);
CVec interval(int n, double x, int side);
// finite part at s = e (+-1); logterm = Log of (z - a)/M'(e) direction (without log|z - a|)
CVec endpoint(int n, int e, cplx logterm);
} // namespace psi

// row r with r . f = (1/2 pi i) int_arc f dlambda/(lambda - z), f at the arc's Lobatto points
CVec arc_cauchy_row(const Arc& a, cplx z);

// boundary values of the Cauchy transform from side +1 or -1 at all collocation nodes
CauchyMatrix boundary_projector(const Discretization& d, int side);
std::pair<CauchyMatrix, CauchyMatrix> boundary_projectors(const Discretization& d);

// global row for an off-contour point
CVec offcontour_row(const Discretization& d, cplx z);
cplx cauchy_offcontour(const Discretization& d, const CVec& density, cplx z);

// nu -> C+(nu W-) + C-(nu W+) on row densities, unknowns stacked [nu_1; nu_2]
CMat build_bc_operator(const std::vector<M2>& Wp, const std::vector<M2>& Wm, const CauchyMatrix& Cp,
                       const CauchyMatrix& Cm);

} // namespace dnls
