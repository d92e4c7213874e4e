#pragma once

#include "dnls/common.hpp"

namespace dnls::cheb {

// Lobatto points s_j = -cos(pi j/(n-1)), ascending on [-1,1]
RVec lobatto(int n);

// Clenshaw-Curtis weights for the Lobatto points
RVec cc_weights(int n);

// values at Lobatto points -> Chebyshev coefficients (n x n)
Eigen::MatrixXd values_to_coeffs(int n);

// spectral differentiation on [-1,1]
Eigen::MatrixXd diff_matrix(int n);

// barycentric weights for Lobatto points
RVec bary_weights(int n);

// interpolate values f (at Lobatto points) at a point s (complex ok)
cplx interp(const CVec& f, cplx s);

// interpolation row: weights l_j(s) with sum l_j f_j = p(s)
CVec interp_row(int n, cplx s);

// T_0..T_{n-1}(s)
CVec chebT(int n, cplx s);

} // namespace dnls::cheb
