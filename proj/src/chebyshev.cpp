#include "dnls/chebyshev.hpp"

#include <cmath>

namespace dnls::cheb {

RVec lobatto(int n) {
    RVec s(n);
    for (int j = 0; j < n; ++j) s[j] = -std::cos(PI * j / (n - 1));
    // exact symmetry and endpoints
    for (int j = 0; j < n / 2; ++j) {
        double v = 0.5 * (s[n - 1 - j] - s[j]);
        s[j] = -v;
        s[n - 1 - j] = v;
    }
    if (n % 2) s[n / 2] = 0.0;
    return s;
}

RVec cc_weights(int n) {
    // integrate the interpolant: w = C^T mu
    Eigen::MatrixXd C = values_to_coeffs(n);
    RVec mu = RVec::Zero(n);
    for (int k = 0; k < n; k += 2) mu[k] = 2.0 / (1.0 - double(k) * k);
    return C.transpose() * mu;
}

Eigen::MatrixXd values_to_coeffs(int n) {
    int N = n - 1;
    Eigen::MatrixXd C(n, n);
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < n; ++j) {
            // T_k(s_j) with s_j = -cos(pi j/N) = cos(pi (N-j)/N)
            double v = std::cos(PI * k * double(N - j) / N);
            double c = 2.0 / N;
            if (j == 0 || j == N) c *= 0.5;
            if (k == 0 || k == N) c *= 0.5;
            C(k, j) = c * v;
        }
    }
    return C;
}

RVec bary_weights(int n) {
    RVec w(n);
    for (int j = 0; j < n; ++j) {
        w[j] = (j % 2 ? -1.0 : 1.0);
        if (j == 0 || j == n - 1) w[j] *= 0.5;
    }
    return w;
}

Eigen::MatrixXd diff_matrix(int n) {
    RVec s = lobatto(n);
    RVec w = bary_weights(n);
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        double diag = 0;
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            D(i, j) = (w[j] / w[i]) / (s[i] - s[j]);
            diag -= D(i, j);
        }
        D(i, i) = diag; // negative sum trick
    }
    return D;
}

CVec interp_row(int n, cplx s) {
    RVec x = lobatto(n);
    RVec w = bary_weights(n);
    CVec row(n);
    for (int j = 0; j < n; ++j) {
        if (std::abs(s - x[j]) < 1e-15) {
            row.setZero();
            row[j] = 1.0;
            return row;
        }
    }
    cplx den = 0;
    for (int j = 0; j < n; ++j) {
        row[j] = w[j] / (s - x[j]);
        den += row[j];
    }
    return row / den;
}

cplx interp(const CVec& f, cplx s) { return interp_row(int(f.size()), s).cwiseProduct(f).sum(); }

CVec chebT(int n, cplx s) {
    CVec T(n);
    if (n > 0) T[0] = 1.0;
    if (n > 1) T[1] = s;
    for (int k = 2; k < n; ++k) T[k] = 2.0 * s * T[k - 1] - T[k - 2];
    return T;
}

} // namespace dnls::cheb
