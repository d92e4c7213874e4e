#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dnls {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using M2 = Eigen::Matrix2cd;

inline constexpr cplx I_unit{0.0, 1.0};
inline constexpr double PI = 3.14159265358979323846;

// thrown for numerical failures the caller may want to report (CLI exit 1)
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// thrown for bad input files / configs (CLI exit 2)
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline M2 upper(cplx u) {
    M2 m;
    m << 1.0, u, 0.0, 1.0;
    return m;
}

inline M2 lower(cplx l) {
    M2 m;
    m << 1.0, 0.0, l, 1.0;
    return m;
}

inline double maxabs(const M2& m) { return m.cwiseAbs().maxCoeff(); }

// sqrt on the branch arg in [0, 2pi)
inline cplx sqrt_branch(cplx lam) {
    double r = std::abs(lam);
    double th = std::arg(lam);
    if (th < 0) th += 2 * PI;
    return std::polar(std::sqrt(r), th / 2);
}

} // namespace dnls
