#include "dnls/potential.hpp"

#include <algorithm>
#include <cmath>

namespace dnls {

cplx SechFamily::operator()(double x) const {
    double ph = 0, xp = 1;
    for (double c : phase) {
        ph += c * xp;
        xp *= x;
    }
    return A / std::cosh(x) * std::polar(1.0, ph);
}

Potential Potential::sampled(const SechFamily& f, double X, int J) {
    Potential p;
    p.X = X;
    p.x.resize(J);
    p.q.resize(J);
    for (int j = 0; j < J; ++j) {
        p.x[j] = -X + 2.0 * X * j / (J - 1);
        p.q[j] = f(p.x[j]);
    }
    p.family = f;
    return p;
}

Potential Potential::zero(double X, int J) {
    SechFamily f;
    f.A = 0.0;
    return sampled(f, X, J);
}

double Potential::l2_norm_sq() const {
    double s = 0;
    for (int j = 0; j + 1 < size(); ++j)
        s += 0.5 * (std::norm(q[j]) + std::norm(q[j + 1])) * (x[j + 1] - x[j]);
    return s;
}

double Potential::h22_norm() const {
    double hh = h(), s = 0;
    for (int j = 1; j + 1 < size(); ++j) {
        cplx d2 = (q[j + 1] - 2.0 * q[j] + q[j - 1]) / (hh * hh);
        s += (std::norm(q[j]) + std::norm(d2) + std::norm(x[j] * x[j] * q[j])) * hh;
    }
    return std::sqrt(s);
}

void Potential::validate(double tail_tol) const {
    if (size() < 8) throw InputError("potential grid too small");
    if (x.size() != q.size()) throw InputError("potential grid/sample size mismatch");
    double hh = h();
    for (int j = 1; j < size(); ++j)
        if (std::abs(x[j] - x[j - 1] - hh) > 1e-9 * std::max(1.0, hh)) throw InputError("potential grid not uniform");
    if (std::abs(q.front()) > tail_tol || std::abs(q.back()) > tail_tol)
        throw InputError("potential not below truncation tolerance at grid ends");
    for (auto v : q)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw InputError("non-finite potential sample");
}

cplx Potential::at(double xx) const {
    if (xx < x.front() || xx > x.back()) return 0.0;
    if (family) return (*family)(xx);
    double u = (xx - x.front()) / h();
    int j = std::clamp(int(std::floor(u)) - 1, 0, size() - 4);
    cplx v = 0;
    for (int a = 0; a < 4; ++a) {
        double l = 1;
        for (int b = 0; b < 4; ++b)
            if (b != a) l *= (u - (j + b)) / double(a - b);
        v += l * q[j + a];
    }
    return v;
}

Potential Potential::mirror() const {
    Potential p = *this;
    int J = size();
    for (int j = 0; j < J; ++j) p.q[j] = std::conj(q[J - 1 - j]);
    // grid symmetric about 0; the family is not closed under mirroring in general
    if (family) {
        SechFamily f = *family;
        f.A = std::conj(f.A);
        for (size_t k = 0; k < f.phase.size(); ++k)
            f.phase[k] = (k % 2 ? 1.0 : -1.0) * family->phase[k];
        p.family = f;
    }
    return p;
}

} // namespace dnls
