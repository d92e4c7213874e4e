#include "dnls/gauge.hpp"

namespace dnls {

std::vector<double> tail_integral(const Potential& u) {
    const int J = u.size();
    std::vector<double> I(J, 0.0);
    const double h = u.h();
    for (int j = J - 2; j >= 0; --j) I[j] = I[j + 1] + 0.5 * h * (std::norm(u.q[j]) + std::norm(u.q[j + 1]));
    return I;
}

namespace {

Potential apply_phase(const Potential& u, double sign) {
    auto I = tail_integral(u);
    Potential q = u;
    q.family.reset();
    for (int j = 0; j < u.size(); ++j) q.q[j] = u.q[j] * std::exp(I_unit * (sign * I[j]));
    return q;
}

void check_eps(int eps) {
    if (eps != 1 && eps != -1) throw std::invalid_argument("eps must be +1 or -1");
}

} // namespace

Potential gauge_forward(const Potential& u, int eps) {
    check_eps(eps);
    return apply_phase(u, double(eps));
}

Potential gauge_inverse(const Potential& q, int eps) {
    check_eps(eps);
    return apply_phase(q, -double(eps));
}

} // namespace dnls
