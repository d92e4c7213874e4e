#include "dnls/evolution.hpp"

namespace dnls {

namespace {

JumpField evolve_with(const JumpField& jf, double t, int power) {
    JumpField out = jf;
    out.t = jf.t + t;
    if (t == 0) return out;
    auto apply = [&](std::vector<std::vector<M2>>& F) {
        for (size_t i = 0; i < F.size(); ++i) {
            auto z = jf.graph.arcs[i].points();
            for (size_t j = 0; j < F[i].size(); ++j) {
                if (!std::isfinite(z[j].real())) continue;
                cplx l2 = z[j] * z[j];
                cplx w = power == 4 ? l2 * l2 : l2;
                F[i][j](0, 1) *= std::exp(-4.0 * I_unit * w * t);
                F[i][j](1, 0) *= std::exp(4.0 * I_unit * w * t);
            }
        }
    };
    apply(out.J);
    apply(out.Jp);
    apply(out.Jm);
    return out;
}

} // namespace

JumpField evolve_jump(const JumpField& jf, double t) {
    return evolve_with(jf, t, jf.graph.kind == ContourKind::Zeta ? 4 : 2);
}

JumpField evolve_zeta(const JumpField& vf, double t) {
    if (vf.graph.kind != ContourKind::Zeta) throw std::invalid_argument("evolve_zeta needs zeta-plane data");
    return evolve_with(vf, t, 4);
}

} // namespace dnls
