#pragma once

#include "dnls/augmentation.hpp"

namespace dnls {

// J(lambda) -> e^{-2i lambda^2 t ad sigma} J(lambda) on J, J+ and J-; on the zeta
// contour lambda^2 is zeta^4. The result carries jf.t + t.
JumpField evolve_jump(const JumpField& jf, double t);
JumpField evolve_zeta(const JumpField& vf, double t);

// theta(x, t, lambda) = -2 lambda^2 - (x/t) lambda
inline cplx theta(double x, double t, cplx l) { return -2.0 * l * l - (x / t) * l; }

} // namespace dnls
