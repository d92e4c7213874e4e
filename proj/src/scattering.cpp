#include "dnls/scattering.hpp"

#include <array>
#include <cmath>
#include <functional>

namespace dnls {

namespace {

// int_0^1 e^{z u} u^m du, m = 0..3
std::array<cplx, 4> moments(cplx z) {
    std::array<cplx, 4> M{};
    if (std::abs(z) < 1.0) {
        cplx zp = 1.0;
        double fact = 1.0;
        for (int p = 0; p < 30; ++p) {
            for (int m = 0; m < 4; ++m) M[m] += zp / (fact * (m + p + 1));
            zp *= z;
            fact *= (p + 1);
        }
        return M;
    }
    cplx ez = std::exp(z);
    M[0] = (ez - 1.0) / z;
    for (int m = 1; m < 4; ++m) M[m] = (ez - double(m) * M[m - 1]) / z;
    return M;
}

// Lagrange bases on nodes u = 0, 1, .., p (monomial coefficients)
constexpr double L1[2][4] = {{1, -1, 0, 0}, {0, 1, 0, 0}};
constexpr double L2[3][4] = {{1, -1.5, 0.5, 0}, {0, 2, -1, 0}, {0, -0.5, 0.5, 0}};
constexpr double L3[4][4] = {{1, -11.0 / 6, 1, -1.0 / 6},
                             {0, 3, -2.5, 0.5},
                             {0, -1.5, 2, -0.5},
                             {0, 1.0 / 3, -0.5, 1.0 / 6}};

struct CellWeights {
    cplx w1[2], w2[3], w3[4];
};

// weights for int_0^h e^{theta s} g(t_n - s) ds with g sampled at s = 0, h, 2h, 3h
CellWeights cell_weights(cplx theta, double h) {
    auto M = moments(theta * h);
    CellWeights W;
    for (int k = 0; k < 2; ++k) {
        W.w1[k] = 0;
        for (int m = 0; m < 4; ++m) W.w1[k] += L1[k][m] * M[m];
        W.w1[k] *= h;
    }
    for (int k = 0; k < 3; ++k) {
        W.w2[k] = 0;
        for (int m = 0; m < 4; ++m) W.w2[k] += L2[k][m] * M[m];
        W.w2[k] *= h;
    }
    for (int k = 0; k < 4; ++k) {
        W.w3[k] = 0;
        for (int m = 0; m < 4; ++m) W.w3[k] += L3[k][m] * M[m];
        W.w3[k] *= h;
    }
    return W;
}

} // namespace

JostColumn march_column(const Potential& q, const Kernel& k, int col, bool plus, int stop) {
    const int J = q.size();
    const double h = q.h();
    if (stop < 0) stop = plus ? 0 : J - 1;
    JostColumn out;
    out.d.assign(J, 0.0);
    out.o.assign(J, 0.0);

    const double sg = plus ? -1.0 : 1.0;
    const cplx kap_o = col == 0 ? k.kappa : -k.kappa;
    const cplx theta = plus ? -kap_o : kap_o;
    const CellWeights Wd = cell_weights(0.0, h), Wo = cell_weights(theta, h);
    const cplx E = std::exp(theta * h);

    auto coef = [&](int j, cplx& Fdd, cplx& Fdo, cplx& Fod, cplx& Foo) {
        cplx qq = q.q[j];
        double p = 0.5 * std::norm(qq);
        cplx p1 = I_unit * p, p2 = -I_unit * p;
        if (col == 0) {
            Fdd = p1; Fdo = k.A * qq; Fod = k.B * std::conj(qq); Foo = p2;
        } else {
            Fdd = p2; Fdo = k.B * std::conj(qq); Fod = k.A * qq; Foo = p1;
        }
    };

    cplx gd[4] = {0, 0, 0, 0}, go[4] = {0, 0, 0, 0}; // gd[k] = g_d at step n-k
    cplx Id = 0, Io = 0;
    int n_steps = plus ? (J - 1 - stop) : stop;
    int j = plus ? J - 1 : 0;
    {
        cplx Fdd, Fdo, Fod, Foo;
        coef(j, Fdd, Fdo, Fod, Foo);
        out.d[j] = 1.0;
        out.o[j] = 0.0;
        gd[0] = Fdd;
        go[0] = Fod;
    }
    for (int n = 1; n <= n_steps; ++n) {
        j += plus ? -1 : 1;
        for (int s = 3; s > 0; --s) {
            gd[s] = gd[s - 1];
            go[s] = go[s - 1];
        }
        const cplx *wd, *wo;
        int p;
        if (n == 1) { wd = Wd.w1; wo = Wo.w1; p = 1; }
        else if (n == 2) { wd = Wd.w2; wo = Wo.w2; p = 2; }
        else { wd = Wd.w3; wo = Wo.w3; p = 3; }
        cplx hd = 0, ho = 0;
        for (int s = 1; s <= p; ++s) {
            hd += wd[s] * gd[s];
            ho += wo[s] * go[s];
        }
        cplx Fdd, Fdo, Fod, Foo;
        coef(j, Fdd, Fdo, Fod, Foo);
        cplx a11 = 1.0 - sg * wd[0] * Fdd, a12 = -sg * wd[0] * Fdo;
        cplx a21 = -sg * wo[0] * Fod, a22 = 1.0 - sg * wo[0] * Foo;
        cplx r1 = 1.0 + sg * (Id + hd);
        cplx r2 = sg * (E * Io + ho);
        cplx det = a11 * a22 - a12 * a21;
        cplx ud = (r1 * a22 - a12 * r2) / det;
        cplx uo = (a11 * r2 - a21 * r1) / det;
        gd[0] = Fdd * ud + Fdo * uo;
        go[0] = Fod * ud + Foo * uo;
        Id += hd + wd[0] * gd[0];
        Io = E * Io + ho + wo[0] * go[0];
        out.d[j] = ud;
        out.o[j] = uo;
    }
    return out;
}

JostPair jost_solve(const Potential& q, cplx zeta) {
    Kernel k = Kernel::zeta_form(zeta);
    JostColumn p1 = march_column(q, k, 0, true), p2 = march_column(q, k, 1, true);
    JostColumn m1 = march_column(q, k, 0, false), m2 = march_column(q, k, 1, false);
    JostPair jp;
    jp.zeta = zeta;
    int J = q.size();
    jp.mp.resize(J);
    jp.mm.resize(J);
    for (int j = 0; j < J; ++j) {
        jp.mp[j] << p1.d[j], p2.o[j], p1.o[j], p2.d[j];
        jp.mm[j] << m1.d[j], m2.o[j], m1.o[j], m2.d[j];
    }
    return jp;
}

TransitionCoeffs transition_coeffs(const Potential& q, cplx zeta) {
    Kernel k = Kernel::zeta_form(zeta);
    const int J = q.size();
    const double X0 = q.x.front(), X1 = q.x.back();
    JostColumn p1 = march_column(q, k, 0, true), p2 = march_column(q, k, 1, true);
    JostColumn m1 = march_column(q, k, 0, false), m2 = march_column(q, k, 1, false);
    TransitionCoeffs c;
    c.zeta = zeta;
    c.a = p1.d[0];
    c.ab = p2.d[0];
    c.b = std::exp(-k.kappa * X0) * p1.o[0];
    c.bb = std::exp(k.kappa * X0) * p2.o[0];
    c.a_alt = m2.d[J - 1];
    c.ab_alt = m1.d[J - 1];
    (void)X1;
    return c;
}

Reflection reflection(const TransitionCoeffs& c, double tol) {
    if (std::abs(c.a) < tol || std::abs(c.ab) < tol) throw NumericError("spectral singularity proximity");
    return {c.bb / c.a, c.b / c.ab};
}

LambdaCoeffs to_lambda(const Potential& q, cplx lambda, double x0) {
    cplx z = sqrt_branch(lambda);
    TransitionCoeffs c = transition_coeffs(q, z);
    LambdaCoeffs L;
    L.lambda = lambda;
    L.alpha = c.a;
    L.alpha_b = c.ab;
    L.beta = c.bb / z;
    L.rho = (c.bb / c.a) / z;
    Kernel k = Kernel::zeta_form(z);
    int j0 = grid_index(q, x0);
    JostColumn m1 = march_column(q, k, 0, false, j0), m2 = march_column(q, k, 1, false, j0);
    L.n21m = z * m1.o[j0];
    L.n12m = m2.o[j0] / z;
    return L;
}

cplx alpha_lambda(const Potential& q, cplx lambda) {
    return march_column(q, Kernel::lambda_form(lambda), 0, true).d[0];
}

int grid_index(const Potential& q, double x) {
    int j = int(std::floor((x - q.x.front()) / q.h() + 1e-9));
    return std::clamp(j, 0, q.size() - 1);
}

namespace {

// accumulated arg change of f along path, refined where consecutive samples
// differ by more than pi/4 in argument
double arg_change(const std::function<cplx(cplx)>& f, const std::function<cplx(double)>& path, double t0,
                  double t1, int n, int depth = 0) {
    double total = 0;
    double ta = t0;
    cplx fa = f(path(ta));
    if (std::abs(fa) < 1e-13) throw NumericError("function vanishes on the counting contour");
    for (int i = 1; i <= n; ++i) {
        double tb = t0 + (t1 - t0) * i / n;
        cplx fb = f(path(tb));
        if (std::abs(fb) < 1e-13) throw NumericError("function vanishes on the counting contour");
        double d = std::arg(fb / fa);
        if (std::abs(d) > PI / 4 && depth < 12) total += arg_change(f, path, ta, tb, 8, depth + 1);
        else total += d;
        ta = tb;
        fa = fb;
    }
    return total;
}

} // namespace

int winding_number(const std::function<cplx(cplx)>& f, const std::vector<std::function<cplx(double)>>& pieces,
                   int samples) {
    double total = 0;
    for (auto& p : pieces) total += arg_change(f, p, 0.0, 1.0, samples);
    double w = total / (2 * PI);
    long k = std::lround(w);
    if (std::abs(w - k) > 1e-3) throw NumericError("non-integer winding number");
    return int(k);
}

int alpha_zero_count_outside(const Potential& q, double S, double S_big) {
    auto f = [&](cplx l) { return alpha_lambda(q, l); };
    return winding_number(f, {
        [&](double t) { return cplx(S_big + (S - S_big) * t, 0); },            // S_big -> S
        [&](double t) { return S * std::polar(1.0, -PI * t); },                // S -> -S via -iS
        [&](double t) { return cplx(-S + (S - S_big) * t, 0); },               // -S -> -S_big
        [&](double t) { return S_big * std::polar(1.0, -PI + PI * t); },       // -S_big -> S_big via -iS_big
    });
}

double choose_radius(const Potential& q, double margin, double R_min) {
    double R = R_min;
    for (int it = 0; it < 40; ++it) {
        double S = R * R;
        double S_big = std::max(64.0, 16.0 * S);
        int n = -1;
        try {
            n = alpha_zero_count_outside(q, S, S_big);
        } catch (const NumericError&) {
            n = -1; // a zero sits on the contour; enlarge
        }
        if (n == 0) return it == 0 ? R : R * (1.0 + margin);
        R *= (1.0 + margin);
    }
    throw NumericError("choose_radius: no zero-free exterior found");
}

std::vector<double> cutoff_tail(const Potential& q, double R) {
    int J = q.size();
    std::vector<double> tail(J, 0.0);
    auto f = [&](int j) { double a = std::abs(q.q[j]); return std::max(R * a, 0.5 * a * a); };
    for (int j = J - 2; j >= 0; --j) tail[j] = tail[j + 1] + 0.5 * (f(j) + f(j + 1)) * q.h();
    return tail;
}

double choose_cutoff(const Potential& q, double R, double bound) {
    auto tail = cutoff_tail(q, R);
    for (int j = 0; j < q.size(); ++j)
        if (tail[j] < bound) return q.x[j];
    throw NumericError("choose_cutoff: condition fails on the whole grid");
}

} // namespace dnls
