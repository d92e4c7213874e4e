#include "dnls/pde_oracle.hpp"

#include <fftw3.h>

#include <cmath>

namespace dnls {

namespace {

class Fft {
public:
    explicit Fft(int n) : n_(n), buf_(n) {
        auto* p = reinterpret_cast<fftw_complex*>(buf_.data());
        fwd_ = fftw_plan_dft_1d(n, p, p, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_1d(n, p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~Fft() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
    }
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;
    // unnormalized forward / normalized backward
    void forward(std::vector<cplx>& v) { run(v, fwd_, 1.0); }
    void backward(std::vector<cplx>& v) { run(v, bwd_, 1.0 / n_); }

private:
    void run(std::vector<cplx>& v, fftw_plan p, double s) {
        std::copy(v.begin(), v.end(), buf_.begin());
        fftw_execute(p);
        for (int i = 0; i < n_; ++i) v[i] = buf_[i] * s;
    }
    int n_;
    std::vector<cplx> buf_;
    fftw_plan fwd_, bwd_;
};

int wavenumber_index(int j, int n) { return j <= n / 2 ? j : j - n; }

struct Rhs {
    int N, M;
    double L, eps;
    std::vector<double> k;
    Fft small, big;
    Rhs(int N_, double L_, double eps_) : N(N_), M(3 * N_ / 2), L(L_), eps(eps_), small(N_), big(3 * N_ / 2) {
        k.resize(N);
        for (int j = 0; j < N; ++j) k[j] = 2 * PI / L * wavenumber_index(j, N);
    }
    // spectral nonlinearity of q_t = i q_xx - eps q^2 conj(q)_x + (i/2)|q|^4 q
    std::vector<cplx> nonlinear(const std::vector<cplx>& qh) {
        std::vector<cplx> a(M, 0.0), b(M, 0.0);
        // pad: q and conj(q)_x on the 3N/2 grid
        for (int j = 0; j < N; ++j) {
            int kj = wavenumber_index(j, N);
            if (2 * std::abs(kj) == N) continue; // drop the Nyquist mode
            int jj = kj >= 0 ? kj : kj + M;
            a[jj] = qh[j];
        }
        b = a;
        big.backward(a); // q on the padded grid (scaled by N/M below)
        double s = double(M) / N;
        for (auto& v : a) v *= s;
        // conj(q)_x = conj(q_x)
        for (int j = 0; j < M; ++j) {
            int kj = wavenumber_index(j, M);
            b[j] *= I_unit * (2 * PI / L * kj);
        }
        big.backward(b);
        for (auto& v : b) v *= s;
        std::vector<cplx> n(M);
        for (int j = 0; j < M; ++j) {
            double m2 = std::norm(a[j]);
            n[j] = -eps * a[j] * a[j] * std::conj(b[j]) + 0.5 * I_unit * m2 * m2 * a[j];
        }
        big.forward(n);
        std::vector<cplx> out(N, 0.0);
        for (int j = 0; j < N; ++j) {
            int kj = wavenumber_index(j, N);
            if (2 * std::abs(kj) == N) continue;
            int jj = kj >= 0 ? kj : kj + M;
            out[j] = n[jj] / s;
        }
        return out;
    }
};

} // namespace

std::vector<double> box_grid(const PdeOptions& opt) {
    std::vector<double> x(opt.N);
    for (int j = 0; j < opt.N; ++j) x[j] = -opt.L / 2 + opt.L * j / opt.N;
    return x;
}

PdeRun step_dnls2(const Potential& q0, const std::vector<double>& times, double dt, const PdeOptions& opt) {
    auto x = box_grid(opt);
    std::vector<cplx> v(opt.N);
    for (int j = 0; j < opt.N; ++j) v[j] = q0.at(x[j]);
    return step_dnls2(v, times, dt, opt);
}

PdeRun step_dnls2(const std::vector<cplx>& q0, const std::vector<double>& times, double dt, const PdeOptions& opt) {
    if (int(q0.size()) != opt.N || opt.N % 2) throw std::invalid_argument("box size mismatch");
    if (dt == 0) throw std::invalid_argument("dt must be nonzero");
    const int N = opt.N;
    Rhs R(N, opt.L, opt.eps);
    PdeRun run;
    run.L = opt.L;
    run.N = N;
    run.dt = dt;
    run.x = box_grid(opt);
    const double h = opt.L / N;
    double q0max = 0;
    for (auto v : q0) q0max = std::max(q0max, std::abs(v));

    std::vector<cplx> qh = q0;
    R.small.forward(qh);
    // linear part: q_hat' = -i k^2 q_hat
    auto lin = [&](double tau) {
        std::vector<cplx> e(N);
        for (int j = 0; j < N; ++j) e[j] = std::exp(-I_unit * R.k[j] * R.k[j] * tau);
        return e;
    };
    auto guard = [&](double t, std::vector<cplx>& q) {
        q = qh;
        R.small.backward(q);
        double mx = 0;
        for (auto v : q) mx = std::max(mx, std::abs(v));
        if (q0max > 0 && !(mx <= opt.blowup_factor * q0max))
            throw NumericError("pde oracle: amplitude grew beyond the blow-up threshold at t = " + std::to_string(t));
    };
    auto snapshot = [&](double t) {
        std::vector<cplx> q;
        guard(t, q);
        double m = 0;
        for (auto v : q) m += std::norm(v) * h;
        run.t.push_back(t);
        run.q.push_back(q);
        run.l2.push_back(m);
    };

    double t = 0;
    long steps = 0;
    std::vector<cplx> scratch;
    for (double target : times) {
        if (target * dt < 0) throw std::invalid_argument("snapshot time has the wrong sign");
        while (std::abs(target - t) > 1e-12 * std::max(1.0, std::abs(target))) {
            double step = std::abs(target - t) < std::abs(dt) ? target - t : dt;
            auto E = lin(step / 2), E2 = lin(step);
            std::vector<cplx> a = R.nonlinear(qh), u(N), b, c, d;
            for (int j = 0; j < N; ++j) u[j] = E[j] * (qh[j] + 0.5 * step * a[j]);
            b = R.nonlinear(u);
            for (int j = 0; j < N; ++j) u[j] = E[j] * qh[j] + 0.5 * step * b[j];
            c = R.nonlinear(u);
            for (int j = 0; j < N; ++j) u[j] = E2[j] * qh[j] + step * E[j] * c[j];
            d = R.nonlinear(u);
            for (int j = 0; j < N; ++j)
                qh[j] = E2[j] * qh[j] + step / 6 * (E2[j] * a[j] + 2.0 * E[j] * (b[j] + c[j]) + d[j]);
            t += step;
            if (++steps % 16 == 0) guard(t, scratch);
            for (auto v : qh)
                if (!std::isfinite(v.real())) throw NumericError("pde oracle: non-finite state");
        }
        t = target;
        snapshot(t);
    }
    return run;
}

} // namespace dnls
