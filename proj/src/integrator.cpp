// integrator.cpp — Dormand–Prince 5(4) with the standard continuous extension

#include "sqzcav/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sqz {

namespace {

// Butcher tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// dense output
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

double error_norm(const Matrix& err, const Matrix& y0, const Matrix& y1, double atol, double rtol)
{
    double acc = 0.0;
    const Index n = err.size();
    for (Index i = 0; i < n; ++i) {
        const double sc = atol + rtol * std::max(std::abs(y0(i)), std::abs(y1(i)));
        const double r = std::abs(err(i)) / sc;
        acc += r * r;
    }
    return std::sqrt(acc / static_cast<double>(n));
}

double initial_step(const Liouvillian& gen, const Matrix& y0, const Matrix& f0, double t0,
                    const StepControls& c)
{
    auto scaled_norm = [&](const Matrix& v) {
        double acc = 0.0;
        for (Index i = 0; i < v.size(); ++i) {
            const double sc = c.atol + c.rtol * std::abs(y0(i));
            acc += std::norm(v(i)) / (sc * sc);
        }
        return std::sqrt(acc / static_cast<double>(v.size()));
    };
    const double dnf = scaled_norm(f0);
    const double dny = scaled_norm(y0);
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * dny / dnf;
    h = std::min(h, c.h_max);
    const Matrix y1 = y0 + h * f0;
    const Matrix f1 = gen.apply(y1, t0 + h);
    const double der2 = scaled_norm(f1 - f0) / h;
    const double der = std::max(der2, dnf);
    const double h1 = der <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der, 1.0 / 5.0);
    return std::min({100.0 * h, h1, c.h_max});
}

} // namespace

std::vector<double> linspace(double a, double b, int n)
{
    if (n < 2) throw std::invalid_argument("linspace needs at least two points");
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
    out.back() = b;
    return out;
}

StepStats propagate(const Liouvillian& gen, const Matrix& y0, double t0,
                    const std::vector<double>& sample_times, const StepControls& c,
                    const SampleObserver& observer, bool hermitian)
{
    if (y0.rows() != gen.dim() || y0.cols() != gen.dim()) {
        throw std::invalid_argument("propagate: initial condition dimension mismatch");
    }
    if (!std::is_sorted(sample_times.begin(), sample_times.end())) {
        throw std::invalid_argument("propagate: sample times must be sorted");
    }
    if (!sample_times.empty() && sample_times.front() < t0) {
        throw std::invalid_argument("propagate: sample time precedes t0");
    }
    if (!(c.rtol > 0.0) || !(c.atol > 0.0)) throw std::invalid_argument("propagate: tolerances must be positive");

    StepStats stats;
    std::size_t next = 0;
    while (next < sample_times.size() && sample_times[next] == t0) observer(t0, y0), ++next;
    if (next == sample_times.size()) return stats;

    const Index d = gen.dim();
    const double t_end = sample_times.back();
    Matrix y = y0;
    Matrix k1 = gen.apply(y, t0);
    Matrix k2(d, d), k3(d, d), k4(d, d), k5(d, d), k6(d, d), k7(d, d);
    Matrix ytmp(d, d), ynew(d, d), err(d, d);
    Matrix r1(d, d), r2(d, d), r3(d, d), r4(d, d), r5(d, d);

    double t = t0;
    double h = c.h_init > 0.0 ? c.h_init : initial_step(gen, y, k1, t0, c);
    double err_prev = 1e-4;
    bool last_rejected = false;

    while (next < sample_times.size()) {
        if (stats.accepted + stats.rejected >= c.max_steps) {
            throw IntegrationError("propagate: exceeded max_steps at t=" + std::to_string(t));
        }
        h = std::min(h, c.h_max);
        if (t + h > t_end) h = t_end - t;
        if (h <= std::abs(t) * 1e-14) {
            throw IntegrationError("propagate: step size underflow at t=" + std::to_string(t));
        }

        ytmp = y + h * a21 * k1;
        gen.apply(ytmp, t + c2 * h, k2);
        ytmp = y + h * (a31 * k1 + a32 * k2);
        gen.apply(ytmp, t + c3 * h, k3);
        ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
        gen.apply(ytmp, t + c4 * h, k4);
        ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        gen.apply(ytmp, t + c5 * h, k5);
        ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        gen.apply(ytmp, t + h, k6);
        ynew = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
        gen.apply(ynew, t + h, k7);
        err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        const double en = error_norm(err, y, ynew, c.atol, c.rtol);
        if (!std::isfinite(en)) throw IntegrationError("propagate: non-finite error estimate");

        if (en <= 1.0) {
            if (hermitian) {
                // L commutes with taking the Hermitian part, so k7 stays the FSAL derivative.
                ytmp = 0.5 * (ynew + ynew.adjoint());
                ynew.swap(ytmp);
                ytmp = 0.5 * (k7 + k7.adjoint());
                k7.swap(ytmp);
            }
            // continuous extension coefficients for this step
            r1 = y;
            r2 = ynew - y;
            r3 = h * k1 - r2;
            r4 = r2 - h * k7 - r3;
            r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
            const double t_new = t + h;
            while (next < sample_times.size() && sample_times[next] <= t_new) {
                const double ts = sample_times[next];
                if (ts == t_new) {
                    observer(ts, ynew);
                } else {
                    const double th = (ts - t) / h;
                    const double th1 = 1.0 - th;
                    ytmp = r1 + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5)));
                    observer(ts, ytmp);
                }
                ++next;
            }
            ++stats.accepted;
            t = t_new;
            y.swap(ynew);
            k1.swap(k7);

            // PI step-size control (Hairer's dopri5 defaults)
            const double en_c = std::max(en, 1e-10);
            double fac = 0.9 * std::pow(en_c, -0.7 / 5.0) * std::pow(err_prev, 0.04);
            fac = std::clamp(fac, 0.2, 10.0);
            if (last_rejected) fac = std::min(fac, 1.0);
            h *= fac;
            err_prev = std::max(en, 1e-4);
            last_rejected = false;
        } else {
            ++stats.rejected;
            h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
            last_rejected = true;
        }
    }
    return stats;
}

Trajectory evolve_at(const Liouvillian& gen, const DensityMatrix& rho0, const std::vector<double>& sample_times,
                     const StepControls& c)
{
    Trajectory traj;
    traj.times.reserve(sample_times.size());
    traj.states.reserve(sample_times.size());
    auto check = [&](double t, const Matrix& y) {
        const StateDefects d = state_defects(y);
        if (d.herm > c.state_tol.herm) {
            throw IntegrationError("evolve: Hermiticity lost at t=" + std::to_string(t));
        }
        if (d.trace > c.state_tol.trace) {
            throw IntegrationError("evolve: trace drifted by " + std::to_string(d.trace) +
                                   " at t=" + std::to_string(t));
        }
        if (d.min_eig < -c.positivity_error) {
            throw IntegrationError("evolve: positivity violated (eigenvalue " + std::to_string(d.min_eig) +
                                   ") at t=" + std::to_string(t) +
                                   "; check Fock truncation or step controls");
        }
        traj.times.push_back(t);
        traj.states.push_back(DensityMatrix::trusted(y));
    };
    traj.stats = propagate(gen, rho0.op(), 0.0, sample_times, c, check, true);
    return traj;
}

Trajectory evolve(const Liouvillian& gen, const DensityMatrix& rho0, double t_final, const StepControls& c,
                  int n_samples)
{
    if (!(t_final > 0.0)) throw std::invalid_argument("evolve: t_final must be positive");
    return evolve_at(gen, rho0, linspace(0.0, t_final, n_samples), c);
}

} // namespace sqz
