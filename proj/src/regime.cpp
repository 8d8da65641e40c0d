// regime.cpp — Derived constants, Bloch rates, regime checks, decay fits, no-go scan

#include "sqzcav/regime.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sqz {

namespace {

double squeeze_moment(const SqueezingParams& sq)
{
    return sq.n_photons * (sq.n_photons + 1.0) + std::norm(sq.m_corr);
}

double inv_two_c(const SystemConfig& cfg)
{
    const double g2 = cfg.cavity.g * cfg.cavity.g;
    if (cfg.decay.gamma_r == 0.0) return 0.0;
    if (g2 == 0.0) return std::numeric_limits<double>::infinity();
    return cfg.cavity.kappa * cfg.decay.gamma_r / (2.0 * g2);
}

// 2g²/Ω_r², the coefficient of the photon-number-fluctuation dephasing.
double dephasing_coeff(const SystemConfig& cfg)
{
    const double g2 = cfg.cavity.g * cfg.cavity.g;
    if (g2 == 0.0) return 0.0;
    if (cfg.raman.omega_r == 0.0) return std::numeric_limits<double>::infinity();
    return 2.0 * g2 / (cfg.raman.omega_r * cfg.raman.omega_r);
}

} // namespace

DerivedParams derived_params(const SystemConfig& cfg, Family fam)
{
    cfg.validate();
    const double g = cfg.cavity.g;
    const double dr = cfg.raman.delta_r;
    DerivedParams d;
    d.beta = g * cfg.raman.omega_r / (2.0 * dr);
    d.eta = g * g / dr;
    d.alpha = alpha(cfg, fam);
    d.inv_2c = inv_two_c(cfg);
    d.big_c = d.inv_2c == 0.0 ? std::numeric_limits<double>::infinity() : 0.5 / d.inv_2c;

    const auto& sq = cfg.squeezing;
    const double coeff = dephasing_coeff(cfg);
    const double nn = sq.n_photons * (sq.n_photons + 1.0);
    const double moment = squeeze_moment(sq);
    d.d_const = coeff * moment + d.inv_2c;
    if (fam == Family::T3) {
        const double k2 = cfg.cavity.kappa * cfg.cavity.kappa;
        d.p_const = coeff * (nn + k2 * std::norm(sq.m_corr) / (k2 + cfg.cavity.delta * cfg.cavity.delta));
    } else {
        d.p_const = coeff * moment + cfg.decay.b1 * cfg.decay.b1 * d.inv_2c;
    }
    return d;
}

double t3_simplified_p(const SqueezingParams& sq)
{
    sq.validate();
    if (sq.n_photons == 0.0) {
        throw std::invalid_argument("t3_simplified_p: N = 0; use the general reduced equation");
    }
    return squeeze_moment(sq) / (2.0 * sq.n_photons);
}

double alpha(const SystemConfig& cfg, Family fam)
{
    const double dr = cfg.raman.delta_r;
    double a = cfg.raman.omega_r * cfg.raman.omega_r / (4.0 * dr) -
               cfg.cavity.g * cfg.cavity.g * cfg.squeezing.n_photons / dr;
    if (fam == Family::T4 && cfg.aux.omega_s != 0.0) {
        a -= cfg.aux.omega_s * cfg.aux.omega_s / (4.0 * cfg.aux.delta_s);
    }
    return a;
}

double solve_aux_drive(const SystemConfig& cfg, double delta_s)
{
    if (delta_s == 0.0) throw std::invalid_argument("solve_aux_drive: Delta_s must be nonzero");
    SystemConfig bare = cfg;
    bare.aux = {};
    const double shift = alpha(bare, Family::T4);
    const double radicand = 4.0 * delta_s * shift;
    if (radicand < 0.0) {
        throw std::invalid_argument("solve_aux_drive: sign(Delta_s) must equal sign of the residual shift " +
                                    std::to_string(shift));
    }
    return std::sqrt(radicand);
}

SystemConfig balance_alpha(const SystemConfig& cfg)
{
    SystemConfig bare = cfg;
    bare.aux = {};
    const double shift = alpha(bare, Family::T4);
    const double mag = std::abs(cfg.raman.delta_r);
    return balance_alpha(cfg, shift < 0.0 ? -mag : mag);
}

SystemConfig balance_alpha(const SystemConfig& cfg, double delta_s)
{
    SystemConfig out = cfg;
    out.aux.delta_s = delta_s;
    out.aux.omega_s = solve_aux_drive(cfg, delta_s);
    return out;
}

bool alpha_balanced(const SystemConfig& cfg, Family fam)
{
    const double scale = std::abs(cfg.raman.omega_r * cfg.raman.omega_r / (4.0 * cfg.raman.delta_r));
    return std::abs(alpha(cfg, fam)) <= 1e-6 * scale;
}

BlochRates bloch_rates_t0(double gamma, const SqueezingParams& sq)
{
    sq.validate();
    const double n = sq.n_photons;
    const double m = std::abs(sq.m_corr);
    return {0.5 * gamma * (2.0 * n + 1.0 + 2.0 * m), 0.5 * gamma * (2.0 * n + 1.0 - 2.0 * m),
            gamma * (2.0 * n + 1.0), gamma};
}

BlochRates bloch_rates(Tier tier, const SystemConfig& cfg)
{
    const double n = cfg.squeezing.n_photons;
    const double m = std::abs(cfg.squeezing.m_corr);
    switch (tier) {
    case Tier::T0: return bloch_rates_t0(cfg.decay.gamma_r, cfg.squeezing);
    case Tier::T3R: {
        if (!alpha_balanced(cfg, Family::T3) || cfg.cavity.delta != 0.0) {
            throw std::invalid_argument("bloch_rates(T3R): requires alpha = 0 and delta = 0");
        }
        const auto d = derived_params(cfg, Family::T3);
        const double k = d.beta * d.beta / cfg.cavity.kappa;
        const double deph = d.eta * d.eta / (2.0 * cfg.cavity.kappa) * squeeze_moment(cfg.squeezing);
        return {k * (2.0 * n + 1.0 + 2.0 * m) + deph, k * (2.0 * n + 1.0 - 2.0 * m) + deph,
                2.0 * k * (2.0 * n + 1.0), 2.0 * k};
    }
    case Tier::T4R: {
        if (!alpha_balanced(cfg, Family::T4)) throw std::invalid_argument("bloch_rates(T4R): requires alpha = 0");
        const auto d = derived_params(cfg, Family::T4);
        const double k = d.beta * d.beta / cfg.cavity.kappa;
        const double s = cfg.decay.gamma_r * cfg.raman.omega_r * cfg.raman.omega_r /
                         (8.0 * cfg.raman.delta_r * cfg.raman.delta_r);
        // k·D and k/(2C) written through s = γ_rΩ_r²/(8Δ_r²) = k/(2C).
        const double kd = d.eta * d.eta / (2.0 * cfg.cavity.kappa) * squeeze_moment(cfg.squeezing) + s;
        const double b02 = cfg.decay.b0 * cfg.decay.b0;
        return {k * (2.0 * n + 1.0 + 2.0 * m) + kd, k * (2.0 * n + 1.0 - 2.0 * m) + kd,
                2.0 * (k * (2.0 * n + 1.0) + b02 * s), 2.0 * (k + b02 * s)};
    }
    default: throw std::invalid_argument("bloch_rates: closed forms exist for T0, T3R and T4R only");
    }
}

RegimeReport check_regime(const SystemConfig& cfg, double threshold)
{
    RegimeReport rep;
    auto add = [&](std::string name, double small, double large, double thr) {
        RegimeRow row{std::move(name), small, large, 0.0, thr, false};
        if (small == 0.0) row.margin = 0.0;
        else if (!std::isfinite(large)) row.margin = 0.0;
        else row.margin = large > 0.0 ? small / large : std::numeric_limits<double>::infinity();
        row.pass = row.margin <= thr;
        rep.pass = rep.pass && row.pass;
        rep.rows.push_back(std::move(row));
    };

    const auto& c = cfg.cavity;
    const auto& r = cfg.raman;
    const auto& x = cfg.aux;
    const auto& dec = cfg.decay;
    const bool aux_on = x.omega_s != 0.0;

    auto detuning_rows = [&](const std::string& label, double delta) {
        const double dd = std::abs(delta);
        add(label + " >> kappa", c.kappa, dd, threshold);
        add(label + " >> |Omega_r|", std::abs(r.omega_r), dd, threshold);
        if (aux_on) add(label + " >> |Omega_s|", std::abs(x.omega_s), dd, threshold);
        add(label + " >> |g|", std::abs(c.g), dd, threshold);
        add(label + " >> gamma_r", dec.gamma_r, dd, threshold);
        if (dec.gamma_s > 0.0) add(label + " >> gamma_s", dec.gamma_s, dd, threshold);
    };
    detuning_rows("|Delta_r|", r.delta_r);
    if (aux_on) detuning_rows("|Delta_s|", x.delta_s);

    const auto d = derived_params(cfg, Family::T4);
    add("kappa >> |beta_r|", std::abs(d.beta), c.kappa, threshold);
    add("kappa >> |eta_r|", std::abs(d.eta), c.kappa, threshold);

    const double n = cfg.squeezing.n_photons;
    const double m = std::abs(cfg.squeezing.m_corr);
    add("|Omega_r| >> g sqrt(N)", std::abs(c.g) * std::sqrt(n), std::abs(r.omega_r), threshold);
    const double moment = squeeze_moment(cfg.squeezing);
    const double quad = n + 0.5 - m;
    add("(N+1/2-M)/(N(N+1)+M^2) >> g^2/Omega_r^2", 0.5 * dephasing_coeff(cfg),
        moment > 0.0 ? quad / moment : std::numeric_limits<double>::infinity(), threshold);
    add("C >> 1/(2(2N+1-2M))", 1.0 / (2.0 * (2.0 * n + 1.0 - 2.0 * m)), d.big_c, threshold);
    add("C >> b0^2/2", 0.5 * dec.b0 * dec.b0, d.big_c, threshold);
    add("alpha = 0", std::abs(alpha(cfg, Family::T4)), std::abs(r.omega_r * r.omega_r / (4.0 * r.delta_r)), 1e-6);
    return rep;
}

DecayFit fit_decay(const std::vector<double>& t_all, const std::vector<double>& v_all, DecayModel model,
                   double discard)
{
    if (t_all.size() != v_all.size()) throw std::invalid_argument("fit_decay: size mismatch");
    if (discard < 0.0 || discard >= 1.0) throw std::invalid_argument("fit_decay: discard must be in [0,1)");
    const auto skip = static_cast<std::size_t>(std::floor(discard * static_cast<double>(t_all.size())));
    const std::vector<double> t(t_all.begin() + static_cast<long>(skip), t_all.end());
    const std::vector<double> v(v_all.begin() + static_cast<long>(skip), v_all.end());
    if (t.size() < 20) throw std::invalid_argument("fit_decay: need at least 20 samples after the discard window");
    const double t0 = t.front();
    const double window = t.back() - t0;
    if (!(window > 0.0)) throw std::invalid_argument("fit_decay: samples must span a positive interval");
    const bool with_offset = model == DecayModel::offset_exp;
    const std::size_t ns = t.size();

    // For fixed Γ the amplitude and offset are linear; returns SSE and fills them.
    auto project = [&](double rate, double& amp, double& off) {
        double see = 0.0, se = 0.0, sve = 0.0, sv = 0.0;
        for (std::size_t i = 0; i < ns; ++i) {
            const double e = std::exp(-rate * (t[i] - t0));
            see += e * e;
            se += e;
            sve += v[i] * e;
            sv += v[i];
        }
        if (with_offset) {
            const double det = see * static_cast<double>(ns) - se * se;
            amp = (sve * static_cast<double>(ns) - se * sv) / det;
            off = (see * sv - se * sve) / det;
        } else {
            amp = sve / see;
            off = 0.0;
        }
        double sse = 0.0;
        for (std::size_t i = 0; i < ns; ++i) {
            const double r = v[i] - amp * std::exp(-rate * (t[i] - t0)) - off;
            sse += r * r;
        }
        return sse;
    };

    // Coarse log scan, golden refinement, then Gauss-Newton polish.
    const int n_grid = 241;
    const double lo = std::log(1e-3 / window), hi = std::log(1e4 / window);
    double a = 0.0, o = 0.0;
    int best = 0;
    double best_sse = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_grid; ++i) {
        const double s = project(std::exp(lo + (hi - lo) * i / (n_grid - 1)), a, o);
        if (s < best_sse) {
            best_sse = s;
            best = i;
        }
    }
    if (best == 0 || best == n_grid - 1) {
        throw std::runtime_error("fit_decay: no decay rate minimum inside the search range");
    }
    double xa = lo + (hi - lo) * (best - 1) / (n_grid - 1);
    double xb = lo + (hi - lo) * (best + 1) / (n_grid - 1);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 80; ++it) {
        const double x1 = xb - gr * (xb - xa);
        const double x2 = xa + gr * (xb - xa);
        if (project(std::exp(x1), a, o) < project(std::exp(x2), a, o)) xb = x2;
        else xa = x1;
    }
    double rate = std::exp(0.5 * (xa + xb));
    project(rate, a, o);

    const int np = with_offset ? 3 : 2;
    for (int it = 0; it < 20; ++it) {
        Eigen::MatrixXd jac(ns, np);
        Eigen::VectorXd res(ns);
        for (std::size_t i = 0; i < ns; ++i) {
            const double dt = t[i] - t0;
            const double e = std::exp(-rate * dt);
            res(static_cast<Index>(i)) = v[i] - a * e - o;
            jac(static_cast<Index>(i), 0) = e;
            jac(static_cast<Index>(i), 1) = -a * dt * e;
            if (with_offset) jac(static_cast<Index>(i), 2) = 1.0;
        }
        const Eigen::VectorXd step = jac.colPivHouseholderQr().solve(res);
        if (!step.allFinite()) break;
        a += step(0);
        rate += step(1);
        if (with_offset) o += step(2);
        if (std::abs(step(1)) <= 1e-15 * std::abs(rate)) break;
    }
    if (!std::isfinite(rate) || !(rate > 0.0)) throw std::runtime_error("fit_decay: did not converge");

    double sse = 0.0;
    for (std::size_t i = 0; i < ns; ++i) {
        const double r = v[i] - a * std::exp(-rate * (t[i] - t0)) - o;
        sse += r * r;
    }
    DecayFit fit;
    fit.rate = rate;
    fit.amplitude = a * std::exp(rate * t0);
    fit.offset = o;
    fit.residual = std::sqrt(sse / static_cast<double>(ns)) / std::abs(a);
    fit.span = window * rate;
    fit.flagged = fit.residual > 0.05 || fit.span < 3.0;
    return fit;
}

std::vector<double> default_nogo_n_grid()
{
    std::vector<double> g(200);
    const double lo = std::log10(1e-3), hi = std::log10(10.0);
    for (int i = 0; i < 200; ++i) g[static_cast<std::size_t>(i)] = std::pow(10.0, lo + (hi - lo) * i / 199.0);
    return g;
}

std::vector<double> default_nogo_fraction_grid()
{
    std::vector<double> g(200);
    for (int i = 0; i < 200; ++i) g[static_cast<std::size_t>(i)] = i / 199.0;
    return g;
}

NogoScan three_level_nogo_scan(const std::vector<double>& n_grid, const std::vector<double>& m_fraction_grid)
{
    NogoScan scan;
    scan.rows.reserve(n_grid.size() * m_fraction_grid.size());
    scan.min_quad_sum = std::numeric_limits<double>::infinity();
    scan.min_ratio = std::numeric_limits<double>::infinity();
    for (double n : n_grid) {
        if (!(n > 0.0) || n > 10.0) throw std::invalid_argument("nogo scan: N must lie in (0, 10]");
        const double nn = n * (n + 1.0);
        for (double f : m_fraction_grid) {
            if (f < 0.0 || f > 1.0) throw std::invalid_argument("nogo scan: M fraction must lie in [0, 1]");
            const double m = f * std::sqrt(nn);
            NogoRow row{n, f, (nn + m * m) / (2.0 * n), 0.0, 0.0};
            const double base = 2.0 * n + 1.0 - 2.0 * m;
            row.quad_sum = base + row.p;
            row.ratio = row.p / base;
            const std::size_t idx = scan.rows.size();
            if (row.quad_sum < scan.min_quad_sum) {
                scan.min_quad_sum = row.quad_sum;
                scan.argmin_quad = idx;
            }
            if (row.ratio < scan.min_ratio) {
                scan.min_ratio = row.ratio;
                scan.argmin_ratio = idx;
            }
            scan.rows.push_back(row);
        }
    }
    if (scan.min_quad_sum < 1.0 - 1e-9) {
        throw std::logic_error("nogo scan: 2N+1-2M+P dropped below 1 at N = " +
                               std::to_string(scan.rows[scan.argmin_quad].n));
    }
    return scan;
}

} // namespace sqz
