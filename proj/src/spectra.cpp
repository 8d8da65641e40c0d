// spectra.cpp — Closed-form and linear-response probe spectra

#include "sqzcav/spectra.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "sqzcav/steady_state.hpp"

namespace sqz {

namespace {

void note_regime(SpectrumResult& res, const SystemConfig& cfg, double threshold)
{
    res.regime = check_regime(cfg, threshold);
    if (!res.regime.pass) {
        for (const auto& row : res.regime.rows) {
            if (!row.pass) res.warnings.push_back("regime condition failed: " + row.name);
        }
    }
}

TailFit fit_tail(const std::vector<double>& tau, const std::vector<cplx>& c, double window, double ref,
                 double tolerance, const char* label)
{
    TailFit fit;
    const std::size_t n = tau.size();
    const auto k0 = static_cast<std::size_t>(std::floor((1.0 - window) * static_cast<double>(n - 1)));
    double peak = 0.0;
    for (std::size_t k = k0; k < n; ++k) peak = std::max(peak, std::abs(c[k]));
    if (peak <= 1e-9 * ref) return fit;  // nothing left to close

    double st = 0.0, sl = 0.0, stt = 0.0, stl = 0.0;
    const double m = static_cast<double>(n - k0);
    for (std::size_t k = k0; k < n; ++k) {
        const double l = std::log(std::max(std::abs(c[k]), 1e-300));
        st += tau[k];
        sl += l;
        stt += tau[k] * tau[k];
        stl += tau[k] * l;
    }
    const double slope = (m * stl - st * sl) / (m * stt - st * st);
    fit.lambda = -slope;
    if (!(fit.lambda > 0.0)) {
        throw std::runtime_error(std::string("probe_numeric: ") + label +
                                 " correlator is not decaying at tau_max; increase tau_max");
    }
    cplx num = 0.0;
    double den = 0.0;
    for (std::size_t k = k0; k < n; ++k) {
        const double e = std::exp(-fit.lambda * tau[k]);
        num += c[k] * e;
        den += e * e;
    }
    fit.c = num / den;
    double r2 = 0.0, v2 = 0.0;
    for (std::size_t k = k0; k < n; ++k) {
        r2 += std::norm(c[k] - fit.c * std::exp(-fit.lambda * tau[k]));
        v2 += std::norm(c[k]);
    }
    fit.residual = std::sqrt(r2 / v2);
    if (fit.residual > tolerance) {
        throw std::runtime_error(std::string("probe_numeric: ") + label + " tail fit residual " +
                                 std::to_string(fit.residual) + " exceeds tolerance; increase tau_max");
    }
    fit.used = true;
    return fit;
}

} // namespace

std::string to_string(ProbeMode m)
{
    switch (m) {
    case ProbeMode::single: return "single";
    case ProbeMode::sym: return "sym";
    case ProbeMode::antisym: return "antisym";
    case ProbeMode::custom: return "custom";
    }
    return "?";
}

ProbeMode parse_probe_mode(const std::string& name)
{
    for (ProbeMode m : {ProbeMode::single, ProbeMode::sym, ProbeMode::antisym, ProbeMode::custom}) {
        if (to_string(m) == name) return m;
    }
    throw std::invalid_argument("unknown probe mode '" + name + "' (expected single|sym|antisym|custom)");
}

void ProbeConfig::validate(double kappa) const
{
    const double limit = 0.01 * kappa * (1.0 + 1e-12);
    if (std::abs(e_plus) > limit || std::abs(e_minus) > limit) {
        throw std::invalid_argument("probe: |E+-| must not exceed 0.01 kappa (weak-probe regime)");
    }
    for (double nu : nu_grid) {
        if (!std::isfinite(nu)) throw std::invalid_argument("probe: non-finite nu");
    }
}

ProbeConfig make_probe(ProbeMode mode, cplx amplitude, std::vector<double> nu_grid)
{
    ProbeConfig p{amplitude, 0.0, std::move(nu_grid)};
    switch (mode) {
    case ProbeMode::single: break;
    case ProbeMode::sym: p.e_minus = amplitude; break;
    case ProbeMode::antisym: p.e_minus = -amplitude; break;
    case ProbeMode::custom: throw std::invalid_argument("make_probe: custom amplitudes must be given explicitly");
    }
    return p;
}

std::vector<double> default_nu_grid()
{
    std::vector<double> g(801);
    for (int i = 0; i < 801; ++i) g[static_cast<std::size_t>(i)] = from_mhz(-3.0 + 6.0 * i / 800.0);
    return g;
}

Amplitudes analytic_amplitudes(const AnalyticInputs& in, cplx e_plus, cplx e_minus, double nu)
{
    Amplitudes out;
    out.plus = e_plus / cplx(in.kappa, -nu);
    out.minus = e_minus / cplx(in.kappa, nu);
    if (in.beta == 0.0) return out;
    const cplx pre = in.beta * in.beta / (2.0 * in.kappa * in.kappa) * in.sz;
    const auto& r = in.rates;
    out.plus += pre * ((e_plus + std::conj(e_minus)) / cplx(r.gamma_x, -nu) +
                       (e_plus - std::conj(e_minus)) / cplx(r.gamma_y, -nu));
    out.minus += pre * ((e_minus + std::conj(e_plus)) / cplx(r.gamma_x, nu) +
                        (e_minus - std::conj(e_plus)) / cplx(r.gamma_y, nu));
    return out;
}

SpectrumResult probe_analytic(const SystemConfig& cfg, const BlochRates& rates, double sz_ss,
                              const ProbeConfig& probe, Family fam, double regime_threshold)
{
    if (!alpha_balanced(cfg, fam)) throw std::invalid_argument("probe_analytic: requires alpha = 0");
    probe.validate(cfg.cavity.kappa);
    const auto d = derived_params(cfg, fam);
    const AnalyticInputs in{d.beta, cfg.cavity.kappa, rates, sz_ss};

    SpectrumResult res;
    res.method = "analytic";
    res.nu = probe.nu_grid;
    res.sz_ss = sz_ss;
    res.rates = rates;
    note_regime(res, cfg, regime_threshold);
    for (double nu : probe.nu_grid) {
        const auto a = analytic_amplitudes(in, probe.e_plus, probe.e_minus, nu);
        res.a_plus.push_back(a.plus);
        res.a_minus.push_back(a.minus);
    }
    return res;
}

cplx lower_sideband_response(const SystemConfig& cfg, const BlochRates& rates, double sz_ss, double e, double nu)
{
    const auto d = derived_params(cfg, Family::T4);
    const double k = cfg.cavity.kappa;
    const double b4 = std::pow(d.beta, 4);
    const double m = std::abs(cfg.squeezing.m_corr);
    return -2.0 * e * (b4 / (k * k * k)) * sz_ss * m / (cplx(rates.gamma_x, nu) * cplx(rates.gamma_y, nu));
}

LinearResponse::LinearResponse(const Model& model, const NumericOptions& opts)
    : ss_(maximally_mixed(1))
{
    const Liouvillian& gen = model.generator;
    if (!gen.is_static()) throw std::invalid_argument("probe_numeric: generator must be static");
    if (!(opts.tau_max > 0.0)) throw std::invalid_argument("probe_numeric: tau_max must be > 0");
    const Matrix a = model.cavity_a();
    const Matrix ad = a.adjoint();

    ss_ = sqz::steady_state(gen).state;
    sz_ss_ = ss_.expect(model.ground_op(ops::sigma_z())).real();
    trunc_ = check_truncation(ss_, model.layout);

    double kappa_scale = 0.0;
    for (const auto& ch : gen.channels()) kappa_scale = std::max(kappa_scale, std::abs(ch.weight));
    double h = opts.sample_step;
    if (!(h > 0.0)) h = std::min(0.1 / std::max(kappa_scale, 1e-12), opts.tau_max / 4000.0);
    const auto steps = static_cast<std::size_t>(std::ceil(opts.tau_max / h));
    h_ = opts.tau_max / static_cast<double>(steps);
    tau_.resize(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) tau_[k] = h_ * static_cast<double>(k);

    auto run = [&](const Matrix& x0, Series& s) {
        s.values.clear();
        s.values.reserve(tau_.size());
        s.deriv_start = ops::expectation(a, gen.apply(x0, 0.0));
        Matrix last;
        propagate(gen, x0, 0.0, tau_, opts.controls, [&](double, const Matrix& y) {
            s.values.push_back(ops::expectation(a, y));
            last = y;
        });
        s.deriv_end = ops::expectation(a, gen.apply(last, 0.0));
    };
    const Matrix& rho = ss_.op();
    run(ad * rho - rho * ad, sn_);
    run(a * rho - rho * a, sa_);
    normal_ = sn_.values;
    anomalous_ = sa_.values;

    double ref = 0.0;
    for (const auto& v : normal_) ref = std::max(ref, std::abs(v));
    tail_n_ = fit_tail(tau_, normal_, opts.tail_window, ref, opts.tail_tolerance, "normal");
    tail_a_ = fit_tail(tau_, anomalous_, opts.tail_window, ref, opts.tail_tolerance, "anomalous");
}

cplx LinearResponse::tail_integral(const TailFit& tail, double nu) const
{
    if (!tail.used) return 0.0;
    const double t = tau_.back();
    return tail.c * std::exp(cplx(-tail.lambda, nu) * t) / cplx(tail.lambda, -nu);
}

// Euler-Maclaurin h² term for f(τ) = e^{iντ}C(τ).
cplx LinearResponse::endpoint_correction(const Series& s, const TailFit&, double nu) const
{
    const double t = tau_.back();
    const cplx f0 = kI * nu * s.values.front() + s.deriv_start;
    const cplx ft = std::exp(kI * nu * t) * (kI * nu * s.values.back() + s.deriv_end);
    return -h_ * h_ / 12.0 * (ft - f0);
}

void LinearResponse::transform(double nu, cplx& n_pos, cplx& n_neg, cplx& a_pos, cplx& a_neg) const
{
    const std::size_t n = tau_.size();
    const cplx w = std::exp(kI * nu * h_);
    cplx z = 1.0;
    cplx snp = 0.0, snn = 0.0, sap = 0.0, san = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        if ((k & 255U) == 0) z = std::exp(kI * nu * tau_[k]);
        const cplx zc = std::conj(z);
        const double wt = (k == 0 || k + 1 == n) ? 0.5 : 1.0;
        snp += wt * normal_[k] * z;
        snn += wt * normal_[k] * zc;
        sap += wt * anomalous_[k] * z;
        san += wt * anomalous_[k] * zc;
        z *= w;
    }
    n_pos = h_ * snp + endpoint_correction(sn_, tail_n_, nu) + tail_integral(tail_n_, nu);
    n_neg = h_ * snn + endpoint_correction(sn_, tail_n_, -nu) + tail_integral(tail_n_, -nu);
    a_pos = h_ * sap + endpoint_correction(sa_, tail_a_, nu) + tail_integral(tail_a_, nu);
    a_neg = h_ * san + endpoint_correction(sa_, tail_a_, -nu) + tail_integral(tail_a_, -nu);
}

Amplitudes LinearResponse::amplitudes(cplx e_plus, cplx e_minus, double nu) const
{
    cplx np, nn, ap, an;
    transform(nu, np, nn, ap, an);
    return {e_plus * np - std::conj(e_minus) * ap, e_minus * nn - std::conj(e_plus) * an};
}

SpectrumResult probe_numeric(const Model& model, const ProbeConfig& probe, const NumericOptions& opts)
{
    const LinearResponse lr(model, opts);
    SpectrumResult res;
    res.method = "numeric";
    res.nu = probe.nu_grid;
    res.sz_ss = lr.sz_ss();
    res.warnings = model.warnings;
    if (!lr.truncation().pass) {
        res.warnings.push_back("Fock truncation tail " + std::to_string(lr.truncation().tail) +
                               " exceeds " + std::to_string(lr.truncation().threshold));
    }
    const std::size_t n = probe.nu_grid.size();
    res.a_plus.resize(n);
    res.a_minus.resize(n);
    auto work = [&](std::size_t first, std::size_t stride) {
        for (std::size_t i = first; i < n; i += stride) {
            const auto a = lr.amplitudes(probe.e_plus, probe.e_minus, probe.nu_grid[i]);
            res.a_plus[i] = a.plus;
            res.a_minus[i] = a.minus;
        }
    };
    const auto workers = static_cast<std::size_t>(std::max(1, opts.threads));
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work, w, workers);
    work(0, workers);
    for (auto& t : pool) t.join();
    return res;
}

SpectrumResult spectrum_scan(const SystemConfig& cfg, const ProbeConfig& probe, SpectrumMethod method,
                             const ScanOptions& opts)
{
    const bool t3 = opts.numeric_tier == Tier::T3E;
    if (!t3 && opts.numeric_tier != Tier::T4I) {
        throw std::invalid_argument("spectrum_scan: numeric tier must be T3E or T4I");
    }
    const Family fam = t3 ? Family::T3 : Family::T4;
    const BlochRates rates = bloch_rates(t3 ? Tier::T3R : Tier::T4R, cfg);
    probe.validate(cfg.cavity.kappa);

    if (method == SpectrumMethod::analytic) return probe_analytic(cfg, rates, rates.sz_ss(), probe, fam, opts.regime_threshold);

    NumericOptions nopts = opts.numeric;
    if (!(nopts.tau_max > 0.0)) nopts.tau_max = 10.0 / std::min(rates.gamma_y, cfg.cavity.kappa);
    SpectrumResult res = probe_numeric(build_model(opts.numeric_tier, cfg), probe, nopts);
    res.rates = rates;
    note_regime(res, cfg, opts.regime_threshold);
    const double sz_ref = rates.sz_ss();
    if (std::abs(res.sz_ss - sz_ref) > 0.02 * std::abs(sz_ref)) {
        res.warnings.push_back("steady <sigma_z> " + std::to_string(res.sz_ss) + " differs from closed form " +
                               std::to_string(sz_ref) + " by more than 2%");
    }
    return res;
}

double central_fwhm(const std::function<double(double)>& profile, double hint)
{
    const double peak = profile(0.0);
    if (!(peak > 0.0)) throw std::invalid_argument("central_fwhm: profile must be positive at the centre");
    const double half = 0.5 * peak;
    auto crossing = [&](double sign) {
        double lo = 0.0;
        double hi = std::abs(hint) > 0.0 ? std::abs(hint) : 1.0;
        int guard = 0;
        while (profile(sign * hi) > half) {
            lo = hi;
            hi *= 2.0;
            if (++guard > 200) throw std::runtime_error("central_fwhm: no half-maximum crossing");
        }
        for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (profile(sign * mid) > half ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };
    return crossing(1.0) + crossing(-1.0);
}

double upper_dip(const Amplitudes& a, cplx e_plus, double kappa, double nu)
{
    return std::norm(e_plus / cplx(kappa, -nu)) - std::norm(a.plus);
}

} // namespace sqz
