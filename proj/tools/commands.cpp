// commands.cpp — validate | bloch | spectrum | compare | nogo

#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "sqzcav/regime.hpp"
#include "sqzcav/spectra.hpp"

namespace sqz::cli {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

constexpr BlochVector kInitialBloch{0.5, 0.5, 0.5};

bool is_four_level(Tier t) { return t == Tier::T4F || t == Tier::T4I || t == Tier::T4R; }

std::string run_id(const std::string& command, const RunConfig& rc)
{
    // FNV-1a over the command and the resolved config.
    std::uint64_t h = 1469598103934665603ULL;
    for (char c : command + rc.to_json().dump()) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

fs::path out_path(const CommandArgs& args, const std::string& name)
{
    fs::create_directories(args.out_dir);
    return fs::path(args.out_dir) / name;
}

void write_csv(const fs::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
        out << '\n';
    }
}

void write_record(const CommandArgs& args, const std::string& command, const RunConfig& rc, ordered_json result,
                  const std::vector<std::string>& warnings, Clock::time_point start)
{
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    ordered_json rec{
        {"run_id", run_id(command, rc)},
        {"command", command},
        {"library_version", kLibraryVersion},
        {"config", rc.to_json()},
        {"flags", {{"method", args.method}, {"seed", args.seed}, {"threads", args.threads}}},
        {"result", std::move(result)},
        {"warnings", warnings},
        {"wall_clock_s", secs},
    };
    std::ofstream out(out_path(args, command + ".json"), std::ios::binary);
    out << rec.dump(2) << '\n';
}

void warn(const std::string& msg) { std::cerr << "WARNING: " << msg << '\n'; }

ordered_json rates_json(const BlochRates& r)
{
    return {{"gamma_x", r.gamma_x},
            {"gamma_y", r.gamma_y},
            {"gamma_z", r.gamma_z},
            {"gamma_drive", r.gamma_drive},
            {"gamma_x_over_2pi", to_mhz(r.gamma_x)},
            {"gamma_y_over_2pi", to_mhz(r.gamma_y)},
            {"gamma_z_over_2pi", to_mhz(r.gamma_z)},
            {"sz_ss", r.sz_ss()}};
}

// Closed-form rates matching a tier, when its reduced equation is time independent.
std::optional<BlochRates> reference_rates(Tier tier, const SystemConfig& cfg)
{
    try {
        if (tier == Tier::T0) return bloch_rates(Tier::T0, cfg);
        if (is_four_level(tier)) return bloch_rates(Tier::T4R, cfg);
        return bloch_rates(Tier::T3R, cfg);
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

Model make_model(Tier tier, const SystemConfig& cfg, std::vector<std::string>& warnings)
{
    Model m = tier == Tier::T4R ? build_T4R(cfg, T4ROptions{true}) : build_model(tier, cfg);
    for (const auto& w : m.warnings) warnings.push_back(to_string(tier) + ": " + w);
    return m;
}

} // namespace

std::string format_double(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

RunConfig prepare_config(const CommandArgs& args)
{
    RunConfig rc = args.config_path.empty() ? RunConfig{} : load_config(args.config_path);
    if (args.tier) {
        try {
            rc.tier = to_string(parse_tier(*args.tier));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("--tier: ") + e.what());
        }
    }
    if (args.n_max) {
        if (*args.n_max < 1) throw ConfigError("--nmax: must be >= 1");
        rc.system_mhz.n_max = *args.n_max;
    }
    if (args.probe_mode) {
        try {
            parse_probe_mode(*args.probe_mode);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("--probe-mode: ") + e.what());
        }
        rc.probe.mode = *args.probe_mode;
    }
    try {
        rc.resolve();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("aux drive: ") + e.what());
    }
    rc.system();
    return rc;
}

int cmd_validate(const CommandArgs& args)
{
    const auto start = Clock::now();
    const RunConfig rc = prepare_config(args);
    const RegimeReport rep = check_regime(rc.system(), rc.regime_threshold);

    std::printf("%-46s %14s %14s %10s  %s\n", "condition", "small", "large", "margin", "status");
    ordered_json rows = ordered_json::array();
    for (const auto& r : rep.rows) {
        std::printf("%-46s %14.6g %14.6g %10.4g  %s\n", r.name.c_str(), r.small, r.large, r.margin,
                    r.pass ? "pass" : "FAIL");
        rows.push_back({{"condition", r.name},
                        {"small", r.small},
                        {"large", r.large},
                        {"margin", r.margin},
                        {"threshold", r.threshold},
                        {"pass", r.pass}});
    }
    ordered_json result{{"pass", rep.pass}, {"rows", rows}};
    std::cout << result.dump() << '\n';
    write_record(args, "validate", rc, result, {}, start);
    return rep.pass ? kOk : kPhysicsFailure;
}

int cmd_bloch(const CommandArgs& args)
{
    const auto start = Clock::now();
    const RunConfig rc = prepare_config(args);
    const SystemConfig cfg = rc.system();
    const Tier tier = rc.tier_value();
    std::vector<std::string> warnings;

    const Model model = make_model(tier, cfg, warnings);
    const auto analytic = reference_rates(tier, cfg);
    double t_final = rc.bloch.t_final_us;
    if (!(t_final > 0.0)) {
        if (!analytic) throw ConfigError("bloch.t_final_us is required when no closed-form rates apply");
        t_final = 4.0 / std::min({analytic->gamma_x, analytic->gamma_y, analytic->gamma_z});
    }

    const auto times = linspace(0.0, t_final, rc.bloch.samples);
    const Trajectory traj = evolve_at(model.generator, initial_state(model, cfg, kInitialBloch), times, rc.controls());
    std::vector<double> sx, sy, sz;
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const BlochVector b = bloch_vector(model.ground_block(traj.states[i].op(), times[i]));
        sx.push_back(b.sx);
        sy.push_back(b.sy);
        sz.push_back(b.sz);
        rows.push_back({times[i], b.sx, b.sy, b.sz});
    }
    write_csv(out_path(args, "bloch.csv"), {"t_us", "sx", "sy", "sz"}, rows);

    // Each quadrature is fitted over about six of its own decay times when that is known.
    auto fit = [&](const std::vector<double>& v, DecayModel dm, std::optional<double> rate, const char* name) {
        std::size_t n = times.size();
        if (rate) {
            const auto cut = static_cast<std::size_t>(std::upper_bound(times.begin(), times.end(), 6.0 / *rate) -
                                                      times.begin());
            if (cut >= 40) n = cut;
        }
        const std::vector<double> t(times.begin(), times.begin() + static_cast<long>(n));
        const std::vector<double> y(v.begin(), v.begin() + static_cast<long>(n));
        const DecayFit f = fit_decay(t, y, dm);
        if (f.residual > 0.05) warnings.push_back(std::string("fit residual for ") + name + " exceeds 5%");
        if (f.span < 3.0) warnings.push_back(std::string("fit window for ") + name + " spans fewer than 3 decay times");
        return f;
    };
    auto opt = [&](double BlochRates::*m) -> std::optional<double> {
        if (!analytic) return std::nullopt;
        return (*analytic).*m;
    };
    const DecayFit fx = fit(sx, DecayModel::pure_exp, opt(&BlochRates::gamma_x), "sx");
    const DecayFit fy = fit(sy, DecayModel::pure_exp, opt(&BlochRates::gamma_y), "sy");
    const DecayFit fz = fit(sz, DecayModel::offset_exp, opt(&BlochRates::gamma_z), "sz");

    ordered_json fitted{{"gamma_x", fx.rate},
                        {"gamma_y", fy.rate},
                        {"gamma_z", fz.rate},
                        {"gamma_x_over_2pi", to_mhz(fx.rate)},
                        {"gamma_y_over_2pi", to_mhz(fy.rate)},
                        {"gamma_z_over_2pi", to_mhz(fz.rate)},
                        {"sz_ss", fz.offset},
                        {"residual", {{"sx", fx.residual}, {"sy", fy.residual}, {"sz", fz.residual}}}};
    ordered_json result{{"tier", to_string(tier)}, {"t_final_us", t_final}, {"fitted", fitted}};
    if (analytic) {
        auto rel = [](double a, double b) { return std::abs(a - b) / std::abs(b); };
        result["analytic"] = rates_json(*analytic);
        result["relative_error"] = {{"gamma_x", rel(fx.rate, analytic->gamma_x)},
                                    {"gamma_y", rel(fy.rate, analytic->gamma_y)},
                                    {"gamma_z", rel(fz.rate, analytic->gamma_z)},
                                    {"sz_ss", rel(fz.offset, analytic->sz_ss())}};
    } else {
        result["analytic"] = nullptr;
        result["relative_error"] = nullptr;
    }
    result["warning"] = !warnings.empty();
    for (const auto& w : warnings) warn(w);
    write_record(args, "bloch", rc, result, warnings, start);
    std::cout << result.dump(2) << '\n';
    return kOk;
}

int cmd_spectrum(const CommandArgs& args)
{
    const auto start = Clock::now();
    const RunConfig rc = prepare_config(args);
    const SystemConfig cfg = rc.system();
    const Tier tier = rc.tier_value();
    if (tier == Tier::T0) throw ConfigError("spectrum: tier T0 has no cavity; choose a 3- or 4-level tier");
    if (args.method != "analytic" && args.method != "numeric" && args.method != "both") {
        throw ConfigError("--method: expected analytic|numeric|both");
    }
    std::vector<std::string> warnings;

    ScanOptions so;
    so.numeric_tier = is_four_level(tier) ? Tier::T4I : Tier::T3E;
    so.numeric.controls = rc.controls();
    so.numeric.threads = args.threads;
    so.regime_threshold = rc.regime_threshold;

    const ProbeMode mode = parse_probe_mode(rc.probe.mode);
    std::vector<double> nu;
    for (double f : linspace(rc.probe.nu_min, rc.probe.nu_max, rc.probe.nu_points)) nu.push_back(from_mhz(f));
    ProbeConfig probe;
    if (mode == ProbeMode::custom) {
        probe = {cplx(from_mhz(rc.probe.e_plus_re), from_mhz(rc.probe.e_plus_im)),
                 cplx(from_mhz(rc.probe.e_minus_re), from_mhz(rc.probe.e_minus_im)), nu};
    } else {
        const double amp = rc.probe.amplitude > 0.0 ? from_mhz(rc.probe.amplitude) : 1e-3 * cfg.cavity.kappa;
        probe = make_probe(mode, amp, nu);
    }
    try {
        probe.validate(cfg.cavity.kappa);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("probe: ") + e.what());
    }

    auto rows_of = [&](const SpectrumResult& s) {
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < s.nu.size(); ++i) {
            rows.push_back({to_mhz(s.nu[i]), s.a_plus[i].real(), s.a_plus[i].imag(), std::norm(s.a_plus[i]),
                            s.a_minus[i].real(), s.a_minus[i].imag(), std::norm(s.a_minus[i])});
        }
        return rows;
    };
    const std::vector<std::string> header{"nu_over_2pi_MHz", "re_Ap_plus", "im_Ap_plus", "abs2_Ap_plus",
                                          "re_Ap_minus", "im_Ap_minus", "abs2_Ap_minus"};

    ordered_json result{{"probe_mode", rc.probe.mode},
                        {"numeric_tier", to_string(so.numeric_tier)},
                        {"e_plus", {probe.e_plus.real(), probe.e_plus.imag()}},
                        {"e_minus", {probe.e_minus.real(), probe.e_minus.imag()}}};
    std::optional<SpectrumResult> an, nm;
    try {
        if (args.method != "numeric") an = spectrum_scan(cfg, probe, SpectrumMethod::analytic, so);
        if (args.method != "analytic") nm = spectrum_scan(cfg, probe, SpectrumMethod::numeric, so);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kPhysicsFailure;
    }
    for (const auto* s : {&an, &nm}) {
        if (!*s) continue;
        const auto& r = **s;
        write_csv(out_path(args, "spectrum_" + r.method + ".csv"), header, rows_of(r));
        result[r.method] = {{"sz_ss", r.sz_ss}, {"rates", rates_json(r.rates)}, {"regime_pass", r.regime.pass}};
        for (const auto& w : r.warnings) warnings.push_back(r.method + ": " + w);
    }

    int code = kOk;
    if (an && nm) {
        double peak_p = 0.0, peak_m = 0.0;
        for (std::size_t i = 0; i < nu.size(); ++i) {
            peak_p = std::max(peak_p, std::norm(an->a_plus[i]));
            peak_m = std::max(peak_m, std::norm(an->a_minus[i]));
        }
        double worst = 0.0;
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < nu.size(); ++i) {
            const double ap = std::norm(an->a_plus[i]), am = std::norm(an->a_minus[i]);
            const double dp = ap > 0.0 ? std::abs(std::norm(nm->a_plus[i]) - ap) / ap : 0.0;
            const double dm = am > 0.0 ? std::abs(std::norm(nm->a_minus[i]) - am) / am : 0.0;
            if (ap > 1e-4 * peak_p) worst = std::max(worst, dp);
            if (am > 1e-4 * peak_m) worst = std::max(worst, dm);
            rows.push_back({to_mhz(nu[i]), dp, dm});
        }
        write_csv(out_path(args, "spectrum_discrepancy.csv"),
                  {"nu_over_2pi_MHz", "rel_diff_abs2_plus", "rel_diff_abs2_minus"}, rows);
        result["max_relative_discrepancy"] = worst;
        result["route_equivalence_pass"] = worst < 0.02;
        if (worst >= 0.02) {
            warnings.push_back("analytic and numeric routes differ by " + format_double(worst) + " (> 2%)");
            code = kPhysicsFailure;
        }
    }
    for (const auto& w : warnings) warn(w);
    write_record(args, "spectrum", rc, result, warnings, start);
    std::cout << result.dump(2) << '\n';
    return code;
}

int cmd_compare(const CommandArgs& args)
{
    const auto start = Clock::now();
    RunConfig rc = prepare_config(args);
    const SystemConfig cfg = rc.system();
    const Tier ta = parse_tier(rc.compare.tier_a);
    const Tier tb = parse_tier(rc.compare.tier_b);
    std::vector<std::string> warnings;

    const Model ma = make_model(ta, cfg, warnings);
    const Model mb = make_model(tb, cfg, warnings);
    double t_final = rc.compare.t_final_us;
    if (!(t_final > 0.0)) {
        const auto d = derived_params(cfg, is_four_level(ta) ? Family::T4 : Family::T3);
        if (d.beta == 0.0) throw ConfigError("compare.t_final_us is required when beta_r = 0");
        t_final = 3.0 * cfg.cavity.kappa / (d.beta * d.beta);
    }
    const auto times = linspace(0.0, t_final, rc.compare.samples);
    const auto tra = evolve_at(ma.generator, initial_state(ma, cfg, kInitialBloch), times, rc.controls());
    const auto trb = evolve_at(mb.generator, initial_state(mb, cfg, kInitialBloch), times, rc.controls());

    double max_d = 0.0;
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double d = trace_distance(ma.ground_block(tra.states[i].op(), times[i]),
                                        mb.ground_block(trb.states[i].op(), times[i]));
        max_d = std::max(max_d, d);
        rows.push_back({times[i], d});
    }
    write_csv(out_path(args, "compare.csv"), {"t_us", "trace_distance"}, rows);
    for (const auto* m : {&ma, &mb}) {
        if (m->layout.fock_dim > 1) {
            const auto tr = check_truncation(m == &ma ? tra.states.back() : trb.states.back(), m->layout);
            if (!tr.pass) warnings.push_back(to_string(m->tier) + ": Fock truncation tail " + format_double(tr.tail));
        }
    }
    ordered_json result{{"tier_a", to_string(ta)},
                        {"tier_b", to_string(tb)},
                        {"t_final_us", t_final},
                        {"max_trace_distance", max_d}};
    for (const auto& w : warnings) warn(w);
    write_record(args, "compare", rc, result, warnings, start);
    std::cout << result.dump(2) << '\n';
    return kOk;
}

int cmd_nogo(const CommandArgs& args)
{
    const auto start = Clock::now();
    const RunConfig rc = prepare_config(args);
    std::vector<double> n_grid(static_cast<std::size_t>(rc.nogo.n_points));
    const double lo = std::log10(rc.nogo.n_lo), hi = std::log10(rc.nogo.n_hi);
    for (int i = 0; i < rc.nogo.n_points; ++i) {
        n_grid[static_cast<std::size_t>(i)] = std::pow(10.0, lo + (hi - lo) * i / (rc.nogo.n_points - 1));
    }
    n_grid.back() = rc.nogo.n_hi;
    const auto f_grid = linspace(0.0, 1.0, rc.nogo.m_points);
    NogoScan scan;
    try {
        scan = three_level_nogo_scan(n_grid, f_grid);
    } catch (const std::logic_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kPhysicsFailure;
    }
    std::vector<std::vector<double>> rows;
    rows.reserve(scan.rows.size());
    for (const auto& r : scan.rows) rows.push_back({r.n, r.m_fraction, r.p, r.quad_sum, r.ratio});
    write_csv(out_path(args, "nogo.csv"), {"N", "M_fraction", "P", "quad_sum", "ratio"}, rows);

    const auto& aq = scan.rows[scan.argmin_quad];
    const auto& ar = scan.rows[scan.argmin_ratio];
    ordered_json result{{"min_quad_sum", scan.min_quad_sum},
                        {"min_ratio", scan.min_ratio},
                        {"argmin",
                         {{"quad_sum", {{"N", aq.n}, {"M_fraction", aq.m_fraction}}},
                          {"ratio", {{"N", ar.n}, {"M_fraction", ar.m_fraction}}}}}};
    write_record(args, "nogo", rc, result, {}, start);
    std::cout << result.dump(2) << '\n';
    return kOk;
}

} // namespace sqz::cli
