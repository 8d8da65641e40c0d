// run_config.hpp — JSON run configuration for the sqzcav command line
//
// Frequencies are entered as value/(2π) in MHz and converted once, by
// RunConfig::system(). Unknown keys are rejected.

#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "sqzcav/integrator.hpp"
#include "sqzcav/models.hpp"
#include "sqzcav/spectra.hpp"

namespace sqz::cli {

using ordered_json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Malformed or schema-violating configuration (exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SystemMhz {
    double n{0.0};
    double m{0.0};
    double m_arg{0.0};
    double kappa{4.2};
    double g{24.0};
    double delta{0.0};
    double omega_r{240.0};
    double delta_r{4800.0};
    double phi{0.0};
    std::optional<double> omega_s;
    std::optional<double> delta_s;
    double gamma_r{5.2};
    double gamma_s{0.0};
    double b0{0.70710678118654752};
    double b1{0.70710678118654752};
    bool spontaneous_in_t3{false};
    int n_max{15};
};

struct ProbeSpec {
    std::string mode{"single"};
    double amplitude{0.0};  // MHz; 0 selects 0.001 κ
    double e_plus_re{0.0}, e_plus_im{0.0};
    double e_minus_re{0.0}, e_minus_im{0.0};
    double nu_min{-3.0};
    double nu_max{3.0};
    int nu_points{801};
};

struct BlochSpec {
    double t_final_us{0.0};  // 0: four slowest decay times from the closed-form rates
    int samples{401};
};

struct CompareSpec {
    std::string tier_a{"T3E"};
    std::string tier_b{"T3R"};
    double t_final_us{0.0};  // 0: 3κ/β²
    int samples{201};
};

struct NogoSpec {
    int n_points{200};
    int m_points{200};
    double n_lo{1e-3};
    double n_hi{10.0};
};

struct RunConfig {
    int schema_version{kSchemaVersion};
    std::string tier{"T4R"};
    SystemMhz system_mhz{};
    ProbeSpec probe{};
    BlochSpec bloch{};
    CompareSpec compare{};
    NogoSpec nogo{};
    double rtol{1e-8};
    double atol{1e-10};
    double regime_threshold{kDefaultMuchGreater};

    /// Angular-unit configuration; validates.
    SystemConfig system() const;
    StepControls controls() const;
    Tier tier_value() const { return parse_tier(tier); }
    /// For 4-level tiers without an explicit aux drive, fills Ω_s, Δ_s so that α = 0.
    void resolve();

    ordered_json to_json() const;
};

/// Throws ConfigError with the offending field path or line/column.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

} // namespace sqz::cli
