// config.hpp — Physical parameters of one model instance
//
// Internal units: angular frequency in rad/μs, time in μs. Inputs quoted as
// frequency/(2π) in MHz are converted once, through from_mhz().

#pragma once

#include <numbers>

#include "sqzcav/operators.hpp"

namespace sqz {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// ν/(2π) [MHz] → angular [rad/μs].
constexpr double from_mhz(double f) { return kTwoPi * f; }
constexpr double to_mhz(double w) { return w / kTwoPi; }

struct SqueezingParams {
    double n_photons{0.0};
    cplx m_corr{0.0};

    /// |M| = √(N(N+1)) within 1e-9.
    bool is_ideal() const;
    void validate() const;

    static SqueezingParams ideal(double n);
    static SqueezingParams vacuum() { return {}; }
};

struct CavityParams {
    double kappa{0.0};  // field decay rate
    double g{0.0};
    double delta{0.0};  // ω_L − ω_cavity
};

struct RamanDrive {
    double omega_r{0.0};
    double delta_r{0.0};  // ω_L − ω_r, sign-carrying
    double phi{0.0};
};

struct AuxDrive {
    double omega_s{0.0};
    double delta_s{0.0};
};

struct AtomDecay {
    double gamma_r{0.0};
    double gamma_s{0.0};
    double b0{std::numbers::sqrt2 / 2.0};
    double b1{std::numbers::sqrt2 / 2.0};
    bool spontaneous_in_t3{false};  // T3F spontaneous channels, off by default
};

struct SystemConfig {
    SqueezingParams squeezing{};
    CavityParams cavity{};
    RamanDrive raman{};
    AuxDrive aux{};
    AtomDecay decay{};
    FockTruncation trunc{};

    /// Throws std::invalid_argument on any violated invariant.
    void validate() const;
};

/// Parameters behind the probe-spectrum figures: g/2π = 24 MHz, κ/2π = 4.2 MHz,
/// γ_r/2π = 5.2 MHz, g/Ω_r = 0.1, Ω_r/Δ_r = 0.05, b0 = b1 = 1/√2, δ = 0.
/// The auxiliary drive is left off; see solve_aux_drive().
SystemConfig figure_config(const SqueezingParams& sq);

} // namespace sqz
