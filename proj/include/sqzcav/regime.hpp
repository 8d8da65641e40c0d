// regime.hpp — Derived constants, Bloch rates, validity checks, decay fits
#pragma once

#include <string>
#include <vector>

#include "sqzcav/config.hpp"
#include "sqzcav/models.hpp"

namespace sqz {

enum class Family { T3, T4 };

struct DerivedParams {
    double beta{0.0};   // gΩ_r/(2Δ_r)
    double eta{0.0};    // g²/Δ_r
    double alpha{0.0};
    double big_c{0.0};  // g²/(κγ_r), +inf when γ_r = 0
    double inv_2c{0.0}; // 1/(2C) = κγ_r/(2g²)
    double p_const{0.0};
    double d_const{0.0};
};

/// T3: P = (2g²/Ω_r²)(N(N+1) + κ²|M|²/(κ²+δ²)), the dephasing weight of the
/// general reduced equation in units of β²/κ; it equals t3_simplified_p()
/// once α = δ = 0. T4: P = (2g²/Ω_r²)(N(N+1)+|M|²) + b1²/(2C).
/// D = (2g²/Ω_r²)(N(N+1)+|M|²) + 1/(2C) for both.
DerivedParams derived_params(const SystemConfig& cfg, Family fam);

/// (N(N+1)+M²)/(2N); throws std::invalid_argument for N = 0.
double t3_simplified_p(const SqueezingParams& sq);

/// T3: Ω_r²/4Δ_r − g²N/Δ_r.  T4: additionally − Ω_s²/4Δ_s.
double alpha(const SystemConfig& cfg, Family fam);

/// α = 0 for T4 at the given Δ_s: returns Ω_s = √(4Δ_s(Ω_r²/4Δ_r − g²N/Δ_r)).
double solve_aux_drive(const SystemConfig& cfg, double delta_s);

/// Copy of cfg with the auxiliary drive set by solve_aux_drive(). Δ_s defaults
/// to Δ_r with the sign flipped if needed.
SystemConfig balance_alpha(const SystemConfig& cfg);
SystemConfig balance_alpha(const SystemConfig& cfg, double delta_s);

/// True if |α| ≤ 1e-6·|Ω_r²/4Δ_r|.
bool alpha_balanced(const SystemConfig& cfg, Family fam);

struct BlochRates {
    double gamma_x{0.0};
    double gamma_y{0.0};
    double gamma_z{0.0};
    double gamma_drive{0.0};

    /// Fixed point of the Bloch equations, −Γ/Γ_z.
    double sz_ss() const { return -gamma_drive / gamma_z; }
};

/// Rates use |M|; a complex M rotates the quadrature axes by arg(M)/2.
BlochRates bloch_rates_t0(double gamma, const SqueezingParams& sq);

/// T0 (γ = cfg.decay.gamma_r), T3R or T4R. T3R/T4R throw unless α = 0; T3R also needs δ = 0.
BlochRates bloch_rates(Tier tier, const SystemConfig& cfg);

struct RegimeRow {
    std::string name;
    double small{0.0};
    double large{0.0};
    double margin{0.0};  // small/large
    double threshold{0.0};
    bool pass{false};
};

struct RegimeReport {
    std::vector<RegimeRow> rows;
    bool pass{true};
};

inline constexpr double kDefaultMuchGreater = 0.15;

/// One row per validity inequality of the 4-level reduction, plus the α = 0
/// balance. Never throws for a valid cfg.
RegimeReport check_regime(const SystemConfig& cfg, double threshold = kDefaultMuchGreater);

enum class DecayModel { pure_exp, offset_exp };

struct DecayFit {
    double rate{0.0};
    double amplitude{0.0};
    double offset{0.0};
    double residual{0.0};  // RMS misfit over |amplitude|
    double span{0.0};      // fitted window length × rate
    bool flagged{false};   // residual > 0.05 or span < 3
};

/// Least squares v(t) = A e^{−Γt} (+ v∞). The first `discard` fraction of
/// samples is dropped. Throws std::invalid_argument for < 20 samples and
/// std::runtime_error on non-convergence.
DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& v, DecayModel model,
                   double discard = 0.05);

struct NogoRow {
    double n{0.0};
    double m_fraction{0.0};
    double p{0.0};
    double quad_sum{0.0};  // 2N+1−2M+P
    double ratio{0.0};     // P/(2N+1−2M)
};

struct NogoScan {
    std::vector<NogoRow> rows;
    double min_quad_sum{0.0};
    double min_ratio{0.0};
    std::size_t argmin_quad{0};
    std::size_t argmin_ratio{0};
};

std::vector<double> default_nogo_n_grid();         // 200 log-spaced in [1e-3, 10]
std::vector<double> default_nogo_fraction_grid();  // 200 in [0, 1]

/// Rows ordered N-major. Ties keep the lowest index. Throws std::logic_error
/// if the quadrature sum drops below 1 − 1e-9.
NogoScan three_level_nogo_scan(const std::vector<double>& n_grid, const std::vector<double>& m_fraction_grid);

} // namespace sqz
