// spectra.hpp — Two-probe transmission amplitudes A_p±(ν)
//
// Analytic route: closed forms in terms of the reduced Bloch rates.
// Numeric route: linear response of an effective atom–cavity model through
// the commutator correlators ⟨[a(τ),a†]⟩ and ⟨[a(τ),a]⟩.

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sqzcav/correlators.hpp"
#include "sqzcav/models.hpp"
#include "sqzcav/regime.hpp"

namespace sqz {

enum class ProbeMode { single, sym, antisym, custom };

std::string to_string(ProbeMode m);
ProbeMode parse_probe_mode(const std::string& name);

struct ProbeConfig {
    cplx e_plus{0.0};
    cplx e_minus{0.0};
    std::vector<double> nu_grid;

    /// Weak-probe regime |ℰ±| ≤ 0.01κ.
    void validate(double kappa) const;
};

/// single: ℰ₋ = 0; sym: ℰ₋ = ℰ₊; antisym: ℰ₋ = −ℰ₊. custom is rejected here.
ProbeConfig make_probe(ProbeMode mode, cplx amplitude, std::vector<double> nu_grid);

/// 801 points, ν/(2π) ∈ [−3, 3] MHz, in rad/μs.
std::vector<double> default_nu_grid();

struct Amplitudes {
    cplx plus{0.0};
    cplx minus{0.0};
};

struct SpectrumResult {
    std::string method;
    std::vector<double> nu;
    std::vector<cplx> a_plus;
    std::vector<cplx> a_minus;
    double sz_ss{0.0};
    BlochRates rates{};
    RegimeReport regime{};
    std::vector<std::string> warnings;
};

/// Inputs of the closed forms.
struct AnalyticInputs {
    double beta{0.0};
    double kappa{0.0};
    BlochRates rates{};
    double sz{0.0};
};

Amplitudes analytic_amplitudes(const AnalyticInputs& in, cplx e_plus, cplx e_minus, double nu);

/// Requires α = 0 (throws otherwise); a failing regime report becomes a warning.
SpectrumResult probe_analytic(const SystemConfig& cfg, const BlochRates& rates, double sz_ss,
                              const ProbeConfig& probe, Family fam = Family::T4,
                              double regime_threshold = kDefaultMuchGreater);

/// −2ℰ(β⁴/κ³)⟨σ_z⟩M/((Γ_x+iν)(Γ_y+iν)).
cplx lower_sideband_response(const SystemConfig& cfg, const BlochRates& rates, double sz_ss, double e, double nu);

struct NumericOptions {
    double tau_max{0.0};        // required, > 0
    double sample_step{0.0};    // 0: min(0.1/κ, τ_max/4000)
    double tail_window{0.1};    // fraction of [0, τ_max] used for the tail fit
    double tail_tolerance{0.01};
    StepControls controls{};
    int threads{1};             // worker threads for the ν loop
};

/// Fitted c·e^{−λτ} beyond τ_max.
struct TailFit {
    cplx c{0.0};
    double lambda{0.0};
    double residual{0.0};
    bool used{false};
};

/// Correlators of a static atom–cavity model, sampled once and transformed
/// for any ν.
class LinearResponse {
public:
    /// Throws std::runtime_error when a tail fit misses tail_tolerance.
    LinearResponse(const Model& model, const NumericOptions& opts);

    Amplitudes amplitudes(cplx e_plus, cplx e_minus, double nu) const;

    const DensityMatrix& steady_state() const { return ss_; }
    double sz_ss() const { return sz_ss_; }
    TruncationReport truncation() const { return trunc_; }
    const std::vector<double>& tau() const { return tau_; }
    /// ⟨[a(τ),a†]⟩ and ⟨[a(τ),a]⟩.
    const std::vector<cplx>& normal() const { return normal_; }
    const std::vector<cplx>& anomalous() const { return anomalous_; }
    const TailFit& normal_tail() const { return tail_n_; }
    const TailFit& anomalous_tail() const { return tail_a_; }

private:
    struct Series {
        std::vector<cplx> values;
        cplx deriv_start{0.0};
        cplx deriv_end{0.0};
    };
    // ∫₀^∞ e^{iντ} C(τ) dτ for both signs of ν.
    void transform(double nu, cplx& n_pos, cplx& n_neg, cplx& a_pos, cplx& a_neg) const;
    cplx endpoint_correction(const Series& s, const TailFit& tail, double nu) const;
    cplx tail_integral(const TailFit& tail, double nu) const;

    DensityMatrix ss_;
    double sz_ss_{0.0};
    TruncationReport trunc_{};
    double h_{0.0};
    std::vector<double> tau_;
    std::vector<cplx> normal_;
    std::vector<cplx> anomalous_;
    Series sn_;
    Series sa_;
    TailFit tail_n_;
    TailFit tail_a_;
};

SpectrumResult probe_numeric(const Model& model, const ProbeConfig& probe, const NumericOptions& opts);

enum class SpectrumMethod { analytic, numeric };

struct ScanOptions {
    /// Effective model for the numeric route: T3E or T4I.
    Tier numeric_tier{Tier::T4I};
    NumericOptions numeric{};
    double regime_threshold{kDefaultMuchGreater};
};

/// Family follows numeric_tier. τ_max defaults to 10/min(Γ_y, κ).
SpectrumResult spectrum_scan(const SystemConfig& cfg, const ProbeConfig& probe, SpectrumMethod method,
                             const ScanOptions& opts = {});

/// Full width at half maximum of a profile peaked at ν = 0, by bisection on
/// each side; hint is a rough half width.
double central_fwhm(const std::function<double(double)>& profile, double hint);

/// |ℰ₊/(κ−iν)|² − |A_p⁺(ν)|², the central dip below the bare-cavity response.
double upper_dip(const Amplitudes& a, cplx e_plus, double kappa, double nu);

} // namespace sqz
