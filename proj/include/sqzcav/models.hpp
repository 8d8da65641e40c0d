// models.hpp — Generators for every model tier, from one SystemConfig
//
// Tiers, from most to least detailed:
//   T3F  3-level atom ⊗ cavity          T4F  4-level atom ⊗ cavity
//   T3E  ground levels ⊗ cavity         T4I  ground levels ⊗ cavity, with L_a
//   T3R  ground levels only             T4R  ground levels only
//   T0   two-level atom in a broadband squeezed bath
//
// Atomic level order: |0⟩, |1⟩, |r⟩, |s⟩. All tiers live in the laser frame.

#pragma once

#include <string>
#include <vector>

#include "sqzcav/config.hpp"
#include "sqzcav/density.hpp"
#include "sqzcav/liouvillian.hpp"

namespace sqz {

enum class Tier { T0, T3F, T3E, T3R, T4F, T4I, T4R };

std::string to_string(Tier t);
/// Accepts "T0", "T3F", ... (case-insensitive); throws std::invalid_argument.
Tier parse_tier(const std::string& name);

/// The 4-level tiers fix the Raman laser phase at −π/2 and enter the bath
/// correlation as −M in the cavity dissipator. With that choice the reduced
/// T4R equation carries −(β²/κ)M(2σ⁺ρσ⁺) and the cavity field follows
/// a ≈ (β/κ)σ⁻ in the bad-cavity limit. cfg.raman.phi is ignored by T4 tiers.
inline constexpr double kT4CouplingPhase = -0.5 * std::numbers::pi;

struct Model {
    Model(Tier t, Liouvillian gen, Layout lay) : tier(t), generator(std::move(gen)), layout(lay) {}

    Tier tier;
    Liouvillian generator;
    Layout layout;
    /// Reduced-picture frequency of the |1⟩ level relative to |0⟩ (T3R with
    /// α ≠ 0); ground_block() undoes it.
    double ground_frame_freq{0.0};
    std::vector<std::string> warnings;

    /// Ground-level 2×2 block of ρ (cavity traced out), rotated into the
    /// laser frame at time t.
    Matrix ground_block(const Matrix& rho, double t = 0.0) const;

    /// Cavity annihilation operator on the full space; throws without a cavity.
    Matrix cavity_a() const;
    /// Embeds a ground-level operator (2×2) into the full space.
    Matrix ground_op(const Matrix& op2) const;

    /// ρ_ground ⊗ ρ_cavity with ρ_ground on levels |0⟩,|1⟩.
    DensityMatrix product_state(const Matrix& rho_ground, const Matrix& rho_cavity) const;
};

Liouvillian build_T0(double gamma, const SqueezingParams& sq);

/// The four cavity-bath channels κ(1+N)D(a,a†) + κN D(a†,a) + κM D(a†,a†) + κM* D(a,a).
std::vector<DissipatorChannel> cavity_bath_channels(const Matrix& a, double kappa, double n, cplx m);

Model build_T3F(const SystemConfig& cfg);
Model build_T3E(const SystemConfig& cfg);
Model build_T3R(const SystemConfig& cfg);
Model build_T4F(const SystemConfig& cfg);
Model build_T4I(const SystemConfig& cfg);

struct T4ROptions {
    /// Builds even when α ≠ 0, for demonstrations of the balancing condition.
    bool allow_unbalanced{false};
};
Model build_T4R(const SystemConfig& cfg, const T4ROptions& opts = {});

/// T0 takes γ from cfg.decay.gamma_r.
Model build_model(Tier tier, const SystemConfig& cfg);

/// Steady state of the empty cavity driven by the bath alone, with the bath
/// correlation the tier uses (−M for the 4-level tiers).
Matrix cavity_bath_state(Tier tier, const SystemConfig& cfg);

/// Ground superposition ⊗ cavity bath state for cavity tiers, the ground
/// state alone for reduced tiers. bloch gives ⟨σ_x⟩,⟨σ_y⟩,⟨σ_z⟩ (|r| ≤ 1).
DensityMatrix initial_state(const Model& model, const SystemConfig& cfg, const BlochVector& bloch);

/// Smallest n_max whose bath-only cavity steady state passes check_truncation.
int recommend_truncation(const SqueezingParams& sq, double threshold = 1e-6, int n_cap = 60);

} // namespace sqz
