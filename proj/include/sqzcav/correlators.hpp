// correlators.hpp — Two-time correlation functions by quantum regression

#pragma once

#include <vector>

#include "sqzcav/density.hpp"
#include "sqzcav/integrator.hpp"
#include "sqzcav/liouvillian.hpp"

namespace sqz {

/// ⟨A(τ)B⟩ = Tr(A · Λ_τ(B ρ_ss)) on the sorted, non-negative grid.
std::vector<cplx> two_time_correlator(const Liouvillian& gen, const DensityMatrix& rho_ss, const Matrix& a,
                                      const Matrix& b, const std::vector<double>& tau_grid,
                                      const StepControls& controls = {});

/// ⟨B A(τ)⟩ = Tr(A · Λ_τ(ρ_ss B)).
std::vector<cplx> two_time_correlator_reversed(const Liouvillian& gen, const DensityMatrix& rho_ss,
                                               const Matrix& a, const Matrix& b,
                                               const std::vector<double>& tau_grid,
                                               const StepControls& controls = {});

/// ⟨[A(τ), B]⟩, propagating the commutator [B, ρ_ss] once (linearity of Λ_τ).
std::vector<cplx> commutator_correlator(const Liouvillian& gen, const DensityMatrix& rho_ss, const Matrix& a,
                                        const Matrix& b, const std::vector<double>& tau_grid,
                                        const StepControls& controls = {});

/// Tail occupation of a cavity mode: population in the two highest Fock levels.
struct TruncationReport {
    double tail{0.0};
    double threshold{1e-6};
    bool pass{true};
};

TruncationReport check_truncation(const DensityMatrix& rho, const Layout& layout, double threshold = 1e-6);

} // namespace sqz
