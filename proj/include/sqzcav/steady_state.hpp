// steady_state.hpp — Stationary states of static generators

#pragma once

#include <stdexcept>

#include "sqzcav/density.hpp"
#include "sqzcav/integrator.hpp"
#include "sqzcav/liouvillian.hpp"

namespace sqz {

class SteadyStateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SteadyStateOptions {
    Index direct_max_dim{64};     // null-space solve up to this Hilbert dimension
    double uniqueness_floor{1e-8};
    double fallback_residual{1e-10};  // ‖dρ/dt‖_max target for the integration route
    double fallback_max_time{1e6};
    // The residual target sits below the default integrator tolerances, so the relaxation runs tighter.
    StepControls controls{1e-12, 1e-14};
};

struct SteadyState {
    DensityMatrix state;
    bool used_fallback{false};
    double residual{0.0};      // max |L(ρ)| entry
    double sigma_min{0.0};     // uniqueness estimate (direct route only)
};

/// Unique stationary state of a static generator. The direct route factorizes the
/// superoperator with one diagonal equation replaced by the trace condition; the
/// smallest singular value of that bordered matrix certifies a one-dimensional null space.
SteadyState steady_state(const Liouvillian& gen, const SteadyStateOptions& opts = {});

} // namespace sqz
