// integrator.hpp — Adaptive Dormand–Prince 5(4) propagation of matrix-valued master equations

#pragma once

#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "sqzcav/density.hpp"
#include "sqzcav/liouvillian.hpp"

namespace sqz {

struct StepControls {
    double rtol{1e-8};
    double atol{1e-10};
    double h_init{0.0};  // 0 → automatic
    double h_max{std::numeric_limits<double>::infinity()};
    long max_steps{20'000'000};
    StateTolerances state_tol{};
    double positivity_error{1e-6};  // emitted states below −this are rejected
};

class IntegrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct StepStats {
    long accepted{0};
    long rejected{0};
};

struct Trajectory {
    std::vector<double> times;
    std::vector<DensityMatrix> states;
    StepStats stats;
};

using SampleObserver = std::function<void(double t, const Matrix& y)>;

/// Integrate dy/dt = L(y, t) from t0 through the sorted sample times, calling
/// `observer` at each one. y need not be a density matrix (regression inputs are not).
/// With `hermitian`, each accepted step is replaced by its Hermitian part so that
/// rounding cannot accumulate an anti-Hermitian component on long runs.
StepStats propagate(const Liouvillian& gen, const Matrix& y0, double t0,
                    const std::vector<double>& sample_times, const StepControls& controls,
                    const SampleObserver& observer, bool hermitian = false);

/// Uniform samples on [0, t_final] (n_samples ≥ 2), each validated as a density matrix.
Trajectory evolve(const Liouvillian& gen, const DensityMatrix& rho0, double t_final,
                  const StepControls& controls = {}, int n_samples = 201);

Trajectory evolve_at(const Liouvillian& gen, const DensityMatrix& rho0,
                     const std::vector<double>& sample_times, const StepControls& controls = {});

std::vector<double> linspace(double a, double b, int n);

} // namespace sqz
