// support.hpp — Shared fixtures for the unit and acceptance tests
#pragma once

#include <cmath>
#include <random>

#include "sqzcav/config.hpp"
#include "sqzcav/density.hpp"
#include "sqzcav/liouvillian.hpp"

namespace sqz::test {

inline const double kSqrt075 = std::sqrt(0.75);

inline SqueezingParams squeezed() { return {0.5, kSqrt075}; }

/// Small-scale Raman configuration in angular units (μs⁻¹): cheap enough for full tiers.
inline SystemConfig desk_config(const SqueezingParams& sq, double delta_r = 40.0, int n_max = 8)
{
    SystemConfig cfg;
    cfg.squeezing = sq;
    cfg.cavity = {1.0, 1.0, 0.0};
    cfg.raman = {0.2 * delta_r, delta_r, 0.0};
    cfg.decay.gamma_r = 0.5;
    cfg.trunc.n_max = n_max;
    return cfg;
}

inline Matrix random_hermitian(Index dim, std::mt19937& rng)
{
    std::normal_distribution<double> nd;
    Matrix m(dim, dim);
    for (Index i = 0; i < dim; ++i) {
        for (Index j = 0; j < dim; ++j) m(i, j) = cplx(nd(rng), nd(rng));
    }
    return 0.5 * (m + m.adjoint());
}

inline Matrix random_density(Index dim, std::mt19937& rng)
{
    const Matrix h = random_hermitian(dim, rng);
    Matrix rho = h * h.adjoint();
    return rho / rho.trace();
}

inline double trace_norm(const Matrix& h)
{
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()));
    return es.eigenvalues().cwiseAbs().sum();
}

/// Asserts the generator maps Hermitian matrices to traceless Hermitian ones.
template <typename Check>
void check_lindblad_structure(const Liouvillian& gen, std::mt19937& rng, Check&& check)
{
    std::uniform_real_distribution<double> ut(0.0, 10.0);
    for (int trial = 0; trial < 5; ++trial) {
        const Matrix rho = random_hermitian(gen.dim(), rng);
        const double t = ut(rng);
        const Matrix d = gen.apply(rho, t);
        const double scale = std::max(1.0, ops::max_abs(d));
        check(std::abs(d.trace()) < 1e-10 * trace_norm(rho) * scale, ops::hermiticity_defect(d) < 1e-12 * scale);
    }
}

} // namespace sqz::test
