// steady_state.cpp — Null-space and relaxation routes to ρ_ss

#include "sqzcav/steady_state.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include <Eigen/SparseLU>

namespace sqz {

namespace {

std::string format_sci(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

using Vector = Eigen::VectorXcd;

Matrix unvec(const Vector& v, Index d)
{
    Matrix m(d, d);
    for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j) m(i, j) = v(i * d + j);
    return m;
}

SteadyState direct(const Liouvillian& gen, const SteadyStateOptions& opts)
{
    const Index d = gen.dim();
    const SparseMatrix sup = gen.superoperator();

    // Row 0 is the equation for ρ_00; it is implied by the others through
    // trace preservation, so it can carry Tr ρ = 1 instead.
    std::vector<Eigen::Triplet<cplx>> trips;
    trips.reserve(static_cast<std::size_t>(sup.nonZeros() + d));
    for (Index r = 1; r < sup.outerSize(); ++r)
        for (SparseMatrix::InnerIterator it(sup, r); it; ++it) trips.emplace_back(r, it.col(), it.value());
    for (Index i = 0; i < d; ++i) trips.emplace_back(0, i * d + i, 1.0);
    Eigen::SparseMatrix<cplx> bordered(d * d, d * d);
    bordered.setFromTriplets(trips.begin(), trips.end());
    bordered.makeCompressed();

    Eigen::SparseLU<Eigen::SparseMatrix<cplx>> lu;
    lu.compute(bordered);
    if (lu.info() != Eigen::Success) {
        throw SteadyStateError("steady_state: bordered superoperator is singular; "
                               "the stationary state is not unique");
    }
    Vector rhs = Vector::Zero(d * d);
    rhs(0) = 1.0;
    const Vector x = lu.solve(rhs);
    if (lu.info() != Eigen::Success || !x.allFinite()) {
        throw SteadyStateError("steady_state: solve failed (degenerate null space)");
    }

    // σ_min(B) = 1/‖B⁻¹‖₂ by power iteration on B⁻†B⁻¹.
    Vector v = Vector::Ones(d * d).normalized();
    double inv_norm_sq = 0.0;
    for (int it = 0; it < 30; ++it) {
        Vector w = lu.solve(v);
        w = lu.adjoint().solve(w);
        const double n = w.norm();
        if (!std::isfinite(n) || n == 0.0) break;
        const double prev = inv_norm_sq;
        inv_norm_sq = n;
        v = w / n;
        if (it > 3 && std::abs(inv_norm_sq - prev) <= 1e-6 * inv_norm_sq) break;
    }
    const double sigma_min = inv_norm_sq > 0.0 ? 1.0 / std::sqrt(inv_norm_sq) : 0.0;
    if (!(sigma_min > opts.uniqueness_floor)) {
        throw SteadyStateError("steady_state: smallest singular value " + format_sci(sigma_min) +
                               " below uniqueness floor; stationary state is not unique");
    }

    Matrix rho = unvec(x, d);
    rho = 0.5 * (rho + rho.adjoint());
    rho /= rho.trace();
    const double residual = ops::max_abs(gen.apply(rho, 0.0));
    return {DensityMatrix(rho), false, residual, sigma_min};
}

SteadyState relax(const Liouvillian& gen, const SteadyStateOptions& opts)
{
    const Index d = gen.dim();
    Matrix rho = maximally_mixed(d).op();
    double t = 0.0;
    double chunk = 1.0;
    double residual = ops::max_abs(gen.apply(rho, 0.0));
    while (residual >= opts.fallback_residual) {
        if (t > opts.fallback_max_time) {
            throw SteadyStateError("steady_state: relaxation did not converge (residual " +
                                   format_sci(residual) + ")");
        }
        Matrix next;
        propagate(gen, rho, t, {t + chunk}, opts.controls, [&](double, const Matrix& y) { next = y; }, true);
        rho = 0.5 * (next + next.adjoint());
        t += chunk;
        chunk *= 1.5;
        residual = ops::max_abs(gen.apply(rho, 0.0));
    }
    rho /= rho.trace();
    return {DensityMatrix(rho), true, residual, 0.0};
}

} // namespace

SteadyState steady_state(const Liouvillian& gen, const SteadyStateOptions& opts)
{
    if (!gen.is_static()) throw std::invalid_argument("steady_state requires a static generator");
    if (gen.dim() <= opts.direct_max_dim) return direct(gen, opts);
    return relax(gen, opts);
}

} // namespace sqz
