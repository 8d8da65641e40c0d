// correlators.cpp — Quantum regression and truncation diagnostics

#include "sqzcav/correlators.hpp"

#include <stdexcept>

namespace sqz {

namespace {

std::vector<cplx> regress(const Liouvillian& gen, const Matrix& x0, const Matrix& a,
                          const std::vector<double>& tau_grid, const StepControls& controls)
{
    if (!gen.is_static()) throw std::invalid_argument("regression requires a static generator");
    if (a.rows() != gen.dim() || x0.rows() != gen.dim()) {
        throw std::invalid_argument("regression: operator dimension mismatch");
    }
    std::vector<cplx> out;
    out.reserve(tau_grid.size());
    propagate(gen, x0, 0.0, tau_grid, controls,
              [&](double, const Matrix& y) { out.push_back(ops::expectation(a, y)); });
    return out;
}

} // namespace

std::vector<cplx> two_time_correlator(const Liouvillian& gen, const DensityMatrix& rho_ss, const Matrix& a,
                                      const Matrix& b, const std::vector<double>& tau_grid,
                                      const StepControls& controls)
{
    return regress(gen, b * rho_ss.op(), a, tau_grid, controls);
}

std::vector<cplx> two_time_correlator_reversed(const Liouvillian& gen, const DensityMatrix& rho_ss,
                                               const Matrix& a, const Matrix& b,
                                               const std::vector<double>& tau_grid,
                                               const StepControls& controls)
{
    return regress(gen, rho_ss.op() * b, a, tau_grid, controls);
}

std::vector<cplx> commutator_correlator(const Liouvillian& gen, const DensityMatrix& rho_ss, const Matrix& a,
                                        const Matrix& b, const std::vector<double>& tau_grid,
                                        const StepControls& controls)
{
    return regress(gen, ops::commutator(b, rho_ss.op()), a, tau_grid, controls);
}

TruncationReport check_truncation(const DensityMatrix& rho, const Layout& layout, double threshold)
{
    if (layout.fock_dim < 2) throw std::invalid_argument("check_truncation: state has no cavity mode");
    const Matrix cav = reduce_cavity(rho.op(), layout);
    const Index top = layout.fock_dim - 1;
    TruncationReport r;
    r.tail = cav(top, top).real() + cav(top - 1, top - 1).real();
    r.threshold = threshold;
    r.pass = r.tail < threshold;
    return r;
}

} // namespace sqz
