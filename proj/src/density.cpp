// density.cpp — Validated density matrices and reductions

#include "sqzcav/density.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace sqz {

StateDefects state_defects(const Matrix& rho)
{
    if (rho.rows() != rho.cols() || rho.rows() < 1) {
        throw std::invalid_argument("density matrix must be square and non-empty");
    }
    StateDefects d;
    d.herm = ops::hermiticity_defect(rho);
    d.trace = std::abs(rho.trace() - cplx(1.0));
    const Matrix herm_part = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm_part, Eigen::EigenvaluesOnly);
    d.min_eig = es.eigenvalues().minCoeff();
    return d;
}

DensityMatrix::DensityMatrix(Matrix op, const StateTolerances& tol) : op_(std::move(op))
{
    const StateDefects d = state_defects(op_);
    if (d.herm > tol.herm) {
        throw std::invalid_argument("density matrix not Hermitian (defect " + std::to_string(d.herm) + ")");
    }
    if (d.trace > tol.trace) {
        throw std::invalid_argument("density matrix trace deviates from 1 by " + std::to_string(d.trace));
    }
    if (d.min_eig < tol.min_eig) {
        throw std::invalid_argument("density matrix has negative eigenvalue " + std::to_string(d.min_eig));
    }
}

DensityMatrix DensityMatrix::trusted(Matrix op)
{
    DensityMatrix rho;
    rho.op_ = std::move(op);
    return rho;
}

DensityMatrix pure_state(const Eigen::VectorXcd& psi)
{
    const double norm = psi.norm();
    if (norm == 0.0) throw std::invalid_argument("pure_state: zero vector");
    const Eigen::VectorXcd v = psi / norm;
    return DensityMatrix(v * v.adjoint());
}

DensityMatrix maximally_mixed(Index dim)
{
    return DensityMatrix(ops::identity(dim) / static_cast<double>(dim));
}

Matrix reduce_atom(const Matrix& rho, const Layout& layout)
{
    if (rho.rows() != layout.dim()) throw std::invalid_argument("reduce_atom: layout mismatch");
    const Index na = layout.atom_levels, nf = layout.fock_dim;
    Matrix out = Matrix::Zero(na, na);
    for (Index i = 0; i < na; ++i)
        for (Index j = 0; j < na; ++j)
            for (Index n = 0; n < nf; ++n) out(i, j) += rho(i * nf + n, j * nf + n);
    return out;
}

Matrix reduce_cavity(const Matrix& rho, const Layout& layout)
{
    if (rho.rows() != layout.dim()) throw std::invalid_argument("reduce_cavity: layout mismatch");
    const Index na = layout.atom_levels, nf = layout.fock_dim;
    Matrix out = Matrix::Zero(nf, nf);
    for (Index i = 0; i < na; ++i) out += rho.block(i * nf, i * nf, nf, nf);
    return out;
}

Matrix atom_block(const Matrix& rho_atom, const std::vector<Index>& levels)
{
    const auto n = static_cast<Index>(levels.size());
    Matrix out(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) out(i, j) = rho_atom(levels[i], levels[j]);
    return out;
}

double trace_distance(const Matrix& a, const Matrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("trace_distance: dimension mismatch");
    }
    const Matrix diff = a - b;
    const Matrix herm = 0.5 * (diff + diff.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

BlochVector bloch_vector(const Matrix& rho2)
{
    if (rho2.rows() != 2 || rho2.cols() != 2) throw std::invalid_argument("bloch_vector needs a 2x2 state");
    return {ops::expectation(ops::sigma_x(), rho2).real(), ops::expectation(ops::sigma_y(), rho2).real(),
            ops::expectation(ops::sigma_z(), rho2).real()};
}

} // namespace sqz
