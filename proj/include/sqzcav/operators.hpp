// operators.hpp — Dense operator algebra on finite atom ⊗ Fock spaces

#pragma once

#include <complex>

#include <Eigen/Dense>

namespace sqz {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

inline constexpr cplx kI{0.0, 1.0};

/// Highest retained Fock state of a truncated cavity mode.
struct FockTruncation {
    int n_max{15};

    int dim() const { return n_max + 1; }
};

namespace ops {

Matrix identity(Index dim);

/// |row⟩⟨col| on a dim-level space.
Matrix projector(Index dim, Index row, Index col);

/// Tensor product; (A⊗B)[i·dB+k, j·dB+l] = A[i,j]·B[k,l].
Matrix kron(const Matrix& a, const Matrix& b);

/// Cavity annihilation operator with a[n-1,n] = √n.
Matrix annihilation(FockTruncation trunc);

// Two ground levels {|0⟩,|1⟩}: σ⁺ = |1⟩⟨0|, σ⁻ = |0⟩⟨1|.
Matrix sigma_plus();
Matrix sigma_minus();
Matrix sigma_x();
Matrix sigma_y();
Matrix sigma_z();

Matrix commutator(const Matrix& a, const Matrix& b);

/// max |A − A†| over entries.
double hermiticity_defect(const Matrix& a);

double max_abs(const Matrix& a);

/// Tr(A ρ).
cplx expectation(const Matrix& a, const Matrix& rho);

} // namespace ops
} // namespace sqz
