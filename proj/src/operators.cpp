// operators.cpp — Dense operator algebra

#include "sqzcav/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace sqz::ops {

Matrix identity(Index dim)
{
    if (dim < 1) throw std::invalid_argument("operator dimension must be >= 1");
    return Matrix::Identity(dim, dim);
}

Matrix projector(Index dim, Index row, Index col)
{
    if (row < 0 || col < 0 || row >= dim || col >= dim) {
        throw std::out_of_range("projector index outside the space");
    }
    Matrix p = Matrix::Zero(dim, dim);
    p(row, col) = 1.0;
    return p;
}

Matrix kron(const Matrix& a, const Matrix& b)
{
    const Index ra = a.rows(), ca = a.cols();
    const Index rb = b.rows(), cb = b.cols();
    Matrix out(ra * rb, ca * cb);
    for (Index i = 0; i < ra; ++i) {
        for (Index j = 0; j < ca; ++j) {
            out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
        }
    }
    return out;
}

Matrix annihilation(FockTruncation trunc)
{
    if (trunc.n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    const Index d = trunc.dim();
    Matrix a = Matrix::Zero(d, d);
    for (Index n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

Matrix sigma_plus() { return projector(2, 1, 0); }
Matrix sigma_minus() { return projector(2, 0, 1); }
Matrix sigma_x() { return sigma_plus() + sigma_minus(); }
Matrix sigma_y() { return -kI * (sigma_plus() - sigma_minus()); }

Matrix sigma_z()
{
    return sigma_plus() * sigma_minus() - sigma_minus() * sigma_plus();
}

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

double hermiticity_defect(const Matrix& a)
{
    if (a.rows() != a.cols()) throw std::invalid_argument("hermiticity check needs a square matrix");
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

cplx expectation(const Matrix& a, const Matrix& rho)
{
    if (a.cols() != rho.rows() || a.rows() != rho.cols()) {
        throw std::invalid_argument("expectation: dimension mismatch");
    }
    // Tr(Aρ) = Σ_ij A_ij ρ_ji
    return (a.array() * rho.transpose().array()).sum();
}

} // namespace sqz::ops
