// density.hpp — Validated density matrices and reductions

#pragma once

#include <vector>

#include "sqzcav/operators.hpp"

namespace sqz {

struct StateTolerances {
    double herm{1e-10};
    double trace{1e-9};
    double min_eig{-1e-8};
};

/// A Hermitian, unit-trace, positive matrix. Construction validates.
class DensityMatrix {
public:
    explicit DensityMatrix(Matrix op, const StateTolerances& tol = {});

    /// Skips validation; for states produced by checked code paths.
    static DensityMatrix trusted(Matrix op);

    const Matrix& op() const { return op_; }
    Index dim() const { return op_.rows(); }

    cplx expect(const Matrix& observable) const { return ops::expectation(observable, op_); }

private:
    DensityMatrix() = default;
    Matrix op_;
};

struct StateDefects {
    double herm{0.0};
    double trace{0.0};      // |Tr ρ − 1|
    double min_eig{0.0};    // smallest eigenvalue of the Hermitian part
};

StateDefects state_defects(const Matrix& rho);

DensityMatrix pure_state(const Eigen::VectorXcd& psi);
DensityMatrix maximally_mixed(Index dim);

/// Tensor-product layout atom ⊗ cavity with the atom index major.
struct Layout {
    Index atom_levels{2};
    Index fock_dim{1};

    Index dim() const { return atom_levels * fock_dim; }
};

/// Trace out the cavity.
Matrix reduce_atom(const Matrix& rho, const Layout& layout);
/// Trace out the atom.
Matrix reduce_cavity(const Matrix& rho, const Layout& layout);
/// Sub-block on the listed atomic levels (no renormalization).
Matrix atom_block(const Matrix& rho_atom, const std::vector<Index>& levels);

/// ½‖A − B‖₁ for Hermitian arguments.
double trace_distance(const Matrix& a, const Matrix& b);

struct BlochVector {
    double sx{0.0};
    double sy{0.0};
    double sz{0.0};
};

BlochVector bloch_vector(const Matrix& rho2);

} // namespace sqz
