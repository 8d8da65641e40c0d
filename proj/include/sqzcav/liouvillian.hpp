// liouvillian.hpp — Master-equation generators with phase-carrying terms

#pragma once

#include <vector>

#include <Eigen/Sparse>

#include "sqzcav/operators.hpp"

namespace sqz {

using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

inline constexpr double kTolHerm = 1e-10;

/// One generalized dissipator term
///   weight · e^{i ω t} · (2 A ρ B − B A ρ − ρ B A).
/// Standard D[c] damping is A = c, B = c†; the anomalous squeezing terms use
/// A = B = a† (or a). Hermiticity preservation requires conjugate partners.
struct DissipatorChannel {
    cplx weight{0.0};
    Matrix left;
    Matrix right;
    double phase_freq{0.0};
};

/// Time-dependent Hamiltonian piece H_k e^{i ω t} + h.c.
struct HamiltonianPhaseTerm {
    Matrix op;
    double freq{0.0};
};

/// ρ̇ = −i[H(t), ρ] + Σ channels. Immutable once built; apply() is re-entrant.
class Liouvillian {
public:
    explicit Liouvillian(Matrix hamiltonian, std::vector<HamiltonianPhaseTerm> ham_phases = {},
                         std::vector<DissipatorChannel> channels = {});

    Index dim() const { return dim_; }
    bool is_static() const { return is_static_; }

    const Matrix& hamiltonian() const { return hamiltonian_; }
    const std::vector<HamiltonianPhaseTerm>& ham_phases() const { return ham_phases_; }
    const std::vector<DissipatorChannel>& channels() const { return channels_; }

    /// dρ/dt at time t.
    Matrix apply(const Matrix& rho, double t) const;
    void apply(const Matrix& rho, double t, Matrix& out) const;

    /// dim²×dim² matrix acting on row-major vec(ρ) (index i·dim + j).
    /// Requires a static generator.
    SparseMatrix superoperator() const;

private:
    struct CompiledChannel {
        cplx weight;
        double phase_freq;
        SparseMatrix a;
        SparseMatrix b;
        SparseMatrix ba;
    };
    struct CompiledPhaseTerm {
        SparseMatrix op;
        SparseMatrix op_adj;
        double freq;
    };

    Index dim_{0};
    bool is_static_{true};
    Matrix hamiltonian_;
    std::vector<HamiltonianPhaseTerm> ham_phases_;
    std::vector<DissipatorChannel> channels_;

    // Static part folded into ρ̇ = K_l ρ + ρ K_r + Σ 2w A ρ B.
    SparseMatrix k_left_;
    SparseMatrix k_right_;
    std::vector<CompiledChannel> jump_static_;
    // Static part as one sparse matrix on Eigen's column-major vec(ρ).
    SparseMatrix static_col_;
    std::vector<CompiledChannel> timed_;
    std::vector<CompiledPhaseTerm> timed_ham_;
};

} // namespace sqz
