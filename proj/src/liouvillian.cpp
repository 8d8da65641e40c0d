// liouvillian.cpp — Generator assembly and application

#include "sqzcav/liouvillian.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sqz {

namespace {

SparseMatrix to_sparse(const Matrix& m)
{
    SparseMatrix s = m.sparseView(cplx(0.0), 0.0);
    s.makeCompressed();
    return s;
}

void require_dim(const Matrix& m, Index dim, const char* what)
{
    if (m.rows() != dim || m.cols() != dim) {
        throw std::invalid_argument(std::string("Liouvillian: ") + what + " has dimension " +
                                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                                    ", expected " + std::to_string(dim));
    }
}

// Triplets of A ⊗ Bᵀ into the row-major vec basis.
void add_left_right(std::vector<Eigen::Triplet<cplx>>& trips, const SparseMatrix& a,
                    const SparseMatrix& b, cplx coeff, Index dim)
{
    for (Index i = 0; i < a.outerSize(); ++i) {
        for (SparseMatrix::InnerIterator ia(a, i); ia; ++ia) {
            const Index k = ia.col();
            for (Index l = 0; l < b.outerSize(); ++l) {
                for (SparseMatrix::InnerIterator ib(b, l); ib; ++ib) {
                    const Index j = ib.col();
                    trips.emplace_back(i * dim + j, k * dim + l, coeff * ia.value() * ib.value());
                }
            }
        }
    }
}

// Same, in the column-major vec basis used by Eigen storage (index j·dim + i).
void add_left_right_col(std::vector<Eigen::Triplet<cplx>>& trips, const SparseMatrix& a,
                        const SparseMatrix& b, cplx coeff, Index dim)
{
    for (Index i = 0; i < a.outerSize(); ++i) {
        for (SparseMatrix::InnerIterator ia(a, i); ia; ++ia) {
            const Index k = ia.col();
            for (Index l = 0; l < b.outerSize(); ++l) {
                for (SparseMatrix::InnerIterator ib(b, l); ib; ++ib) {
                    const Index j = ib.col();
                    trips.emplace_back(j * dim + i, l * dim + k, coeff * ia.value() * ib.value());
                }
            }
        }
    }
}

} // namespace

Liouvillian::Liouvillian(Matrix hamiltonian, std::vector<HamiltonianPhaseTerm> ham_phases,
                         std::vector<DissipatorChannel> channels)
    : dim_(hamiltonian.rows()),
      hamiltonian_(std::move(hamiltonian)),
      ham_phases_(std::move(ham_phases)),
      channels_(std::move(channels))
{
    if (dim_ < 1) throw std::invalid_argument("Liouvillian: empty Hilbert space");
    require_dim(hamiltonian_, dim_, "hamiltonian");
    const double herm = ops::hermiticity_defect(hamiltonian_);
    if (herm > kTolHerm) {
        throw std::invalid_argument("Liouvillian: static Hamiltonian is not Hermitian (defect " +
                                    std::to_string(herm) + ")");
    }

    Matrix k_left = -kI * hamiltonian_;
    Matrix k_right = kI * hamiltonian_;
    for (const auto& term : ham_phases_) {
        require_dim(term.op, dim_, "phase term");
        timed_ham_.push_back({to_sparse(term.op), to_sparse(term.op.adjoint()), term.freq});
    }
    for (const auto& ch : channels_) {
        require_dim(ch.left, dim_, "channel left operator");
        require_dim(ch.right, dim_, "channel right operator");
        const Matrix ba = ch.right * ch.left;
        CompiledChannel compiled{ch.weight, ch.phase_freq, to_sparse(ch.left), to_sparse(ch.right),
                                 to_sparse(ba)};
        if (ch.phase_freq == 0.0) {
            k_left -= ch.weight * ba;
            k_right -= ch.weight * ba;
            jump_static_.push_back(std::move(compiled));
        } else {
            timed_.push_back(std::move(compiled));
        }
    }
    k_left_ = to_sparse(k_left);
    k_right_ = to_sparse(k_right);
    is_static_ = timed_.empty() && timed_ham_.empty();

    SparseMatrix id(dim_, dim_);
    id.setIdentity();
    std::vector<Eigen::Triplet<cplx>> trips;
    add_left_right_col(trips, k_left_, id, 1.0, dim_);
    add_left_right_col(trips, id, k_right_, 1.0, dim_);
    for (const auto& ch : jump_static_) add_left_right_col(trips, ch.a, ch.b, 2.0 * ch.weight, dim_);
    static_col_.resize(dim_ * dim_, dim_ * dim_);
    static_col_.setFromTriplets(trips.begin(), trips.end());
    static_col_.prune(cplx(0.0), 0.0);
    static_col_.makeCompressed();
}

Matrix Liouvillian::apply(const Matrix& rho, double t) const
{
    Matrix out;
    apply(rho, t, out);
    return out;
}

void Liouvillian::apply(const Matrix& rho, double t, Matrix& out) const
{
    if (rho.rows() != dim_ || rho.cols() != dim_) {
        throw std::invalid_argument("apply_liouvillian: state dimension " + std::to_string(rho.rows()) +
                                    " does not match generator dimension " + std::to_string(dim_));
    }
    out.resize(dim_, dim_);
    Eigen::Map<Eigen::VectorXcd> out_vec(out.data(), dim_ * dim_);
    out_vec.noalias() = static_col_ * Eigen::Map<const Eigen::VectorXcd>(rho.data(), dim_ * dim_);
    if (is_static_) return;
    Matrix tmp(dim_, dim_);
    for (const auto& ch : timed_) {
        const cplx w = ch.weight * std::exp(kI * (ch.phase_freq * t));
        tmp.noalias() = ch.a * rho;
        out.noalias() += (2.0 * w) * (tmp * ch.b);
        out.noalias() -= w * (ch.ba * rho);
        out.noalias() -= w * (rho * ch.ba);
    }
    for (const auto& term : timed_ham_) {
        const cplx ph = std::exp(kI * (term.freq * t));
        tmp.noalias() = ph * (term.op * rho) + std::conj(ph) * (term.op_adj * rho);
        tmp.noalias() -= ph * (rho * term.op) + std::conj(ph) * (rho * term.op_adj);
        out.noalias() -= kI * tmp;
    }
}

SparseMatrix Liouvillian::superoperator() const
{
    if (!is_static_) throw std::logic_error("superoperator requires a static generator");
    const Index d = dim_;
    SparseMatrix id(d, d);
    id.setIdentity();
    std::vector<Eigen::Triplet<cplx>> trips;
    add_left_right(trips, k_left_, id, 1.0, d);
    add_left_right(trips, id, k_right_, 1.0, d);
    for (const auto& ch : jump_static_) add_left_right(trips, ch.a, ch.b, 2.0 * ch.weight, d);
    SparseMatrix s(d * d, d * d);
    s.setFromTriplets(trips.begin(), trips.end());
    s.prune(cplx(0.0), 0.0);
    s.makeCompressed();
    return s;
}

} // namespace sqz
