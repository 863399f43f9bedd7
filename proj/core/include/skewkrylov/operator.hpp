#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "skewkrylov/types.hpp"

namespace skewkrylov {

enum class OperatorKind { general, skew };

/// Matrix-free linear operator v -> Av together with its transpose action.
///
/// Immutable and cheap to copy: the actions are shared. For kind == skew the
/// transpose action is always the negated forward action, never a second matrix,
/// so apply_transpose(v) == -apply(v) holds bit for bit.
class LinearOperator {
public:
    using Action = std::function<Vector(const Vector&)>;

    static LinearOperator skew(Index dim, Action apply);
    static LinearOperator general(Index dim, Action apply, Action apply_transpose);

    Index dim() const noexcept { return dim_; }
    OperatorKind kind() const noexcept { return kind_; }
    bool is_skew() const noexcept { return kind_ == OperatorKind::skew; }

    Vector apply(const Vector& v) const;
    Vector apply_transpose(const Vector& v) const;

    /// Same actions, different tag. Used when the caller certifies skewness (or revokes it).
    LinearOperator retagged(OperatorKind kind) const;

private:
    LinearOperator(Index dim, OperatorKind kind, std::shared_ptr<const Action> apply,
                   std::shared_ptr<const Action> apply_transpose);

    Index dim_ = 0;
    OperatorKind kind_ = OperatorKind::general;
    std::shared_ptr<const Action> apply_;
    std::shared_ptr<const Action> apply_transpose_;
};

/// Square dense matrix with a general/skew tag.
///
/// A skew tag is only accepted when entries(i,j) == -entries(j,i) exactly, the diagonal
/// is exactly zero and the dimension is even.
class DenseMatrix {
public:
    explicit DenseMatrix(Matrix entries, OperatorKind kind = OperatorKind::general);

    Index dim() const noexcept { return entries_.rows(); }
    OperatorKind kind() const noexcept { return kind_; }
    bool is_skew() const noexcept { return kind_ == OperatorKind::skew; }
    const Matrix& entries() const noexcept { return entries_; }
    double operator()(Index i, Index j) const { return entries_(i, j); }

    /// True when the entries are exactly skew-symmetric with zero diagonal.
    bool has_skew_structure() const;

private:
    Matrix entries_;
    OperatorKind kind_;
};

/// One strictly-upper-triangular entry (row < col) of a skew matrix, 0-based.
struct Triplet {
    Index row = 0;
    Index col = 0;
    double value = 0.0;

    friend bool operator==(const Triplet&, const Triplet&) = default;
};

/// Skew-symmetric sparse matrix stored as its strict upper triangle.
///
/// Entry (i, j, a) stands for A(i,j) = a and A(j,i) = -a. Triplets are kept sorted
/// by (row, col); duplicates, diagonal and lower entries are rejected on construction.
class SparseSkewMatrix {
public:
    SparseSkewMatrix(Index n, std::vector<Triplet> upper);

    Index dim() const noexcept { return n_; }
    std::span<const Triplet> triplets() const noexcept { return triplets_; }
    std::size_t nonzeros() const noexcept { return triplets_.size(); }

    Vector apply(const Vector& v) const;
    DenseMatrix to_dense() const;

    friend bool operator==(const SparseSkewMatrix&, const SparseSkewMatrix&) = default;

private:
    Index n_;
    std::vector<Triplet> triplets_;
};

LinearOperator make_operator(const DenseMatrix& matrix);
LinearOperator make_operator(const SparseSkewMatrix& matrix);

LinearOperator identity_operator(Index n);

/// Action of diag(d)^{-1}. Every d[i] must be nonzero.
LinearOperator diagonal_inverse(const Vector& d);

/// Action of L^{-1} for lower-triangular L (forward substitution); transpose is L^{-T}.
LinearOperator lower_triangular_inverse(const Matrix& lower);

/// Swaps the forward and transpose actions.
LinearOperator transposed(const LinearOperator& op);

/// v -> A(Av). Generator for the squared Krylov spaces; A^2 is never formed.
LinearOperator squared(const LinearOperator& op);

/// Forwards to op and increments *counter once per forward or transpose action.
LinearOperator counted(const LinearOperator& op, std::shared_ptr<std::atomic<long>> counter);

}  // namespace skewkrylov
