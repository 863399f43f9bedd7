#include "skewkrylov/operator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "skewkrylov/errors.hpp"

namespace skewkrylov {

namespace {

void check_conforming(Index dim, const Vector& v) {
    if (v.size() != dim) {
        throw InvalidArgument("operator of dimension " + std::to_string(dim) + " applied to vector of size " +
                              std::to_string(v.size()));
    }
}

}  // namespace

LinearOperator::LinearOperator(Index dim, OperatorKind kind, std::shared_ptr<const Action> apply,
                               std::shared_ptr<const Action> apply_transpose)
    : dim_(dim), kind_(kind), apply_(std::move(apply)), apply_transpose_(std::move(apply_transpose)) {
    if (dim_ < 1) throw InvalidArgument("operator dimension must be positive");
}

LinearOperator LinearOperator::skew(Index dim, Action apply) {
    auto forward = std::make_shared<const Action>(std::move(apply));
    return LinearOperator(dim, OperatorKind::skew, forward, forward);
}

LinearOperator LinearOperator::general(Index dim, Action apply, Action apply_transpose) {
    return LinearOperator(dim, OperatorKind::general, std::make_shared<const Action>(std::move(apply)),
                          std::make_shared<const Action>(std::move(apply_transpose)));
}

Vector LinearOperator::apply(const Vector& v) const {
    check_conforming(dim_, v);
    return (*apply_)(v);
}

Vector LinearOperator::apply_transpose(const Vector& v) const {
    check_conforming(dim_, v);
    if (kind_ == OperatorKind::skew) return -(*apply_)(v);
    return (*apply_transpose_)(v);
}

LinearOperator LinearOperator::retagged(OperatorKind kind) const {
    if (kind == kind_) return *this;
    if (kind == OperatorKind::skew) return LinearOperator(dim_, kind, apply_, apply_);
    // Dropping the skew tag: materialise the negation as an explicit transpose action.
    auto forward = apply_;
    auto transpose = std::make_shared<const Action>([forward](const Vector& v) -> Vector { return -(*forward)(v); });
    return LinearOperator(dim_, kind, apply_, transpose);
}

DenseMatrix::DenseMatrix(Matrix entries, OperatorKind kind) : entries_(std::move(entries)), kind_(kind) {
    if (entries_.rows() != entries_.cols()) throw InvalidArgument("dense matrix must be square");
    if (entries_.rows() < 1) throw InvalidArgument("dense matrix must be nonempty");
    if (!entries_.allFinite()) throw InvalidArgument("dense matrix has nonfinite entries");
    if (kind_ == OperatorKind::skew) {
        if (entries_.rows() % 2 != 0) throw InvalidArgument("skew-tagged matrix must have even dimension");
        if (!has_skew_structure()) throw InvalidArgument("skew-tagged matrix is not exactly skew-symmetric");
    }
}

bool DenseMatrix::has_skew_structure() const {
    const Index n = entries_.rows();
    for (Index j = 0; j < n; ++j) {
        if (entries_(j, j) != 0.0) return false;
        for (Index i = j + 1; i < n; ++i) {
            if (entries_(i, j) != -entries_(j, i)) return false;
        }
    }
    return true;
}

SparseSkewMatrix::SparseSkewMatrix(Index n, std::vector<Triplet> upper) : n_(n), triplets_(std::move(upper)) {
    if (n_ < 2 || n_ % 2 != 0) throw InvalidArgument("sparse skew matrix dimension must be even and >= 2");
    for (const auto& t : triplets_) {
        if (t.row < 0 || t.col < 0 || t.row >= n_ || t.col >= n_) throw InvalidArgument("triplet index out of range");
        if (t.row >= t.col) throw InvalidArgument("sparse skew triplets must lie strictly above the diagonal");
        if (!std::isfinite(t.value)) throw InvalidArgument("sparse skew triplet value is not finite");
    }
    std::sort(triplets_.begin(), triplets_.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    auto dup = std::adjacent_find(triplets_.begin(), triplets_.end(), [](const Triplet& a, const Triplet& b) {
        return a.row == b.row && a.col == b.col;
    });
    if (dup != triplets_.end()) {
        throw InvalidArgument("duplicate triplet at (" + std::to_string(dup->row) + ", " + std::to_string(dup->col) + ")");
    }
}

Vector SparseSkewMatrix::apply(const Vector& v) const {
    check_conforming(n_, v);
    Vector out = Vector::Zero(n_);
    for (const auto& t : triplets_) {
        out[t.row] += t.value * v[t.col];
        out[t.col] -= t.value * v[t.row];
    }
    return out;
}

DenseMatrix SparseSkewMatrix::to_dense() const {
    Matrix dense = Matrix::Zero(n_, n_);
    for (const auto& t : triplets_) {
        dense(t.row, t.col) = t.value;
        dense(t.col, t.row) = -t.value;
    }
    return DenseMatrix(std::move(dense), OperatorKind::skew);
}

LinearOperator make_operator(const DenseMatrix& matrix) {
    auto entries = std::make_shared<const Matrix>(matrix.entries());
    if (matrix.is_skew()) {
        return LinearOperator::skew(matrix.dim(), [entries](const Vector& v) -> Vector { return *entries * v; });
    }
    return LinearOperator::general(
        matrix.dim(), [entries](const Vector& v) -> Vector { return *entries * v; },
        [entries](const Vector& v) -> Vector { return entries->transpose() * v; });
}

LinearOperator make_operator(const SparseSkewMatrix& matrix) {
    auto shared = std::make_shared<const SparseSkewMatrix>(matrix);
    return LinearOperator::skew(matrix.dim(), [shared](const Vector& v) { return shared->apply(v); });
}

LinearOperator identity_operator(Index n) {
    auto id = [](const Vector& v) -> Vector { return v; };
    return LinearOperator::general(n, id, id);
}

LinearOperator diagonal_inverse(const Vector& d) {
    if ((d.array() == 0.0).any()) throw InvalidArgument("diagonal preconditioner has a zero entry");
    auto inv = std::make_shared<const Vector>(d.cwiseInverse());
    auto act = [inv](const Vector& v) -> Vector { return inv->cwiseProduct(v); };
    return LinearOperator::general(d.size(), act, act);
}

LinearOperator lower_triangular_inverse(const Matrix& lower) {
    if (lower.rows() != lower.cols()) throw InvalidArgument("triangular factor must be square");
    if ((lower.diagonal().array() == 0.0).any()) throw InvalidArgument("triangular factor is singular");
    auto factor = std::make_shared<const Matrix>(lower.triangularView<Eigen::Lower>());
    return LinearOperator::general(
        lower.rows(),
        [factor](const Vector& v) -> Vector { return factor->triangularView<Eigen::Lower>().solve(v); },
        [factor](const Vector& v) -> Vector {
            return factor->transpose().triangularView<Eigen::Upper>().solve(v);
        });
}

LinearOperator transposed(const LinearOperator& op) {
    if (op.is_skew()) {
        return LinearOperator::skew(op.dim(), [op](const Vector& v) { return op.apply_transpose(v); });
    }
    return LinearOperator::general(
        op.dim(), [op](const Vector& v) { return op.apply_transpose(v); },
        [op](const Vector& v) { return op.apply(v); });
}

LinearOperator squared(const LinearOperator& op) {
    return LinearOperator::general(
        op.dim(), [op](const Vector& v) { return op.apply(op.apply(v)); },
        [op](const Vector& v) { return op.apply_transpose(op.apply_transpose(v)); });
}

LinearOperator counted(const LinearOperator& op, std::shared_ptr<std::atomic<long>> counter) {
    if (op.is_skew()) {
        return LinearOperator::skew(op.dim(), [op, counter](const Vector& v) {
            ++*counter;
            return op.apply(v);
        });
    }
    return LinearOperator::general(
        op.dim(),
        [op, counter](const Vector& v) {
            ++*counter;
            return op.apply(v);
        },
        [op, counter](const Vector& v) {
            ++*counter;
            return op.apply_transpose(v);
        });
}

}  // namespace skewkrylov
