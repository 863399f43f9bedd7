#include "skewkrylov/krylov.hpp"

#include <cmath>
#include <string>

#include "skewkrylov/errors.hpp"

namespace skewkrylov {

KrylovBasis KrylovBasis::leading(Index k) const {
    if (k < 0 || k > dim()) throw InvalidArgument("KrylovBasis::leading: k out of range");
    if (k == 0) return empty(generator, seed);
    return KrylovBasis{generator, seed, columns.leftCols(k), hessenberg.topLeftCorner(k + 1, k),
                       grade_reached && k == dim()};
}

KrylovBasis KrylovBasis::empty(const LinearOperator& generator, const Vector& seed) {
    return KrylovBasis{generator, seed, Matrix(seed.size(), 0), Matrix(1, 0), false};
}

KrylovBasis build_basis(const LinearOperator& generator, const Vector& seed, Index m, double breakdown_tol) {
    if (seed.size() != generator.dim()) throw InvalidArgument("build_basis: seed does not conform to generator");
    if (m < 1) throw InvalidArgument("build_basis: m must be positive");
    const double seed_norm = seed.norm();
    if (!(seed_norm > 0.0)) throw InvalidArgument("build_basis: seed vector is zero");

    const Index n = generator.dim();
    const Index cap = std::min(m, n);
    Matrix q(n, cap);
    Matrix h = Matrix::Zero(cap + 1, cap);
    q.col(0) = seed / seed_norm;

    Index dim = cap;
    bool grade_reached = false;
    // Running lower bound on ||G||; a new direction smaller than breakdown_tol times it is rounding noise.
    double scale = 0.0;
    for (Index j = 0; j < cap; ++j) {
        Vector w = generator.apply(q.col(j));
        scale = std::max(scale, w.norm());
        for (int pass = 0; pass < 2; ++pass) {
            for (Index i = 0; i <= j; ++i) {
                const double coeff = q.col(i).dot(w);
                h(i, j) += coeff;
                w -= coeff * q.col(i);
            }
        }
        const double next = w.norm();
        h(j + 1, j) = next;
        if (next <= breakdown_tol * scale || j + 1 == n) {
            grade_reached = true;
            dim = j + 1;
            break;
        }
        if (j + 1 < cap) q.col(j + 1) = w / next;
    }

    return KrylovBasis{generator, seed, q.leftCols(dim), h.topLeftCorner(dim + 1, dim), grade_reached};
}

EvenOddProjector::EvenOddProjector(const LinearOperator& a, const Vector& b, Index m, double breakdown_tol)
    : m_(m),
      even_(KrylovBasis::empty(squared(a), b)),
      odd_(KrylovBasis::empty(squared(a), b)) {
    if (m < 0) throw InvalidArgument("EvenOddProjector: m must be nonnegative");
    const LinearOperator a2 = squared(a);
    const Index even_dim = (m + 1) / 2;
    const Index odd_dim = m / 2;
    if (even_dim > 0) even_ = build_basis(a2, b, even_dim, breakdown_tol);
    const Vector ab = a.apply(b);
    odd_ = odd_dim > 0 ? build_basis(a2, ab, odd_dim, breakdown_tol) : KrylovBasis::empty(a2, ab);
}

EvenOddSplit EvenOddProjector::split(const Vector& p) const {
    EvenOddSplit out;
    out.even_dim = even_.dim();
    out.odd_dim = odd_.dim();
    out.even = even_.columns * (even_.columns.transpose() * p);
    out.odd = odd_.columns * (odd_.columns.transpose() * p);
    return out;
}

EvenOddSplit split_even_odd(const Vector& p, const KrylovBasis& full, const LinearOperator& a, double tol) {
    if (p.size() != full.rows()) throw InvalidArgument("split_even_odd: vector does not conform to basis");
    const double pn = p.norm();
    if (pn == 0.0) {
        EvenOddSplit zero{Vector::Zero(p.size()), Vector::Zero(p.size()), (full.dim() + 1) / 2, full.dim() / 2};
        return zero;
    }

    const Vector outside = p - full.columns * (full.columns.transpose() * p);
    const double membership = outside.norm() / pn;
    if (membership > tol) {
        throw StaleBasisError("split_even_odd: vector lies outside K_m(A, b) (relative residual " +
                                  std::to_string(membership) + ")",
                              membership);
    }

    EvenOddProjector projector(a, full.seed, full.dim());
    EvenOddSplit parts = projector.split(p);
    const double reconstruction = (p - parts.even - parts.odd).norm() / pn;
    if (reconstruction > tol) {
        throw StaleBasisError("split_even_odd: even and odd parts do not reconstruct the vector (relative residual " +
                                  std::to_string(reconstruction) + ")",
                              reconstruction);
    }
    return parts;
}

double mutual_gram(const KrylovBasis& u, const KrylovBasis& v) {
    if (u.rows() != v.rows()) throw InvalidArgument("mutual_gram: bases have different ambient dimensions");
    if (u.dim() == 0 || v.dim() == 0) return 0.0;
    return (u.columns.transpose() * v.columns).cwiseAbs().maxCoeff();
}

double solution_orthogonality(const Vector& x, const KrylovBasis& v) {
    if (x.size() != v.rows()) throw InvalidArgument("solution_orthogonality: vector does not conform to basis");
    const double xn = x.norm();
    if (v.dim() == 0 || xn == 0.0) return 0.0;
    return (v.columns.transpose() * x).cwiseAbs().maxCoeff() / xn;
}

double orthonormality_defect(const KrylovBasis& basis) {
    if (basis.dim() == 0) return 0.0;
    const Matrix gram = basis.columns.transpose() * basis.columns;
    return (gram - Matrix::Identity(basis.dim(), basis.dim())).cwiseAbs().maxCoeff();
}

}  // namespace skewkrylov
