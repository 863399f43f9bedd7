#include <string>

#include "skewkrylov/errors.hpp"
#include "skewkrylov/krylov.hpp"
#include "skewkrylov/operator_core.hpp"
#include "skewkrylov/solvers.hpp"

// Reference solvers: explicit orthonormal bases plus dense factorizations of the
// small projected problems. These are oracles, not production paths.

namespace skewkrylov {

namespace {

KrylovBasis basis_of_exact_dim(const LinearOperator& generator, const Vector& seed, Index m, const char* name) {
    if (m < 1) throw InvalidArgument(std::string(name) + ": subspace dimension must be positive");
    KrylovBasis basis = build_basis(generator, seed, m);
    if (basis.dim() < m) {
        throw BasisTruncatedError(std::string(name) + ": requested dimension " + std::to_string(m) +
                                      " exceeds the grade " + std::to_string(basis.dim()),
                                  m, basis.dim());
    }
    return basis;
}

Matrix image_of(const LinearOperator& a, const Matrix& columns) {
    Matrix images(columns.rows(), columns.cols());
    for (Index j = 0; j < columns.cols(); ++j) images.col(j) = a.apply(columns.col(j));
    return images;
}

void check_rhs(const LinearOperator& a, const Vector& b, const char* name) {
    if (b.size() != a.dim()) throw InvalidArgument(std::string(name) + ": right-hand side does not conform");
    require_valid_vector(b, "right-hand side");
}

}  // namespace

GalerkinResult galerkin_reference(const LinearOperator& a, const Vector& b, Index m, double singular_tol) {
    check_rhs(a, b, "galerkin_reference");
    const KrylovBasis basis = basis_of_exact_dim(a, b, m, "galerkin_reference");
    const Matrix& q = basis.columns;
    Matrix h = q.transpose() * image_of(a, q);
    if (a.is_skew()) {
        // Q^t A Q is skew for skew A; keep only that part so odd m gives an exactly singular
        // skew matrix (m = 1: exactly zero) instead of a rounding-level one.
        h = (0.5 * (h - h.transpose())).eval();
        h.diagonal().setZero();
    }

    GalerkinResult result;
    result.m = m;
    const Vector sv = singular_values(h);
    result.sigma_max = sv[0];
    result.sigma_min = sv[sv.size() - 1];
    result.exists = result.sigma_min > singular_tol * result.sigma_max;
    if (result.exists) {
        const Vector coeffs = h.fullPivLu().solve(q.transpose() * b);
        result.x = q * coeffs;
    }
    return result;
}

Vector minres_reference(const LinearOperator& a, const Vector& b, Index m) {
    check_rhs(a, b, "minres_reference");
    const KrylovBasis basis = basis_of_exact_dim(a, b, m, "minres_reference");
    const Matrix images = image_of(a, basis.columns);
    const Vector coeffs = images.colPivHouseholderQr().solve(b);
    return basis.columns * coeffs;
}

Vector error_minimizer_oracle(const LinearOperator& a, const Vector& b, const Vector& solution, Index q) {
    check_rhs(a, b, "error_minimizer_oracle");
    if (solution.size() != a.dim()) throw InvalidArgument("error_minimizer_oracle: solution does not conform");
    const KrylovBasis basis = basis_of_exact_dim(squared(a), a.apply(b), q, "error_minimizer_oracle");
    return basis.columns * (basis.columns.transpose() * solution);
}

Vector residual_minimizer_oracle(const LinearOperator& a, const Vector& b, Index q) {
    check_rhs(a, b, "residual_minimizer_oracle");
    const KrylovBasis basis = basis_of_exact_dim(squared(a), a.apply(b), q, "residual_minimizer_oracle");
    const Matrix images = image_of(a, basis.columns);
    const Vector coeffs = images.colPivHouseholderQr().solve(b);
    return basis.columns * coeffs;
}

}  // namespace skewkrylov
