#pragma once

#include <cstdint>
#include <optional>

#include "skewkrylov/operator.hpp"
#include "skewkrylov/types.hpp"

namespace skewkrylov {

/// Throws InvalidArgument unless v has at least two entries, all finite.
void require_valid_vector(const Vector& v, const char* what);

/// (B - B^t)/2 with an exactly zero diagonal, tagged skew. B must have even dimension.
DenseMatrix skew_symmetrize(const DenseMatrix& b);

/// Strict-upper extraction of an exactly skew dense matrix. Zero entries are dropped.
SparseSkewMatrix to_sparse_skew(const DenseMatrix& a);

/// Outcome of a sampled skew-symmetry test.
struct SkewCheck {
    bool passed = false;
    double max_quadratic = 0.0;   ///< max |z^t A z| / (||A||_est ||z||^2)
    double max_transpose = 0.0;   ///< max ||A^t z + A z|| / ||A z||
    double norm_estimate = 0.0;
    std::optional<int> violating_sample;
};

/// Largest absolute row sum of the dense form.
double max_row_sum(const DenseMatrix& a);

/// 2-norm estimate for a matrix-free operator: 20 power iterations on A^t A.
double estimate_norm(const LinearOperator& op, std::uint64_t seed = 0);

/// Draws sample_count seeded vectors and checks z^t A z = 0 and A^t z = -A z to tol.
SkewCheck verify_skew(const LinearOperator& op, int sample_count, std::uint64_t seed, double tol);

struct GeneratorOptions {
    /// Instances with sigma_min / sigma_max below this are treated as singular and redrawn.
    double min_reciprocal_condition = 1e-10;
    int max_attempts = 200;
};

/// Random sparse skew matrix: each strictly-upper entry kept with probability `density`,
/// values uniform in [-1, 1]. Attempt k > 0 reseeds with derive_seed(seed, k).
SparseSkewMatrix random_skew(Index n, double density, std::uint64_t seed, const GeneratorOptions& options = {});

/// Full-pivot LU solve. Throws SingularMatrixError when the reciprocal condition
/// estimate falls below singular_rcond.
Vector dense_solve(const DenseMatrix& a, const Vector& b, double singular_rcond = 1e-14);

/// Reciprocal 1-norm condition estimate from the LU factorization (0 for singular).
double reciprocal_condition(const DenseMatrix& a);

/// Singular values in decreasing order.
Vector singular_values(const Matrix& a);

/// sigma_max / sigma_min; infinity for singular input.
double condition_number(const DenseMatrix& a);

}  // namespace skewkrylov
