#include "skewkrylov/operator_core.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "skewkrylov/errors.hpp"
#include "skewkrylov/random.hpp"

namespace skewkrylov {

void require_valid_vector(const Vector& v, const char* what) {
    if (v.size() < 2) throw InvalidArgument(std::string(what) + " must have dimension >= 2");
    if (!v.allFinite()) throw InvalidArgument(std::string(what) + " has nonfinite entries");
}

DenseMatrix skew_symmetrize(const DenseMatrix& b) {
    if (b.dim() % 2 != 0) {
        throw InvalidArgument("skew_symmetrize: odd dimension " + std::to_string(b.dim()) +
                              " (odd skew matrices are singular)");
    }
    Matrix a = 0.5 * (b.entries() - b.entries().transpose());
    // Mirror the upper triangle so the result is skew to the bit.
    for (Index j = 0; j < a.cols(); ++j) {
        a(j, j) = 0.0;
        for (Index i = j + 1; i < a.rows(); ++i) a(i, j) = -a(j, i);
    }
    return DenseMatrix(std::move(a), OperatorKind::skew);
}

SparseSkewMatrix to_sparse_skew(const DenseMatrix& a) {
    if (!a.has_skew_structure()) throw InvalidArgument("to_sparse_skew: matrix is not exactly skew-symmetric");
    std::vector<Triplet> upper;
    for (Index i = 0; i < a.dim(); ++i) {
        for (Index j = i + 1; j < a.dim(); ++j) {
            if (a(i, j) != 0.0) upper.push_back({i, j, a(i, j)});
        }
    }
    return SparseSkewMatrix(a.dim(), std::move(upper));
}

double max_row_sum(const DenseMatrix& a) { return a.entries().cwiseAbs().rowwise().sum().maxCoeff(); }

double estimate_norm(const LinearOperator& op, std::uint64_t seed) {
    Rng rng(seed);
    Vector v = rng.normal_vector(op.dim());
    v.normalize();
    double estimate = 0.0;
    for (int step = 0; step < 20; ++step) {
        Vector av = op.apply(v);
        estimate = av.norm();
        Vector w = op.apply_transpose(av);
        const double wn = w.norm();
        if (wn == 0.0) break;
        v = w / wn;
    }
    return std::max(estimate, op.apply(v).norm());
}

SkewCheck verify_skew(const LinearOperator& op, int sample_count, std::uint64_t seed, double tol) {
    if (op.dim() < 2) throw InvalidArgument("verify_skew: operator dimension must be >= 2");
    if (sample_count < 1) throw InvalidArgument("verify_skew: sample_count must be positive");

    constexpr double inf = std::numeric_limits<double>::infinity();
    SkewCheck report;
    report.norm_estimate = estimate_norm(op, derive_seed(seed, 1));

    Rng rng(seed);
    for (int k = 0; k < sample_count; ++k) {
        const Vector z = rng.normal_vector(op.dim());
        const Vector az = op.apply(z);
        const Vector atz = op.apply_transpose(z);

        const double form = std::abs(z.dot(az));
        const double scale = report.norm_estimate * z.squaredNorm();
        const double quadratic = scale > 0.0 ? form / scale : (form == 0.0 ? 0.0 : inf);

        const double mismatch = (atz + az).norm();
        const double azn = az.norm();
        const double transpose = azn > 0.0 ? mismatch / azn : (mismatch == 0.0 ? 0.0 : inf);

        report.max_quadratic = std::max(report.max_quadratic, quadratic);
        report.max_transpose = std::max(report.max_transpose, transpose);
        if (!report.violating_sample && (quadratic > tol || transpose > tol)) report.violating_sample = k;
    }
    report.passed = report.max_quadratic <= tol && report.max_transpose <= tol;
    return report;
}

Vector singular_values(const Matrix& a) {
    if (a.size() == 0) return Vector();
    Eigen::BDCSVD<Matrix> svd(a);
    return svd.singularValues();
}

double condition_number(const DenseMatrix& a) {
    const Vector sv = singular_values(a.entries());
    const double smin = sv[sv.size() - 1];
    if (smin == 0.0) return std::numeric_limits<double>::infinity();
    return sv[0] / smin;
}

SparseSkewMatrix random_skew(Index n, double density, std::uint64_t seed, const GeneratorOptions& options) {
    if (n < 2 || n % 2 != 0) throw InvalidArgument("random_skew: n must be even and >= 2");
    if (!(density > 0.0 && density <= 1.0)) throw InvalidArgument("random_skew: density must lie in (0, 1]");

    for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
        Rng rng(attempt == 0 ? seed : derive_seed(seed, static_cast<std::uint64_t>(attempt)));
        std::vector<Triplet> upper;
        for (Index i = 0; i < n; ++i) {
            for (Index j = i + 1; j < n; ++j) {
                if (rng.bernoulli(density)) {
                    const double value = rng.uniform(-1.0, 1.0);
                    if (value != 0.0) upper.push_back({i, j, value});
                }
            }
        }
        if (upper.empty()) continue;
        SparseSkewMatrix candidate(n, std::move(upper));
        const Vector sv = singular_values(candidate.to_dense().entries());
        if (sv[sv.size() - 1] >= options.min_reciprocal_condition * sv[0]) return candidate;
    }
    throw InstanceGenerationError("random_skew(" + std::to_string(n) + ", " + std::to_string(density) + ", " +
                                  std::to_string(seed) + "): no nonsingular instance after " +
                                  std::to_string(options.max_attempts) + " attempts");
}

double reciprocal_condition(const DenseMatrix& a) {
    Eigen::FullPivLU<Matrix> lu(a.entries());
    if (!lu.isInvertible()) return 0.0;
    return lu.rcond();
}

Vector dense_solve(const DenseMatrix& a, const Vector& b, double singular_rcond) {
    if (b.size() != a.dim()) throw InvalidArgument("dense_solve: right-hand side does not conform");
    if (!b.allFinite()) throw InvalidArgument("dense_solve: right-hand side has nonfinite entries");

    Eigen::FullPivLU<Matrix> lu(a.entries());
    const double rcond = lu.isInvertible() ? lu.rcond() : 0.0;
    if (!(rcond >= singular_rcond)) {
        const double estimate = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
        throw SingularMatrixError("dense_solve: matrix is numerically singular (condition estimate " +
                                      std::to_string(estimate) + ")",
                                  estimate);
    }
    Vector x = lu.solve(b);
    // One step of iterative refinement.
    const Vector r = b - a.entries() * x;
    x += lu.solve(r);
    return x;
}

}  // namespace skewkrylov
