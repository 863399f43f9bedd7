#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "skewkrylov/errors.hpp"
#include "skewkrylov/krylov.hpp"
#include "skewkrylov/operator_core.hpp"
#include "skewkrylov/precondition.hpp"
#include "skewkrylov/random.hpp"
#include "skewkrylov/solvers.hpp"

namespace sk = skewkrylov;
using sk::Index;
using sk::Matrix;
using sk::Vector;

namespace {

sk::LinearOperator skew_op(const Matrix& a) { return sk::make_operator(sk::DenseMatrix(a, sk::OperatorKind::skew)); }

struct Instance {
    Matrix dense;
    sk::LinearOperator op;
    Vector b;
    Vector x;
};

Instance skew_instance(Index n, double density, std::uint64_t seed) {
    const auto a = sk::random_skew(n, density, seed);
    sk::Rng rng(sk::derive_seed(seed, 1000));
    Vector b = rng.uniform_vector(n, -1, 1);
    Matrix dense = a.to_dense().entries();
    Vector x = dense.fullPivLu().solve(b);
    return {dense, sk::make_operator(a), b, x};
}

Matrix krylov_q(const Instance& inst, Index m) {
    return sk::oracle::orthonormal_columns(sk::oracle::krylov_matrix(inst.dense, inst.b, m));
}

}  // namespace

TEST(Galerkin, OddDimensionsDoNotExist) {
    const auto inst = skew_instance(50, 0.3, 2);
    for (Index m = 1; m <= 9; m += 2) {
        const auto g = sk::galerkin_reference(inst.op, inst.b, m);
        EXPECT_FALSE(g.exists) << "m=" << m;
        EXPECT_TRUE(g.x.size() == 0);
        EXPECT_LE(g.sigma_min, 1e-12 * g.sigma_max);
    }
}

TEST(Galerkin, EvenDimensionsSatisfyOrthogonality) {
    const auto inst = skew_instance(50, 0.3, 2);
    for (Index m = 2; m <= 10; m += 2) {
        const auto g = sk::galerkin_reference(inst.op, inst.b, m);
        ASSERT_TRUE(g.exists) << "m=" << m;
        // Independent check: the residual is orthogonal to an explicit power basis.
        const Matrix q = krylov_q(inst, m);
        const Vector r = inst.b - inst.dense * g.x;
        EXPECT_LE((q.transpose() * r).cwiseAbs().maxCoeff(), 1e-10 * inst.b.norm()) << "m=" << m;
        EXPECT_LE((g.x - sk::oracle::project(q, g.x)).norm(), 1e-8 * g.x.norm());
    }
}

TEST(Galerkin, OneDimensionalHasZeroProjection) {
    Matrix a(2, 2);
    a << 0, 1, -1, 0;
    const auto g = sk::galerkin_reference(skew_op(a), (Vector(2) << 1, 0).finished(), 1);
    EXPECT_FALSE(g.exists);
    EXPECT_EQ(g.sigma_max, 0.0);
}

TEST(Galerkin, BeyondGradeIsTruncated) {
    Matrix a(2, 2);
    a << 0, 1, -1, 0;
    try {
        sk::galerkin_reference(skew_op(a), (Vector(2) << 1, 0).finished(), 3);
        FAIL() << "expected BasisTruncatedError";
    } catch (const sk::BasisTruncatedError& e) {
        EXPECT_EQ(e.requested(), 3);
        EXPECT_EQ(e.grade(), 2);
    }
}

TEST(Minres, OneDimensionalIsZero) {
    const auto inst = skew_instance(20, 0.5, 1);
    const Vector x1 = sk::minres_reference(inst.op, inst.b, 1);
    EXPECT_LE(x1.norm(), 1e-14 * inst.x.norm());
}

TEST(Minres, OddStepStalls) {
    const auto inst = skew_instance(50, 0.3, 5);
    for (Index q = 1; q <= 4; ++q) {
        const Vector even = sk::minres_reference(inst.op, inst.b, 2 * q);
        const Vector odd = sk::minres_reference(inst.op, inst.b, 2 * q + 1);
        EXPECT_LE(sk::oracle::relative(odd, even), 1e-8) << "q=" << q;
    }
}

TEST(Minres, MatchesExplicitLeastSquaresAndBeatsCompetitors) {
    const auto inst = skew_instance(50, 0.3, 6);
    sk::Rng rng(6);
    for (Index m = 2; m <= 8; ++m) {
        const Vector x = sk::minres_reference(inst.op, inst.b, m);
        const Matrix q = krylov_q(inst, m);
        const Vector expected = q * sk::oracle::least_squares(inst.dense * q, inst.b);
        EXPECT_LE(sk::oracle::relative(x, expected), 1e-8) << "m=" << m;
        const double best = (inst.b - inst.dense * x).norm();
        for (int trial = 0; trial < 100; ++trial) {
            const Vector z = x + 0.1 * q * rng.normal_vector(m);
            EXPECT_GE((inst.b - inst.dense * z).norm(), best * (1 - 1e-12));
        }
    }
}

TEST(Oracles, TwoByTwo) {
    Matrix a(2, 2);
    a << 0, 1, -1, 0;
    const Vector b = (Vector(2) << 1, 0).finished();
    const Vector x = (Vector(2) << 0, 1).finished();
    EXPECT_LE((sk::error_minimizer_oracle(skew_op(a), b, x, 1) - x).norm(), 1e-15);
    EXPECT_LE((sk::residual_minimizer_oracle(skew_op(a), b, 1) - x).norm(), 1e-15);
}

TEST(Oracles, ExactAtGrade) {
    const Matrix a = sk::oracle::rotation_blocks({1.0, 2.0});
    const Vector b = (Vector(4) << 1, 0, 1, 0).finished();
    const Vector x = (Vector(4) << 0, 1, 0, 0.5).finished();
    EXPECT_LE((sk::error_minimizer_oracle(skew_op(a), b, x, 2) - x).norm(), 1e-12);
    EXPECT_LE((b - a * sk::residual_minimizer_oracle(skew_op(a), b, 2)).norm(), 1e-12);
}

TEST(Oracles, AgreeWithRecurrences) {
    const auto inst = skew_instance(50, 0.3, 8);
    sk::SolverConfig cfg;
    cfg.rtol = 0.0;
    cfg.max_iter = 5;
    cfg.record_history = true;
    const auto e = sk::cgne_skew(inst.op, inst.b, cfg);
    const auto r = sk::cgnr_skew(inst.op, inst.b, cfg);
    for (Index q = 1; q <= 5; ++q) {
        const auto k = static_cast<std::size_t>(q - 1);
        EXPECT_LE(sk::oracle::relative(e.history.iterates[k], sk::error_minimizer_oracle(inst.op, inst.b, inst.x, q)),
                  1e-8);
        EXPECT_LE(sk::oracle::relative(r.history.iterates[k], sk::residual_minimizer_oracle(inst.op, inst.b, q)),
                  1e-8);
    }
}

TEST(Oracles, CgneBeatsRandomCompetitors) {
    const auto inst = skew_instance(50, 0.3, 9);
    const Matrix a2 = inst.dense * inst.dense;
    const Vector ab = inst.dense * inst.b;
    sk::Rng rng(9);
    for (Index q = 1; q <= 5; ++q) {
        const Vector xq = sk::error_minimizer_oracle(inst.op, inst.b, inst.x, q);
        const double best = (xq - inst.x).norm();
        const Matrix basis = sk::oracle::orthonormal_columns(sk::oracle::krylov_matrix(a2, ab, q));
        for (int trial = 0; trial < 100; ++trial) {
            const Vector z = xq + 0.1 * basis * rng.normal_vector(q);
            EXPECT_GE((z - inst.x).norm(), best * (1 - 1e-12));
        }
    }
}

TEST(Precondition, IdentityIsTransparent) {
    const auto inst = skew_instance(10, 0.5, 3);
    const auto sys = sk::precondition(inst.op, inst.b, sk::identity_operator(10), sk::identity_operator(10));
    EXPECT_FALSE(sys.op.is_skew());
    sk::Rng rng(1);
    const Vector v = rng.normal_vector(10);
    EXPECT_EQ(sys.op.apply(v), inst.op.apply(v));
    EXPECT_EQ(sys.op.apply_transpose(v), inst.op.apply_transpose(v));
    EXPECT_EQ(sys.rhs, inst.b);
    EXPECT_EQ(sys.recover(v), v);
}

TEST(Precondition, DiagonalLeftScalingActions) {
    const auto inst = skew_instance(50, 0.3, 10);
    sk::Rng rng(10);
    Vector d(50);
    for (Index i = 0; i < 50; ++i) d[i] = (rng.bernoulli(0.5) ? 1.0 : -1.0) * rng.uniform(0.5, 2.0);
    const auto sys = sk::precondition(inst.op, inst.b, sk::diagonal_inverse(d), sk::identity_operator(50));
    const Matrix explicit_op = d.cwiseInverse().asDiagonal() * inst.dense;
    const Vector v = rng.normal_vector(50);
    EXPECT_LE((sys.op.apply(v) - explicit_op * v).norm(), 1e-14 * (explicit_op * v).norm());
    EXPECT_LE((sys.op.apply_transpose(v) - explicit_op.transpose() * v).norm(),
              1e-14 * (explicit_op.transpose() * v).norm());
    EXPECT_EQ(sys.rhs, inst.b.cwiseProduct(d.cwiseInverse()));
    // Exact-arithmetic CGNR reaches x at q = n: least squares over an explicit basis of the full space.
    const Matrix n_op = explicit_op.transpose() * explicit_op;
    const Matrix q = sk::oracle::orthonormal_columns(sk::oracle::krylov_matrix(n_op, explicit_op.transpose() * sys.rhs, 50));
    const Vector xt = q * sk::oracle::least_squares(explicit_op * q, sys.rhs);
    EXPECT_LE(sk::oracle::relative(sys.recover(xt), inst.x), 1e-8);
}

TEST(Precondition, DiagonalLeftScalingWithCgnrOnBlocks) {
    const Matrix a = sk::oracle::rotation_blocks({1.0, 2.0, 3.0});
    const Vector b = (Vector(6) << 1, -1, 0.5, 2, 0, 1).finished();
    const Vector x = a.fullPivLu().solve(b);
    const Vector d = (Vector(6) << 0.5, -2, 1.5, 0.75, -1, 1.25).finished();
    const auto sys = sk::precondition(skew_op(a), b, sk::diagonal_inverse(d), sk::identity_operator(6));
    for (auto solver : {&sk::cgnr_general, &sk::cgne_general}) {
        const auto r = solver(sys.op, sys.rhs, sk::SolverConfig::for_dimension(6, 1e-12), nullptr);
        EXPECT_EQ(r.termination, sk::Termination::converged);
        EXPECT_LE(sk::oracle::relative(sys.recover(r.x), x), 1e-10);
    }
}

TEST(Precondition, CongruencePreservesSkewness) {
    // M = L L^t with L lower triangular; L^{-1} A L^{-t} is skew again.
    const auto inst = skew_instance(30, 0.4, 11);
    sk::Rng rng(11);
    Matrix g(30, 30);
    for (Index i = 0; i < 30; ++i)
        for (Index j = 0; j < 30; ++j) g(i, j) = rng.normal();
    const Matrix m = g * g.transpose() + 30.0 * Matrix::Identity(30, 30);
    const Matrix l = m.llt().matrixL();
    const auto linv = sk::lower_triangular_inverse(l);
    const auto general = sk::precondition(inst.op, inst.b, linv, sk::transposed(linv));
    EXPECT_TRUE(sk::verify_skew(general.op, 16, 0, 1e-12).passed);

    const auto sys = sk::precondition(inst.op, inst.b, linv, sk::transposed(linv), sk::OperatorKind::skew);
    EXPECT_TRUE(sys.op.is_skew());
    const auto r = sk::cgne_skew(sys.op, sys.rhs, sk::SolverConfig::for_dimension(30, 1e-12));
    EXPECT_EQ(r.termination, sk::Termination::converged);
    EXPECT_LE(sk::oracle::relative(sys.recover(r.x), inst.x), 1e-8);
}

TEST(Precondition, DimensionMismatch) {
    const auto inst = skew_instance(10, 0.5, 3);
    EXPECT_THROW(sk::precondition(inst.op, inst.b, sk::identity_operator(8), sk::identity_operator(10)),
                 sk::InvalidArgument);
    EXPECT_THROW(sk::precondition(inst.op, Vector::Ones(4), sk::identity_operator(10), sk::identity_operator(10)),
                 sk::InvalidArgument);
    EXPECT_THROW(sk::diagonal_inverse((Vector(2) << 1, 0).finished()), sk::InvalidArgument);
}
