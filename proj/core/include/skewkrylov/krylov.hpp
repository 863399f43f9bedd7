#pragma once

#include "skewkrylov/operator.hpp"
#include "skewkrylov/types.hpp"

namespace skewkrylov {

/// Orthonormal basis of K_m(G, s) = span{s, Gs, ..., G^{m-1}s}.
///
/// Column k spans the new direction G^k s; leading k columns span K_k(G, s).
/// hessenberg is the (dim+1) x dim coefficient array from the orthogonalization,
/// so G Q = Q_{dim+1} H whenever the basis was not truncated.
struct KrylovBasis {
    LinearOperator generator;
    Vector seed;
    Matrix columns;
    Matrix hessenberg;
    bool grade_reached = false;

    Index dim() const noexcept { return columns.cols(); }
    Index rows() const noexcept { return columns.rows(); }

    /// Basis of K_k(G, s) for k <= dim(), sharing the leading columns.
    KrylovBasis leading(Index k) const;

    /// Zero-dimensional basis; K_0 is the trivial subspace.
    static KrylovBasis empty(const LinearOperator& generator, const Vector& seed);
};

/// Arnoldi with modified Gram-Schmidt and one unconditional reorthogonalization pass.
///
/// Stops with grade_reached = true once the orthogonalized residual drops to
/// breakdown_tol times max_{i <= j} ||G q_i|| (or the basis fills the whole space).
/// The returned dimension is min(m, grade).
KrylovBasis build_basis(const LinearOperator& generator, const Vector& seed, Index m, double breakdown_tol = 1e-12);

/// p = p_e + p_o with p_e in K_{ceil(m/2)}(A^2, b) and p_o in K_{floor(m/2)}(A^2, Ab).
struct EvenOddSplit {
    Vector even;
    Vector odd;
    Index even_dim = 0;
    Index odd_dim = 0;
};

/// Builds the two squared-generator bases for K_m(A, b) once and projects onto them.
class EvenOddProjector {
public:
    EvenOddProjector(const LinearOperator& a, const Vector& b, Index m, double breakdown_tol = 1e-12);

    /// Orthogonal projections onto the two sub-bases. No membership check.
    EvenOddSplit split(const Vector& p) const;

    const KrylovBasis& even_basis() const noexcept { return even_; }
    const KrylovBasis& odd_basis() const noexcept { return odd_; }
    Index m() const noexcept { return m_; }

private:
    Index m_;
    KrylovBasis even_;
    KrylovBasis odd_;
};

/// Splits p in K_m(A, b) (m = full.dim(), b = full.seed) into its even and odd parts.
/// Throws StaleBasisError if p is not in the subspace or the parts fail to reconstruct p,
/// both judged relative to ||p|| against tol.
EvenOddSplit split_even_odd(const Vector& p, const KrylovBasis& full, const LinearOperator& a, double tol = 1e-10);

/// max_{i,j} |u_i^t v_j|. Zero when either basis is empty.
double mutual_gram(const KrylovBasis& u, const KrylovBasis& v);

/// max_j |x^t v_j| / ||x||. Zero for an empty basis or x = 0.
double solution_orthogonality(const Vector& x, const KrylovBasis& v);

/// max |Q^t Q - I| entry.
double orthonormality_defect(const KrylovBasis& basis);

}  // namespace skewkrylov
