#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "skewkrylov/operator.hpp"
#include "skewkrylov/types.hpp"

namespace skewkrylov {

struct SolverConfig {
    double rtol = 1e-10;          ///< stop when ||b - A x_q|| <= rtol ||b|| (true residual)
    int max_iter = 1;             ///< at most the operator dimension
    double breakdown_tol = 1e-30; ///< alpha denominators below breakdown_tol * ||b||^2 end the run
    bool record_history = false;  ///< keep every iterate x_q (and y_q for general CGNE)

    static SolverConfig for_dimension(Index n, double rtol = 1e-10) {
        SolverConfig cfg;
        cfg.rtol = rtol;
        cfg.max_iter = static_cast<int>(n);
        return cfg;
    }
};

/// Throws InvalidArgument unless 0 <= rtol < 1 and 1 <= max_iter <= n.
void validate(const SolverConfig& cfg, Index n);

enum class Termination { converged, max_iter, breakdown };

std::string_view to_string(Termination t);

struct IterationRecord {
    int q = 0;
    double residual_norm = 0.0;       ///< ||r_q|| from the recurrence
    double true_residual_norm = 0.0;  ///< ||b - A x_q||, recomputed
    std::optional<double> error_norm; ///< ||x_q - x|| when a reference solution was supplied
    double alpha = 0.0;
    double beta = 0.0;
    long applies = 0;                 ///< cumulative operator applications up to this iterate
};

struct IterateHistory {
    std::vector<IterationRecord> records;
    std::vector<Vector> iterates;  ///< x_1, x_2, ... when record_history is set
};

struct SolveResult {
    Vector x;
    int iterations = 0;
    Termination termination = Termination::max_iter;
    IterateHistory history;
    std::vector<Vector> y_history;  ///< general CGNE only: y_q with x_q = A^t y_q
    long applies = 0;
};

/// CGNE (Craig's method) specialised to A^t = -A: search directions p_q = -A r_q + beta_q p_{q-1}.
/// x_q lies in K_q(A^2, Ab) and minimises ||z - x|| there.
SolveResult cgne_skew(const LinearOperator& a, const Vector& b, const SolverConfig& cfg,
                      const Vector* reference = nullptr);

/// CGNR (CGLS) specialised to A^t = -A. x_q minimises ||b - A z|| over K_q(A^2, Ab).
SolveResult cgnr_skew(const LinearOperator& a, const Vector& b, const SolverConfig& cfg,
                      const Vector* reference = nullptr);

/// CGNE for a general nonsingular A; search directions built from A^t r_q.
SolveResult cgne_general(const LinearOperator& a, const Vector& b, const SolverConfig& cfg,
                         const Vector* reference = nullptr);

/// CGNR for a general nonsingular A.
SolveResult cgnr_general(const LinearOperator& a, const Vector& b, const SolverConfig& cfg,
                         const Vector* reference = nullptr);

/// Galerkin iterate on K_m(A, b), or a record of why it does not exist.
struct GalerkinResult {
    bool exists = false;
    Vector x;               ///< empty when !exists
    double sigma_min = 0.0; ///< extreme singular values of H = Q^t A Q
    double sigma_max = 0.0;
    Index m = 0;
};

/// Solves the projected m x m system H c = Q^t b. H is declared singular when
/// sigma_min(H) <= singular_tol * sigma_max(H). Throws BasisTruncatedError if
/// K_m(A, b) has dimension below m.
GalerkinResult galerkin_reference(const LinearOperator& a, const Vector& b, Index m, double singular_tol = 1e-12);

/// argmin over K_m(A, b) of ||b - A z|| by least squares on the images A q_i.
Vector minres_reference(const LinearOperator& a, const Vector& b, Index m);

/// Orthogonal projection of the exact solution onto K_q(A^2, Ab).
Vector error_minimizer_oracle(const LinearOperator& a, const Vector& b, const Vector& solution, Index q);

/// argmin over K_q(A^2, Ab) of ||b - A z|| by least squares.
Vector residual_minimizer_oracle(const LinearOperator& a, const Vector& b, Index q);

}  // namespace skewkrylov
