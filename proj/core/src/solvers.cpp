#include "skewkrylov/solvers.hpp"

#include <cmath>
#include <string>

#include "skewkrylov/errors.hpp"
#include "skewkrylov/operator_core.hpp"

namespace skewkrylov {

void validate(const SolverConfig& cfg, Index n) {
    if (!(cfg.rtol >= 0.0 && cfg.rtol < 1.0)) throw InvalidArgument("solver config: rtol must lie in [0, 1)");
    if (cfg.max_iter < 1) throw InvalidArgument("solver config: max_iter must be positive");
    if (cfg.max_iter > n) {
        throw InvalidArgument("solver config: max_iter " + std::to_string(cfg.max_iter) +
                              " exceeds the dimension " + std::to_string(n));
    }
    if (!(cfg.breakdown_tol >= 0.0)) throw InvalidArgument("solver config: breakdown_tol must be nonnegative");
}

std::string_view to_string(Termination t) {
    switch (t) {
        case Termination::converged: return "converged";
        case Termination::max_iter: return "max_iter";
        case Termination::breakdown: return "breakdown";
    }
    return "unknown";
}

namespace {

enum class Objective { error, residual };  // E and R rows of the recurrence
enum class Panel { general, skew };

SolveResult run_normal_equations(const LinearOperator& a, const Vector& b, const SolverConfig& cfg,
                                 const Vector* reference, Objective objective, Panel panel, const char* name) {
    validate(cfg, a.dim());
    if (b.size() != a.dim()) throw InvalidArgument(std::string(name) + ": right-hand side does not conform");
    require_valid_vector(b, "right-hand side");
    if (panel == Panel::skew && !a.is_skew()) {
        throw InvalidArgument(std::string(name) + " requires a skew-tagged operator");
    }
    if (reference && reference->size() != a.dim()) {
        throw InvalidArgument(std::string(name) + ": reference solution does not conform");
    }

    long applies = 0;
    auto apply = [&](const Vector& v) -> Vector {
        ++applies;
        return a.apply(v);
    };
    // A^t v on the general panel; -A v on the skew panel.
    auto apply_adjoint = [&](const Vector& v) -> Vector {
        ++applies;
        if (panel == Panel::skew) return -a.apply(v);
        return a.apply_transpose(v);
    };

    SolveResult result;
    result.x = Vector::Zero(a.dim());
    const double bnorm = b.norm();
    if (bnorm == 0.0) {
        result.termination = Termination::converged;
        return result;
    }

    const bool track_y = objective == Objective::error && panel == Panel::general && cfg.record_history;
    Vector r = b;
    Vector adj_r = apply_adjoint(r);
    Vector p = adj_r;
    Vector s, y;
    if (track_y) {
        s = r;
        y = Vector::Zero(a.dim());
    }

    double numerator = objective == Objective::error ? r.squaredNorm() : adj_r.squaredNorm();
    const double floor = cfg.breakdown_tol * bnorm * bnorm;
    result.termination = Termination::max_iter;

    for (int q = 1; q <= cfg.max_iter; ++q) {
        const Vector ap = apply(p);
        const double denominator = objective == Objective::error ? p.squaredNorm() : ap.squaredNorm();
        if (denominator <= floor) {
            result.termination = Termination::breakdown;
            break;
        }
        const double alpha = numerator / denominator;
        if (!std::isfinite(alpha)) throw DivergenceError(std::string(name) + ": alpha is not finite", q);

        result.x += alpha * p;
        r -= alpha * ap;
        if (track_y) y += alpha * s;

        adj_r = apply_adjoint(r);
        const double next = objective == Objective::error ? r.squaredNorm() : adj_r.squaredNorm();
        const double beta = next / numerator;
        if (!std::isfinite(beta)) throw DivergenceError(std::string(name) + ": beta is not finite", q);

        if (track_y) s = r + beta * s;
        p = adj_r + beta * p;

        IterationRecord record;
        record.q = q;
        record.residual_norm = r.norm();
        record.true_residual_norm = (b - apply(result.x)).norm();
        if (reference) record.error_norm = (result.x - *reference).norm();
        record.alpha = alpha;
        record.beta = beta;
        record.applies = applies;
        result.history.records.push_back(record);
        if (cfg.record_history) {
            result.history.iterates.push_back(result.x);
            if (track_y) result.y_history.push_back(y);
        }
        result.iterations = q;

        if (record.true_residual_norm <= cfg.rtol * bnorm) {
            result.termination = Termination::converged;
            break;
        }
        numerator = next;
    }
    result.applies = applies;
    return result;
}

}  // namespace

SolveResult cgne_skew(const LinearOperator& a, const Vector& b, const SolverConfig& cfg, const Vector* reference) {
    return run_normal_equations(a, b, cfg, reference, Objective::error, Panel::skew, "cgne_skew");
}

SolveResult cgnr_skew(const LinearOperator& a, const Vector& b, const SolverConfig& cfg, const Vector* reference) {
    return run_normal_equations(a, b, cfg, reference, Objective::residual, Panel::skew, "cgnr_skew");
}

SolveResult cgne_general(const LinearOperator& a, const Vector& b, const SolverConfig& cfg, const Vector* reference) {
    return run_normal_equations(a, b, cfg, reference, Objective::error, Panel::general, "cgne_general");
}

SolveResult cgnr_general(const LinearOperator& a, const Vector& b, const SolverConfig& cfg, const Vector* reference) {
    return run_normal_equations(a, b, cfg, reference, Objective::residual, Panel::general, "cgnr_general");
}

}  // namespace skewkrylov
