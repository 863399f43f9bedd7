#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "skewkrylov/operator.hpp"
#include "skewkrylov/solvers.hpp"
#include "skewkrylov/types.hpp"

namespace skewkrylov {

struct InstanceDescriptor {
    std::string source;  ///< "random", a file path, or a free-form label
    Index n = 0;
    std::optional<double> density;
    std::optional<std::uint64_t> seed;

    friend bool operator==(const InstanceDescriptor&, const InstanceDescriptor&) = default;
};

/// One measured deviation. pass <=> deviation <= tolerance (NaN never passes).
struct CheckRecord {
    std::string check;
    std::map<std::string, long long> at;  ///< e.g. {"s": 2, "t": 3}, {"q": 1}, {"m": 4}
    double deviation = 0.0;
    double tolerance = 0.0;
    bool pass = false;

    friend bool operator==(const CheckRecord&, const CheckRecord&) = default;
};

/// One row of a side-by-side method comparison.
struct MethodRow {
    std::string method;
    int q = 0;  ///< iteration for recurrences, subspace dimension m for reference solvers
    bool exists = true;
    std::optional<double> residual_norm;
    std::optional<double> error_norm;
    std::optional<double> alpha;
    std::optional<double> beta;
    long applies = 0;

    friend bool operator==(const MethodRow&, const MethodRow&) = default;
};

struct FamilySummary {
    std::size_t count = 0;
    std::size_t failures = 0;
    double worst = 0.0;
    double mean = 0.0;
    double best = 0.0;
};

struct RunReport {
    InstanceDescriptor instance;
    std::map<std::string, double> config;
    std::vector<CheckRecord> checks;
    std::vector<MethodRow> table;
    std::vector<std::string> notes;
    long skipped = 0;

    void add(std::string check, std::map<std::string, long long> at, double deviation, double tolerance);
    bool passed() const;
    /// Worst/mean/best deviation per check name.
    std::map<std::string, FamilySummary> summary() const;
    /// Appends the other report's checks, rows, notes and config (instance must match).
    void merge(const RunReport& other);

    friend bool operator==(const RunReport&, const RunReport&) = default;
};

/// A skew (or deliberately non-skew) instance together with its dense oracle solution.
struct Problem {
    InstanceDescriptor descriptor;
    LinearOperator op;
    Vector rhs;
    Vector solution;
    double condition = 0.0;  ///< sigma_max / sigma_min of the dense form
};

Problem make_problem(const SparseSkewMatrix& a, Vector rhs, InstanceDescriptor descriptor);
Problem make_problem(const DenseMatrix& a, Vector rhs, InstanceDescriptor descriptor);

/// random_skew(n, density, seed) with rhs uniform in [-1, 1] drawn from derive_seed(seed, 1000).
Problem random_problem(Index n, double density, std::uint64_t seed);

inline constexpr double kEqualityTolerance = 1e-8;
inline constexpr double kIdentityTolerance = 1e-10;
inline constexpr double kConditionReference = 1e3;

/// tol * max(1, condition / 1e3).
double scaled_tolerance(double tol, double condition);

/// Orthogonality of K_s(A^2, Ab) against K_t(A^2, b) and of x against K_t(A^2, b).
RunReport check_lemma(const Problem& problem, Index s_max, Index t_max, double tol = kIdentityTolerance);

/// Galerkin vs CGNE and minimum residual vs CGNR iterates for q = 1..q_max, plus the
/// orthogonality certificates the equalities rest on.
RunReport check_theorem_equal(const Problem& problem, Index q_max, double tol = kEqualityTolerance);

/// Pythagorean identities for `trials` random z in K_m(A, b).
RunReport check_theorem_nobetter(const Problem& problem, Index m, int trials, std::uint64_t seed,
                                 double tol = kIdentityTolerance);

/// CGNE, CGNR and both reference solvers side by side with apply counts.
RunReport compare_methods(const Problem& problem, const SolverConfig& cfg);

}  // namespace skewkrylov
