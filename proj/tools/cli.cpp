#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>

#include <CLI11.hpp>
#include <json.hpp>

#include "skewkrylov/skewkrylov.hpp"

namespace skewkrylov::cli {

namespace {

using nlohmann::json;

/// Thrown for semantic flag errors found after CLI11 parsing (odd n, bad spec strings).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RandomSpec {
    Index n = 0;
    double density = 0.0;
    std::uint64_t seed = 0;
};

RandomSpec parse_random_spec(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
    if (parts.size() != 3) throw UsageError("--random expects n,density,seed");
    RandomSpec spec;
    try {
        spec.n = std::stoll(parts[0]);
        spec.density = std::stod(parts[1]);
        spec.seed = std::stoull(parts[2]);
    } catch (const std::exception&) {
        throw UsageError("--random expects n,density,seed");
    }
    if (spec.n < 2 || spec.n % 2 != 0) throw UsageError("--random: n must be even and >= 2");
    if (!(spec.density > 0.0 && spec.density <= 1.0)) throw UsageError("--random: density must lie in (0, 1]");
    return spec;
}

/// Options shared by subcommands that need an instance.
struct InstanceOptions {
    std::string matrix;
    std::string random;
    std::string rhs = "random";

    void attach(CLI::App* app) {
        auto* m = app->add_option("--matrix", matrix, "Matrix Market file");
        auto* r = app->add_option("--random", random, "Generated instance n,density,seed");
        m->excludes(r);
        app->add_option("--rhs", rhs, "Right-hand side: ones, random[:SEED], or a Matrix Market vector file");
    }
};

Vector resolve_rhs(const std::string& spec, Index n, std::uint64_t default_seed) {
    if (spec == "ones") return Vector::Ones(n);
    if (spec.rfind("random", 0) == 0) {
        std::uint64_t seed = derive_seed(default_seed, 1000);
        if (spec.size() > 6) {
            if (spec[6] != ':') throw UsageError("--rhs: expected random or random:SEED");
            try {
                seed = std::stoull(spec.substr(7));
            } catch (const std::exception&) {
                throw UsageError("--rhs: bad seed in '" + spec + "'");
            }
        }
        Rng rng(seed);
        return rng.uniform_vector(n, -1.0, 1.0);
    }
    Vector b = read_vector(spec);
    if (b.size() != n) throw InvalidArgument("--rhs: vector has " + std::to_string(b.size()) + " entries, expected " + std::to_string(n));
    return b;
}

Problem load_problem(const InstanceOptions& opts) {
    if (opts.matrix.empty() && opts.random.empty()) throw UsageError("one of --matrix or --random is required");
    if (!opts.random.empty()) {
        const RandomSpec spec = parse_random_spec(opts.random);
        const SparseSkewMatrix a = random_skew(spec.n, spec.density, spec.seed);
        Vector b = resolve_rhs(opts.rhs, spec.n, spec.seed);
        return make_problem(a, std::move(b), InstanceDescriptor{"random", spec.n, spec.density, spec.seed});
    }
    MatrixMarketData data = read_matrix_market(opts.matrix);
    return std::visit(
        [&](const auto& a) {
            Vector b = resolve_rhs(opts.rhs, a.dim(), 0);
            return make_problem(a, std::move(b), InstanceDescriptor{opts.matrix, a.dim(), std::nullopt, std::nullopt});
        },
        data.matrix);
}

json number(double v) {
    if (std::isfinite(v)) return v;
    return std::isnan(v) ? json("nan") : json(v > 0 ? "inf" : "-inf");
}

json instance_json(const InstanceDescriptor& d, double condition) {
    return {{"source", d.source},
            {"n", d.n},
            {"density", d.density ? json(*d.density) : json(nullptr)},
            {"seed", d.seed ? json(*d.seed) : json(nullptr)},
            {"condition", number(condition)}};
}

json vector_json(const Vector& v) {
    json arr = json::array();
    for (Index i = 0; i < v.size(); ++i) arr.push_back(number(v[i]));
    return arr;
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text << '\n';
    } else {
        write_text(path, text + "\n");
    }
}

// ---------------------------------------------------------------- solve

struct SolveOptions {
    InstanceOptions instance;
    std::string method;
    long long m = 0;
    double rtol = 1e-10;
    int max_iter = 0;
    std::string precond = "none";
    std::string out;
    std::string history;
};

std::vector<MethodRow> rows_from(const std::string& method, const SolveResult& result) {
    std::vector<MethodRow> rows;
    for (const auto& r : result.history.records) {
        rows.push_back(MethodRow{method, r.q, true, r.true_residual_norm, r.error_norm, r.alpha, r.beta, r.applies});
    }
    return rows;
}

int run_solve(const SolveOptions& opts, std::ostream& out) {
    const Problem problem = load_problem(opts.instance);
    const Index n = problem.descriptor.n;
    const Vector& b = problem.rhs;

    json doc;
    doc["instance"] = instance_json(problem.descriptor, problem.condition);
    doc["method"] = opts.method;
    doc["precond"] = opts.precond;

    if (opts.method == "galerkin" || opts.method == "minres") {
        if (opts.m < 1) throw UsageError("--m is required for " + opts.method);
        if (opts.precond != "none") throw UsageError("--precond applies to cgne and cgnr only");
        if (!problem.op.is_skew()) throw InvalidArgument(opts.method + " requires a skew-symmetric matrix");
        doc["config"] = {{"m", opts.m}};
        Vector x;
        bool exists = true;
        if (opts.method == "galerkin") {
            const GalerkinResult g = galerkin_reference(problem.op, b, opts.m);
            exists = g.exists;
            doc["galerkin"] = {{"exists", g.exists}, {"sigma_min", g.sigma_min}, {"sigma_max", g.sigma_max}};
            x = g.x;
        } else {
            x = minres_reference(problem.op, b, opts.m);
        }
        doc["exists"] = exists;
        if (exists) {
            doc["x"] = vector_json(x);
            doc["relative_residual"] = number((b - problem.op.apply(x)).norm() / b.norm());
            doc["relative_error"] = number((x - problem.solution).norm() / problem.solution.norm());
        }
        doc["termination"] = exists ? "computed" : "nonexistent";
        emit(opts.out, doc.dump(2), out);
        return exists ? kOk : kNotConverged;
    }

    if (opts.method != "cgne" && opts.method != "cgnr") throw UsageError("unknown method '" + opts.method + "'");

    SolverConfig cfg = SolverConfig::for_dimension(n, opts.rtol);
    if (opts.max_iter > 0) cfg.max_iter = opts.max_iter;
    doc["config"] = {{"rtol", cfg.rtol}, {"max_iter", cfg.max_iter}};

    const bool cgne = opts.method == "cgne";
    SolveResult result;
    Vector x;
    if (opts.precond == "none") {
        const bool skew = problem.op.is_skew();
        if (cgne) {
            result = skew ? cgne_skew(problem.op, b, cfg, &problem.solution)
                          : cgne_general(problem.op, b, cfg, &problem.solution);
        } else {
            result = skew ? cgnr_skew(problem.op, b, cfg, &problem.solution)
                          : cgnr_general(problem.op, b, cfg, &problem.solution);
        }
        x = result.x;
    } else if (opts.precond.rfind("diag:", 0) == 0) {
        std::uint64_t seed = 0;
        try {
            seed = std::stoull(opts.precond.substr(5));
        } catch (const std::exception&) {
            throw UsageError("--precond: expected none or diag:SEED");
        }
        // M_L = diag(d), |d_i| in [0.5, 2] with random sign; M_R = I.
        Rng rng(seed);
        Vector d(n);
        for (Index i = 0; i < n; ++i) d[i] = (rng.bernoulli(0.5) ? 1.0 : -1.0) * rng.uniform(0.5, 2.0);
        const PreconditionedSystem sys = precondition(problem.op, b, diagonal_inverse(d), identity_operator(n));
        result = cgne ? cgne_general(sys.op, sys.rhs, cfg) : cgnr_general(sys.op, sys.rhs, cfg);
        x = sys.recover(result.x);
    } else {
        throw UsageError("--precond: expected none or diag:SEED");
    }

    doc["termination"] = std::string(to_string(result.termination));
    doc["iterations"] = result.iterations;
    doc["applies"] = result.applies;
    doc["x"] = vector_json(x);
    doc["relative_residual"] = number((b - problem.op.apply(x)).norm() / b.norm());
    doc["relative_error"] = number((x - problem.solution).norm() / problem.solution.norm());
    json history = json::array();
    for (const auto& r : result.history.records) {
        history.push_back({{"q", r.q},
                           {"res_norm", number(r.residual_norm)},
                           {"true_res_norm", number(r.true_residual_norm)},
                           {"err_norm", r.error_norm ? number(*r.error_norm) : json(nullptr)},
                           {"alpha", number(r.alpha)},
                           {"beta", number(r.beta)}});
    }
    doc["history"] = history;
    emit(opts.out, doc.dump(2), out);
    if (!opts.history.empty()) write_text(opts.history, history_csv(rows_from(opts.method, result)));

    if (!opts.out.empty() && opts.out != "-") {
        out << opts.method << ": " << to_string(result.termination) << " after " << result.iterations
            << " iterations\n";
    }
    return result.termination == Termination::converged ? kOk : kNotConverged;
}

// ---------------------------------------------------------------- verify

struct VerifyOptions {
    InstanceOptions instance;
    long long qmax = 5;
    double tol = kEqualityTolerance;
    double identity_tol = kIdentityTolerance;
    int trials = 100;
    std::uint64_t seed = 0;
    std::string out;
};

int run_verify(const VerifyOptions& opts, std::ostream& out) {
    if (opts.qmax < 1) throw UsageError("--qmax must be positive");
    const Problem problem = load_problem(opts.instance);

    RunReport report;
    report.instance = problem.descriptor;
    const std::map<std::string, double> config{{"qmax", static_cast<double>(opts.qmax)},
                                               {"tol", opts.tol},
                                               {"identity_tol", opts.identity_tol},
                                               {"trials", static_cast<double>(opts.trials)},
                                               {"seed", static_cast<double>(opts.seed)},
                                               {"condition", problem.condition}};

    const SkewCheck gate = verify_skew(problem.op, 16, opts.seed, 1e-12);
    const bool skew = gate.passed && problem.op.is_skew();
    report.add("verify.skew_gate", {}, skew ? std::max(gate.max_quadratic, gate.max_transpose)
                                            : std::max({gate.max_quadratic, gate.max_transpose, 1.0}),
               1e-12);

    report.merge(check_lemma(problem, opts.qmax, opts.qmax, opts.identity_tol));
    if (skew) {
        report.merge(check_theorem_equal(problem, opts.qmax, opts.tol));
        for (Index m = 1; m <= 2 * opts.qmax; ++m) {
            report.merge(check_theorem_nobetter(problem, m, opts.trials, derive_seed(opts.seed, m), opts.identity_tol));
        }
    } else {
        report.notes.push_back("operator is not skew-symmetric; theorem checks skipped");
    }
    // Sub-reports echo their own scalar settings; each check record keeps its tolerance.
    report.config = config;

    if (!opts.out.empty()) write_text(opts.out, to_json(report) + "\n");
    for (const auto& [name, s] : report.summary()) {
        out << (s.failures == 0 ? "PASS " : "FAIL ") << name << " worst=" << format_double(s.worst, 3) << " ("
            << s.count << " checks)\n";
    }
    out << (report.passed() ? "verify: all checks passed\n" : "verify: FAILED\n");
    return report.passed() ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------- generate

struct GenerateOptions {
    long long n = 0;
    double density = 0.2;
    std::uint64_t seed = 0;
    std::string out;
};

int run_generate(const GenerateOptions& opts, std::ostream& out) {
    if (opts.n < 2 || opts.n % 2 != 0) throw UsageError("--n must be even and >= 2 (odd skew matrices are singular)");
    if (!(opts.density > 0.0 && opts.density <= 1.0)) throw UsageError("--density must lie in (0, 1]");
    const SparseSkewMatrix a = random_skew(opts.n, opts.density, opts.seed);
    write_matrix_market(opts.out, a,
                        {" skewkrylov generate n=" + std::to_string(opts.n) + " density=" + format_double(opts.density) +
                         " seed=" + std::to_string(opts.seed)});
    out << "wrote " << opts.out << " (" << a.dim() << " x " << a.dim() << ", " << a.nonzeros()
        << " stored entries)\n";
    return kOk;
}

// ---------------------------------------------------------------- compare

struct CompareOptions {
    InstanceOptions instance;
    double rtol = 1e-10;
    int max_iter = 0;
    std::string out;
    std::string history;
};

int run_compare(const CompareOptions& opts, std::ostream& out) {
    const Problem problem = load_problem(opts.instance);
    SolverConfig cfg = SolverConfig::for_dimension(problem.descriptor.n, opts.rtol);
    if (opts.max_iter > 0) cfg.max_iter = opts.max_iter;
    const RunReport report = compare_methods(problem, cfg);
    emit(opts.out, to_json(report), out);
    if (!opts.history.empty()) write_text(opts.history, history_csv(report.table));
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Krylov solvers and equivalence checks for skew-symmetric systems", "skewkrylov"};
    app.require_subcommand(1);

    SolveOptions solve;
    auto* solve_cmd = app.add_subcommand("solve", "Run one solver on an instance");
    solve.instance.attach(solve_cmd);
    solve_cmd->add_option("--method", solve.method, "cgne, cgnr, galerkin or minres")
        ->required()
        ->check(CLI::IsMember({"cgne", "cgnr", "galerkin", "minres"}));
    solve_cmd->add_option("--m", solve.m, "Subspace dimension for galerkin/minres");
    solve_cmd->add_option("--rtol", solve.rtol, "Relative residual tolerance")->check(CLI::Range(0.0, 1.0));
    solve_cmd->add_option("--max-iter", solve.max_iter, "Iteration cap (default: dimension)");
    solve_cmd->add_option("--precond", solve.precond, "none or diag:SEED (random diagonal M_L, M_R = I)");
    solve_cmd->add_option("--out", solve.out, "JSON report path (- for stdout)");
    solve_cmd->add_option("--history", solve.history, "CSV iteration history path");

    VerifyOptions verify;
    auto* verify_cmd = app.add_subcommand("verify", "Check the orthogonality lemma and both equivalence theorems");
    verify.instance.attach(verify_cmd);
    verify_cmd->add_option("--qmax", verify.qmax, "Largest CGNE/CGNR step compared");
    verify_cmd->add_option("--tol", verify.tol, "Tolerance for iterate equalities");
    verify_cmd->add_option("--identity-tol", verify.identity_tol, "Tolerance for orthogonality and Pythagorean identities");
    verify_cmd->add_option("--trials", verify.trials, "Random vectors per subspace dimension");
    verify_cmd->add_option("--seed", verify.seed, "Seed for sampled checks");
    verify_cmd->add_option("--out", verify.out, "JSON report path");

    GenerateOptions generate;
    auto* generate_cmd = app.add_subcommand("generate", "Write a random skew-symmetric Matrix Market instance");
    generate_cmd->add_option("--n", generate.n, "Dimension (even)")->required();
    generate_cmd->add_option("--density", generate.density, "Fraction of strictly-upper entries kept");
    generate_cmd->add_option("--seed", generate.seed, "Generator seed");
    generate_cmd->add_option("--out", generate.out, "Output .mtx path")->required();

    CompareOptions compare;
    auto* compare_cmd = app.add_subcommand("compare", "Tabulate CGNE, CGNR and the reference solvers side by side");
    compare.instance.attach(compare_cmd);
    compare_cmd->add_option("--rtol", compare.rtol, "Relative residual tolerance")->check(CLI::Range(0.0, 1.0));
    compare_cmd->add_option("--max-iter", compare.max_iter, "Iteration cap (default: dimension)");
    compare_cmd->add_option("--out", compare.out, "JSON report path (- for stdout)");
    compare_cmd->add_option("--history", compare.history, "CSV history path");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kUsage;
    }

    try {
        if (*solve_cmd) return run_solve(solve, out);
        if (*verify_cmd) return run_verify(verify, out);
        if (*generate_cmd) return run_generate(generate, out);
        if (*compare_cmd) return run_compare(compare, out);
        return kUsage;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kUsage;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return e.direction() == IoError::Direction::input ? kNoInput : kCantCreate;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kDataError;
    } catch (const skewkrylov::Error& e) {
        err << "error: " << e.what() << '\n';
        return kDataError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kSoftware;
    }
}

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace skewkrylov::cli
