#include <benchmark/benchmark.h>

#include "skewkrylov/equivalence.hpp"
#include "skewkrylov/krylov.hpp"
#include "skewkrylov/operator_core.hpp"
#include "skewkrylov/random.hpp"
#include "skewkrylov/solvers.hpp"

namespace sk = skewkrylov;

namespace {

sk::Problem problem_for(const benchmark::State& state) {
    return sk::random_problem(state.range(0), 0.05, 1);
}

void BM_SparseApply(benchmark::State& state) {
    const auto a = sk::random_skew(state.range(0), 0.05, 1);
    const sk::Vector v = sk::Rng(2).normal_vector(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(a.apply(v));
    state.counters["nnz"] = static_cast<double>(a.triplets().size());
}

void BM_BuildBasis(benchmark::State& state) {
    const auto p = problem_for(state);
    for (auto _ : state) benchmark::DoNotOptimize(sk::build_basis(p.op, p.rhs, 40));
}

template <sk::SolveResult (*Solve)(const sk::LinearOperator&, const sk::Vector&, const sk::SolverConfig&,
                                   const sk::Vector*),
          bool Retag>
void BM_Solve(benchmark::State& state) {
    const auto p = problem_for(state);
    const sk::LinearOperator op = Retag ? p.op.retagged(sk::OperatorKind::general) : p.op;
    const auto cfg = sk::SolverConfig::for_dimension(state.range(0), 1e-8);
    int iterations = 0;
    for (auto _ : state) {
        const auto r = Solve(op, p.rhs, cfg, nullptr);
        iterations = r.iterations;
        benchmark::DoNotOptimize(r.x.data());
    }
    state.counters["iterations"] = iterations;
}

}  // namespace

BENCHMARK(BM_SparseApply)->Arg(200)->Arg(1000);
BENCHMARK(BM_BuildBasis)->Arg(200)->Arg(1000);
BENCHMARK(BM_Solve<&sk::cgne_skew, false>)->Name("BM_CgneSkew")->Arg(200)->Arg(1000);
BENCHMARK(BM_Solve<&sk::cgne_general, true>)->Name("BM_CgneGeneral")->Arg(200)->Arg(1000);
BENCHMARK(BM_Solve<&sk::cgnr_skew, false>)->Name("BM_CgnrSkew")->Arg(200)->Arg(1000);
BENCHMARK(BM_Solve<&sk::cgnr_general, true>)->Name("BM_CgnrGeneral")->Arg(200)->Arg(1000);
BENCHMARK_MAIN();
