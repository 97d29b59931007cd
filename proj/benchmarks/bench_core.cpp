#include "areaport/analysis.hpp"
#include "areaport/area_solver.hpp"
#include "areaport/convex_baselines.hpp"
#include "areaport/simplex.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace areaport;

namespace
{

MarketModel market(long n)
{
    return estimate_model(synthetic_returns(n, 2 * n + 60, 42));
}

void BM_ProjectSimplex(benchmark::State &state)
{
    const Eigen::Index n = state.range(0);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> normal(0.0, 0.01);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i)
        y(i) = 1.0 / static_cast<double>(n) + normal(rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(project_simplex(y));
    state.SetComplexityN(n);
}
BENCHMARK(BM_ProjectSimplex)->RangeMultiplier(4)->Range(16, 1200)->Complexity(benchmark::oNLogN);

void BM_GradArea(benchmark::State &state)
{
    const AreaProblem problem = make_problem(market(state.range(0)), ReferenceKind::nadir);
    const Eigen::VectorXd x = PortfolioWeights::uniform(problem.size()).values();
    for (auto _ : state)
        benchmark::DoNotOptimize(grad_area(problem, x));
}
BENCHMARK(BM_GradArea)->Arg(30)->Arg(100)->Arg(450)->Arg(1200);

void BM_MinVariance(benchmark::State &state)
{
    const MarketModel model = market(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(min_variance_portfolio(model));
}
BENCHMARK(BM_MinVariance)->Arg(30)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_AreaSolve(benchmark::State &state)
{
    const AreaProblem problem = make_problem(market(state.range(0)), ReferenceKind::nadir);
    long iterations = 0;
    for (auto _ : state)
    {
        const SolverResult result = solve(problem);
        iterations = result.iterations;
        benchmark::DoNotOptimize(result.area_value);
    }
    state.counters["iterations"] = static_cast<double>(iterations);
}
BENCHMARK(BM_AreaSolve)->Arg(30)->Arg(100)->Arg(450)->Unit(benchmark::kMillisecond);

void BM_Sweep(benchmark::State &state)
{
    const MarketModel model = market(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(run_sweep(model, ReferenceKind::nadir, kDefaultAlphas));
}
BENCHMARK(BM_Sweep)->Arg(30)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
