#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "areaport/analysis.hpp"
#include "areaport/area_solver.hpp"
#include "areaport/convex_baselines.hpp"
#include "areaport/simplex.hpp"
#include "support/instances.hpp"

using namespace areaport;

namespace
{

MarketModel two_asset_diag()
{
    return MarketModel(Eigen::Vector2d(0.001, 0.002), Eigen::Vector2d(1e-4, 4e-4).asDiagonal().toDenseMatrix());
}

MarketModel identical_assets(Eigen::Index n)
{
    return MarketModel(Eigen::VectorXd::Constant(n, 0.002), Eigen::MatrixXd::Constant(n, n, 3e-4));
}

} // namespace

TEST_CASE("SolverConfig validation")
{
    CHECK_NOTHROW(SolverConfig{}.validate());
    CHECK_THROWS_AS((SolverConfig{0.0, 1e-5, 10, false}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((SolverConfig{std::nullopt, 0.0, 10, false}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((SolverConfig{std::nullopt, 1e-5, 0, false}.validate()), std::invalid_argument);
}

TEST_CASE("starting_point takes the best mean-to-variance vertex when it has positive area")
{
    const MarketModel model = two_asset_diag();
    const AreaProblem problem(model, {0.05, 0.05, ReferenceKind::custom});
    const StartingPoint start = starting_point(problem);
    CHECK_FALSE(start.degenerate);
    CHECK(start.x.values() == Eigen::Vector2d(1.0, 0.0));
}

TEST_CASE("starting_point falls back to the baseline midpoint when the vertex has zero area")
{
    const MarketModel model = two_asset_diag();
    const AreaProblem problem = make_problem(model, ReferenceKind::nadir);
    const BaselinePortfolios baselines = compute_baselines(model);
    const StartingPoint start = starting_point(problem, baselines);
    CHECK_FALSE(start.degenerate);
    const Eigen::VectorXd mid = 0.5 * (baselines.min_variance.values() + baselines.max_gain.values());
    CHECK((start.x.values() - mid).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK(area(problem, start.x.values()) > 0.0);
}

TEST_CASE("starting_point routes a riskless winner through the fallback")
{
    Eigen::Matrix3d v = Eigen::Matrix3d::Zero();
    v(1, 1) = 4e-4;
    v(2, 2) = 1e-4;
    const MarketModel model(Eigen::Vector3d(0.002, 0.004, 0.0015), v);
    const AreaProblem problem(model, {0.05, 0.05, ReferenceKind::custom});
    const StartingPoint start = starting_point(problem);
    CHECK_FALSE(start.degenerate);
    CHECK(start.x.values()(0) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(start.x.values()(1) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(start.x.values()(2) <= 1e-6);
}

TEST_CASE("identical assets are degenerate under both references")
{
    const MarketModel model = identical_assets(4);
    for (const ReferenceKind kind : {ReferenceKind::nadir, ReferenceKind::worst})
    {
        const AreaProblem problem = make_problem(model, kind);
        CHECK(starting_point(problem).degenerate);
        const SolverResult result = solve(problem);
        CHECK(result.status == SolverStatus::degenerate_zero_area);
        CHECK(result.iterations == 0);
        CHECK(result.area_value == 0.0);
    }
}

TEST_CASE("equal gains pinned at the reference level give zero area everywhere")
{
    Eigen::Matrix3d v;
    v << 4e-4, 1e-4, 0.0, 1e-4, 3e-4, 0.0, 0.0, 0.0, 2e-4;
    const MarketModel model(Eigen::Vector3d::Constant(0.003), v);
    const AreaProblem problem = make_problem(model, ReferenceKind::worst);
    CHECK(problem.reference().gamma_ref == doctest::Approx(0.3));
    std::mt19937_64 rng(1);
    for (int k = 0; k < 100; ++k)
        CHECK(std::abs(area(problem, testing::random_simplex_point(3, rng))) <= 1e-15);
    CHECK(solve(problem).status == SolverStatus::degenerate_zero_area);
}

TEST_CASE("a start outside the dominance region is reported as degenerate")
{
    const MarketModel model = testing::random_psd_model(3, 2);
    const AreaProblem problem = make_problem(model, ReferenceKind::nadir);
    const PortfolioWeights min_var = min_variance_portfolio(model);
    const SolverResult result = solve(problem, SolverConfig{}, min_var);
    CHECK(result.status == SolverStatus::degenerate_zero_area);
}

TEST_CASE("zero covariance: the solver reaches the max-gain vertex and stops there")
{
    const MarketModel model(Eigen::Vector3d(0.001, 0.004, 0.002), Eigen::Matrix3d::Zero());
    const AreaProblem problem(model, {1.0, 0.05, ReferenceKind::custom});
    const SolverResult result = solve(problem);
    CHECK(result.status == SolverStatus::converged);
    CHECK(result.x.values() == Eigen::Vector3d(0, 1, 0));
    CHECK(stationarity_residual(problem, result.x.values(), result.tau) <= 1e-12);
    CHECK(result.tau == 0.1);
    CHECK(stationarity_residual(problem, result.start.values(), result.tau) > 0.0);
}

TEST_CASE("default_stepsize respects both caps")
{
    const MarketModel flat(Eigen::Vector2d(0.001, 0.002), Eigen::Matrix2d::Zero());
    const AreaProblem flat_problem(flat, {1.0, 0.05, ReferenceKind::custom});
    CHECK(default_stepsize(flat_problem, ideal_point(flat)) == 0.1);

    const MarketModel model = testing::sampled_model(8, 3);
    const AreaProblem problem = make_problem(model, ReferenceKind::worst);
    const IdealPoint ideal = ideal_point(model);
    CHECK(default_stepsize(problem, ideal) == doctest::Approx(std::min(0.1, 1.9 / lipschitz_bound(problem, ideal))));
}

TEST_CASE("iterates stay in the dominance region and the area increases")
{
    for (std::uint64_t seed = 1; seed <= 12; ++seed)
    {
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(seed % 9);
        const MarketModel model = testing::random_psd_model(n, seed + 50);
        for (const ReferenceKind kind : {ReferenceKind::nadir, ReferenceKind::worst})
        {
            const AreaProblem problem = make_problem(model, kind);
            SolverConfig config;
            config.record_trace = true;
            const SolverResult result = solve(problem, config);
            REQUIRE(result.status == SolverStatus::converged);
            CHECK(result.stationarity_residual <= config.stat_tol);
            CHECK(result.step_halvings == 0);
            REQUIRE(result.trace.size() == static_cast<std::size_t>(result.iterations) + 1);
            for (std::size_t k = 1; k < result.trace.size(); ++k)
            {
                CHECK(is_in_X(problem.reference(), result.trace[k].objectives));
                CHECK(result.trace[k].area >= result.trace[k - 1].area);
                if (result.trace[k].residual >= config.stat_tol)
                    CHECK(result.trace[k].area > result.trace[k - 1].area);
            }
            CHECK(is_in_X(problem, result.x.values()));
            CHECK(result.area_value > 0.0);
            CHECK(result.area_value >= result.start_area);
        }
    }
}

TEST_CASE("an oversized forced stepsize triggers the halving safeguard")
{
    const MarketModel model = testing::sampled_model(5, 17);
    const AreaProblem problem = make_problem(model, ReferenceKind::nadir);
    SolverConfig config;
    config.tau = 1e4;
    config.record_trace = true;
    const SolverResult result = solve(problem, config);
    CHECK(result.step_halvings > 0);
    CHECK(result.tau < 1e4);
    for (std::size_t k = 1; k < result.trace.size(); ++k)
        CHECK(result.trace[k].area >= result.trace[k - 1].area);
    CHECK(result.status == SolverStatus::converged);
}

TEST_CASE("max_iter stops the solver with the best iterate so far")
{
    const MarketModel model = testing::sampled_model(6, 9);
    const AreaProblem problem = make_problem(model, ReferenceKind::nadir);
    SolverConfig config;
    config.max_iter = 2;
    const SolverResult result = solve(problem, config);
    CHECK(result.status == SolverStatus::max_iter);
    CHECK(result.iterations == 2);
    CHECK(result.area_value >= result.start_area);
    CHECK(result.stationarity_residual > config.stat_tol);
}

TEST_CASE("converged area matches the grid maximum and is not dominated (n = 3)")
{
    for (std::uint64_t seed = 1; seed <= 4; ++seed)
    {
        const MarketModel model = testing::random_psd_model(3, seed + 900);
        for (const ReferenceKind kind : {ReferenceKind::nadir, ReferenceKind::worst})
        {
            const AreaProblem problem = make_problem(model, kind);
            SolverConfig config;
            config.stat_tol = 1e-9;
            const SolverResult result = solve(problem, config);
            REQUIRE(result.status == SolverStatus::converged);
            const auto oracle = grid_oracle_max_area(problem, 0.005);
            REQUIRE(oracle);
            CHECK(result.area_value >= oracle->value * (1.0 - 1e-4));
            CHECK_FALSE(grid_oracle_dominates(problem, result.objectives, 0.005));
        }
    }
}

TEST_CASE("different feasible starts converge to the same maximizer")
{
    const MarketModel model = testing::random_psd_model(4, 77);
    const AreaProblem problem = make_problem(model, ReferenceKind::worst);
    SolverConfig config;
    config.stat_tol = 1e-10;
    const SolverResult reference = solve(problem, config);
    std::mt19937_64 rng(77);
    for (int k = 0; k < 5; ++k)
    {
        const Eigen::VectorXd x0 = testing::random_simplex_point(4, rng);
        const SolverResult result = solve(problem, config, PortfolioWeights(x0));
        REQUIRE(result.status == SolverStatus::converged);
        CHECK(result.area_value == doctest::Approx(reference.area_value).epsilon(1e-8));
        CHECK((result.x.values() - reference.x.values()).cwiseAbs().maxCoeff() <= 1e-5);
    }
}

TEST_CASE("solver status names")
{
    CHECK(to_string(SolverStatus::converged) == "converged");
    CHECK(to_string(SolverStatus::max_iter) == "max_iter");
    CHECK(to_string(SolverStatus::degenerate_zero_area) == "degenerate_zero_area");
}
