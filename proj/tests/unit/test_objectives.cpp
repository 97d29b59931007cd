#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "areaport/convex_baselines.hpp"
#include "areaport/objectives.hpp"
#include "areaport/simplex.hpp"
#include "support/instances.hpp"

using namespace areaport;
using areaport::testing::random_simplex_point;

namespace
{

MarketModel two_asset_diag()
{
    return MarketModel(Eigen::Vector2d(1e-3, 2e-3), Eigen::Vector2d(1e-4, 4e-4).asDiagonal().toDenseMatrix());
}

double relative_gap(const Eigen::VectorXd &a, const Eigen::VectorXd &b)
{
    return (a - b).cwiseAbs().maxCoeff() / std::max(b.cwiseAbs().maxCoeff(), 1e-300);
}

} // namespace

TEST_CASE("PortfolioWeights enforces the simplex")
{
    CHECK_NOTHROW(PortfolioWeights(Eigen::Vector3d(0.2, 0.3, 0.5)));
    CHECK_THROWS_AS(PortfolioWeights(Eigen::Vector2d(0.6, 0.6)), std::invalid_argument);
    CHECK_THROWS_AS(PortfolioWeights(Eigen::Vector2d(1.1, -0.1)), std::invalid_argument);
    CHECK(PortfolioWeights::uniform(4)[2] == doctest::Approx(0.25));
    CHECK(PortfolioWeights::vertex(3, 1).values() == Eigen::Vector3d(0, 1, 0));
}

TEST_CASE("gain is 100 m'x")
{
    const MarketModel model(Eigen::Vector2d(0.001, 0.003), Eigen::Matrix2d::Identity() * 1e-4);
    CHECK(gain(model, Eigen::Vector2d(0.5, 0.5)) == doctest::Approx(0.2));
    CHECK(gain(model, Eigen::Vector2d(0.0, 1.0)) == doctest::Approx(0.3));
    CHECK_THROWS_AS(gain(model, Eigen::Vector3d(1, 0, 0)), std::invalid_argument);
}

TEST_CASE("risk is 100 x'Vx")
{
    const MarketModel zero(Eigen::Vector3d(0.1, 0.2, 0.3), Eigen::Matrix3d::Zero());
    CHECK(risk(zero, Eigen::Vector3d(0.2, 0.3, 0.5)) == 0.0);

    const MarketModel model = testing::random_psd_model(4, 21);
    CHECK(risk(model, Eigen::Vector4d::Unit(2)) == doctest::Approx(100.0 * model.covariance()(2, 2)));
    std::mt19937_64 rng(4);
    for (int k = 0; k < 20; ++k)
    {
        const Eigen::VectorXd x = random_simplex_point(4, rng);
        CHECK(std::abs(risk(model, x) - testing::risk_double_loop(model, x)) <= 1e-12);
    }
}

TEST_CASE("area vanishes on the edges of the rectangle")
{
    const MarketModel model = two_asset_diag();
    const Eigen::Vector2d x(0.3, 0.7);
    const ObjectivePair pair = evaluate(model, x);
    CHECK(area(AreaProblem(model, {1.0, pair.gain, ReferenceKind::custom}), x) == 0.0);
    CHECK(area(AreaProblem(model, {pair.risk, 0.0, ReferenceKind::custom}), x) == 0.0);
    CHECK(area(AreaProblem(model, {pair.risk + 1.0, pair.gain - 2.0, ReferenceKind::custom}), x) ==
          doctest::Approx(2.0));
}

TEST_CASE("grad_area reduces to the gain term when the height is zero")
{
    const MarketModel model = testing::random_psd_model(3, 5);
    const Eigen::Vector3d x(0.2, 0.5, 0.3);
    const ObjectivePair pair = evaluate(model, x);
    const AreaProblem problem(model, {pair.risk + 0.4, pair.gain, ReferenceKind::custom});
    const Eigen::VectorXd expected = (problem.reference().rho_ref - pair.risk) * 100.0 * model.mean();
    CHECK(grad_area(problem, x) == expected);
}

TEST_CASE("grad_area is constant when the covariance vanishes")
{
    const MarketModel model(Eigen::Vector3d(0.001, 0.002, 0.004), Eigen::Matrix3d::Zero());
    const AreaProblem problem(model, {0.5, 0.05, ReferenceKind::custom});
    const Eigen::VectorXd expected = 0.5 * 100.0 * model.mean();
    std::mt19937_64 rng(1);
    for (int k = 0; k < 10; ++k)
        CHECK((grad_area(problem, random_simplex_point(3, rng)) - expected).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("grad_area matches central finite differences")
{
    for (const Eigen::Index n : {2, 5, 10})
    {
        for (std::uint64_t seed = 1; seed <= 3; ++seed)
        {
            const MarketModel model = testing::random_psd_model(n, seed * 31 + static_cast<std::uint64_t>(n));
            const AreaProblem problem = make_problem(model, seed % 2 ? ReferenceKind::nadir : ReferenceKind::worst);
            std::mt19937_64 rng(seed);
            for (int k = 0; k < 100; ++k)
            {
                const Eigen::VectorXd x = random_simplex_point(n, rng);
                const Eigen::VectorXd fd = testing::central_difference(
                    [&](const Eigen::VectorXd &z) { return area(problem, z); }, x, 1e-6);
                CHECK(relative_gap(grad_area(problem, x), fd) <= 1e-6);
            }
        }
    }
}

TEST_CASE("positive area on the dominance region means both margins are positive")
{
    const MarketModel model = testing::random_psd_model(5, 8);
    const AreaProblem problem = make_problem(model, ReferenceKind::nadir);
    std::mt19937_64 rng(8);
    int checked = 0;
    for (int k = 0; k < 5000; ++k)
    {
        const Eigen::VectorXd x = random_simplex_point(5, rng);
        if (!is_in_X(problem, x, 0.0))
            continue;
        ++checked;
        const ObjectivePair pair = evaluate(model, x);
        const bool strictly_inside =
            pair.gain > problem.reference().gamma_ref && pair.risk < problem.reference().rho_ref;
        CHECK((area(problem, x) > 0.0) == strictly_inside);
    }
    CHECK(checked > 100);
}

TEST_CASE("max_eigenvalue agrees with a symmetric eigensolver")
{
    for (std::uint64_t seed = 1; seed <= 10; ++seed)
    {
        const MarketModel model = testing::random_psd_model(2 + static_cast<Eigen::Index>(seed), seed);
        const double exact =
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(model.covariance()).eigenvalues().maxCoeff();
        CHECK(max_eigenvalue(model.covariance()) == doctest::Approx(exact).epsilon(1e-8));
    }
    CHECK(max_eigenvalue(Eigen::Matrix3d::Identity() * 0.04) == doctest::Approx(0.04));
    CHECK(max_eigenvalue(Eigen::Matrix2d::Zero()) == 0.0);
    Eigen::Matrix2d nullspace_start;
    nullspace_start << 1.0, -1.0, -1.0, 1.0;
    CHECK(max_eigenvalue(nullspace_start) == doctest::Approx(2.0));
}

TEST_CASE("lipschitz_bound on degenerate and isotropic covariances")
{
    const MarketModel flat(Eigen::Vector2d(0.001, 0.002), Eigen::Matrix2d::Zero());
    const AreaProblem flat_problem(flat, {1.0, 0.1, ReferenceKind::custom});
    CHECK(lipschitz_bound(flat_problem, ideal_point(flat)) == 0.0);

    const double sigma2 = 4e-4;
    const MarketModel iso(Eigen::Vector3d(0.001, 0.002, 0.003), Eigen::Matrix3d::Identity() * sigma2);
    const AreaProblem iso_problem = make_problem(iso, ReferenceKind::worst);
    const IdealPoint ideal = ideal_point(iso);
    const double grad_risk = 200.0 * sigma2;
    const double expected = grad_risk * (ideal.gamma_max - iso_problem.reference().gamma_ref) +
                            2.0 * grad_risk * 100.0 * iso.mean().norm();
    CHECK(lipschitz_bound(iso_problem, ideal) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("lipschitz_bound dominates sampled gradient quotients over the feasible region")
{
    auto check_instance = [](const AreaProblem &problem, std::uint64_t seed) {
        const double bound = lipschitz_bound(problem, ideal_point(problem.model()));
        std::mt19937_64 rng(seed);
        double worst = 0.0;
        for (int k = 0; k < 1000; ++k)
        {
            const auto x = testing::random_point_in_region(problem, rng);
            const auto y = testing::random_point_in_region(problem, rng);
            REQUIRE(x);
            REQUIRE(y);
            const double quotient = (grad_area(problem, *x) - grad_area(problem, *y)).norm() / (*x - *y).norm();
            worst = std::max(worst, quotient);
        }
        CHECK(worst <= bound);
    };

    check_instance(make_problem(two_asset_diag(), ReferenceKind::worst), 1);
    for (std::uint64_t seed = 1; seed <= 4; ++seed)
    {
        const MarketModel model = testing::random_psd_model(4, seed + 100);
        check_instance(make_problem(model, ReferenceKind::worst), seed);
        check_instance(make_problem(model, ReferenceKind::nadir), seed);
    }
}

TEST_CASE("scaling the covariance scales risks and leaves gains alone")
{
    const MarketModel model = testing::sampled_model(5, 3);
    for (const double eta : {0.1, 10.0})
    {
        const MarketModel scaled = model.with_scaled_covariance(eta);
        for (const ReferenceKind kind : {ReferenceKind::nadir, ReferenceKind::worst})
        {
            const ReferencePoint a = reference_point(model, kind);
            const ReferencePoint b = reference_point(scaled, kind);
            CHECK(b.rho_ref == doctest::Approx(eta * a.rho_ref).epsilon(1e-8));
            CHECK(b.gamma_ref == doctest::Approx(a.gamma_ref).epsilon(1e-8));
        }
        std::mt19937_64 rng(2);
        for (int k = 0; k < 50; ++k)
        {
            const Eigen::VectorXd x = random_simplex_point(5, rng);
            CHECK(risk(scaled, x) == doctest::Approx(eta * risk(model, x)).epsilon(1e-12));
            CHECK(gain(scaled, x) == gain(model, x));
        }
    }
}

TEST_CASE("reference kind names round-trip")
{
    for (const ReferenceKind kind : {ReferenceKind::nadir, ReferenceKind::worst, ReferenceKind::custom})
        CHECK(parse_reference_kind(to_string(kind)) == kind);
    CHECK_THROWS_AS(parse_reference_kind("ideal"), std::invalid_argument);
}
