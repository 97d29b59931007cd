/**
 * @file convex_baselines.hpp
 * @brief Convex subproblems over the simplex: minimum-variance and maximum-gain
 *        portfolios, ideal and reference points, and the epsilon-constraint
 *        scalarization (minimize risk subject to a gain floor).
 */

#pragma once

#include "areaport/objectives.hpp"

#include <optional>

namespace areaport
{

inline constexpr double kInnerResidualTolerance = 1e-9;

/// argmin x'Vx over the simplex. Stops when the projected-gradient fixed-point
/// residual (stepsize 1 / (200 lambda_max(V))) drops to `tol` in the inf-norm.
/// A zero covariance makes every point stationary; the uniform portfolio is returned.
PortfolioWeights min_variance_portfolio(const MarketModel &model, double tol = kInnerResidualTolerance);

/// Vertex of the largest mean; ties go to the smaller variance, then the lower index.
PortfolioWeights max_gain_portfolio(const MarketModel &model);

/// The two portfolios every reference and ideal point is built from.
struct BaselinePortfolios
{
    PortfolioWeights min_variance;
    PortfolioWeights max_gain;
};

BaselinePortfolios compute_baselines(const MarketModel &model);

IdealPoint ideal_point(const MarketModel &model);
IdealPoint ideal_point(const MarketModel &model, const BaselinePortfolios &baselines);

/// nadir: (risk of the max-gain portfolio, gain of the min-variance portfolio).
/// worst: (largest single-asset risk, smallest single-asset gain).
/// custom is rejected here; build a ReferencePoint directly instead.
ReferencePoint reference_point(const MarketModel &model, ReferenceKind kind);
ReferencePoint reference_point(const MarketModel &model, ReferenceKind kind, const BaselinePortfolios &baselines);

AreaProblem make_problem(const MarketModel &model, ReferenceKind kind);

/// Minimizer over the simplex of 100 x'Vx - lambda * 100 m'x, the Lagrangian of
/// the epsilon-constraint problem for multiplier lambda >= 0.
PortfolioWeights minimize_lagrangian(const MarketModel &model, double lambda,
                                     const std::optional<PortfolioWeights> &warm_start = std::nullopt,
                                     double tol = kInnerResidualTolerance);

struct EpsilonConstraintSpec
{
    double alpha = 0.0;
    double gain_floor = 0.0; ///< percent

    /// gain_floor = alpha (gamma_max - gamma_ref) + gamma_ref, alpha in [0, 1].
    static EpsilonConstraintSpec from_alpha(double alpha, const IdealPoint &ideal, const ReferencePoint &ref);
};

struct EpsilonOptions
{
    double gain_tol = 1e-6; ///< percent
    double inner_tol = kInnerResidualTolerance;
};

/// argmin x'Vx over the simplex subject to gain(x) >= gain_floor.
///
/// Bisects the gain-constraint multiplier: lambda_hi doubles from 1 until the
/// floor is met (InfeasibleError past 1e12), then the bracket is halved until
/// the achieved gain is within gain_tol of the floor. If the bracket collapses
/// first, the two bracket solutions are mixed to land on the floor exactly.
/// Throws InfeasibleError when gain_floor exceeds the largest mean.
PortfolioWeights epsilon_constraint_solve(const MarketModel &model, const EpsilonConstraintSpec &spec,
                                          const EpsilonOptions &options = {});

} // namespace areaport
