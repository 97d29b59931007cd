/**
 * @file area_solver.hpp
 * @brief Projected-gradient ascent for the rectangle-area objective.
 *
 * Each step is x <- P_simplex(x + tau grad A(x)). Projection is onto the
 * simplex only: starting from a point with A > 0 and tau in (0, 2/L), the
 * iterates never leave the dominance region and A increases monotonically, so
 * the constraints gain >= gamma_ref and risk <= rho_ref never need to be
 * enforced. A stationary point with A > 0 is the global maximizer and is
 * Pareto efficient.
 */

#pragma once

#include "areaport/convex_baselines.hpp"
#include "areaport/objectives.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace areaport
{

struct SolverConfig
{
    std::optional<double> tau; ///< unset: min(0.1, 1.9 / L)
    double stat_tol = 1e-5;    ///< bound on |x_{k+1} - x_k|_inf
    long max_iter = 200000;
    bool record_trace = false;

    void validate() const;
};

enum class SolverStatus
{
    converged,
    max_iter,
    degenerate_zero_area,
};

std::string_view to_string(SolverStatus status);

struct TracePoint
{
    long iteration = 0;
    double area = 0.0;
    double residual = 0.0; ///< |x_k - x_{k-1}|_inf, 0 for the starting point
    ObjectivePair objectives;
};

struct SolverResult
{
    PortfolioWeights x;
    ObjectivePair objectives;
    double area_value = 0.0;
    long iterations = 0;
    double stationarity_residual = 0.0;
    SolverStatus status = SolverStatus::converged;

    double tau = 0.0;      ///< stepsize in force at exit
    int step_halvings = 0; ///< safeguard activations
    double elapsed_seconds = 0.0;

    PortfolioWeights start;
    ObjectivePair start_objectives;
    double start_area = 0.0;

    std::vector<TracePoint> trace;
};

struct StartingPoint
{
    PortfolioWeights x;
    bool degenerate = false; ///< no point with A > 0 was found
};

/// Whole budget on the asset with the best mean / variance ratio; if that
/// vertex has A <= 0, the midpoint of the min-variance and max-gain portfolios.
StartingPoint starting_point(const AreaProblem &problem, const BaselinePortfolios &baselines);
StartingPoint starting_point(const AreaProblem &problem);

/// min(0.1, 1.9 / L); 0.1 when L == 0.
double default_stepsize(const AreaProblem &problem, const IdealPoint &ideal);

/// |P_simplex(x + tau grad A(x)) - x|_inf
double stationarity_residual(const AreaProblem &problem, const VectorRef &x, double tau);

SolverResult solve(const AreaProblem &problem, const SolverConfig &config = {});

/// Runs from a caller-supplied start. A start outside the dominance region or
/// with A <= 0 yields status degenerate_zero_area without iterating.
SolverResult solve(const AreaProblem &problem, const SolverConfig &config, const PortfolioWeights &start,
                   std::optional<double> lipschitz = std::nullopt);

} // namespace areaport
