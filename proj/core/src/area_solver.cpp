#include "areaport/area_solver.hpp"

#include "areaport/simplex.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace areaport
{
namespace
{

constexpr int kMaxHalvingsPerStep = 60;

bool positive_area_start(const AreaProblem &problem, const VectorRef &x)
{
    return is_in_X(problem, x) && area(problem, x) > 0.0;
}

// Bound on the floating-point error of A at `pair`; area changes below it
// carry no sign information.
double area_rounding_slack(const AreaProblem &problem, const ObjectivePair &pair)
{
    const ReferencePoint &ref = problem.reference();
    const double height = std::abs(pair.gain - ref.gamma_ref);
    const double base = std::abs(ref.rho_ref - pair.risk);
    const double eps = std::numeric_limits<double>::epsilon();
    return 8.0 * static_cast<double>(problem.size()) * eps *
           (base * (std::abs(pair.gain) + std::abs(ref.gamma_ref)) + height * (std::abs(pair.risk) + std::abs(ref.rho_ref)));
}

// One solver iterate with V x cached, so each step costs a single product.
struct Iterate
{
    Vector x;
    Vector vx;
    ObjectivePair pair;
    double area = 0.0;
};

Iterate make_iterate(const AreaProblem &problem, Vector x)
{
    const MarketModel &model = problem.model();
    Iterate it;
    it.vx = model.covariance() * x;
    it.pair = {100.0 * model.mean().dot(x), 100.0 * x.dot(it.vx)};
    it.area = area(problem.reference(), it.pair);
    it.x = std::move(x);
    return it;
}

Vector gradient_at(const AreaProblem &problem, const Iterate &it)
{
    const ReferencePoint &ref = problem.reference();
    const double height = it.pair.gain - ref.gamma_ref;
    const double base = ref.rho_ref - it.pair.risk;
    return (100.0 * base) * problem.model().mean() - (200.0 * height) * it.vx;
}

} // namespace

void SolverConfig::validate() const
{
    if (tau && !(*tau > 0.0 && std::isfinite(*tau)))
        throw std::invalid_argument("stepsize tau must be positive");
    if (!(stat_tol > 0.0))
        throw std::invalid_argument("stationarity tolerance must be positive");
    if (max_iter < 1)
        throw std::invalid_argument("max_iter must be at least 1");
}

std::string_view to_string(SolverStatus status)
{
    switch (status)
    {
    case SolverStatus::converged:
        return "converged";
    case SolverStatus::max_iter:
        return "max_iter";
    case SolverStatus::degenerate_zero_area:
        return "degenerate_zero_area";
    }
    return "unknown";
}

StartingPoint starting_point(const AreaProblem &problem, const BaselinePortfolios &baselines)
{
    const MarketModel &model = problem.model();
    const Vector &m = model.mean();
    const Eigen::MatrixXd &V = model.covariance();
    const double gamma_floor = problem.reference().gamma_ref / 100.0;

    // A riskless asset beating the reference gain breaks the ratio rule.
    bool riskless_winner = false;
    std::optional<Eigen::Index> best;
    for (Eigen::Index i = 0; i < model.size(); ++i)
    {
        if (V(i, i) <= 0.0)
        {
            riskless_winner = riskless_winner || m(i) > gamma_floor;
            continue;
        }
        if (!best || m(i) / V(i, i) > m(*best) / V(*best, *best))
            best = i;
    }

    if (best && !riskless_winner)
    {
        PortfolioWeights vertex = PortfolioWeights::vertex(model.size(), *best);
        if (positive_area_start(problem, vertex.values()))
            return {std::move(vertex), false};
    }

    PortfolioWeights mid(0.5 * (baselines.min_variance.values() + baselines.max_gain.values()));
    const bool degenerate = !positive_area_start(problem, mid.values());
    return {std::move(mid), degenerate};
}

StartingPoint starting_point(const AreaProblem &problem)
{
    return starting_point(problem, compute_baselines(problem.model()));
}

double default_stepsize(const AreaProblem &problem, const IdealPoint &ideal)
{
    const double lipschitz = lipschitz_bound(problem, ideal);
    return lipschitz > 0.0 ? std::min(0.1, 1.9 / lipschitz) : 0.1;
}

double stationarity_residual(const AreaProblem &problem, const VectorRef &x, double tau)
{
    const Vector stepped = x + tau * grad_area(problem, x);
    return (project_simplex(stepped).values() - x).cwiseAbs().maxCoeff();
}

SolverResult solve(const AreaProblem &problem, const SolverConfig &config)
{
    config.validate();
    const BaselinePortfolios baselines = compute_baselines(problem.model());
    const IdealPoint ideal = ideal_point(problem.model(), baselines);
    const StartingPoint start = starting_point(problem, baselines);
    return solve(problem, config, start.x, lipschitz_bound(problem, ideal));
}

SolverResult solve(const AreaProblem &problem, const SolverConfig &config, const PortfolioWeights &start,
                   std::optional<double> lipschitz)
{
    config.validate();
    if (start.size() != problem.size())
        throw std::invalid_argument("starting point has the wrong dimension");

    double tau = 0.1;
    if (config.tau)
    {
        tau = *config.tau;
    }
    else
    {
        const double bound = lipschitz ? *lipschitz : lipschitz_bound(problem, ideal_point(problem.model()));
        tau = bound > 0.0 ? std::min(0.1, 1.9 / bound) : 0.1;
    }

    const ObjectivePair start_pair = evaluate(problem.model(), start.values());
    const double start_area = area(problem.reference(), start_pair);

    SolverResult result{start, start_pair, start_area, 0, 0.0, SolverStatus::converged, tau, 0, 0.0,
                        start,  start_pair, start_area, {}};
    if (!is_in_X(problem.reference(), start_pair) || !(start_area > 0.0))
    {
        result.status = SolverStatus::degenerate_zero_area;
        return result;
    }
    if (config.record_trace)
        result.trace.push_back({0, start_area, 0.0, start_pair});

    const auto clock_start = std::chrono::steady_clock::now();

    Iterate current = make_iterate(problem, start.values());
    result.status = SolverStatus::max_iter;
    for (long it = 1; it <= config.max_iter; ++it)
    {
        const Vector g = gradient_at(problem, current);
        const double slack = area_rounding_slack(problem, current.pair);

        Iterate next;
        double residual = 0.0;
        bool accepted = false;
        for (int halving = 0; halving <= kMaxHalvingsPerStep; ++halving)
        {
            next = make_iterate(problem, project_simplex(current.x + tau * g).values());
            residual = (next.x - current.x).cwiseAbs().maxCoeff();
            if (next.area >= current.area - slack && is_in_X(problem.reference(), next.pair))
            {
                accepted = true;
                break;
            }
            if (residual < config.stat_tol)
                break;
            tau *= 0.5;
            ++result.step_halvings;
        }

        result.stationarity_residual = residual;
        if (!accepted)
        {
            result.status = residual < config.stat_tol ? SolverStatus::converged : SolverStatus::max_iter;
            break;
        }

        current = std::move(next);
        result.iterations = it;
        if (config.record_trace)
            result.trace.push_back({it, current.area, residual, current.pair});
        if (residual < config.stat_tol)
        {
            result.status = SolverStatus::converged;
            break;
        }
    }

    result.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_start).count();
    result.tau = tau;
    result.x = PortfolioWeights(std::move(current.x));
    result.objectives = evaluate(problem.model(), result.x.values());
    result.area_value = area(problem.reference(), result.objectives);
    return result;
}

} // namespace areaport
