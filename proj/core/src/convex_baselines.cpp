#include "areaport/convex_baselines.hpp"

#include "areaport/error.hpp"
#include "areaport/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace areaport
{
namespace
{

constexpr long kMaxInnerIterations = 500000;

double inner_step(double lambda_max)
{
    return lambda_max > 0.0 ? 1.0 / (200.0 * lambda_max) : 1.0;
}

// Accelerated projected gradient (FISTA with gradient restart) on
//   f(x) = 100 x'Vx - lambda 100 m'x  over the simplex.
// Termination uses the plain projected-gradient residual at the current
// iterate, so the returned point satisfies the same fixed-point test as
// unaccelerated projected gradient would.
Vector solve_lagrangian(const MarketModel &model, double lambda, Vector start, double step, double tol)
{
    const Eigen::MatrixXd &V = model.covariance();
    const Vector linear = (100.0 * lambda) * model.mean();
    auto gradient = [&](const Vector &x) -> Vector { return 200.0 * (V * x) - linear; };

    Vector x = std::move(start);
    Vector y = x;
    double t = 1.0;
    for (long it = 0; it < kMaxInnerIterations; ++it)
    {
        const Vector pg = project_simplex(x - step * gradient(x)).values();
        if ((pg - x).cwiseAbs().maxCoeff() <= tol)
            return x;

        Vector next = project_simplex(y - step * gradient(y)).values();
        if ((y - next).dot(next - x) > 0.0)
        {
            // Momentum points uphill: restart from the plain projected-gradient step.
            next = pg;
            t = 1.0;
        }
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        y = next + ((t - 1.0) / t_next) * (next - x);
        x = std::move(next);
        t = t_next;
    }
    return x;
}

// Convex risk peaks and linear gain bottoms out at vertices of the simplex.
ReferencePoint worst_reference(const MarketModel &model)
{
    return {100.0 * model.covariance().diagonal().maxCoeff(), 100.0 * model.mean().minCoeff(), ReferenceKind::worst};
}

PortfolioWeights normalized(Vector x)
{
    x = x.cwiseMax(0.0);
    x /= x.sum();
    return PortfolioWeights(std::move(x));
}

} // namespace

PortfolioWeights minimize_lagrangian(const MarketModel &model, double lambda,
                                     const std::optional<PortfolioWeights> &warm_start, double tol)
{
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("multiplier must be finite and nonnegative");
    Vector start = warm_start ? warm_start->values() : PortfolioWeights::uniform(model.size()).values();
    if (start.size() != model.size())
        throw std::invalid_argument("warm start has the wrong dimension");
    const double step = inner_step(max_eigenvalue(model.covariance()));
    return normalized(solve_lagrangian(model, lambda, std::move(start), step, tol));
}

PortfolioWeights min_variance_portfolio(const MarketModel &model, double tol)
{
    return minimize_lagrangian(model, 0.0, std::nullopt, tol);
}

PortfolioWeights max_gain_portfolio(const MarketModel &model)
{
    const Vector &m = model.mean();
    const Eigen::MatrixXd &V = model.covariance();
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < model.size(); ++i)
    {
        if (m(i) > m(best) || (m(i) == m(best) && V(i, i) < V(best, best)))
            best = i;
    }
    return PortfolioWeights::vertex(model.size(), best);
}

BaselinePortfolios compute_baselines(const MarketModel &model)
{
    return {min_variance_portfolio(model), max_gain_portfolio(model)};
}

IdealPoint ideal_point(const MarketModel &model, const BaselinePortfolios &baselines)
{
    return {risk(model, baselines.min_variance.values()), 100.0 * model.mean().maxCoeff()};
}

IdealPoint ideal_point(const MarketModel &model)
{
    return ideal_point(model, compute_baselines(model));
}

ReferencePoint reference_point(const MarketModel &model, ReferenceKind kind, const BaselinePortfolios &baselines)
{
    switch (kind)
    {
    case ReferenceKind::nadir:
        return {risk(model, baselines.max_gain.values()), gain(model, baselines.min_variance.values()),
                ReferenceKind::nadir};
    case ReferenceKind::worst:
        return worst_reference(model);
    case ReferenceKind::custom:
        break;
    }
    throw std::invalid_argument("custom reference points are constructed directly, not derived from the model");
}

ReferencePoint reference_point(const MarketModel &model, ReferenceKind kind)
{
    if (kind == ReferenceKind::worst)
        return worst_reference(model);
    return reference_point(model, kind, compute_baselines(model));
}

AreaProblem make_problem(const MarketModel &model, ReferenceKind kind)
{
    return AreaProblem(model, reference_point(model, kind));
}

EpsilonConstraintSpec EpsilonConstraintSpec::from_alpha(double alpha, const IdealPoint &ideal, const ReferencePoint &ref)
{
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("alpha must lie in [0, 1]");
    return {alpha, alpha * (ideal.gamma_max - ref.gamma_ref) + ref.gamma_ref};
}

PortfolioWeights epsilon_constraint_solve(const MarketModel &model, const EpsilonConstraintSpec &spec,
                                          const EpsilonOptions &options)
{
    const double floor = spec.gain_floor;
    const double gamma_max = 100.0 * model.mean().maxCoeff();
    if (!std::isfinite(floor))
        throw std::invalid_argument("gain floor must be finite");
    if (floor > gamma_max + options.gain_tol)
    {
        std::ostringstream msg;
        msg << "gain floor " << floor << " exceeds the largest attainable gain " << gamma_max;
        throw InfeasibleError(msg.str());
    }
    if (floor >= gamma_max - options.gain_tol)
        return max_gain_portfolio(model);

    const double step = inner_step(max_eigenvalue(model.covariance()));
    auto solve_at = [&](double lambda, const Vector &warm) {
        return normalized(solve_lagrangian(model, lambda, warm, step, options.inner_tol));
    };

    PortfolioWeights x_lo = solve_at(0.0, PortfolioWeights::uniform(model.size()).values());
    double g_lo = gain(model, x_lo.values());
    if (g_lo >= floor - options.gain_tol)
        return x_lo;

    double lo = 0.0;
    double hi = 1.0;
    PortfolioWeights x_hi = solve_at(hi, x_lo.values());
    double g_hi = gain(model, x_hi.values());
    while (g_hi < floor)
    {
        if (std::abs(g_hi - floor) <= options.gain_tol)
            return x_hi;
        lo = hi;
        x_lo = x_hi;
        g_lo = g_hi;
        hi *= 2.0;
        if (hi > 1e12)
        {
            std::ostringstream msg;
            msg << "multiplier bracket failed: gain " << g_hi << " still below floor " << floor
                << " at lambda " << lo;
            throw NumericalError(msg.str());
        }
        x_hi = solve_at(hi, x_hi.values());
        g_hi = gain(model, x_hi.values());
    }
    if (g_hi - floor <= options.gain_tol)
        return x_hi;

    for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++it)
    {
        const double mid = 0.5 * (lo + hi);
        PortfolioWeights x_mid = solve_at(mid, (floor - g_lo < g_hi - floor ? x_lo : x_hi).values());
        const double g_mid = gain(model, x_mid.values());
        if (std::abs(g_mid - floor) <= options.gain_tol)
            return x_mid;
        if (g_mid < floor)
        {
            lo = mid;
            x_lo = std::move(x_mid);
            g_lo = g_mid;
        }
        else
        {
            hi = mid;
            x_hi = std::move(x_mid);
            g_hi = g_mid;
        }
    }

    // Gain jumps across the collapsed bracket (flat directions in V). Both ends
    // minimize the same Lagrangian, so the mix hitting the floor is optimal.
    const double theta = std::clamp((floor - g_lo) / (g_hi - g_lo), 0.0, 1.0);
    return normalized((1.0 - theta) * x_lo.values() + theta * x_hi.values());
}

} // namespace areaport
