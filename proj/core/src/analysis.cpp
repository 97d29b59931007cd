#include "areaport/analysis.hpp"

#include "areaport/error.hpp"
#include "areaport/simplex.hpp"

#include <cmath>
#include <future>
#include <iomanip>
#include <limits>
#include <sstream>

namespace areaport
{
namespace
{

constexpr Eigen::Index kMaxGridDimension = 4;

long grid_divisions(Eigen::Index n, double step)
{
    if (n > kMaxGridDimension)
        throw std::invalid_argument("grid oracle limited to n <= 4, got n = " + std::to_string(n));
    if (n < 1)
        throw std::invalid_argument("grid oracle needs at least one asset");
    if (!(step > 0.0 && step <= 1.0))
        throw std::invalid_argument("grid step must lie in (0, 1]");
    const long divisions = std::lround(1.0 / step);
    if (std::abs(static_cast<double>(divisions) * step - 1.0) > 1e-9)
        throw std::invalid_argument("grid step must divide 1");
    return divisions;
}

// Visits every composition of `divisions` into n parts, lexicographically
// increasing in (c_0, c_1, ...). The point handed to `visit` is c / divisions.
template <typename Visit>
void for_each_grid_point(Eigen::Index n, long divisions, Visit &&visit)
{
    std::vector<long> counts(static_cast<std::size_t>(n), 0);
    Vector x(n);
    auto recurse = [&](auto &&self, Eigen::Index i, long remaining) -> void {
        if (i == n - 1)
        {
            counts[static_cast<std::size_t>(i)] = remaining;
            for (Eigen::Index j = 0; j < n; ++j)
                x(j) = static_cast<double>(counts[static_cast<std::size_t>(j)]) / static_cast<double>(divisions);
            visit(static_cast<const Vector &>(x), static_cast<const std::vector<long> &>(counts));
            return;
        }
        for (long c = 0; c <= remaining; ++c)
        {
            counts[static_cast<std::size_t>(i)] = c;
            self(self, i + 1, remaining - c);
        }
    };
    recurse(recurse, 0, divisions);
}

double ratio_or_infinity(double numerator, double denominator)
{
    if (denominator <= 0.0)
        return std::numeric_limits<double>::infinity();
    return numerator / denominator;
}

std::string method_label(double alpha)
{
    std::ostringstream out;
    out << "eps(" << std::fixed << std::setprecision(2) << alpha << ")";
    return out.str();
}

ReportRow make_row(std::string method, const MarketModel &model, const PortfolioWeights &x, const IdealPoint &ideal,
                   const ReferencePoint &ref, const ObjectivePair &area_pair)
{
    const ObjectivePair pair = evaluate(model, x.values());
    return ReportRow{std::move(method),
                     std::nullopt,
                     std::nullopt,
                     x,
                     pair,
                     area(ref, pair),
                     beta_metrics(ideal, ref, pair),
                     improve_worsen(ref, area_pair, pair),
                     active_positions(x.values())};
}

} // namespace

BetaMetrics beta_metrics(const IdealPoint &ideal, const ReferencePoint &ref, const ObjectivePair &pair)
{
    const double gain_span = ideal.gamma_max - ref.gamma_ref;
    const double risk_span = ref.rho_ref - ideal.rho_min;
    if (!(gain_span > 0.0) || !(risk_span > 0.0))
        throw DegenerateError("beta metrics undefined: ideal and reference values coincide");
    BetaMetrics out;
    out.beta1 = (ideal.gamma_max - pair.gain) / gain_span;
    out.beta2 = (pair.risk - ideal.rho_min) / risk_span;
    out.norm = std::hypot(out.beta1, out.beta2);
    return out;
}

std::string_view to_string(ImprovedObjective objective)
{
    switch (objective)
    {
    case ImprovedObjective::gain:
        return "gain";
    case ImprovedObjective::risk:
        return "risk";
    case ImprovedObjective::none:
        return "none";
    }
    return "none";
}

TradeOff improve_worsen(const ReferencePoint &ref, const ObjectivePair &pair_area, const ObjectivePair &pair_x)
{
    const double height_area = pair_area.gain - ref.gamma_ref;
    const double base_area = ref.rho_ref - pair_area.risk;
    if (!(height_area > 0.0) || !(base_area > 0.0))
        throw DegenerateError("trade-off factors need an area solution strictly inside the dominance region");

    const double height_x = pair_x.gain - ref.gamma_ref;
    const double base_x = ref.rho_ref - pair_x.risk;
    if (pair_x.gain > pair_area.gain)
        return {height_x / height_area, ratio_or_infinity(base_area, base_x), ImprovedObjective::gain};
    if (pair_x.risk < pair_area.risk)
        return {base_x / base_area, ratio_or_infinity(height_area, height_x), ImprovedObjective::risk};
    return {1.0, 1.0, ImprovedObjective::none};
}

int active_positions(const VectorRef &x, double threshold)
{
    return static_cast<int>((x.array() >= threshold).count());
}

Frontier run_sweep(const MarketModel &model, const ReferencePoint &ref, std::span<const double> alphas,
                   const SweepConfig &config)
{
    for (const double alpha : alphas)
    {
        if (!(alpha >= 0.0 && alpha <= 1.0))
            throw std::invalid_argument("alpha values must lie in [0, 1]");
    }

    const BaselinePortfolios baselines = compute_baselines(model);
    Frontier frontier;
    frontier.ideal = ideal_point(model, baselines);
    frontier.ref = ref;

    const AreaProblem problem(model, ref);
    const StartingPoint start = starting_point(problem, baselines);
    if (start.degenerate)
    {
        frontier.degenerate = true;
        SolverResult flagged = solve(problem, config.solver, start.x, 0.0);
        flagged.status = SolverStatus::degenerate_zero_area;
        frontier.area_result = std::move(flagged);
        return frontier;
    }

    SolverResult solved = solve(problem, config.solver, start.x, lipschitz_bound(problem, frontier.ideal));
    if (solved.status == SolverStatus::degenerate_zero_area)
    {
        frontier.degenerate = true;
        frontier.area_result = std::move(solved);
        return frontier;
    }

    const ObjectivePair area_pair = solved.objectives;
    frontier.rows.push_back(make_row("area", model, solved.x, frontier.ideal, ref, area_pair));
    frontier.rows.front().trade_off = {1.0, 1.0, ImprovedObjective::none};
    frontier.area_result = std::move(solved);

    auto epsilon_row = [&](double alpha) {
        const auto spec = EpsilonConstraintSpec::from_alpha(alpha, frontier.ideal, ref);
        const PortfolioWeights x = epsilon_constraint_solve(model, spec, config.epsilon);
        ReportRow row = make_row(method_label(alpha), model, x, frontier.ideal, ref, area_pair);
        row.alpha = alpha;
        row.gain_floor = spec.gain_floor;
        return row;
    };

    if (config.parallel && alphas.size() > 1)
    {
        std::vector<std::future<ReportRow>> pending;
        pending.reserve(alphas.size());
        for (const double alpha : alphas)
            pending.push_back(std::async(std::launch::async, epsilon_row, alpha));
        for (auto &row : pending)
            frontier.rows.push_back(row.get());
    }
    else
    {
        for (const double alpha : alphas)
            frontier.rows.push_back(epsilon_row(alpha));
    }
    return frontier;
}

Frontier run_sweep(const MarketModel &model, ReferenceKind kind, std::span<const double> alphas,
                   const SweepConfig &config)
{
    return run_sweep(model, reference_point(model, kind), alphas, config);
}

std::optional<GridOptimum> grid_oracle_max_area(const AreaProblem &problem, double step)
{
    const long divisions = grid_divisions(problem.size(), step);
    std::optional<GridOptimum> best;
    for_each_grid_point(problem.size(), divisions, [&](const Vector &x, const std::vector<long> &) {
        const ObjectivePair pair = evaluate(problem.model(), x);
        if (!is_in_X(problem.reference(), pair))
            return;
        const double value = area(problem.reference(), pair);
        if (!best || value > best->value)
            best = GridOptimum{x, value};
    });
    return best;
}

bool grid_oracle_dominates(const AreaProblem &problem, const ObjectivePair &pair, double step, double margin)
{
    const long divisions = grid_divisions(problem.size(), step);
    bool found = false;
    for_each_grid_point(problem.size(), divisions, [&](const Vector &x, const std::vector<long> &) {
        if (found)
            return;
        const ObjectivePair candidate = evaluate(problem.model(), x);
        const double gain_gap = candidate.gain - pair.gain;
        const double risk_gap = pair.risk - candidate.risk;
        if (gain_gap >= 0.0 && risk_gap >= 0.0 && (gain_gap > margin || risk_gap > margin))
            found = true;
    });
    return found;
}

std::optional<GridOptimum> grid_oracle_min_risk(const MarketModel &model, double gain_floor, double step)
{
    const Eigen::Index n = model.size();
    const long divisions = grid_divisions(n, step);
    std::optional<GridOptimum> best;
    auto offer = [&](const Vector &x) {
        const double value = risk(model, x);
        if (!best || value < best->value)
            best = GridOptimum{x, value};
    };

    for_each_grid_point(n, divisions, [&](const Vector &x, const std::vector<long> &counts) {
        const double g = gain(model, x);
        if (g >= gain_floor)
        {
            offer(x);
            return;
        }
        // Edges from an infeasible grid point toward x + step (e_i - e_j).
        for (Eigen::Index j = 0; j < n; ++j)
        {
            if (counts[static_cast<std::size_t>(j)] == 0)
                continue;
            for (Eigen::Index i = 0; i < n; ++i)
            {
                if (i == j)
                    continue;
                const double slope = 100.0 * step * (model.mean()(i) - model.mean()(j));
                if (slope <= 0.0 || g + slope < gain_floor)
                    continue;
                const double t = (gain_floor - g) / slope;
                Vector crossing = x;
                crossing(i) += t * step;
                crossing(j) -= t * step;
                offer(crossing);
            }
        }
    });
    return best;
}

} // namespace areaport
