/**
 * @file analysis.hpp
 * @brief Comparison metrics, the area-vs-epsilon-constraint sweep, and
 *        brute-force simplex-grid oracles.
 */

#pragma once

#include "areaport/area_solver.hpp"
#include "areaport/convex_baselines.hpp"
#include "areaport/objectives.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace areaport
{

inline constexpr double kActivePositionThreshold = 1e-3;

struct BetaMetrics
{
    double beta1 = 0.0; ///< (gamma_max - gain) / (gamma_max - gamma_ref)
    double beta2 = 0.0; ///< (risk - rho_min) / (rho_ref - rho_min)
    double norm = 0.0;
};

/// Throws DegenerateError when either normalization span is not positive.
BetaMetrics beta_metrics(const IdealPoint &ideal, const ReferencePoint &ref, const ObjectivePair &pair);

enum class ImprovedObjective
{
    gain,
    risk,
    none,
};

std::string_view to_string(ImprovedObjective objective);

/// Factor by which x improves one objective relative to the area optimum, and
/// the factor by which it must give up the other. A zero denominator in the
/// worsening ratio is reported as +infinity.
struct TradeOff
{
    double improve = 1.0;
    double worsen = 1.0;
    ImprovedObjective improved = ImprovedObjective::none;

    /// Gain-side and risk-side factors, in the column order of the report.
    double gain_factor() const { return improved == ImprovedObjective::risk ? worsen : improve; }
    double risk_factor() const { return improved == ImprovedObjective::risk ? improve : worsen; }
};

TradeOff improve_worsen(const ReferencePoint &ref, const ObjectivePair &pair_area, const ObjectivePair &pair_x);

int active_positions(const VectorRef &x, double threshold = kActivePositionThreshold);

struct ReportRow
{
    std::string method;          ///< "area" or "eps(<alpha>)"
    std::optional<double> alpha; ///< set for epsilon-constraint rows
    std::optional<double> gain_floor;
    PortfolioWeights weights;
    ObjectivePair objectives;
    double area_value = 0.0;
    BetaMetrics beta;
    TradeOff trade_off;
    int active = 0;
};

struct Frontier
{
    std::vector<ReportRow> rows; ///< area row first, then one row per alpha
    IdealPoint ideal;
    ReferencePoint ref;
    bool degenerate = false;
    std::optional<SolverResult> area_result;
};

struct SweepConfig
{
    SolverConfig solver;
    EpsilonOptions epsilon;
    bool parallel = true; ///< solve epsilon rows concurrently
};

/// One area row plus one epsilon-constraint row per alpha, every row scored
/// against the area solution. A degenerate market yields an empty, flagged frontier.
Frontier run_sweep(const MarketModel &model, const ReferencePoint &ref, std::span<const double> alphas,
                   const SweepConfig &config = {});
Frontier run_sweep(const MarketModel &model, ReferenceKind kind, std::span<const double> alphas,
                   const SweepConfig &config = {});

inline const std::vector<double> kDefaultAlphas{0.01, 0.25, 0.5, 0.75, 0.99};

// Brute-force oracles over the grid {x in simplex : x_i multiple of step}.
// Limited to n <= 4; ties resolve to the first point in lexicographic order.

struct GridOptimum
{
    Vector x;
    double value = 0.0;
};

/// Maximizer of A over grid points inside the dominance region (tolerance 1e-9).
std::optional<GridOptimum> grid_oracle_max_area(const AreaProblem &problem, double step);

/// Whether some grid point dominates `pair` with margin 1e-6 in at least one
/// objective and no loss in the other.
bool grid_oracle_dominates(const AreaProblem &problem, const ObjectivePair &pair, double step,
                           double margin = 1e-6);

/// Minimum risk over grid points with gain >= gain_floor, plus the points where
/// grid edges cross the level set gain == gain_floor.
std::optional<GridOptimum> grid_oracle_min_risk(const MarketModel &model, double gain_floor, double step);

} // namespace areaport
