#pragma once

#include "areaport/objectives.hpp"

namespace areaport
{

inline constexpr double kFeasibilityTolerance = 1e-9;

/// Euclidean projection onto {x >= 0, sum(x) = 1} by sort-and-threshold.
/// Throws std::invalid_argument on empty or non-finite input.
PortfolioWeights project_simplex(const VectorRef &y);

/// x >= -nonneg_tol componentwise and |sum(x) - 1| <= sum_tol.
bool is_in_simplex(const VectorRef &x, double nonneg_tol = 1e-12, double sum_tol = 1e-10);

/// gain(x) >= gamma_ref - tol and risk(x) <= rho_ref + tol.
bool is_in_X(const AreaProblem &problem, const VectorRef &x, double tol = kFeasibilityTolerance);
bool is_in_X(const ReferencePoint &ref, const ObjectivePair &pair, double tol = kFeasibilityTolerance);

} // namespace areaport
