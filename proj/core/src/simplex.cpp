#include "areaport/simplex.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace areaport
{

PortfolioWeights project_simplex(const VectorRef &y)
{
    const Eigen::Index n = y.size();
    if (n < 1)
        throw std::invalid_argument("project_simplex: empty input");
    if (!y.allFinite())
        throw std::invalid_argument("project_simplex: non-finite input");

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return y(a) > y(b); });

    // Largest k with y_(k) - (sum_{j<=k} y_(j) - 1) / k > 0. The condition holds
    // for k = 1 and is monotone, so the last k that passes is the answer.
    double prefix = 0.0;
    double theta = y(order[0]) - 1.0;
    for (Eigen::Index k = 1; k <= n; ++k)
    {
        const double value = y(order[static_cast<std::size_t>(k - 1)]);
        prefix += value;
        const double candidate = (prefix - 1.0) / static_cast<double>(k);
        if (value - candidate > 0.0)
            theta = candidate;
        else
            break;
    }

    Vector x = (y.array() - theta).cwiseMax(0.0).matrix();
    // Fold the rounding residue of the sum into the largest entry.
    x(order[0]) += 1.0 - x.sum();
    return PortfolioWeights(std::move(x));
}

bool is_in_simplex(const VectorRef &x, double nonneg_tol, double sum_tol)
{
    return x.size() > 0 && x.allFinite() && x.minCoeff() >= -nonneg_tol && std::abs(x.sum() - 1.0) <= sum_tol;
}

bool is_in_X(const ReferencePoint &ref, const ObjectivePair &pair, double tol)
{
    return pair.gain >= ref.gamma_ref - tol && pair.risk <= ref.rho_ref + tol;
}

bool is_in_X(const AreaProblem &problem, const VectorRef &x, double tol)
{
    return is_in_X(problem.reference(), evaluate(problem.model(), x), tol);
}

} // namespace areaport
