/**
 * @file objectives.hpp
 * @brief Percent-scaled gain and risk, the rectangle-area objective and its gradient.
 *
 * gain(x) = 100 m'x, risk(x) = 100 x'Vx. Given a reference point
 * (rho_ref, gamma_ref), the area objective is
 *
 *     A(x) = (gain(x) - gamma_ref) * (rho_ref - risk(x))
 *
 * which is positive exactly on the portfolios that strictly dominate the
 * reference point. A is evaluated on all of R^n; restricting to the feasible
 * region is left to the caller.
 */

#pragma once

#include "areaport/market_data.hpp"

#include <Eigen/Dense>

#include <string_view>

namespace areaport
{

using Vector = Eigen::VectorXd;
using VectorRef = Eigen::Ref<const Eigen::VectorXd>;

/// Long-only, fully invested weights: x >= 0 (1e-12) and sum(x) == 1 (1e-10).
class PortfolioWeights
{
public:
    explicit PortfolioWeights(Vector x);

    static PortfolioWeights vertex(Eigen::Index n, Eigen::Index i);
    static PortfolioWeights uniform(Eigen::Index n);

    const Vector &values() const { return x_; }
    Eigen::Index size() const { return x_.size(); }
    double operator[](Eigen::Index i) const { return x_(i); }

private:
    Vector x_;
};

enum class ReferenceKind
{
    nadir,
    worst,
    custom,
};

std::string_view to_string(ReferenceKind kind);
ReferenceKind parse_reference_kind(std::string_view text);

struct ReferencePoint
{
    double rho_ref = 0.0;   ///< percent risk
    double gamma_ref = 0.0; ///< percent gain
    ReferenceKind kind = ReferenceKind::custom;
};

/// Best attainable risk and gain (percent).
struct IdealPoint
{
    double rho_min = 0.0;
    double gamma_max = 0.0;
};

struct ObjectivePair
{
    double gain = 0.0;
    double risk = 0.0;
};

class AreaProblem
{
public:
    AreaProblem(MarketModel model, ReferencePoint ref);

    const MarketModel &model() const { return model_; }
    const ReferencePoint &reference() const { return ref_; }
    Eigen::Index size() const { return model_.size(); }

private:
    MarketModel model_;
    ReferencePoint ref_;
};

double gain(const MarketModel &model, const VectorRef &x);
double risk(const MarketModel &model, const VectorRef &x);
ObjectivePair evaluate(const MarketModel &model, const VectorRef &x);

double area(const AreaProblem &problem, const VectorRef &x);
double area(const ReferencePoint &ref, const ObjectivePair &pair);

/// (rho_ref - risk(x)) * 100 m - (gain(x) - gamma_ref) * 200 V x
Vector grad_area(const AreaProblem &problem, const VectorRef &x);

/// Largest eigenvalue of a symmetric PSD matrix by power iteration
/// (relative tolerance 1e-10, at most 10000 iterations).
double max_eigenvalue(const Eigen::MatrixXd &symmetric_psd);

/// Lipschitz constant of grad A over the feasible region,
///
///     L = 200 lambda_max(V) (gamma_max - gamma_ref) + 2 * (200 lambda_max(V)) * (100 |m|_2)
///
/// The gain gradient is constant, so its own modulus contributes nothing.
/// Using the ideal values over the whole simplex only enlarges L.
double lipschitz_bound(const AreaProblem &problem, const IdealPoint &ideal);

} // namespace areaport
