#include "areaport/objectives.hpp"

#include "areaport/error.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace areaport
{
namespace
{

void check_dimension(const MarketModel &model, const VectorRef &x)
{
    if (x.size() != model.size())
    {
        throw std::invalid_argument("dimension mismatch: model has " + std::to_string(model.size()) +
                                    " assets, weights have " + std::to_string(x.size()));
    }
}

} // namespace

PortfolioWeights::PortfolioWeights(Vector x) : x_(std::move(x))
{
    if (x_.size() < 1)
        throw std::invalid_argument("portfolio needs at least one weight");
    if (!x_.allFinite())
        throw std::invalid_argument("portfolio weights must be finite");
    if (x_.minCoeff() < -1e-12)
        throw std::invalid_argument("portfolio weights must be nonnegative");
    if (std::abs(x_.sum() - 1.0) > 1e-10)
        throw std::invalid_argument("portfolio weights must sum to 1");
}

PortfolioWeights PortfolioWeights::vertex(Eigen::Index n, Eigen::Index i)
{
    if (i < 0 || i >= n)
        throw std::out_of_range("vertex index out of range");
    return PortfolioWeights(Vector::Unit(n, i));
}

PortfolioWeights PortfolioWeights::uniform(Eigen::Index n)
{
    if (n < 1)
        throw std::invalid_argument("portfolio needs at least one weight");
    return PortfolioWeights(Vector::Constant(n, 1.0 / static_cast<double>(n)));
}

std::string_view to_string(ReferenceKind kind)
{
    switch (kind)
    {
    case ReferenceKind::nadir:
        return "nadir";
    case ReferenceKind::worst:
        return "worst";
    case ReferenceKind::custom:
        return "custom";
    }
    return "custom";
}

ReferenceKind parse_reference_kind(std::string_view text)
{
    if (text == "nadir")
        return ReferenceKind::nadir;
    if (text == "worst")
        return ReferenceKind::worst;
    if (text == "custom")
        return ReferenceKind::custom;
    throw std::invalid_argument("unknown reference kind '" + std::string(text) + "'");
}

AreaProblem::AreaProblem(MarketModel model, ReferencePoint ref) : model_(std::move(model)), ref_(ref)
{
    if (!std::isfinite(ref_.rho_ref) || !std::isfinite(ref_.gamma_ref))
        throw std::invalid_argument("reference point must be finite");
}

double gain(const MarketModel &model, const VectorRef &x)
{
    check_dimension(model, x);
    return 100.0 * model.mean().dot(x);
}

double risk(const MarketModel &model, const VectorRef &x)
{
    check_dimension(model, x);
    return 100.0 * x.dot(model.covariance() * x);
}

ObjectivePair evaluate(const MarketModel &model, const VectorRef &x)
{
    return {gain(model, x), risk(model, x)};
}

double area(const ReferencePoint &ref, const ObjectivePair &pair)
{
    return (pair.gain - ref.gamma_ref) * (ref.rho_ref - pair.risk);
}

double area(const AreaProblem &problem, const VectorRef &x)
{
    return area(problem.reference(), evaluate(problem.model(), x));
}

Vector grad_area(const AreaProblem &problem, const VectorRef &x)
{
    const MarketModel &model = problem.model();
    check_dimension(model, x);
    const Vector vx = model.covariance() * x;
    const double height = 100.0 * model.mean().dot(x) - problem.reference().gamma_ref;
    const double base = problem.reference().rho_ref - 100.0 * x.dot(vx);
    return (100.0 * base) * model.mean() - (200.0 * height) * vx;
}

double max_eigenvalue(const Eigen::MatrixXd &symmetric_psd)
{
    const Eigen::Index n = symmetric_psd.rows();
    if (n == 0 || symmetric_psd.cols() != n)
        throw std::invalid_argument("max_eigenvalue needs a non-empty square matrix");
    if (!symmetric_psd.allFinite())
        throw NumericalError("max_eigenvalue: matrix has non-finite entries");
    if (symmetric_psd.cwiseAbs().maxCoeff() == 0.0)
        return 0.0;

    // Fixed, non-symmetric start so the iteration is deterministic and not
    // orthogonal to the dominant eigenvector for structured matrices.
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v(i) = 1.0 + 0.5 * std::sin(1.7 * static_cast<double>(i + 1));
    v.normalize();

    constexpr int max_iterations = 10000;
    constexpr double tolerance = 1e-10;
    double estimate = 0.0;
    for (int it = 0; it < max_iterations; ++it)
    {
        Vector w = symmetric_psd * v;
        const double norm = w.norm();
        if (!std::isfinite(norm))
            throw NumericalError("max_eigenvalue: power iteration diverged");
        if (norm == 0.0)
            return estimate;
        const double previous = estimate;
        estimate = norm;
        v = w / norm;
        if (it > 0 && std::abs(estimate - previous) <= tolerance * estimate)
            break;
    }
    return estimate;
}

double lipschitz_bound(const AreaProblem &problem, const IdealPoint &ideal)
{
    const MarketModel &model = problem.model();
    const double lambda = max_eigenvalue(model.covariance());

    const double grad_risk_modulus = 200.0 * lambda;
    const double risk_modulus = 200.0 * lambda; // |x|_2 <= 1 on the simplex
    const double gain_modulus = 100.0 * model.mean().norm();

    const double height_span = std::max(0.0, ideal.gamma_max - problem.reference().gamma_ref);
    return grad_risk_modulus * height_span + 2.0 * risk_modulus * gain_modulus;
}

} // namespace areaport
