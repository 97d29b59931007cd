/**
 * @file market_data.hpp
 * @brief Return-series ingestion and mean-variance model estimation.
 *
 * Returns are simple per-period fractions (0.012 == 1.2% for the period).
 * The model stores the raw column means and the unbiased sample covariance;
 * percent scaling happens in the objective evaluations.
 */

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace areaport
{

struct CsvSpec
{
    bool date_column = false; ///< First column holds period labels and is dropped
    char delimiter = ',';
};

/// T x n matrix of simple returns, one row per period, one column per asset.
struct ReturnsMatrix
{
    Eigen::MatrixXd values;
    std::vector<std::string> asset_labels;
    std::string period_label = "weekly";

    Eigen::Index periods() const { return values.rows(); }
    Eigen::Index assets() const { return values.cols(); }
};

/// Throws DataError if T < 2, n < 2, labels mismatch or repeat, or any entry
/// is non-finite or <= -1.
void validate(const ReturnsMatrix &returns);

/// Mean vector and covariance matrix of asset returns.
///
/// The covariance is symmetrized on construction and must be positive
/// semidefinite up to a relative slack of 1e-10 * trace / n.
class MarketModel
{
public:
    MarketModel(Eigen::VectorXd mean, Eigen::MatrixXd covariance);

    const Eigen::VectorXd &mean() const { return mean_; }
    const Eigen::MatrixXd &covariance() const { return covariance_; }
    Eigen::Index size() const { return mean_.size(); }

    /// Same means, covariance multiplied by eta > 0.
    MarketModel with_scaled_covariance(double eta) const;

private:
    Eigen::VectorXd mean_;
    Eigen::MatrixXd covariance_;
};

ReturnsMatrix load_returns(std::istream &source, const CsvSpec &format = {});
ReturnsMatrix load_returns_file(const std::filesystem::path &path, const CsvSpec &format = {});

/// Column means and unbiased (T - 1) sample covariance.
MarketModel estimate_model(const ReturnsMatrix &returns);

/// Seeded one-factor return generator used for self-contained test instances.
ReturnsMatrix synthetic_returns(Eigen::Index assets, Eigen::Index periods, std::uint64_t seed);

/// Writes the CSV layout accepted by load_returns (header row, no date column).
void write_returns_csv(std::ostream &out, const ReturnsMatrix &returns);

} // namespace areaport
