#include "areaport/market_data.hpp"

#include "areaport/error.hpp"

#include <Eigen/Cholesky>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <unordered_set>

namespace areaport
{
namespace
{

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

// Splits one CSV record. Double-quoted fields may contain the delimiter and
// escaped quotes (""), but not line breaks.
std::vector<std::string> split_record(const std::string &line, char delimiter, std::size_t line_no)
{
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i)
    {
        const char c = line[i];
        if (quoted)
        {
            if (c == '"')
            {
                if (i + 1 < line.size() && line[i + 1] == '"')
                {
                    current.push_back('"');
                    ++i;
                }
                else
                {
                    quoted = false;
                }
            }
            else
            {
                current.push_back(c);
            }
        }
        else if (c == '"' && trim(current).empty())
        {
            current.clear();
            quoted = true;
            was_quoted = true;
        }
        else if (c == delimiter)
        {
            fields.push_back(was_quoted ? current : trim(current));
            current.clear();
            was_quoted = false;
        }
        else
        {
            current.push_back(c);
        }
    }
    if (quoted)
        throw DataError("malformed CSV: unterminated quote on line " + std::to_string(line_no));
    fields.push_back(was_quoted ? current : trim(current));
    return fields;
}

bool blank(const std::string &line)
{
    return line.find_first_not_of(" \t\r") == std::string::npos;
}

std::string cell_ref(std::size_t line_no, std::size_t column)
{
    return "line " + std::to_string(line_no) + ", column " + std::to_string(column);
}

double parse_cell(const std::string &text, std::size_t line_no, std::size_t column)
{
    if (text.empty())
        throw DataError("missing value at " + cell_ref(line_no, column));
    const char *begin = text.data();
    const char *end = text.data() + text.size();
    if (*begin == '+')
        ++begin;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        throw DataError("non-numeric value '" + text + "' at " + cell_ref(line_no, column));
    if (!std::isfinite(value))
        throw DataError("non-finite value '" + text + "' at " + cell_ref(line_no, column));
    if (value <= -1.0)
        throw DataError("return " + text + " <= -1 at " + cell_ref(line_no, column));
    return value;
}

} // namespace

void validate(const ReturnsMatrix &returns)
{
    if (returns.periods() < 2)
        throw DataError("at least 2 return periods are required, got " + std::to_string(returns.periods()));
    if (returns.assets() < 2)
        throw DataError("at least 2 assets are required, got " + std::to_string(returns.assets()));
    if (static_cast<Eigen::Index>(returns.asset_labels.size()) != returns.assets())
        throw DataError("asset label count does not match column count");
    std::unordered_set<std::string> seen;
    for (const auto &label : returns.asset_labels)
    {
        if (!seen.insert(label).second)
            throw DataError("duplicate asset label '" + label + "'");
    }
    for (Eigen::Index t = 0; t < returns.periods(); ++t)
    {
        for (Eigen::Index j = 0; j < returns.assets(); ++j)
        {
            const double r = returns.values(t, j);
            if (!std::isfinite(r) || r <= -1.0)
            {
                throw DataError("invalid return at period " + std::to_string(t) + ", asset '" +
                                returns.asset_labels[static_cast<std::size_t>(j)] + "'");
            }
        }
    }
}

MarketModel::MarketModel(Eigen::VectorXd mean, Eigen::MatrixXd covariance)
    : mean_(std::move(mean)), covariance_(std::move(covariance))
{
    const Eigen::Index n = mean_.size();
    if (n < 1)
        throw std::invalid_argument("market model needs at least one asset");
    if (covariance_.rows() != n || covariance_.cols() != n)
        throw std::invalid_argument("covariance must be " + std::to_string(n) + "x" + std::to_string(n));
    if (!mean_.allFinite() || !covariance_.allFinite())
        throw std::invalid_argument("market model entries must be finite");

    const double asymmetry = (covariance_ - covariance_.transpose()).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, covariance_.cwiseAbs().maxCoeff());
    if (asymmetry > 1e-8 * scale)
        throw std::invalid_argument("covariance is not symmetric");
    covariance_ = 0.5 * (covariance_ + covariance_.transpose()).eval();

    // V + slack*I must admit a Cholesky factorization, i.e. lambda_min(V) >= -slack.
    const double slack = std::max(1e-10 * covariance_.trace() / static_cast<double>(n), 1e-300);
    Eigen::MatrixXd shifted = covariance_;
    shifted.diagonal().array() += slack;
    Eigen::LLT<Eigen::MatrixXd> llt(shifted);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("covariance is not positive semidefinite");
}

MarketModel MarketModel::with_scaled_covariance(double eta) const
{
    if (!(eta > 0.0))
        throw std::invalid_argument("covariance scale must be positive");
    return MarketModel(mean_, eta * covariance_);
}

ReturnsMatrix load_returns(std::istream &source, const CsvSpec &format)
{
    std::string line;
    std::size_t line_no = 0;

    std::vector<std::string> header;
    while (std::getline(source, line))
    {
        ++line_no;
        if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0)
            line.erase(0, 3);
        if (!blank(line))
        {
            header = split_record(line, format.delimiter, line_no);
            break;
        }
    }
    if (header.empty())
        throw DataError("malformed CSV: missing header row");

    const std::size_t skip = format.date_column ? 1 : 0;
    if (header.size() <= skip)
        throw DataError("malformed CSV: header has no asset columns");

    ReturnsMatrix out;
    out.asset_labels.assign(header.begin() + static_cast<std::ptrdiff_t>(skip), header.end());
    for (std::size_t j = 0; j < out.asset_labels.size(); ++j)
    {
        if (out.asset_labels[j].empty())
            throw DataError("malformed CSV: empty asset label in header column " + std::to_string(j + skip + 1));
    }

    std::vector<std::vector<double>> rows;
    while (std::getline(source, line))
    {
        ++line_no;
        if (blank(line))
            continue;
        const auto fields = split_record(line, format.delimiter, line_no);
        if (fields.size() != header.size())
        {
            throw DataError("inconsistent row width on line " + std::to_string(line_no) + ": expected " +
                            std::to_string(header.size()) + " fields, got " + std::to_string(fields.size()));
        }
        std::vector<double> row;
        row.reserve(fields.size() - skip);
        for (std::size_t j = skip; j < fields.size(); ++j)
            row.push_back(parse_cell(fields[j], line_no, j + 1));
        rows.push_back(std::move(row));
    }
    if (source.bad())
        throw DataError("read error on line " + std::to_string(line_no + 1));

    const auto n = static_cast<Eigen::Index>(out.asset_labels.size());
    out.values.resize(static_cast<Eigen::Index>(rows.size()), n);
    for (std::size_t t = 0; t < rows.size(); ++t)
    {
        for (Eigen::Index j = 0; j < n; ++j)
            out.values(static_cast<Eigen::Index>(t), j) = rows[t][static_cast<std::size_t>(j)];
    }

    validate(out);
    return out;
}

ReturnsMatrix load_returns_file(const std::filesystem::path &path, const CsvSpec &format)
{
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open '" + path.string() + "'");
    return load_returns(in, format);
}

MarketModel estimate_model(const ReturnsMatrix &returns)
{
    if (returns.periods() < 2)
        throw DataError("covariance needs at least 2 periods");
    const Eigen::VectorXd mean = returns.values.colwise().mean().transpose();
    const Eigen::MatrixXd centered = returns.values.rowwise() - mean.transpose();
    Eigen::MatrixXd covariance = (centered.transpose() * centered) / static_cast<double>(returns.periods() - 1);
    return MarketModel(mean, std::move(covariance));
}

ReturnsMatrix synthetic_returns(Eigen::Index assets, Eigen::Index periods, std::uint64_t seed)
{
    if (assets < 2 || periods < 2)
        throw std::invalid_argument("synthetic market needs at least 2 assets and 2 periods");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> drift(0.0005, 0.006);
    std::uniform_real_distribution<double> loading(0.3, 1.5);
    std::uniform_real_distribution<double> idio(0.01, 0.05);
    std::normal_distribution<double> normal(0.0, 1.0);

    Eigen::VectorXd mu(assets), beta(assets), sigma(assets);
    for (Eigen::Index j = 0; j < assets; ++j)
    {
        mu(j) = drift(rng);
        beta(j) = loading(rng);
        sigma(j) = idio(rng);
    }

    ReturnsMatrix out;
    out.values.resize(periods, assets);
    for (Eigen::Index t = 0; t < periods; ++t)
    {
        const double market = 0.02 * normal(rng);
        for (Eigen::Index j = 0; j < assets; ++j)
        {
            const double r = mu(j) + beta(j) * market + sigma(j) * normal(rng);
            out.values(t, j) = std::max(r, -0.95);
        }
    }
    out.asset_labels.reserve(static_cast<std::size_t>(assets));
    for (Eigen::Index j = 0; j < assets; ++j)
        out.asset_labels.push_back("A" + std::to_string(j + 1));
    return out;
}

void write_returns_csv(std::ostream &out, const ReturnsMatrix &returns)
{
    for (std::size_t j = 0; j < returns.asset_labels.size(); ++j)
        out << (j ? "," : "") << returns.asset_labels[j];
    out << '\n';

    std::ostringstream cell;
    cell.imbue(std::locale::classic());
    cell << std::setprecision(17);
    for (Eigen::Index t = 0; t < returns.periods(); ++t)
    {
        for (Eigen::Index j = 0; j < returns.assets(); ++j)
        {
            cell.str({});
            cell << returns.values(t, j);
            out << (j ? "," : "") << cell.str();
        }
        out << '\n';
    }
}

} // namespace areaport
