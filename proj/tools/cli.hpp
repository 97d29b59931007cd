#pragma once

#include "areaport/analysis.hpp"
#include "areaport/objectives.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace areaport::cli
{

namespace exit_code
{
inline constexpr int ok = 0;
inline constexpr int usage = 1;
inline constexpr int io = 2;
inline constexpr int degenerate = 3;
inline constexpr int no_convergence = 4;
} // namespace exit_code

enum class OutputFormat
{
    table,
    csv,
    json,
};

struct RunConfig
{
    std::string input_path;
    bool date_column = false;
    ReferenceKind reference_kind = ReferenceKind::nadir;
    std::optional<double> rho_ref;   ///< custom reference only
    std::optional<double> gamma_ref; ///< custom reference only
    std::vector<double> alphas = kDefaultAlphas;
    std::optional<double> tau_override;
    double stat_tol = 1e-5;
    long max_iter = 200000;
    OutputFormat output_format = OutputFormat::table;
    std::optional<std::string> plot_data_path;

    // gen-instance
    std::uint64_t seed = 1;
    long assets = 5;
    long periods = 260;
    std::optional<std::string> output_path;
};

int cmd_stats(const RunConfig &config, std::ostream &out, std::ostream &err);
int cmd_solve(const RunConfig &config, std::ostream &out, std::ostream &err);
int cmd_sweep(const RunConfig &config, std::ostream &out, std::ostream &err);
int cmd_gen_instance(const RunConfig &config, std::ostream &out, std::ostream &err);

/// Parses argv and dispatches to a subcommand; returns the process exit code.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

/// Fixed-point text with `decimals` digits; infinities print as "inf".
std::string format_number(double value, int decimals);

/// series,risk,gain rows: ideal, reference, the four rectangle corners, one
/// frontier row per epsilon row, and the area solution.
void write_plot_data(std::ostream &out, const Frontier &frontier);

std::vector<double> parse_alphas(const std::string &text);

} // namespace areaport::cli
