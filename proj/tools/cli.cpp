#include "cli.hpp"

#include "areaport/area_solver.hpp"
#include "areaport/convex_baselines.hpp"
#include "areaport/error.hpp"
#include "areaport/market_data.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

namespace areaport::cli
{
namespace
{

using Json = nlohmann::ordered_json;

constexpr int kTableDecimals = 3;
constexpr int kMachineDecimals = 6;

struct LoadedMarket
{
    ReturnsMatrix returns;
    MarketModel model;
};

LoadedMarket load_market(const RunConfig &config)
{
    if (config.input_path.empty())
        throw DataError("no input file given (use --input PATH)");
    ReturnsMatrix returns = load_returns_file(config.input_path, CsvSpec{config.date_column, ','});
    MarketModel model = estimate_model(returns);
    return {std::move(returns), std::move(model)};
}

ReferencePoint custom_reference(const RunConfig &config)
{
    if (!config.rho_ref || !config.gamma_ref)
        throw std::invalid_argument("--reference custom needs both --rho-ref and --gamma-ref");
    return {*config.rho_ref, *config.gamma_ref, ReferenceKind::custom};
}

ReferencePoint resolve_reference(const RunConfig &config, const MarketModel &model, const BaselinePortfolios &baselines)
{
    if (config.reference_kind == ReferenceKind::custom)
        return custom_reference(config);
    return reference_point(model, config.reference_kind, baselines);
}

SolverConfig solver_config(const RunConfig &config)
{
    SolverConfig solver;
    solver.tau = config.tau_override;
    solver.stat_tol = config.stat_tol;
    solver.max_iter = config.max_iter;
    return solver;
}

// Rounded to the printed precision so the JSON text and the value it parses
// back to agree exactly.
Json json_number(double value)
{
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    if (std::isnan(value))
        return "nan";
    const double rounded = std::round(value * 1e6) / 1e6;
    return rounded == 0.0 ? 0.0 : rounded;
}

std::string csv_field(const std::string &text)
{
    if (text.find_first_of(",\"\n") == std::string::npos)
        return text;
    std::string quoted = "\"";
    for (const char c : text)
    {
        if (c == '"')
            quoted += '"';
        quoted += c;
    }
    return quoted + '"';
}

int handle_degenerate(std::ostream &err)
{
    err << "error: degenerate market: no portfolio strictly dominates the reference point "
           "(every feasible gain or every feasible risk equals its reference value)\n";
    return exit_code::degenerate;
}

void print_solver_notes(const SolverResult &result, std::ostream &err)
{
    if (result.step_halvings > 0)
    {
        err << "note: stepsize halved " << result.step_halvings << " time(s) to keep the area increasing; tau = "
            << result.tau << "\n";
    }
    if (result.status == SolverStatus::max_iter)
    {
        err << "error: solver stopped at max_iter = " << result.iterations
            << " with residual " << result.stationarity_residual << "\n";
    }
}

} // namespace

std::string format_number(double value, int decimals)
{
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    if (std::isnan(value))
        return "nan";
    std::ostringstream out;
    out.imbue(std::locale::classic());
    out << std::fixed << std::setprecision(decimals) << value;
    std::string text = out.str();
    if (text.find_first_not_of("-0.") == std::string::npos && text.front() == '-')
        text.erase(0, 1);
    return text;
}

std::vector<double> parse_alphas(const std::string &text)
{
    std::vector<double> alphas;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ','))
    {
        const auto first = item.find_first_not_of(" \t");
        if (first == std::string::npos)
            continue;
        std::size_t used = 0;
        double value = 0.0;
        try
        {
            value = std::stod(item.substr(first), &used);
        }
        catch (const std::exception &)
        {
            throw std::invalid_argument("invalid alpha '" + item + "'");
        }
        if (item.find_first_not_of(" \t", first + used) != std::string::npos)
            throw std::invalid_argument("invalid alpha '" + item + "'");
        if (!(value >= 0.0 && value <= 1.0))
            throw std::invalid_argument("alpha " + item + " outside [0, 1]");
        alphas.push_back(value);
    }
    return alphas;
}

void write_plot_data(std::ostream &out, const Frontier &frontier)
{
    auto row = [&](std::string_view series, double risk_value, double gain_value) {
        out << series << ',' << format_number(risk_value, kMachineDecimals) << ','
            << format_number(gain_value, kMachineDecimals) << '\n';
    };
    out << "series,risk,gain\n";
    row("ideal", frontier.ideal.rho_min, frontier.ideal.gamma_max);
    row("reference", frontier.ref.rho_ref, frontier.ref.gamma_ref);
    if (frontier.rows.empty())
        return;

    const ObjectivePair &a = frontier.rows.front().objectives;
    row("rect", a.risk, a.gain);
    row("rect", frontier.ref.rho_ref, a.gain);
    row("rect", frontier.ref.rho_ref, frontier.ref.gamma_ref);
    row("rect", a.risk, frontier.ref.gamma_ref);
    for (std::size_t i = 1; i < frontier.rows.size(); ++i)
        row("frontier", frontier.rows[i].objectives.risk, frontier.rows[i].objectives.gain);
    row("area_solution", a.risk, a.gain);
}

int cmd_stats(const RunConfig &config, std::ostream &out, std::ostream &)
{
    const LoadedMarket market = load_market(config);
    const BaselinePortfolios baselines = compute_baselines(market.model);
    const IdealPoint ideal = ideal_point(market.model, baselines);
    const ReferencePoint ref = resolve_reference(config, market.model, baselines);
    const auto n = market.returns.assets();
    const auto periods = market.returns.periods();

    switch (config.output_format)
    {
    case OutputFormat::table:
        out << std::left << std::setw(11) << "reference" << std::setw(7) << "n" << std::setw(8) << "T"
            << std::right << std::setw(11) << "gamma_ref" << std::setw(11) << "gamma_max" << std::setw(9)
            << "rho_min" << std::setw(9) << "rho_ref" << '\n';
        out << std::left << std::setw(11) << to_string(ref.kind) << std::setw(7) << n << std::setw(8) << periods
            << std::right << std::setw(11) << format_number(ref.gamma_ref, kTableDecimals) << std::setw(11)
            << format_number(ideal.gamma_max, kTableDecimals) << std::setw(9)
            << format_number(ideal.rho_min, kTableDecimals) << std::setw(9)
            << format_number(ref.rho_ref, kTableDecimals) << '\n';
        break;
    case OutputFormat::csv:
        out << "reference,n,T,gamma_ref,gamma_max,rho_min,rho_ref\n"
            << to_string(ref.kind) << ',' << n << ',' << periods << ','
            << format_number(ref.gamma_ref, kMachineDecimals) << ','
            << format_number(ideal.gamma_max, kMachineDecimals) << ','
            << format_number(ideal.rho_min, kMachineDecimals) << ','
            << format_number(ref.rho_ref, kMachineDecimals) << '\n';
        break;
    case OutputFormat::json:
    {
        Json doc;
        doc["reference"] = std::string(to_string(ref.kind));
        doc["n"] = n;
        doc["T"] = periods;
        doc["gamma_ref"] = json_number(ref.gamma_ref);
        doc["gamma_max"] = json_number(ideal.gamma_max);
        doc["rho_min"] = json_number(ideal.rho_min);
        doc["rho_ref"] = json_number(ref.rho_ref);
        out << doc.dump(2) << '\n';
        break;
    }
    }
    return exit_code::ok;
}

int cmd_solve(const RunConfig &config, std::ostream &out, std::ostream &err)
{
    const LoadedMarket market = load_market(config);
    const BaselinePortfolios baselines = compute_baselines(market.model);
    const IdealPoint ideal = ideal_point(market.model, baselines);
    const AreaProblem problem(market.model, resolve_reference(config, market.model, baselines));

    const StartingPoint start = starting_point(problem, baselines);
    if (start.degenerate)
        return handle_degenerate(err);
    const SolverResult result =
        solve(problem, solver_config(config), start.x, lipschitz_bound(problem, ideal));
    if (result.status == SolverStatus::degenerate_zero_area)
        return handle_degenerate(err);

    const auto &labels = market.returns.asset_labels;
    const auto &x = result.x.values();
    switch (config.output_format)
    {
    case OutputFormat::table:
    {
        auto line = [&](std::string_view key, const std::string &value) {
            out << std::left << std::setw(14) << key << value << '\n';
        };
        line("status", std::string(to_string(result.status)));
        line("reference", std::string(to_string(problem.reference().kind)) + " (rho_ref " +
                              format_number(problem.reference().rho_ref, kTableDecimals) + ", gamma_ref " +
                              format_number(problem.reference().gamma_ref, kTableDecimals) + ")");
        line("iterations", std::to_string(result.iterations));
        line("elapsed_s", format_number(result.elapsed_seconds, kTableDecimals));
        line("tau", format_number(result.tau, kMachineDecimals));
        line("x0 gain", format_number(result.start_objectives.gain, kTableDecimals));
        line("x0 risk", format_number(result.start_objectives.risk, kTableDecimals));
        line("x0 area", format_number(result.start_area, kTableDecimals));
        line("gain", format_number(result.objectives.gain, kTableDecimals));
        line("risk", format_number(result.objectives.risk, kTableDecimals));
        line("area", format_number(result.area_value, kTableDecimals));
        line("#ptf_a", std::to_string(active_positions(x)));
        out << "weights (>= " << kActivePositionThreshold << "):\n";
        for (Eigen::Index i = 0; i < x.size(); ++i)
        {
            if (x(i) >= kActivePositionThreshold)
                out << "  " << std::left << std::setw(12) << labels[static_cast<std::size_t>(i)]
                    << format_number(x(i), kTableDecimals) << '\n';
        }
        break;
    }
    case OutputFormat::csv:
    {
        out << "field,value\n";
        out << "status," << to_string(result.status) << '\n';
        out << "reference," << to_string(problem.reference().kind) << '\n';
        out << "rho_ref," << format_number(problem.reference().rho_ref, kMachineDecimals) << '\n';
        out << "gamma_ref," << format_number(problem.reference().gamma_ref, kMachineDecimals) << '\n';
        out << "iterations," << result.iterations << '\n';
        out << "elapsed_s," << format_number(result.elapsed_seconds, kMachineDecimals) << '\n';
        out << "tau," << format_number(result.tau, kMachineDecimals) << '\n';
        out << "x0_gain," << format_number(result.start_objectives.gain, kMachineDecimals) << '\n';
        out << "x0_risk," << format_number(result.start_objectives.risk, kMachineDecimals) << '\n';
        out << "x0_area," << format_number(result.start_area, kMachineDecimals) << '\n';
        out << "gain," << format_number(result.objectives.gain, kMachineDecimals) << '\n';
        out << "risk," << format_number(result.objectives.risk, kMachineDecimals) << '\n';
        out << "area," << format_number(result.area_value, kMachineDecimals) << '\n';
        out << "active_positions," << active_positions(x) << '\n';
        for (Eigen::Index i = 0; i < x.size(); ++i)
            out << csv_field("weight:" + labels[static_cast<std::size_t>(i)]) << ','
                << format_number(x(i), kMachineDecimals) << '\n';
        break;
    }
    case OutputFormat::json:
    {
        Json doc;
        doc["status"] = std::string(to_string(result.status));
        doc["reference"] = {{"kind", std::string(to_string(problem.reference().kind))},
                            {"rho_ref", json_number(problem.reference().rho_ref)},
                            {"gamma_ref", json_number(problem.reference().gamma_ref)}};
        doc["iterations"] = result.iterations;
        doc["elapsed_s"] = json_number(result.elapsed_seconds);
        doc["tau"] = json_number(result.tau);
        doc["start"] = {{"gain", json_number(result.start_objectives.gain)},
                        {"risk", json_number(result.start_objectives.risk)},
                        {"area", json_number(result.start_area)}};
        doc["gain"] = json_number(result.objectives.gain);
        doc["risk"] = json_number(result.objectives.risk);
        doc["area"] = json_number(result.area_value);
        doc["active_positions"] = active_positions(x);
        Json weights = Json::object();
        for (Eigen::Index i = 0; i < x.size(); ++i)
            weights[labels[static_cast<std::size_t>(i)]] = json_number(x(i));
        doc["weights"] = std::move(weights);
        out << doc.dump(2) << '\n';
        break;
    }
    }

    print_solver_notes(result, err);
    return result.status == SolverStatus::max_iter ? exit_code::no_convergence : exit_code::ok;
}

int cmd_sweep(const RunConfig &config, std::ostream &out, std::ostream &err)
{
    const LoadedMarket market = load_market(config);
    const ReferencePoint ref = config.reference_kind == ReferenceKind::custom
                                   ? custom_reference(config)
                                   : reference_point(market.model, config.reference_kind);

    SweepConfig sweep;
    sweep.solver = solver_config(config);
    const Frontier frontier = run_sweep(market.model, ref, config.alphas, sweep);
    if (frontier.degenerate)
        return handle_degenerate(err);

    switch (config.output_format)
    {
    case OutputFormat::table:
    {
        out << std::left << std::setw(14) << "method" << std::right << std::setw(8) << "gain" << std::setw(8)
            << "risk" << std::setw(8) << "A" << std::setw(8) << "beta1" << std::setw(8) << "beta2" << std::setw(8)
            << "|beta|" << std::setw(22) << "gain | risk factor" << std::setw(8) << "#ptf_a" << '\n';
        for (const ReportRow &row : frontier.rows)
        {
            const std::string method =
                row.gain_floor ? "gain>=" + format_number(*row.gain_floor, kTableDecimals) : row.method;
            // '*' marks the improved objective.
            auto factor = [&](double value, bool improved) {
                return (improved ? "*" : "") + format_number(value, kTableDecimals);
            };
            const std::string factors =
                factor(row.trade_off.gain_factor(), row.trade_off.improved == ImprovedObjective::gain) + " | " +
                factor(row.trade_off.risk_factor(), row.trade_off.improved == ImprovedObjective::risk);
            out << std::left << std::setw(14) << method << std::right << std::setw(8)
                << format_number(row.objectives.gain, kTableDecimals) << std::setw(8)
                << format_number(row.objectives.risk, kTableDecimals) << std::setw(8)
                << format_number(row.area_value, kTableDecimals) << std::setw(8)
                << format_number(row.beta.beta1, kTableDecimals) << std::setw(8)
                << format_number(row.beta.beta2, kTableDecimals) << std::setw(8)
                << format_number(row.beta.norm, kTableDecimals) << std::setw(22) << factors << std::setw(8)
                << row.active << '\n';
        }
        break;
    }
    case OutputFormat::csv:
        out << "method,alpha,gain_floor,gain,risk,area,beta1,beta2,beta_norm,improve,worsen,improved,active_positions\n";
        for (const ReportRow &row : frontier.rows)
        {
            out << row.method << ',' << (row.alpha ? format_number(*row.alpha, kMachineDecimals) : "") << ','
                << (row.gain_floor ? format_number(*row.gain_floor, kMachineDecimals) : "") << ','
                << format_number(row.objectives.gain, kMachineDecimals) << ','
                << format_number(row.objectives.risk, kMachineDecimals) << ','
                << format_number(row.area_value, kMachineDecimals) << ','
                << format_number(row.beta.beta1, kMachineDecimals) << ','
                << format_number(row.beta.beta2, kMachineDecimals) << ','
                << format_number(row.beta.norm, kMachineDecimals) << ','
                << format_number(row.trade_off.improve, kMachineDecimals) << ','
                << format_number(row.trade_off.worsen, kMachineDecimals) << ','
                << to_string(row.trade_off.improved) << ',' << row.active << '\n';
        }
        break;
    case OutputFormat::json:
    {
        Json doc;
        doc["ideal"] = {{"rho_min", json_number(frontier.ideal.rho_min)},
                        {"gamma_max", json_number(frontier.ideal.gamma_max)}};
        doc["reference"] = {{"kind", std::string(to_string(frontier.ref.kind))},
                            {"rho_ref", json_number(frontier.ref.rho_ref)},
                            {"gamma_ref", json_number(frontier.ref.gamma_ref)}};
        Json rows = Json::array();
        for (const ReportRow &row : frontier.rows)
        {
            Json item;
            item["method"] = row.method;
            item["alpha"] = row.alpha ? json_number(*row.alpha) : Json(nullptr);
            item["gain_floor"] = row.gain_floor ? json_number(*row.gain_floor) : Json(nullptr);
            item["gain"] = json_number(row.objectives.gain);
            item["risk"] = json_number(row.objectives.risk);
            item["area"] = json_number(row.area_value);
            item["beta1"] = json_number(row.beta.beta1);
            item["beta2"] = json_number(row.beta.beta2);
            item["beta_norm"] = json_number(row.beta.norm);
            item["improve"] = json_number(row.trade_off.improve);
            item["worsen"] = json_number(row.trade_off.worsen);
            item["improved"] = std::string(to_string(row.trade_off.improved));
            item["active_positions"] = row.active;
            rows.push_back(std::move(item));
        }
        doc["rows"] = std::move(rows);
        out << doc.dump(2) << '\n';
        break;
    }
    }

    if (config.plot_data_path)
    {
        std::ofstream plot(*config.plot_data_path);
        if (!plot)
            throw DataError("cannot write plot data to '" + *config.plot_data_path + "'");
        write_plot_data(plot, frontier);
        if (!plot)
            throw DataError("failed writing plot data to '" + *config.plot_data_path + "'");
    }

    print_solver_notes(*frontier.area_result, err);
    return frontier.area_result->status == SolverStatus::max_iter ? exit_code::no_convergence : exit_code::ok;
}

int cmd_gen_instance(const RunConfig &config, std::ostream &out, std::ostream &)
{
    const ReturnsMatrix returns = synthetic_returns(config.assets, config.periods, config.seed);
    if (!config.output_path)
    {
        write_returns_csv(out, returns);
        return exit_code::ok;
    }
    std::ofstream file(*config.output_path);
    if (!file)
        throw DataError("cannot write '" + *config.output_path + "'");
    write_returns_csv(file, returns);
    if (!file)
        throw DataError("failed writing '" + *config.output_path + "'");
    return exit_code::ok;
}

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Rectangle-area portfolio selection: pick the efficient mean-variance portfolio that "
                 "dominates the largest area relative to a reference point."};
    app.name("areaport");
    app.require_subcommand(1);

    RunConfig config;
    std::string reference = "nadir";
    std::string alphas_text;
    std::string format = "table";
    std::optional<std::uint64_t> seed;

    const std::map<std::string, OutputFormat> formats{
        {"table", OutputFormat::table}, {"csv", OutputFormat::csv}, {"json", OutputFormat::json}};

    auto add_market_options = [&](CLI::App *cmd) {
        cmd->add_option("--input", config.input_path, "Returns CSV (header of asset labels, one row per period)")
            ->required();
        cmd->add_flag("--date-column", config.date_column, "First column holds period labels");
        cmd->add_option("--reference", reference, "Reference point")
            ->check(CLI::IsMember({"nadir", "worst", "custom"}));
        cmd->add_option("--rho-ref", config.rho_ref, "Custom reference risk (percent)");
        cmd->add_option("--gamma-ref", config.gamma_ref, "Custom reference gain (percent)");
        cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"table", "csv", "json"}));
    };
    auto add_solver_options = [&](CLI::App *cmd) {
        cmd->add_option("--tau", config.tau_override, "Fixed stepsize (default min(0.1, 1.9/L))")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--stat-tol", config.stat_tol, "Stop when |x_{k+1} - x_k|_inf < stat-tol")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--max-iter", config.max_iter, "Iteration cap")->check(CLI::PositiveNumber);
    };

    CLI::App *stats = app.add_subcommand("stats", "Ideal and reference values of a market");
    add_market_options(stats);

    CLI::App *solve_cmd = app.add_subcommand("solve", "Compute the area-maximizing portfolio");
    add_market_options(solve_cmd);
    add_solver_options(solve_cmd);

    CLI::App *sweep = app.add_subcommand("sweep", "Compare the area portfolio with epsilon-constraint portfolios");
    add_market_options(sweep);
    add_solver_options(sweep);
    sweep->add_option("--alphas", alphas_text, "Comma-separated gain-floor fractions in [0, 1]");
    sweep->add_option("--plot-data", config.plot_data_path, "Write series,risk,gain plot data here");

    CLI::App *gen = app.add_subcommand("gen-instance", "Emit a seeded synthetic returns CSV");
    gen->add_option("--seed", seed, "Random seed");
    gen->add_option("--assets", config.assets, "Number of assets")->check(CLI::Range(2L, 100000L));
    gen->add_option("--periods", config.periods, "Number of periods")->check(CLI::Range(2L, 10000000L));
    gen->add_option("--output", config.output_path, "Output path (default stdout)");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &)
    {
        out << app.help();
        return exit_code::ok;
    }
    catch (const CLI::ParseError &e)
    {
        err << "error: " << e.what() << "\n" << "run with --help for usage\n";
        return exit_code::usage;
    }

    try
    {
        config.reference_kind = parse_reference_kind(reference);
        config.output_format = formats.at(format);
        if (seed)
            config.seed = *seed;
        if (sweep->parsed() && sweep->count("--alphas") > 0)
            config.alphas = parse_alphas(alphas_text);
        if (config.reference_kind != ReferenceKind::custom && (config.rho_ref || config.gamma_ref))
            throw std::invalid_argument("--rho-ref/--gamma-ref require --reference custom");
        if (config.reference_kind == ReferenceKind::custom)
            custom_reference(config);
    }
    catch (const std::exception &e)
    {
        err << "error: " << e.what() << "\n";
        return exit_code::usage;
    }

    try
    {
        if (stats->parsed())
            return cmd_stats(config, out, err);
        if (solve_cmd->parsed())
            return cmd_solve(config, out, err);
        if (sweep->parsed())
            return cmd_sweep(config, out, err);
        return cmd_gen_instance(config, out, err);
    }
    catch (const DataError &e)
    {
        err << "error: " << e.what() << "\n";
        return exit_code::io;
    }
    catch (const DegenerateError &e)
    {
        err << "error: " << e.what() << "\n";
        return exit_code::degenerate;
    }
    catch (const std::exception &e)
    {
        err << "error: " << e.what() << "\n";
        return exit_code::usage;
    }
}

} // namespace areaport::cli
