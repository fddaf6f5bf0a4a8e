#include "portopt/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "portopt/io.hpp"
#include "portopt/robust_model.hpp"

namespace portopt {

using nlohmann::json;

std::string method_tag(Method m) {
    switch (m) {
        case Method::classical: return "classical";
        case Method::robust_mw: return "robust-mw";
        case Method::robust_boot: return "robust-boot";
    }
    return "?";
}

namespace {

std::string gamma_tag(double gamma) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", gamma);
    return buf;
}

json config_json(const RunConfig& cfg) {
    json j{{"input", cfg.input_path},
           {"fill", cfg.fill == FillPolicy::forward_fill ? "forward_fill" : "reject"},
           {"method", method_tag(cfg.method)},
           {"gammas", cfg.gammas},
           {"capital", cfg.capital},
           {"buy_date", cfg.buy_date},
           {"sell_date", cfg.sell_date},
           {"out", cfg.out_dir},
           {"format", cfg.format == OutputFormat::json ? "json" : "csv"},
           {"fractional", cfg.fractional}};
    if (cfg.method == Method::robust_mw) j["window"] = cfg.window;
    if (cfg.method == Method::robust_boot) {
        j["n_boot"] = cfg.bootstrap.n_boot;
        j["alpha"] = cfg.bootstrap.alpha;
        j["seed"] = cfg.bootstrap.seed;
        if (cfg.bootstrap.block_len_override) j["block_len"] = *cfg.bootstrap.block_len_override;
        j["block_count_rule"] =
            cfg.bootstrap.block_count_rule == BlockCountRule::floor_rule ? "floor" : "ceil";
    }
    return j;
}

void write_json_artifact(const RunConfig& cfg, const std::string& name, json j) {
    std::filesystem::create_directories(cfg.out_dir);
    j["config"] = config_json(cfg);
    write_text_file((std::filesystem::path(cfg.out_dir) / name).string(), j.dump(2) + "\n");
}

void write_csv_artifact(const RunConfig& cfg, const std::string& name, const std::string& body) {
    std::filesystem::create_directories(cfg.out_dir);
    const std::string header = "# config " + config_json(cfg).dump() + "\n";
    write_text_file((std::filesystem::path(cfg.out_dir) / name).string(), header + body);
}

struct PipelineData {
    PriceTable table;
    ReturnMatrix returns;
};

PipelineData load_pipeline(const RunConfig& cfg) {
    PipelineData data;
    data.table = load_prices_file(cfg.input_path, cfg.fill);
    data.returns = compute_returns(data.table);
    return data;
}

void check_gammas(const RunConfig& cfg) {
    if (cfg.gammas.empty()) throw std::invalid_argument("gamma list must not be empty");
    for (double g : cfg.gammas)
        if (!(g > 0.0)) throw std::invalid_argument("gamma values must be > 0");
}

std::size_t require_date(const PriceTable& table, const std::string& date, const char* what) {
    if (date.empty())
        throw std::invalid_argument(std::string(what) + " date is required for this command");
    const std::size_t idx = table.find_date(date);
    if (idx == PriceTable::npos)
        throw std::invalid_argument(std::string(what) + " date " + date +
                                    " not present in the price table");
    return idx;
}

/// QP per gamma for the configured method, plus the uncertainty artifact
/// when one is constructed.
std::vector<QpProblem> build_problems(const RunConfig& cfg, const ReturnMatrix& returns) {
    std::vector<QpProblem> problems;
    switch (cfg.method) {
        case Method::classical: {
            const EstimatePair est = estimate(returns);
            for (double g : cfg.gammas) problems.push_back(build_classical_qp(est, g));
            break;
        }
        case Method::robust_mw: {
            const RobustParams rp = robust_params(moving_window_intervals(returns, cfg.window));
            for (double g : cfg.gammas) problems.push_back(build_robust_qp(rp, g));
            break;
        }
        case Method::robust_boot: {
            const RobustParams rp =
                robust_params(block_bootstrap_intervals(returns, cfg.bootstrap));
            for (double g : cfg.gammas) problems.push_back(build_robust_qp(rp, g));
            break;
        }
    }
    return problems;
}

std::vector<OptimizeResult> optimize_impl(const RunConfig& cfg, const PipelineData& data,
                                          bool write_artifacts) {
    check_gammas(cfg);
    const std::vector<QpProblem> problems = build_problems(cfg, data.returns);

    std::vector<OptimizeResult> results;
    results.reserve(problems.size());
    std::string failures;
    for (std::size_t i = 0; i < problems.size(); ++i) {
        OptimizeResult res;
        res.gamma = cfg.gammas[i];
        res.codes = data.returns.codes;
        res.solution = solve_qp(problems[i], cfg.solver);
        if (write_artifacts) {
            json j = to_json(res.solution, res.codes);
            j["gamma"] = res.gamma;
            j["label"] = cfg.method == Method::classical ? "classical" : "robust";
            j["method"] = method_tag(cfg.method);
            write_json_artifact(
                cfg, "solution_" + method_tag(cfg.method) + "_gamma" + gamma_tag(res.gamma) + ".json",
                std::move(j));
        }
        if (!res.solution.converged) {
            failures += " gamma=" + gamma_tag(res.gamma) +
                        " (kkt_residual=" + std::to_string(res.solution.kkt_residual) + ")";
        }
        results.push_back(std::move(res));
    }
    if (!failures.empty())
        throw std::runtime_error("solver did not converge for:" + failures);
    return results;
}

std::vector<AllocateResult> allocate_impl(const RunConfig& cfg, const PipelineData& data,
                                          bool write_artifacts) {
    const std::size_t buy_idx = require_date(data.table, cfg.buy_date, "buy");
    if (!(cfg.capital > 0.0)) throw std::invalid_argument("capital must be > 0");

    Vector buy_prices(data.table.codes.size());
    for (std::size_t i = 0; i < buy_prices.size(); ++i)
        buy_prices[i] = data.table.prices(buy_idx, i);

    const auto optimized = optimize_impl(cfg, data, write_artifacts);
    std::vector<AllocateResult> results;
    for (const auto& opt : optimized) {
        AllocateResult res;
        res.gamma = opt.gamma;
        res.allocation = allocate_funds(data.table.codes, opt.solution.weights, buy_prices,
                                        cfg.capital, cfg.fractional);
        if (write_artifacts) {
            json j = to_json(res.allocation);
            j["gamma"] = opt.gamma;
            j["buy_date"] = cfg.buy_date;
            write_json_artifact(cfg,
                                "allocation_" + method_tag(cfg.method) + "_gamma" +
                                    gamma_tag(opt.gamma) + ".json",
                                std::move(j));
        }
        results.push_back(std::move(res));
    }
    return results;
}

}  // namespace

EstimatePair cmd_estimate(const RunConfig& cfg) {
    const PipelineData data = load_pipeline(cfg);
    const EstimatePair est = estimate(data.returns);
    write_json_artifact(cfg, "estimate.json",
                        to_json(est, data.returns.codes, data.returns.periods()));
    return est;
}

IntervalSet cmd_uncertainty(const RunConfig& cfg) {
    const PipelineData data = load_pipeline(cfg);
    IntervalSet u;
    switch (cfg.method) {
        case Method::classical:
            throw std::invalid_argument("method 'classical' has no uncertainty set; "
                                        "use robust-mw or robust-boot");
        case Method::robust_mw:
            u = moving_window_intervals(data.returns, cfg.window);
            break;
        case Method::robust_boot:
            u = block_bootstrap_intervals(data.returns, cfg.bootstrap);
            break;
    }
    write_json_artifact(
        cfg, "uncertainty_" + std::string(cfg.method == Method::robust_mw ? "mw" : "boot") + ".json",
        to_json(u));
    return u;
}

std::vector<OptimizeResult> cmd_optimize(const RunConfig& cfg) {
    const PipelineData data = load_pipeline(cfg);
    return optimize_impl(cfg, data, true);
}

std::vector<AllocateResult> cmd_allocate(const RunConfig& cfg) {
    const PipelineData data = load_pipeline(cfg);
    return allocate_impl(cfg, data, true);
}

std::vector<BacktestResult> cmd_backtest(const RunConfig& cfg) {
    const PipelineData data = load_pipeline(cfg);
    const std::size_t buy_idx = require_date(data.table, cfg.buy_date, "buy");
    const std::size_t sell_idx = require_date(data.table, cfg.sell_date, "sell");
    if (sell_idx < buy_idx) throw std::invalid_argument("sell date precedes buy date");

    Vector sell_prices(data.table.codes.size());
    for (std::size_t i = 0; i < sell_prices.size(); ++i)
        sell_prices[i] = data.table.prices(sell_idx, i);

    const auto allocations = allocate_impl(cfg, data, true);
    std::vector<BacktestResult> results;
    for (const auto& alloc : allocations) {
        BacktestResult res;
        res.gamma = alloc.gamma;
        res.allocation = alloc.allocation;
        res.gains = capital_gain(alloc.allocation, data.table.codes, sell_prices);

        const std::string suffix = method_tag(cfg.method) + "_gamma" + gamma_tag(alloc.gamma);
        if (cfg.format == OutputFormat::csv)
            write_csv_artifact(cfg, "gains_" + suffix + ".csv", gain_report_csv(res.gains));
        else {
            json j = to_json(res.gains);
            j["gamma"] = alloc.gamma;
            j["buy_date"] = cfg.buy_date;
            j["sell_date"] = cfg.sell_date;
            write_json_artifact(cfg, "gains_" + suffix + ".json", std::move(j));
        }

        if (sell_idx > buy_idx) {
            Vector weights(alloc.allocation.rows.size());
            for (std::size_t i = 0; i < weights.size(); ++i)
                weights[i] = alloc.allocation.rows[i].weight;
            res.series = portfolio_return_series(weights, data.table.slice(buy_idx, sell_idx));
            res.has_series = true;
            write_csv_artifact(cfg, "series_" + suffix + ".csv", return_series_csv(res.series));
        }
        results.push_back(std::move(res));
    }
    return results;
}

std::vector<SeriesResult> cmd_series(const RunConfig& cfg) {
    const PipelineData data = load_pipeline(cfg);
    const std::size_t buy_idx = require_date(data.table, cfg.buy_date, "buy");
    const std::size_t sell_idx = require_date(data.table, cfg.sell_date, "sell");
    if (sell_idx <= buy_idx)
        throw std::invalid_argument("series needs sell date after buy date");

    const auto optimized = optimize_impl(cfg, data, false);
    std::vector<SeriesResult> results;
    for (const auto& opt : optimized) {
        SeriesResult res;
        res.gamma = opt.gamma;
        res.series =
            portfolio_return_series(opt.solution.weights, data.table.slice(buy_idx, sell_idx));
        const std::string suffix = method_tag(cfg.method) + "_gamma" + gamma_tag(opt.gamma);
        write_csv_artifact(cfg, "series_" + suffix + ".csv", return_series_csv(res.series));
        if (cfg.format == OutputFormat::json) {
            json j = to_json(res.series);
            j["gamma"] = opt.gamma;
            write_json_artifact(cfg, "series_" + suffix + ".json", std::move(j));
        }
        results.push_back(std::move(res));
    }
    return results;
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Robust mean-variance portfolio toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML-style config file; command-line flags take precedence");

    RunConfig cfg;
    std::string method_name = "robust-mw";
    std::string format_name = "json";
    std::string rule_name = "floor";
    long long block_len = 0;

    auto add_common = [&](CLI::App* sub, bool needs_gamma) {
        sub->add_option("--input", cfg.input_path, "price CSV path")->required();
        sub->add_flag_callback(
            "--fill-forward", [&cfg] { cfg.fill = FillPolicy::forward_fill; },
            "fill empty price cells with the previous value of the column");
        sub->add_option("--method", method_name, "classical | robust-mw | robust-boot")
            ->check(CLI::IsMember({"classical", "robust-mw", "robust-boot"}));
        sub->add_option("--window", cfg.window, "moving-window length K");
        sub->add_option("--nboot", cfg.bootstrap.n_boot, "bootstrap replications");
        sub->add_option("--alpha", cfg.bootstrap.alpha, "two-sided significance level");
        sub->add_option("--seed", cfg.bootstrap.seed, "bootstrap RNG seed")
            ->envname("PORTOPT_SEED");
        sub->add_option("--block-len", block_len, "bootstrap block length override");
        sub->add_option("--block-count-rule", rule_name,
                        "floor: B = floor(m/L); ceil: B = ceil(m/m^(1/3))")
            ->check(CLI::IsMember({"floor", "ceil"}));
        sub->add_option("--out", cfg.out_dir, "output directory");
        sub->add_option("--format", format_name, "json | csv")
            ->check(CLI::IsMember({"json", "csv"}));
        if (needs_gamma)
            sub->add_option("--gamma", cfg.gammas, "risk-aversion values")->delimiter(',');
    };

    auto* c_estimate = app.add_subcommand("estimate", "sample mean and covariance of returns");
    add_common(c_estimate, false);

    auto* c_uncertainty = app.add_subcommand("uncertainty", "interval uncertainty set");
    add_common(c_uncertainty, false);

    auto* c_optimize = app.add_subcommand("optimize", "solve the portfolio QP per gamma");
    add_common(c_optimize, true);

    auto* c_allocate = app.add_subcommand("allocate", "integer share allocation at the buy date");
    add_common(c_allocate, true);
    c_allocate->add_option("--capital", cfg.capital, "cash budget");
    c_allocate->add_option("--buy-date", cfg.buy_date, "allocation date (must exist in the CSV)")
        ->required();
    c_allocate->add_flag("--fractional", cfg.fractional, "allow fractional shares");

    auto* c_backtest = app.add_subcommand("backtest", "allocation, capital gains and return series");
    add_common(c_backtest, true);
    c_backtest->add_option("--capital", cfg.capital, "cash budget");
    c_backtest->add_option("--buy-date", cfg.buy_date, "buy date")->required();
    c_backtest->add_option("--sell-date", cfg.sell_date, "sell date")->required();
    c_backtest->add_flag("--fractional", cfg.fractional, "allow fractional shares");

    auto* c_series = app.add_subcommand("series", "cumulative portfolio-return series");
    add_common(c_series, true);
    c_series->add_option("--buy-date", cfg.buy_date, "window start")->required();
    c_series->add_option("--sell-date", cfg.sell_date, "window end")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    cfg.method = method_name == "classical"    ? Method::classical
                 : method_name == "robust-boot" ? Method::robust_boot
                                                : Method::robust_mw;
    cfg.format = format_name == "csv" ? OutputFormat::csv : OutputFormat::json;
    cfg.bootstrap.block_count_rule =
        rule_name == "ceil" ? BlockCountRule::ceil_rule : BlockCountRule::floor_rule;
    if (block_len > 0) cfg.bootstrap.block_len_override = static_cast<std::size_t>(block_len);

    try {
        if (c_estimate->parsed()) cmd_estimate(cfg);
        else if (c_uncertainty->parsed()) cmd_uncertainty(cfg);
        else if (c_optimize->parsed()) cmd_optimize(cfg);
        else if (c_allocate->parsed()) cmd_allocate(cfg);
        else if (c_backtest->parsed()) cmd_backtest(cfg);
        else if (c_series->parsed()) cmd_series(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace portopt
