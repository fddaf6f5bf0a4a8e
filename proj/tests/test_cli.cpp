#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "portopt/cli.hpp"
#include "testutil.hpp"

using namespace portopt;
using nlohmann::json;

namespace {

int run(std::vector<std::string> args) {
    std::vector<const char*> argv{"portopt"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

json load_json(const std::filesystem::path& path) {
    REQUIRE_MESSAGE(std::filesystem::exists(path), path.string());
    return json::parse(testutil::read_file(path));
}

}  // namespace

TEST_CASE("cmd_estimate writes mu and sigma of matching shape") {
    const auto dir = testutil::temp_dir("cli_estimate");
    const auto csv = testutil::write_price_csv(dir, "prices.csv", 20, 4, 1000);

    RunConfig cfg;
    cfg.input_path = csv.string();
    cfg.out_dir = (dir / "out").string();
    const EstimatePair est = cmd_estimate(cfg);
    CHECK(est.mu.size() == 4);

    const json j = load_json(dir / "out" / "estimate.json");
    CHECK(j["mu"].size() == 4);
    CHECK(j["sigma"].size() == 4);
    CHECK(j["sigma"][0].size() == 4);
    CHECK(j["m"] == 19);
    CHECK(j["config"]["input"] == csv.string());
}

TEST_CASE("cmd_estimate handles a 45-asset fixture") {
    const auto dir = testutil::temp_dir("cli_scale");
    const auto csv = testutil::write_price_csv(dir, "prices.csv", 248, 45, 2000);

    RunConfig cfg;
    cfg.input_path = csv.string();
    cfg.out_dir = (dir / "out").string();
    const EstimatePair est = cmd_estimate(cfg);
    CHECK(est.mu.size() == 45);
    CHECK(load_json(dir / "out" / "estimate.json")["m"] == 247);
}

TEST_CASE("missing input file exits nonzero with a message") {
    const int rc = run({"estimate", "--input", "/nonexistent/prices.csv"});
    CHECK(rc == 1);
}

TEST_CASE("cmd_uncertainty writes the interval schema") {
    const auto dir = testutil::temp_dir("cli_unc");
    const auto csv = testutil::write_price_csv(dir, "prices.csv", 40, 3, 3000);

    RunConfig cfg;
    cfg.input_path = csv.string();
    cfg.out_dir = (dir / "out").string();
    cfg.method = Method::robust_mw;
    cfg.window = 10;
    cmd_uncertainty(cfg);

    const json j = load_json(dir / "out" / "uncertainty_mw.json");
    CHECK(j["method"] == "moving_window");
    CHECK(j["params"]["window"] == 10);
    CHECK(j["params"]["windows_processed"] == 30);
    CHECK(j["mu_lo"].size() == 3);
    CHECK(j["sigma_hi"].size() == 3);

    cfg.method = Method::robust_boot;
    cfg.bootstrap.n_boot = 50;
    cmd_uncertainty(cfg);
    const json b = load_json(dir / "out" / "uncertainty_boot.json");
    CHECK(b["method"] == "bootstrap");
    CHECK(b["params"]["n_boot"] == 50);

    cfg.method = Method::classical;
    CHECK_THROWS_AS(cmd_uncertainty(cfg), std::invalid_argument);
}

TEST_CASE("cmd_optimize writes one converged solution per gamma, f_val nondecreasing") {
    const auto dir = testutil::temp_dir("cli_opt");
    const auto csv = testutil::write_price_csv(dir, "prices.csv", 60, 5, 4000);

    RunConfig cfg;
    cfg.input_path = csv.string();
    cfg.out_dir = (dir / "out").string();
    cfg.method = Method::robust_mw;
    cfg.window = 15;
    const auto results = cmd_optimize(cfg);
    REQUIRE(results.size() == 3);
    for (const auto& res : results) {
        CHECK(res.solution.converged);
        CHECK(res.solution.kkt_residual <= 1e-9);
    }
    CHECK(results[0].solution.f_val <= results[1].solution.f_val + 1e-12);
    CHECK(results[1].solution.f_val <= results[2].solution.f_val + 1e-12);

    for (const char* name :
         {"solution_robust-mw_gamma5.json", "solution_robust-mw_gamma50.json",
          "solution_robust-mw_gamma100.json"}) {
        const json j = load_json(dir / "out" / name);
        CHECK(j["weights"].size() == 5);
        CHECK(j["converged"] == true);
        CHECK(j["label"] == "robust");
    }
}

TEST_CASE("classical on zero-width params equals robust with those params") {
    const auto dir = testutil::temp_dir("cli_eq");
    const auto csv = testutil::write_price_csv(dir, "prices.csv", 30, 3, 5000);

    RunConfig cfg;
    cfg.input_path = csv.string();
    cfg.out_dir = (dir / "out_a").string();
    cfg.method = Method::robust_mw;
    cfg.window = 29;  // m = 29 returns, so K = m gives zero-width intervals
    cfg.gammas = {10.0};
    const auto robust = cmd_optimize(cfg);

    cfg.out_dir = (dir / "out_b").string();
    cfg.method = Method::classical;
    const auto classical = cmd_optimize(cfg);

    REQUIRE(robust.size() == 1);
    REQUIRE(classical.size() == 1);
    CHECK(robust[0].solution.f_val ==
          doctest::Approx(classical[0].solution.f_val).epsilon(1e-12));
}

TEST_CASE("single-asset fixture allocates everything regardless of gamma") {
    const auto dir = testutil::temp_dir("cli_n1");
    const auto csv = testutil::write_price_csv(dir, "prices.csv", 25, 1, 6000);

    RunConfig cfg;
    cfg.input_path = csv.string();
    cfg.out_dir = (dir / "out").string();
    cfg.method = Method::robust_mw;
    cfg.window = 6;
    const auto results = cmd_optimize(cfg);
    for (const auto& res : results) CHECK(res.solution.weights[0] == 1.0);
}

TEST_CASE("gamma validation") {
    const auto dir = testutil::temp_dir("cli_gamma");
    const auto csv = testutil::write_price_csv(dir, "prices.csv", 30, 2, 7000);
    RunConfig cfg;
    cfg.input_path = csv.string();
    cfg.out_dir = (dir / "out").string();
    cfg.window = 10;
    cfg.gammas = {};
    CHECK_THROWS_AS(cmd_optimize(cfg), std::invalid_argument);
    cfg.gammas = {5.0, -1.0};
    CHECK_THROWS_AS(cmd_optimize(cfg), std::invalid_argument);
}

TEST_CASE("backtest pipeline writes allocation, gains, and series") {
    const auto dir = testutil::temp_dir("cli_bt");
    const auto csv = testutil::write_price_csv(dir, "prices.csv", 50, 4, 8000);
    const PriceTable table = load_prices_file(csv.string());

    RunConfig cfg;
    cfg.input_path = csv.string();
    cfg.out_dir = (dir / "out").string();
    cfg.method = Method::robust_mw;
    cfg.window = 12;
    cfg.gammas = {5.0};
    cfg.buy_date = table.dates[40];
    cfg.sell_date = table.dates[48];
    const auto results = cmd_backtest(cfg);
    REQUIRE(results.size() == 1);
    CHECK(results[0].has_series);
    CHECK(results[0].series.values.front() == 0.0);
    CHECK(results[0].series.values.size() == 9);

    CHECK(std::filesystem::exists(dir / "out" / "allocation_robust-mw_gamma5.json"));
    CHECK(std::filesystem::exists(dir / "out" / "gains_robust-mw_gamma5.json"));
    CHECK(std::filesystem::exists(dir / "out" / "series_robust-mw_gamma5.csv"));

    // spot-check the series CSV wiring
    const std::string csv_text = testutil::read_file(dir / "out" / "series_robust-mw_gamma5.csv");
    CHECK(csv_text.find("date,value") != std::string::npos);
    CHECK(csv_text.find(table.dates[40]) != std::string::npos);

    SUBCASE("sell date equal to buy date gives zero gains and no series") {
        RunConfig same = cfg;
        same.out_dir = (dir / "same").string();
        same.sell_date = same.buy_date;
        const auto zero = cmd_backtest(same);
        REQUIRE(zero.size() == 1);
        CHECK_FALSE(zero[0].has_series);
        CHECK(zero[0].gains.total == 0.0);
    }

    SUBCASE("unknown dates are rejected") {
        RunConfig bad = cfg;
        bad.buy_date = "1999-01-01";
        CHECK_THROWS_AS(cmd_backtest(bad), std::invalid_argument);
    }
}

TEST_CASE("hand-built two-day backtest matches the oracle") {
    const auto dir = testutil::temp_dir("cli_hand");
    {
        std::ofstream out(dir / "prices.csv");
        out << "date,AAA\n2023-01-02,100\n2023-01-03,100\n2023-01-04,110\n";
    }
    RunConfig cfg;
    cfg.input_path = (dir / "prices.csv").string();
    cfg.out_dir = (dir / "out").string();
    cfg.method = Method::classical;
    cfg.gammas = {5.0};
    cfg.capital = 1000.0;
    cfg.buy_date = "2023-01-03";
    cfg.sell_date = "2023-01-04";
    const auto results = cmd_backtest(cfg);
    REQUIRE(results.size() == 1);
    // single asset: 10 shares at 100, sold at 110
    CHECK(results[0].allocation.rows[0].shares == 10.0);
    CHECK(results[0].gains.total == 100.0);
    CHECK(results[0].series.values.back() == doctest::Approx(0.10).epsilon(1e-12));
}

TEST_CASE("re-running a command produces byte-identical artifacts") {
    const auto dir = testutil::temp_dir("cli_repro");
    const auto csv = testutil::write_price_csv(dir, "prices.csv", 45, 3, 9000);

    RunConfig cfg;
    cfg.input_path = csv.string();
    cfg.method = Method::robust_boot;
    cfg.bootstrap.n_boot = 60;
    cfg.bootstrap.seed = 31337;
    cfg.gammas = {5.0, 50.0};

    cfg.out_dir = (dir / "run1").string();
    cmd_optimize(cfg);
    cfg.out_dir = (dir / "run2").string();
    cmd_optimize(cfg);

    for (const char* name : {"solution_robust-boot_gamma5.json", "solution_robust-boot_gamma50.json"}) {
        const std::string a = testutil::read_file(dir / "run1" / name);
        std::string b = testutil::read_file(dir / "run2" / name);
        // the echoed config contains the out dir; normalize it before comparing
        const std::string run2 = (dir / "run2").string();
        const std::string run1 = (dir / "run1").string();
        std::size_t pos;
        while ((pos = b.find(run2)) != std::string::npos) b.replace(pos, run2.size(), run1);
        CHECK(a == b);
    }
}

TEST_CASE("PORTOPT_SEED is the seed fallback and flags beat the config file") {
    const auto dir = testutil::temp_dir("cli_env");
    const auto csv = testutil::write_price_csv(dir, "prices.csv", 40, 2, 9800);
    const auto out = (dir / "out").string();

    setenv("PORTOPT_SEED", "4242", 1);
    CHECK(run({"uncertainty", "--input", csv.string(), "--out", out, "--method", "robust-boot",
               "--nboot", "30"}) == 0);
    unsetenv("PORTOPT_SEED");
    json j = load_json(dir / "out" / "uncertainty_boot.json");
    CHECK(j["params"]["seed"] == 4242);

    {
        std::ofstream cfg(dir / "run.toml");
        cfg << "[uncertainty]\n"
            << "input = \"" << csv.string() << "\"\n"
            << "out = \"" << out << "\"\n"
            << "method = \"robust-boot\"\n"
            << "nboot = 25\n"
            << "seed = 7\n";
    }
    CHECK(run({"--config", (dir / "run.toml").string(), "uncertainty", "--nboot", "35"}) == 0);
    j = load_json(dir / "out" / "uncertainty_boot.json");
    CHECK(j["params"]["seed"] == 7);     // from the config file
    CHECK(j["params"]["n_boot"] == 35);  // flag overrides the file
}

TEST_CASE("gains come out as CSV when requested") {
    const auto dir = testutil::temp_dir("cli_csv");
    const auto csv = testutil::write_price_csv(dir, "prices.csv", 30, 2, 9900);
    const PriceTable table = load_prices_file(csv.string());

    RunConfig cfg;
    cfg.input_path = csv.string();
    cfg.out_dir = (dir / "out").string();
    cfg.method = Method::classical;
    cfg.gammas = {5.0};
    cfg.buy_date = table.dates[20];
    cfg.sell_date = table.dates[28];
    cfg.format = OutputFormat::csv;
    cmd_backtest(cfg);

    const std::string text = testutil::read_file(dir / "out" / "gains_classical_gamma5.csv");
    CHECK(text.find("code,shares,buy,sell,gain\n") != std::string::npos);
    CHECK(text.find("S0,") != std::string::npos);
    CHECK_FALSE(std::filesystem::exists(dir / "out" / "gains_classical_gamma5.json"));
}

TEST_CASE("run_cli end to end") {
    const auto dir = testutil::temp_dir("cli_e2e");
    const auto csv = testutil::write_price_csv(dir, "prices.csv", 30, 3, 9500);
    const auto out = (dir / "out").string();

    CHECK(run({"estimate", "--input", csv.string(), "--out", out}) == 0);
    CHECK(std::filesystem::exists(dir / "out" / "estimate.json"));

    CHECK(run({"optimize", "--input", csv.string(), "--out", out, "--method", "robust-mw",
               "--window", "8", "--gamma", "5,50,100"}) == 0);
    CHECK(std::filesystem::exists(dir / "out" / "solution_robust-mw_gamma100.json"));

    CHECK(run({"uncertainty", "--input", csv.string(), "--out", out, "--method", "robust-boot",
               "--nboot", "40", "--seed", "7"}) == 0);
    CHECK(std::filesystem::exists(dir / "out" / "uncertainty_boot.json"));

    const PriceTable table = load_prices_file(csv.string());
    CHECK(run({"allocate", "--input", csv.string(), "--out", out, "--method", "classical",
               "--gamma", "5", "--capital", "50000", "--buy-date", table.dates[25]}) == 0);
    CHECK(std::filesystem::exists(dir / "out" / "allocation_classical_gamma5.json"));

    CHECK(run({"series", "--input", csv.string(), "--out", out, "--method", "classical",
               "--gamma", "5", "--buy-date", table.dates[20], "--sell-date", table.dates[29]}) ==
          0);
    CHECK(std::filesystem::exists(dir / "out" / "series_classical_gamma5.csv"));

    CHECK(run({"badcommand"}) != 0);
}
