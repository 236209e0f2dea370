#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <unistd.h>
#include <fstream>

#include "denfg/harness.hpp"
#include "test_util.hpp"

#include <json.hpp>

using namespace denfg;
using namespace denfg::test;

namespace {

SweepConfig small_spa_config() {
    SweepConfig cfg;
    cfg.mode = SweepMode::SpaSweep;
    cfg.n = 3;
    cfg.alphas = {0.0, kPi / 2, kPi};
    cfg.trials = 6;
    cfg.seed = 99;
    cfg.spa.max_iters = 400;
    return cfg;
}

SweepConfig small_cover_config() {
    SweepConfig cfg;
    cfg.mode = SweepMode::CoverSweep;
    cfg.n = 3;
    cfg.alphas = {0.0, kPi};
    cfg.trials = 4;
    cfg.seed = 7;
    cfg.cover_exhaustive = true;
    return cfg;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE(f.good());
    return std::string(std::istreambuf_iterator<char>(f),
                       std::istreambuf_iterator<char>());
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("denfg_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string prefix(const char* name) const { return (path / name).string(); }
};

} // namespace

TEST_SUITE_BEGIN("harness");

TEST_CASE("alpha grids") {
    const auto grid = equally_spaced_alphas(21);
    CHECK(grid.size() == 21);
    CHECK(grid.front() == 0.0);
    CHECK(grid.back() == doctest::Approx(kPi));
    const auto three = equally_spaced_alphas(3);
    CHECK(three[1] == doctest::Approx(kPi / 2));
}

TEST_CASE("csv headers are pinned") {
    CHECK(records_to_csv({}).starts_with(
        "alpha,trial,z,zb,log_z,log_zb,converged,degeneracy,iterations\n"));
    CHECK(summary_to_csv({}).starts_with(
        "alpha,ln_ratio_of_means,ln_mean_ratio,mean_log_ratio,std_log_ratio,"
        "convergence_rate,frac_rank1,frac_diagonal,frac_generic\n"));
}

TEST_CASE("records round-trip through csv") {
    const auto res = spa_sweep(small_spa_config());
    const std::string csv = records_to_csv(res.records);
    const auto parsed = records_from_csv(csv);
    CHECK(records_to_csv(parsed) == csv);
}

TEST_CASE("summary is recomputable from the records") {
    const auto cfg = small_spa_config();
    const auto res = spa_sweep(cfg);
    REQUIRE(res.summary.size() == cfg.alphas.size());
    for (std::size_t ai = 0; ai < cfg.alphas.size(); ++ai) {
        std::vector<TrialRecord> bucket(
            res.records.begin() + ai * cfg.trials,
            res.records.begin() + (ai + 1) * cfg.trials);
        const SummaryRow again =
            summarize_bucket(cfg.mode, cfg.alphas[ai], bucket);
        const SummaryRow& row = res.summary[ai];
        CHECK(again.ln_ratio_of_means == row.ln_ratio_of_means);
        CHECK(again.ln_mean_ratio == row.ln_mean_ratio);
        CHECK(again.mean_log_ratio == row.mean_log_ratio);
        CHECK(again.std_log_ratio == row.std_log_ratio);
        CHECK(again.convergence_rate == row.convergence_rate);
        CHECK(again.frac_rank1 == row.frac_rank1);
    }
}

TEST_CASE("thread count never changes the output bytes") {
    auto spa1 = small_spa_config();
    auto spa8 = spa1;
    spa8.threads = 8;
    CHECK(records_to_csv(spa_sweep(spa1).records) ==
          records_to_csv(spa_sweep(spa8).records));
    CHECK(summary_to_csv(spa_sweep(spa1).summary) ==
          summary_to_csv(spa_sweep(spa8).summary));

    auto cov1 = small_cover_config();
    auto cov8 = cov1;
    cov8.threads = 8;
    CHECK(records_to_csv(cover_sweep(cov1).records) ==
          records_to_csv(cover_sweep(cov8).records));
}

TEST_CASE("spa sweep at n = 1 is exact") {
    SweepConfig cfg;
    cfg.mode = SweepMode::SpaSweep;
    cfg.n = 1;
    cfg.alphas = {0.0, 1.0, kPi};
    cfg.trials = 10;
    cfg.seed = 5;
    const auto res = spa_sweep(cfg);
    for (const SummaryRow& row : res.summary)
        CHECK(std::abs(row.ln_ratio_of_means) < 1e-8);
    CHECK(res.ref_line_squared.has_value());
    CHECK(res.ref_line_unsquared.has_value());
}

TEST_CASE("cover sweep at n = 1 is exact") {
    SweepConfig cfg;
    cfg.mode = SweepMode::CoverSweep;
    cfg.n = 1;
    cfg.alphas = {0.3, kPi};
    cfg.trials = 8;
    cfg.seed = 6;
    cfg.cover_exhaustive = true;
    const auto res = cover_sweep(cfg);
    for (const SummaryRow& row : res.summary) {
        CHECK(std::abs(row.ln_ratio_of_means) < 1e-12);
        CHECK(std::abs(row.ln_mean_ratio) < 1e-12);
        CHECK(std::abs(row.mean_log_ratio) < 1e-12);
    }
    // Overlays exist for every bucket at n <= 3 (closed form at pi).
    CHECK(res.overlays.size() == 2);
}

TEST_CASE("cover sweep summary tracks the analytic overlay") {
    SweepConfig cfg;
    cfg.mode = SweepMode::CoverSweep;
    cfg.n = 2;
    cfg.alphas = {kPi};
    cfg.trials = 4000;
    cfg.seed = 1234;
    cfg.cover_exhaustive = true;
    cfg.threads = 4;
    const auto res = cover_sweep(cfg);
    REQUIRE(res.overlays.size() == 1);
    // ln sqrt(12/10) with Monte Carlo noise on both moments.
    CHECK(res.overlays[0].ln_sqrt_ratio ==
          doctest::Approx(0.5 * std::log(1.2)).epsilon(1e-12));
    CHECK(std::abs(res.summary[0].ln_ratio_of_means -
                   res.overlays[0].ln_sqrt_ratio) < 0.1);
}

TEST_CASE("file outputs and resumability") {
    TempDir dir;
    auto cfg = small_cover_config();
    cfg.out_prefix = dir.prefix("run");

    const auto full = run_sweep(cfg);
    const std::string records_full = slurp(cfg.out_prefix + "_records.csv");
    const std::string summary_full = slurp(cfg.out_prefix + "_summary.csv");
    const std::string manifest_full = slurp(cfg.out_prefix + "_manifest.json");
    CHECK(records_full == records_to_csv(full.records));
    CHECK(nlohmann::json::parse(manifest_full)["completed_buckets"].size() ==
          cfg.alphas.size());

    // Simulate an interrupted run: only the first bucket present.
    auto manifest = nlohmann::json::parse(manifest_full);
    manifest["completed_buckets"] = std::vector<std::size_t>{0};
    {
        std::ofstream mf(cfg.out_prefix + "_manifest.json", std::ios::binary);
        mf << manifest.dump(2) << "\n";
        std::string partial = records_to_csv(std::vector<TrialRecord>(
            full.records.begin(), full.records.begin() + cfg.trials));
        std::ofstream rf(cfg.out_prefix + "_records.csv", std::ios::binary);
        rf << partial;
    }
    (void)run_sweep(cfg, true);
    CHECK(slurp(cfg.out_prefix + "_records.csv") == records_full);
    CHECK(slurp(cfg.out_prefix + "_summary.csv") == summary_full);

    // Resume against a different config must fail loudly.
    auto other = cfg;
    other.seed = cfg.seed + 1;
    CHECK_THROWS_AS((void)run_sweep(other, true), domain_error);
}

TEST_CASE("manifest carries reference lines and config echo") {
    auto cfg = small_spa_config();
    const auto res = spa_sweep(cfg);
    const auto j = nlohmann::json::parse(
        manifest_to_json(cfg, res, {0, 1, 2}));
    CHECK(j["mode"] == "spa-sweep");
    CHECK(j["config"]["n"] == 3);
    CHECK(j["config"]["trials"] == 6);
    CHECK(j["reference_lines"].contains("candidate_alpha0_squared"));
    CHECK(j["per_alpha"].size() == 3);
    CHECK(std::string(j["version"]).size() > 0);
}

TEST_CASE("closed-form table") {
    const auto table = closed_form_table(20, MomentTable::gaussian());
    REQUIRE(table.rows.size() == 20);
    CHECK_FALSE(table.line_support_case);

    const auto& r2 = table.rows[1];
    CHECK(r2.n == 2);
    CHECK(r2.ln_z2_all_ones == doctest::Approx(std::log(16.0)));
    CHECK(r2.ln_zb2_sq_all_ones == doctest::Approx(std::log(10.0)));
    CHECK(r2.ln_ez2 == doctest::Approx(std::log(12.0)));
    CHECK(r2.ln_ezb2_sq == doctest::Approx(std::log(10.0)));

    const auto& r1 = table.rows[0];
    CHECK(r1.ln_ez2 == doctest::Approx(std::log(2.0)));
    CHECK(r1.ln_ezb2_sq == doctest::Approx(std::log(2.0)));
    CHECK(r1.ratio == doctest::Approx(1.0));

    const auto big = closed_form_table(60, MomentTable::gaussian());
    CHECK(std::abs(big.rows[59].ratio / big.rows[59].ratio_asym - 1.0) < 0.03);

    const std::string csv = closed_form_table_to_csv(table);
    CHECK(csv.starts_with("n,ln_z2_all_ones"));

    CHECK_THROWS_AS((void)closed_form_table(4, MomentTable::from_alpha(0.4)),
                    domain_error);
    CHECK_THROWS_AS((void)closed_form_table(501, MomentTable::gaussian()),
                    size_limit_error);
}

TEST_CASE("verify fast suite passes on this build") {
    const VerifyReport report = verify("fast");
    for (const VerifyCheck& c : report.checks) {
        INFO(c.name);
        CHECK(c.pass);
    }
    CHECK(report.all_pass);
    CHECK(verify_report_to_json(report).find("\"all_pass\": true") !=
          std::string::npos);
    CHECK_THROWS_AS((void)verify("bogus"), domain_error);
}

TEST_SUITE_END();
