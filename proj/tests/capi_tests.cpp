// Exercises the shared library through the C API alone, the way an external
// consumer (or the CLI) does. Links libregimetest only.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "regimetest.h"

namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "regimetest_capi_tests";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

struct ConfigGuard {
    rt_config* ptr = rt_config_new();
    ~ConfigGuard() { rt_config_free(ptr); }
};

struct SeriesGuard {
    rt_series* ptr = nullptr;
    ~SeriesGuard() { rt_series_free(ptr); }
};

rt_series* make_gbm_series(std::uint64_t seed, std::size_t n) {
    rt_series* out = nullptr;
    REQUIRE(rt_simulate_gbm(0.05, 0.2, n, 5.5e-5, 100.0, seed, &out) == RT_OK);
    return out;
}

}  // namespace

TEST_SUITE_BEGIN("capi");

TEST_CASE("version and status names") {
    CHECK(std::string(rt_version()) == "0.1.0");
    CHECK(std::string(rt_status_name(RT_OK)) == "ok");
    CHECK(std::string(rt_status_name(RT_ERR_INPUT)) == "input-error");
    CHECK(std::string(rt_status_name(RT_ERR_DEGENERATE)) == "degenerate-statistics");
    // Exit-code contract: input, inference and degenerate failures distinct.
    CHECK(RT_ERR_INPUT != RT_ERR_INFERENCE);
    CHECK(RT_ERR_INFERENCE != RT_ERR_DEGENERATE);
}

TEST_CASE("config set, get, and rejection of junk") {
    ConfigGuard cfg;
    char buf[256];
    REQUIRE(rt_config_get(cfg.ptr, "p", buf, sizeof(buf)) == RT_OK);
    CHECK(std::strtod(buf, nullptr) == 0.15);

    CHECK(rt_config_set(cfg.ptr, "p", "0.25") == RT_OK);
    REQUIRE(rt_config_get(cfg.ptr, "p", buf, sizeof(buf)) == RT_OK);
    CHECK(std::strtod(buf, nullptr) == 0.25);

    CHECK(rt_config_set(cfg.ptr, "no_such", "1") == RT_ERR_INPUT);
    CHECK(std::string(rt_last_error()).find("no_such") != std::string::npos);
    CHECK(rt_config_set(cfg.ptr, "p", "banana") == RT_ERR_INPUT);
    CHECK(rt_config_set(nullptr, "p", "0.2") == RT_ERR_ARG);

    CHECK(rt_config_get(cfg.ptr, "grid", buf, 2) == RT_ERR_ARG);  // too small
}

TEST_CASE("config file loading") {
    const fs::path file = scratch_dir() / "cfg.txt";
    std::ofstream(file) << "b = 20\nwindow = 10\n";
    ConfigGuard cfg;
    REQUIRE(rt_config_load(cfg.ptr, file.string().c_str()) == RT_OK);
    char buf[64];
    REQUIRE(rt_config_get(cfg.ptr, "b", buf, sizeof(buf)) == RT_OK);
    CHECK(std::string(buf) == "20");
    CHECK(rt_config_load(cfg.ptr, "/nonexistent.cfg") == RT_ERR_INPUT);
}

TEST_CASE("series from prices and accessors") {
    const std::vector<double> prices = {100.0, 101.0, 99.5, 100.25};
    SeriesGuard s;
    REQUIRE(rt_series_from_prices(prices.data(), prices.size(), 5.5e-5, &s.ptr) == RT_OK);
    CHECK(rt_series_length(s.ptr) == 4);
    CHECK(rt_series_dt(s.ptr) == 5.5e-5);
    CHECK(rt_series_price(s.ptr, 2) == 99.5);
    CHECK(std::isnan(rt_series_price(s.ptr, 99)));
    CHECK(rt_series_gap_count(s.ptr) == 0);
    CHECK(rt_series_warning_count(s.ptr) == 0);
    CHECK(rt_series_warning(s.ptr, 0) == nullptr);

    rt_series* bad = nullptr;
    CHECK(rt_series_from_prices(prices.data(), 1, 5.5e-5, &bad) == RT_ERR_ARG);
    const double negative[] = {100.0, -1.0, 50.0};
    CHECK(rt_series_from_prices(negative, 3, 5.5e-5, &bad) == RT_ERR_ARG);
    CHECK(rt_series_from_prices(nullptr, 3, 5.5e-5, &bad) == RT_ERR_ARG);
}

TEST_CASE("series dump and load round-trip") {
    SeriesGuard s;
    s.ptr = make_gbm_series(41, 200);
    const fs::path file = scratch_dir() / "series.csv";
    REQUIRE(rt_series_dump(s.ptr, file.string().c_str()) == RT_OK);

    ConfigGuard cfg;
    SeriesGuard loaded;
    REQUIRE(rt_series_load(cfg.ptr, file.string().c_str(), &loaded.ptr) == RT_OK);
    REQUIRE(rt_series_length(loaded.ptr) == 200);
    for (std::size_t i = 0; i < 200; ++i) {
        CHECK(rt_series_price(loaded.ptr, i) == rt_series_price(s.ptr, i));
    }
}

TEST_CASE("loading a missing or malformed file reports input errors") {
    ConfigGuard cfg;
    SeriesGuard s;
    CHECK(rt_series_load(cfg.ptr, "/nonexistent.csv", &s.ptr) == RT_ERR_INPUT);
    CHECK(std::string(rt_last_error()).find("nonexistent") != std::string::npos);

    const char* data = std::getenv("RT_TEST_DATA");
    if (data != nullptr) {
        const std::string bad = std::string(data) + "/bad_price.csv";
        CHECK(rt_series_load(cfg.ptr, bad.c_str(), &s.ptr) == RT_ERR_INPUT);
        const std::string constant = std::string(data) + "/constant.csv";
        SeriesGuard flat;
        REQUIRE(rt_series_load(cfg.ptr, constant.c_str(), &flat.ptr) == RT_OK);
        rt_stats* st = nullptr;
        CHECK(rt_stats_run(flat.ptr, cfg.ptr, &st) == RT_ERR_DEGENERATE);
    }
}

TEST_CASE("simulators validate their parameters") {
    rt_series* out = nullptr;
    CHECK(rt_simulate_gbm(0.0, -0.1, 100, 5.5e-5, 100.0, 1, &out) == RT_ERR_ARG);
    CHECK(rt_simulate_gbm(0.0, 0.2, 1, 5.5e-5, 100.0, 1, &out) == RT_ERR_ARG);
    CHECK(rt_simulate_mmgbm(0.0, 0.1, 5000.0, 0.0, 0.2, 1.0, 0, 100, 5.5e-5, 100.0, 1,
                            &out) == RT_ERR_INFERENCE);  // step cap
    CHECK(rt_simulate_mmgbm(0.0, 0.1, 10.0, 0.0, 0.2, 1.0, 7, 100, 5.5e-5, 100.0, 1,
                            &out) == RT_ERR_ARG);  // bad x0
    CHECK(rt_simulate_smgbm(0.0, 0.1, 0.5, 10.0, 0.0, 0.2, 1.0, 1.0, 0, 100, 5.5e-5,
                            100.0, 1, &out) == RT_ERR_ARG);  // shape < 1
}

TEST_CASE("stats over a simulated series") {
    SeriesGuard s;
    s.ptr = make_gbm_series(123, 2000);
    ConfigGuard cfg;
    rt_stats* st = nullptr;
    REQUIRE(rt_stats_run(s.ptr, cfg.ptr, &st) == RT_OK);
    CHECK(rt_stats_count(st) > 0);
    CHECK(rt_stats_dim(st) == 4);
    CHECK(rt_stats_t(st, 1) >= 1.0);
    CHECK(rt_stats_t(st, 2) > 0.0);
    CHECK(std::isnan(rt_stats_t(st, 5)));
    CHECK(rt_stats_threshold(st) > 0.0);

    char text[512];
    REQUIRE(rt_stats_format(st, "sim", text, sizeof(text)) == RT_OK);
    CHECK(std::string(text).find("sim") != std::string::npos);

    const fs::path dir = scratch_dir() / "stats";
    REQUIRE(rt_stats_write(st, "sim", dir.string().c_str()) == RT_OK);
    CHECK(fs::exists(dir / "sim_stats.txt"));
    rt_stats_free(st);
}

TEST_CASE("composite test and report surface") {
    SeriesGuard s;
    s.ptr = make_gbm_series(4242, 900);
    ConfigGuard cfg;
    REQUIRE(rt_config_set(cfg.ptr, "b", "20") == RT_OK);
    REQUIRE(rt_config_set(cfg.ptr, "grid", "5,10") == RT_OK);

    rt_report* report = nullptr;
    REQUIRE(rt_test_run(s.ptr, cfg.ptr, RT_HYP_MMGBM, &report) == RT_OK);
    CHECK(rt_report_rows(report) == 2);
    CHECK(rt_report_dim(report) == 4);
    CHECK(std::string(rt_report_label(report, 0)) == "sojourn=5");
    CHECK(rt_report_label(report, 9) == nullptr);

    double prev = 2.0;
    for (int j = 1; j <= 4; ++j) {
        const double a = rt_report_composite(report, j);
        CHECK(a >= 0.0);
        CHECK(a <= 1.0);
        CHECK(a <= prev);
        prev = a;
        for (int row = 0; row < 2; ++row) {
            CHECK(rt_report_alpha(report, row, j) <= a);
        }
    }
    CHECK(rt_report_observed_t(report, 1) > 0.0);

    char text[512];
    REQUIRE(rt_report_format(report, "I01", text, sizeof(text)) == RT_OK);
    CHECK(std::string(text).rfind("I01", 0) == 0);

    const fs::path dir = scratch_dir() / "report";
    REQUIRE(rt_report_write(report, "I01", dir.string().c_str()) == RT_OK);
    CHECK(fs::exists(dir / "I01_mmgbm_alpha.txt"));
    CHECK(fs::exists(dir / "I01_mmgbm_report.json"));
    rt_report_free(report);
}

TEST_CASE("plotdata, estimate, surrogate dump") {
    SeriesGuard s;
    s.ptr = make_gbm_series(1001, 800);
    ConfigGuard cfg;
    REQUIRE(rt_config_set(cfg.ptr, "b", "10") == RT_OK);
    REQUIRE(rt_config_set(cfg.ptr, "grid", "5,10") == RT_OK);

    const fs::path dir = scratch_dir() / "plot";
    REQUIRE(rt_plotdata_write(s.ptr, cfg.ptr, RT_HYP_MMGBM, "px",
                              dir.string().c_str()) == RT_OK);
    CHECK(fs::exists(dir / "px_mmgbm_observed.csv"));
    CHECK(fs::exists(dir / "px_mmgbm_theta001_surrogates.csv"));
    CHECK(fs::exists(dir / "px_mmgbm_summary.csv"));

    rt_estimate* est = nullptr;
    REQUIRE(rt_estimate_run(s.ptr, cfg.ptr, RT_HYP_MMGBM, &est) == RT_OK);
    REQUIRE(rt_estimate_rows(est) == 2);
    const int best = rt_estimate_argmin(est);
    CHECK(best >= 0);
    CHECK(best < 2);
    CHECK(rt_estimate_objective(est, best) <= rt_estimate_objective(est, 1 - best));
    CHECK(rt_estimate_label(est, best) != nullptr);
    REQUIRE(rt_estimate_write(est, "px", dir.string().c_str()) == RT_OK);
    CHECK(fs::exists(dir / "px_mmgbm_objective.csv"));
    rt_estimate_free(est);

    const fs::path dump = scratch_dir() / "surrogate.csv";
    REQUIRE(rt_surrogate_dump(s.ptr, cfg.ptr, RT_HYP_SMGBM, 10.0, 2.0, 0,
                              dump.string().c_str()) == RT_OK);
    SeriesGuard back;
    REQUIRE(rt_series_load(cfg.ptr, dump.string().c_str(), &back.ptr) == RT_OK);
    CHECK(rt_series_length(back.ptr) == rt_series_length(s.ptr));
}

TEST_CASE("null-handle behavior is tame") {
    CHECK(rt_series_length(nullptr) == 0);
    CHECK(std::isnan(rt_series_price(nullptr, 0)));
    CHECK(rt_stats_count(nullptr) == 0);
    CHECK(rt_report_rows(nullptr) == 0);
    CHECK(std::isnan(rt_report_composite(nullptr, 1)));
    CHECK(rt_estimate_argmin(nullptr) == -1);
    rt_series_free(nullptr);
    rt_stats_free(nullptr);
    rt_report_free(nullptr);
    rt_estimate_free(nullptr);
    rt_config_free(nullptr);

    rt_stats* st = nullptr;
    CHECK(rt_stats_run(nullptr, nullptr, &st) == RT_ERR_ARG);
    CHECK(std::string(rt_last_error()).find("null") != std::string::npos);
}

TEST_SUITE_END();
