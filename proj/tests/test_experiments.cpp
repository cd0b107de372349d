#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dyps/experiments.hpp"
#include "fixtures.hpp"

using namespace dyps;

namespace {

ExperimentConfig small(Experiment e)
{
    auto cfg = default_experiment_config(e);
    cfg.sets_per_cell = 2;
    cfg.task_counts = {5};
    if (e != Experiment::coverage_sweep && e != Experiment::baseline_compare)
        cfg.util_bins = {{0.301, 0.4}, {0.701, 0.8}};
    cfg.duration_lcm_multiples = {1, 3};
    cfg.attack_duration = 3;
    cfg.threads = 2;
    return cfg;
}

std::string csv(const ResultTable& t)
{
    std::ostringstream os;
    write_csv(os, t);
    return os.str();
}

}  // namespace

TEST_CASE("config validation")
{
    auto cfg = small(Experiment::heatmap);
    CHECK_NOTHROW(cfg.check());

    auto bad = cfg;
    bad.task_counts.clear();
    CHECK_THROWS_AS(run_experiment(bad), std::invalid_argument);
    bad = cfg;
    bad.util_bins.clear();
    CHECK_THROWS_AS(bad.check(), std::invalid_argument);
    bad = cfg;
    bad.duration_lcm_multiples = {0};
    CHECK_THROWS_AS(bad.check(), std::invalid_argument);
    bad = cfg;
    bad.sets_per_cell = 0;
    CHECK_THROWS_AS(bad.check(), std::invalid_argument);

    CHECK(default_experiment_config(Experiment::heatmap, true).sets_per_cell == 100);
    for (Experiment e : all_experiments())
        CHECK(experiment_from_string(to_string(e)) == e);
    CHECK_THROWS(experiment_from_string("nope"));
}

TEST_CASE("attack window starts on an observer arrival after warm-up")
{
    auto ts = fixtures::worked_example();
    auto w = attack_window(ts, 1);
    CHECK(w.begin == 51); // first arrival of the T=10, phase 1 observer at or after 50
    CHECK(w.length() == 40);
    CHECK(horizon_for(ts, 2) == 51 + 80 + 10);
    CHECK(attack_window(ts, 1, 0).begin == 1);
}

TEST_CASE("score_inference")
{
    auto hit = score_inference(Tick{3}, 3, 8, 1);
    CHECK(hit.precision == 1.0);
    CHECK_FALSE(hit.failed);
    auto miss = score_inference(std::nullopt, 3, 8, 1);
    CHECK(miss.failed);
    CHECK(miss.precision >= 0.0);
    CHECK(miss.precision <= 1.0);
    CHECK(score_inference(std::nullopt, 3, 8, 1).precision == miss.precision);
}

TEST_CASE("headers, row counts and value ranges")
{
    struct Expect {
        Experiment e;
        std::vector<std::string> tail;
        std::size_t rows_per_set;
    };
    const std::vector<Expect> expected{
        {Experiment::phio_starts, {"starts_until_exact"}, 1},
        {Experiment::harmonic_delay, {"delay_ratio", "error_ratio_novar", "error_ratio_var"}, 1},
        {Experiment::error_injection, {"injected_error_x", "precision", "failed"}, 11},
        {Experiment::duration_sweep, {"duration_mult", "precision", "failed"}, 2},
        {Experiment::heatmap, {"util_bin", "precision", "failed"}, 1},
        {Experiment::coverage_sweep, {"coverage_bin", "precision", "failed"}, 1},
        {Experiment::baseline_compare, {"algorithm", "duration_mult", "precision", "failed"}, 4},
    };
    for (const auto& x : expected) {
        CAPTURE(to_string(x.e));
        auto cfg = small(x.e);
        auto t = run_experiment(cfg);
        std::vector<std::string> header{"set_id", "seed", "n_tasks", "util", "T_o", "T_v", "C_o"};
        header.insert(header.end(), x.tail.begin(), x.tail.end());
        CHECK(t.header == header);

        std::size_t cells = cfg.util_bins.size() * cfg.task_counts.size();
        if (x.e == Experiment::coverage_sweep)
            cells = 11 * cfg.task_counts.size();
        CHECK(t.rows.size() == cells * static_cast<std::size_t>(cfg.sets_per_cell) * x.rows_per_set);
        for (const auto& r : t.rows)
            CHECK(r.size() == header.size());

        if (std::find(header.begin(), header.end(), "precision") != header.end()) {
            for (double p : t.numeric_column("precision")) {
                CHECK(p >= 0.0);
                CHECK(p <= 1.0);
            }
            for (const auto& f : t.column("failed"))
                CHECK((f == "0" || f == "1"));
        }
    }
}

TEST_CASE("fixed seed gives byte-identical CSV regardless of thread count")
{
    auto cfg = small(Experiment::duration_sweep);
    auto a = csv(run_experiment(cfg));
    cfg.threads = 1;
    auto b = csv(run_experiment(cfg));
    CHECK(a == b);
    cfg.master_seed = 2;
    CHECK(csv(run_experiment(cfg)) != a);
}

TEST_CASE("error injection at x = 0 is the exact-phase attack")
{
    auto cfg = small(Experiment::error_injection);
    auto t = run_experiment(cfg);
    auto xs = t.column("injected_error_x");
    auto p = t.numeric_column("precision");
    REQUIRE(xs.size() == p.size());
    double sum0 = 0;
    int n0 = 0;
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (xs[i] == "0") {
            sum0 += p[i];
            ++n0;
        }
    REQUIRE(n0 > 0);
    CHECK(sum0 / n0 > 0.9);
}

TEST_CASE("starts_until_exact")
{
    ObserverView v;
    v.observer_period = 10;
    v.victim_period = 8;
    v.start_times = {{0, 1}, {1, 13}};
    CHECK(starts_until_exact(v, 1) == 1u);
    v.start_times = {{0, 3}, {1, 11}};
    CHECK(starts_until_exact(v, 1) == 2u);
    CHECK_FALSE(starts_until_exact(v, 0));
}
