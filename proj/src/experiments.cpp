#include "dyps/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "dyps/metrics.hpp"

namespace dyps {

namespace {

struct ExperimentName {
    Experiment id;
    const char* name;
};

constexpr ExperimentName kNames[] = {
    {Experiment::phio_starts, "phio_starts"},
    {Experiment::harmonic_delay, "harmonic_delay"},
    {Experiment::error_injection, "error_injection"},
    {Experiment::duration_sweep, "duration_sweep"},
    {Experiment::heatmap, "heatmap"},
    {Experiment::coverage_sweep, "coverage_sweep"},
    {Experiment::baseline_compare, "baseline_compare"},
};

std::string fmt6(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string fmt3(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

}  // namespace

const char* to_string(Experiment e)
{
    for (const auto& n : kNames)
        if (n.id == e)
            return n.name;
    return "?";
}

Experiment experiment_from_string(const std::string& s)
{
    for (const auto& n : kNames)
        if (s == n.name)
            return n.id;
    throw std::invalid_argument("unknown experiment: " + s);
}

const std::vector<Experiment>& all_experiments()
{
    static const std::vector<Experiment> all = [] {
        std::vector<Experiment> v;
        for (const auto& n : kNames)
            v.push_back(n.id);
        return v;
    }();
    return all;
}

std::vector<Bin> standard_bins()
{
    std::vector<Bin> bins;
    for (int x = 0; x < 10; ++x)
        bins.push_back({0.001 + 0.1 * x, 0.1 + 0.1 * x});
    return bins;
}

void ExperimentConfig::check() const
{
    if (sets_per_cell < 1)
        throw std::invalid_argument("sets_per_cell must be >= 1");
    if (duration_lcm_multiples.empty())
        throw std::invalid_argument("at least one attack duration is required");
    for (int d : duration_lcm_multiples)
        if (d < 1)
            throw std::invalid_argument("attack durations must be >= 1 LCM");
    if (attack_duration < 1)
        throw std::invalid_argument("attack_duration must be >= 1 LCM");
    if (util_bins.empty() || task_counts.empty())
        throw std::invalid_argument("experiment grid is empty (no utilization bins or task counts)");
    for (const auto& b : util_bins)
        if (!(b.lo > 0.0 && b.lo < b.hi && b.hi <= 1.0))
            throw std::invalid_argument("utilization bins must satisfy 0 < lo < hi <= 1");
    for (int n : task_counts)
        if (n < 4)
            throw std::invalid_argument("task counts must be >= 4");
    if (warmup_periods < 0)
        throw std::invalid_argument("warmup_periods must be >= 0");
}

ExperimentConfig default_experiment_config(Experiment e, bool paper_scale)
{
    ExperimentConfig cfg;
    cfg.experiment = e;
    cfg.sets_per_cell = paper_scale ? 100 : 20;
    if (e == Experiment::baseline_compare)
        cfg.util_bins = {{0.001, 1.0}};
    if (e == Experiment::coverage_sweep)
        cfg.util_bins = {{0.001, 1.0}};
    return cfg;
}

std::size_t ResultTable::column_index(const std::string& name) const
{
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
        throw std::out_of_range("no column named " + name);
    return static_cast<std::size_t>(it - header.begin());
}

std::vector<std::string> ResultTable::column(const std::string& name) const
{
    const auto idx = column_index(name);
    std::vector<std::string> out;
    out.reserve(rows.size());
    for (const auto& r : rows)
        out.push_back(r.at(idx));
    return out;
}

std::vector<double> ResultTable::numeric_column(const std::string& name) const
{
    std::vector<double> out;
    for (const auto& cell : column(name))
        out.push_back(cell.empty() ? std::numeric_limits<double>::quiet_NaN() : std::stod(cell));
    return out;
}

void write_csv(std::ostream& os, const ResultTable& table)
{
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i)
                os << ',';
            os << cells[i];
        }
        os << '\n';
    };
    line(table.header);
    for (const auto& r : table.rows)
        line(r);
}

Interval attack_window(const TaskSet& ts, int duration_lcm_multiple, Tick warmup_periods)
{
    const auto& o = ts.observer();
    const Tick warmup = warmup_periods * o.period;
    const Tick anchor = warmup + floor_mod(o.phase - warmup, o.period);
    const Tick lcm = lcm_pair(o.period, ts.victim().period);
    return {anchor, anchor + static_cast<Tick>(duration_lcm_multiple) * lcm};
}

Tick horizon_for(const TaskSet& ts, int max_duration_lcm_multiple, Tick warmup_periods)
{
    return attack_window(ts, max_duration_lcm_multiple, warmup_periods).end + ts.observer().period;
}

Scored score_inference(const std::optional<Tick>& phi_v_hat, Tick phi_v, Tick victim_period, std::uint64_t guess_seed)
{
    if (phi_v_hat)
        return {inference_precision(*phi_v_hat, phi_v, victim_period), false};
    Rng rng = make_rng(guess_seed);
    Tick guess = std::uniform_int_distribution<Tick>(0, victim_period - 1)(rng);
    return {inference_precision(guess, phi_v, victim_period), true};
}

std::optional<std::size_t> starts_until_exact(const ObserverView& view, Tick true_phi_o)
{
    for (std::size_t m = 1; m <= view.start_times.size(); ++m)
        if (reconstruct_phi_o(view, m) == true_phi_o)
            return m;
    return std::nullopt;
}

namespace {

using Row = std::vector<std::string>;

struct Cell {
    GenConfig gen;
    std::string label; ///< util_bin / coverage_bin value, if the experiment reports one
};

struct SetContext {
    const ExperimentConfig& cfg;
    const TaskSet& ts;
    std::uint64_t set_seed;
    Row prefix;

    VariationConfig variation(bool enabled, std::uint64_t stream) const
    {
        VariationConfig v;
        v.enabled = enabled;
        v.rng_seed = derive_seed(set_seed, {stream});
        return v;
    }

    std::uint64_t guess_seed(std::uint64_t a, std::uint64_t b = 0) const { return derive_seed(set_seed, {99, a, b}); }

    Row row(std::initializer_list<std::string> tail) const
    {
        Row r = prefix;
        r.insert(r.end(), tail);
        return r;
    }
};

const std::vector<std::string> kCommon{"set_id", "seed", "n_tasks", "util", "T_o", "T_v", "C_o"};

std::vector<std::string> header_for(Experiment e)
{
    auto h = kCommon;
    auto add = [&](std::initializer_list<const char*> cols) { h.insert(h.end(), cols.begin(), cols.end()); };
    switch (e) {
    case Experiment::phio_starts:
        add({"starts_until_exact"});
        break;
    case Experiment::harmonic_delay:
        add({"delay_ratio", "error_ratio_novar", "error_ratio_var"});
        break;
    case Experiment::error_injection:
        add({"injected_error_x", "precision", "failed"});
        break;
    case Experiment::duration_sweep:
        add({"duration_mult", "precision", "failed"});
        break;
    case Experiment::heatmap:
        add({"util_bin", "precision", "failed"});
        break;
    case Experiment::coverage_sweep:
        add({"coverage_bin", "precision", "failed"});
        break;
    case Experiment::baseline_compare:
        add({"algorithm", "duration_mult", "precision", "failed"});
        break;
    }
    return h;
}

std::vector<Cell> cells_for(const ExperimentConfig& cfg)
{
    using K = GenConstraint::Kind;
    GenConstraint constraint{K::coverage_ge_one};
    bool exclude_harmonic = false;
    switch (cfg.experiment) {
    case Experiment::phio_starts:
        exclude_harmonic = true;
        break;
    case Experiment::harmonic_delay:
    case Experiment::error_injection:
        constraint = {K::force_harmonic};
        break;
    case Experiment::baseline_compare:
        constraint = {K::force_invalid_intervals};
        break;
    default:
        break;
    }

    std::vector<Cell> cells;
    auto add_cell = [&](const Bin& util, int n, GenConstraint c, std::string label) {
        Cell cell;
        cell.gen.n_tasks = n;
        cell.gen.util_low = util.lo;
        cell.gen.util_high = util.hi;
        cell.gen.constraint = c;
        cell.gen.exclude_harmonic = exclude_harmonic;
        cell.label = std::move(label);
        cells.push_back(cell);
    };

    if (cfg.experiment == Experiment::coverage_sweep) {
        auto bins = standard_bins();
        for (const auto& cb : bins)
            for (const auto& ub : cfg.util_bins)
                for (int n : cfg.task_counts)
                    add_cell(ub, n, GenConstraint::coverage_bin(cb.lo, cb.hi), fmt3(cb.lo));
        // Control group with full coverage.
        for (const auto& ub : cfg.util_bins)
            for (int n : cfg.task_counts)
                add_cell(ub, n, {K::coverage_ge_one}, "ge1");
        return cells;
    }
    for (const auto& ub : cfg.util_bins)
        for (int n : cfg.task_counts)
            add_cell(ub, n, constraint, fmt3(ub.lo));
    return cells;
}

std::vector<Row> evaluate_set(const SetContext& ctx, const Cell& cell)
{
    const auto& cfg = ctx.cfg;
    const auto& ts = ctx.ts;
    const auto& o = ts.observer();
    const auto& v = ts.victim();
    std::vector<Row> rows;

    switch (cfg.experiment) {
    case Experiment::phio_starts: {
        const int d = cfg.attack_duration;
        auto trace = simulate(ts, horizon_for(ts, d, cfg.warmup_periods), ctx.variation(cfg.variation, 1), cfg.tie_break);
        auto view = extract_observer_view(trace, ts, attack_window(ts, d, cfg.warmup_periods));
        auto m = starts_until_exact(view, o.phase);
        rows.push_back(ctx.row({m ? std::to_string(*m) : std::string()}));
        break;
    }
    case Experiment::harmonic_delay: {
        const int d = cfg.attack_duration;
        const Tick horizon = horizon_for(ts, d, cfg.warmup_periods);
        const Interval window = attack_window(ts, d, cfg.warmup_periods);

        auto still = simulate(ts, horizon, ctx.variation(false, 1), cfg.tie_break);
        auto still_view = extract_observer_view(still, ts, window);
        Tick min_delay = std::numeric_limits<Tick>::max();
        const auto& jobs = still.jobs[static_cast<std::size_t>(ts.observer_id)];
        for (const auto& st : still_view.start_times)
            min_delay = std::min(min_delay, st.start - jobs[static_cast<std::size_t>(st.job_index)].arrival);
        const double delay_ratio = static_cast<double>(min_delay) / static_cast<double>(o.period);
        const double err_novar = error_ratio(reconstruct_phi_o(still_view), o.phase, o.period);

        auto varied = simulate(ts, horizon, ctx.variation(true, 2), cfg.tie_break);
        auto varied_view = extract_observer_view(varied, ts, window);
        const double err_var = error_ratio(reconstruct_phi_o(varied_view), o.phase, o.period);
        rows.push_back(ctx.row({fmt6(delay_ratio), fmt6(err_novar), fmt6(err_var)}));
        break;
    }
    case Experiment::error_injection: {
        const int d = cfg.attack_duration;
        auto trace = simulate(ts, horizon_for(ts, d, cfg.warmup_periods), ctx.variation(cfg.variation, 1), cfg.tie_break);
        const Interval window = attack_window(ts, d, cfg.warmup_periods);
        for (int x = 0; x <= 10; ++x) {
            const Tick shift = std::llround(0.01 * x * static_cast<double>(o.period));
            const Tick injected = floor_mod(o.phase + shift, o.period);
            auto r = run_dyps(trace, ts, window, injected);
            auto s = score_inference(r.phi_v_hat, v.phase, v.period, ctx.guess_seed(static_cast<std::uint64_t>(x)));
            rows.push_back(ctx.row({std::to_string(x), fmt6(s.precision), s.failed ? "1" : "0"}));
        }
        break;
    }
    case Experiment::duration_sweep: {
        const int dmax = *std::max_element(cfg.duration_lcm_multiples.begin(), cfg.duration_lcm_multiples.end());
        auto trace = simulate(ts, horizon_for(ts, dmax, cfg.warmup_periods), ctx.variation(cfg.variation, 1), cfg.tie_break);
        for (int d : cfg.duration_lcm_multiples) {
            auto r = run_dyps(trace, ts, attack_window(ts, d, cfg.warmup_periods));
            auto s = score_inference(r.phi_v_hat, v.phase, v.period, ctx.guess_seed(static_cast<std::uint64_t>(d)));
            rows.push_back(ctx.row({std::to_string(d), fmt6(s.precision), s.failed ? "1" : "0"}));
        }
        break;
    }
    case Experiment::heatmap:
    case Experiment::coverage_sweep: {
        const int d = cfg.attack_duration;
        auto trace = simulate(ts, horizon_for(ts, d, cfg.warmup_periods), ctx.variation(cfg.variation, 1), cfg.tie_break);
        auto r = run_dyps(trace, ts, attack_window(ts, d, cfg.warmup_periods));
        auto s = score_inference(r.phi_v_hat, v.phase, v.period, ctx.guess_seed(static_cast<std::uint64_t>(d)));
        rows.push_back(ctx.row({cell.label, fmt6(s.precision), s.failed ? "1" : "0"}));
        break;
    }
    case Experiment::baseline_compare: {
        const int dmax = *std::max_element(cfg.duration_lcm_multiples.begin(), cfg.duration_lcm_multiples.end());
        auto trace = simulate(ts, horizon_for(ts, dmax, cfg.warmup_periods), ctx.variation(cfg.variation, 1), cfg.tie_break);
        for (int d : cfg.duration_lcm_multiples) {
            const Interval window = attack_window(ts, d, cfg.warmup_periods);
            auto dy = run_dyps(trace, ts, window);
            auto s = score_inference(dy.phi_v_hat, v.phase, v.period, ctx.guess_seed(static_cast<std::uint64_t>(d), 0));
            rows.push_back(ctx.row({"dyps", std::to_string(d), fmt6(s.precision), s.failed ? "1" : "0"}));
            auto sl = run_scheduleak_baseline(trace, ts, window);
            s = score_inference(sl.phi_v_hat, v.phase, v.period, ctx.guess_seed(static_cast<std::uint64_t>(d), 1));
            rows.push_back(ctx.row({"scheduleak", std::to_string(d), fmt6(s.precision), s.failed ? "1" : "0"}));
        }
        break;
    }
    }
    return rows;
}

}  // namespace

ResultTable run_experiment(const ExperimentConfig& cfg)
{
    cfg.check();
    const auto cells = cells_for(cfg);
    const std::size_t per_cell = static_cast<std::size_t>(cfg.sets_per_cell);
    const std::size_t total = cells.size() * per_cell;
    const auto exp_id = static_cast<std::uint64_t>(cfg.experiment);

    std::vector<std::vector<Row>> results(total);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t job = next.fetch_add(1);
            if (job >= total)
                return;
            const std::size_t c = job / per_cell;
            const std::size_t s = job % per_cell;
            try {
                // Per-set seed: derive_seed(master, {experiment, cell, set}).
                const std::uint64_t set_seed = derive_seed(cfg.master_seed, {exp_id, c, s});
                GenConfig gen = cells[c].gen;
                gen.rng_seed = set_seed;
                const TaskSet ts = generate(gen);
                const auto& o = ts.observer();
                Row prefix{std::to_string(job),
                           std::to_string(set_seed),
                           std::to_string(ts.size()),
                           fmt6(ts.utilization()),
                           std::to_string(o.period),
                           std::to_string(ts.victim().period),
                           std::to_string(o.wcet)};
                SetContext ctx{cfg, ts, set_seed, std::move(prefix)};
                results[job] = evaluate_set(ctx, cells[c]);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next.store(total);
                return;
            }
        }
    };

    unsigned n_threads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::thread::hardware_concurrency();
    n_threads = std::max(1u, std::min<unsigned>(n_threads, static_cast<unsigned>(total)));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < n_threads; ++i)
            pool.emplace_back(worker);
    }
    if (failure)
        std::rethrow_exception(failure);

    ResultTable table;
    table.header = header_for(cfg.experiment);
    for (auto& rows : results)
        for (auto& r : rows)
            table.rows.push_back(std::move(r));
    return table;
}

}  // namespace dyps
