#include "dyps/edf_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <queue>
#include <sstream>

#include <boost/math/distributions/normal.hpp>

namespace dyps {

void VariationConfig::check() const
{
    if (!(exec_mean_factor > 0.0 && exec_mean_factor <= 1.0))
        throw std::invalid_argument("exec_mean_factor must lie in (0, 1]");
    if (!(exec_p_le_wcet > 0.5 && exec_p_le_wcet < 1.0))
        throw std::invalid_argument("exec_p_le_wcet must lie in (0.5, 1)");
    if (!(sporadic_lambda_factor > 0.0))
        throw std::invalid_argument("sporadic_lambda_factor must be positive");
}

const char* to_string(TieBreak tb)
{
    return tb == TieBreak::lowest_id ? "lowest-id" : "random";
}

TieBreak tie_break_from_string(const std::string& s)
{
    if (s == "lowest-id" || s == "lowest_id")
        return TieBreak::lowest_id;
    if (s == "random" || s == "seeded_random")
        return TieBreak::seeded_random;
    throw std::invalid_argument("unknown tie-break: " + s);
}

double exec_time_sigma(Tick wcet, const VariationConfig& var)
{
    boost::math::normal_distribution<double> std_normal;
    double z = boost::math::quantile(std_normal, var.exec_p_le_wcet);
    return (1.0 - var.exec_mean_factor) * static_cast<double>(wcet) / z;
}

Tick sample_exec_time(Tick wcet, const VariationConfig& var, Rng& rng)
{
    if (!var.enabled || wcet <= 1)
        return wcet;
    std::normal_distribution<double> dist(var.exec_mean_factor * static_cast<double>(wcet),
                                          exec_time_sigma(wcet, var));
    Tick c = std::lround(dist(rng));
    return std::clamp<Tick>(c, 1, wcet);
}

Tick next_sporadic_arrival(Tick prev_arrival, Tick period, const VariationConfig& var, Rng& rng)
{
    if (!var.enabled)
        return prev_arrival + period;
    std::poisson_distribution<Tick> dist(var.sporadic_lambda_factor * static_cast<double>(period));
    return prev_arrival + std::max(period, dist(rng));
}

namespace {

struct ActiveJob {
    Tick deadline;
    std::uint64_t tie_key;
    TaskId task;
    std::int64_t job_index;
    Tick remaining;
};

// Min-heap order on (deadline, tie_key).
struct LaterFirst {
    bool operator()(const ActiveJob& a, const ActiveJob& b) const
    {
        if (a.deadline != b.deadline)
            return a.deadline > b.deadline;
        return a.tie_key > b.tie_key;
    }
};

[[noreturn]] void report_miss(const ActiveJob& j, Tick now)
{
    std::ostringstream msg;
    msg << "deadline miss: task " << j.task << " job " << j.job_index << " deadline " << j.deadline
        << " with " << j.remaining << " ticks left at t=" << now;
    throw DeadlineMiss(msg.str());
}

}  // namespace

ScheduleTrace simulate(const TaskSet& ts, Tick horizon, const VariationConfig& var, TieBreak tie_break)
{
    if (auto errs = validate_taskset(ts); !errs.empty())
        throw std::invalid_argument("simulate: invalid task set: " + errs.front());
    if (horizon < 1)
        throw std::invalid_argument("simulate: horizon must be >= 1");
    if (var.enabled)
        var.check();

    Rng exec_rng = make_rng(var.rng_seed, {1});
    Rng arrival_rng = make_rng(var.rng_seed, {2});
    Rng tie_rng = make_rng(var.rng_seed, {3});

    const std::size_t n = ts.tasks.size();
    ScheduleTrace trace;
    trace.horizon = horizon;
    trace.jobs.resize(n);

    std::vector<Tick> next_arrival(n);
    for (std::size_t i = 0; i < n; ++i)
        next_arrival[i] = ts.tasks[i].phase;

    std::priority_queue<ActiveJob, std::vector<ActiveJob>, LaterFirst> ready;
    std::optional<ActiveJob> running;

    auto job_record = [&](const ActiveJob& j) -> JobRecord& {
        return trace.jobs[static_cast<std::size_t>(j.task)][static_cast<std::size_t>(j.job_index)];
    };

    Tick t = 0;
    for (;;) {
        Tick t_arr = *std::min_element(next_arrival.begin(), next_arrival.end());
        Tick t_next = std::min(t_arr, horizon);
        if (running)
            t_next = std::min(t_next, t + running->remaining);

        if (running && t_next > t) {
            running->remaining -= t_next - t;
            auto& s = trace.slices;
            if (!s.empty() && s.back().task_id == running->task && s.back().job_index == running->job_index
                && s.back().interval.end == t)
                s.back().interval.end = t_next;
            else
                s.push_back({running->task, running->job_index, {t, t_next}});
        }
        t = t_next;

        if (running && running->remaining == 0) {
            if (t > running->deadline)
                report_miss(*running, t);
            job_record(*running).completion = t;
            running.reset();
        }
        if (t >= horizon)
            break;

        for (std::size_t i = 0; i < n; ++i) {
            if (next_arrival[i] != t)
                continue;
            const auto& task = ts.tasks[i];
            auto& records = trace.jobs[i];
            JobRecord rec;
            rec.task_id = task.id;
            rec.job_index = static_cast<std::int64_t>(records.size());
            rec.arrival = t;
            rec.abs_deadline = t + task.deadline();
            rec.exec_budget = sample_exec_time(task.wcet, var, exec_rng);
            records.push_back(rec);

            std::uint64_t key = tie_break == TieBreak::lowest_id ? static_cast<std::uint64_t>(task.id) : tie_rng();
            ready.push({rec.abs_deadline, key, task.id, rec.job_index, rec.exec_budget});

            next_arrival[i] = task.kind == TaskKind::sporadic ? next_sporadic_arrival(t, task.period, var, arrival_rng)
                                                               : t + task.period;
        }

        if (running && running->deadline <= t)
            report_miss(*running, t);
        if (!ready.empty() && ready.top().deadline <= t)
            report_miss(ready.top(), t);

        if (!ready.empty()) {
            if (!running) {
                running = ready.top();
                ready.pop();
            } else if (ready.top().deadline < running->deadline) {
                ready.push(*running);
                running = ready.top();
                ready.pop();
            }
        }
        if (running) {
            auto& rec = job_record(*running);
            if (!rec.start)
                rec.start = t;
        }
    }

    // Anything still pending with a deadline inside the horizon missed it.
    auto check_pending = [&](const ActiveJob& j) {
        if (j.deadline <= horizon)
            report_miss(j, horizon);
    };
    if (running)
        check_pending(*running);
    while (!ready.empty()) {
        check_pending(ready.top());
        ready.pop();
    }
    return trace;
}

void write_trace(std::ostream& os, const ScheduleTrace& trace, const VariationConfig& var, TieBreak tie_break)
{
    os << "# seed=" << var.rng_seed << "\n";
    os << "# tie_break=" << to_string(tie_break) << "\n";
    os << "# variation=" << (var.enabled ? "on" : "off") << " exec_mean_factor=" << var.exec_mean_factor
       << " exec_p_le_wcet=" << var.exec_p_le_wcet << " sporadic_lambda_factor=" << var.sporadic_lambda_factor
       << "\n";
    os << "# horizon=" << trace.horizon << "\n";
    os << "task_id,job_index,begin,end\n";
    for (const auto& s : trace.slices)
        os << s.task_id << ',' << s.job_index << ',' << s.interval.begin << ',' << s.interval.end << '\n';
}

}  // namespace dyps
