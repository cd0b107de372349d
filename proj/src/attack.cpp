#include "dyps/attack.hpp"

#include <algorithm>
#include <limits>

#include "json.hpp"

namespace dyps {

ObserverView extract_observer_view(const ScheduleTrace& trace, const TaskSet& ts, Interval window)
{
    if (window.empty())
        throw std::invalid_argument("attack window is empty");
    if (window.begin < 0 || window.end > trace.horizon)
        throw std::invalid_argument("attack window exceeds the trace horizon");

    ObserverView view;
    view.observer_period = ts.observer().period;
    view.victim_period = ts.victim().period;

    const auto& jobs = trace.jobs.at(static_cast<std::size_t>(ts.observer_id));
    // Only jobs whose whole period [a, a + T_o) lies inside the window.
    for (const auto& job : jobs) {
        if (job.arrival < window.begin)
            continue;
        if (job.abs_deadline > window.end)
            break;
        if (job.start)
            view.start_times.push_back({job.job_index, *job.start});
    }
    if (view.start_times.empty())
        throw std::invalid_argument("no observer job starts within the attack window");

    const auto first_job = view.start_times.front().job_index;
    const auto last_job = view.start_times.back().job_index;
    auto it = std::lower_bound(trace.slices.begin(), trace.slices.end(), window.begin,
                               [](const Slice& s, Tick t) { return s.interval.begin < t; });
    for (; it != trace.slices.end() && it->interval.begin < window.end; ++it) {
        if (it->task_id != ts.observer_id || it->job_index < first_job || it->job_index > last_job)
            continue;
        Interval clipped{it->interval.begin, std::min(it->interval.end, window.end)};
        view.own_slices.push_back({it->job_index, clipped});
    }
    return view;
}

Tick closer_start(Tick s_k, Tick s_kp, std::int64_t p, Tick observer_period)
{
    return s_k < s_kp - p * observer_period ? s_k : s_kp;
}

Tick reconstruct_phi_o(const ObserverView& view, std::size_t count)
{
    if (view.start_times.empty() || count == 0)
        throw std::invalid_argument("reconstruct_phi_o needs at least one start time");
    count = std::min(count, view.start_times.size());
    const auto k0 = view.start_times.front().job_index;
    Tick best = std::numeric_limits<Tick>::max();
    for (std::size_t i = 0; i < count; ++i) {
        const auto& st = view.start_times[i];
        best = std::min(best, st.start - (st.job_index - k0) * view.observer_period);
    }
    return floor_mod(best, view.observer_period);
}

Tick reconstruct_phi_o(const ObserverView& view)
{
    return reconstruct_phi_o(view, view.start_times.size());
}

Tick project_arrival(Tick start, Tick phi_o_hat, Tick observer_period)
{
    return start - floor_mod(start - phi_o_hat, observer_period);
}

ValidIntervals reconstruct_valid_intervals(const ObserverView& view, Tick phi_o_hat)
{
    if (view.observer_period <= view.victim_period)
        throw ObservabilityError("valid region is empty unless T_o > T_v");
    const Tick valid_len = view.observer_period - view.victim_period;

    ValidIntervals out;
    std::size_t job = 0;
    for (const auto& slice : view.own_slices) {
        while (job < view.start_times.size() && view.start_times[job].job_index < slice.job_index)
            ++job;
        if (job == view.start_times.size() || view.start_times[job].job_index != slice.job_index)
            continue;
        const Tick arrival = project_arrival(view.start_times[job].start, phi_o_hat, view.observer_period);
        const Tick cutoff = arrival + valid_len;
        Interval clipped{std::max(slice.interval.begin, arrival), std::min(slice.interval.end, cutoff)};
        if (clipped.empty()) {
            ++out.counts.dropped;
        } else {
            if (clipped == slice.interval)
                ++out.counts.kept;
            else
                ++out.counts.truncated;
            out.intervals.push_back(clipped);
        }
    }
    return out;
}

std::vector<Tick> compute_candidates(const std::vector<Interval>& e_recon, Tick victim_period)
{
    if (victim_period < 1)
        throw std::invalid_argument("victim period must be >= 1");
    std::vector<char> covered(static_cast<std::size_t>(victim_period), 0);
    for (const auto& e : e_recon) {
        if (e.length() >= victim_period) {
            std::fill(covered.begin(), covered.end(), 1);
            break;
        }
        for (Tick t = e.begin; t < e.end; ++t)
            covered[static_cast<std::size_t>(floor_mod(t, victim_period))] = 1;
    }
    std::vector<Tick> cols;
    for (Tick c = 0; c < victim_period; ++c)
        if (!covered[static_cast<std::size_t>(c)])
            cols.push_back(c);
    return cols;
}

std::optional<ColumnRun> longest_candidate_run(const std::vector<Tick>& candidates, Tick victim_period)
{
    if (candidates.empty())
        return std::nullopt;
    std::vector<char> is_cand(static_cast<std::size_t>(victim_period), 0);
    for (Tick c : candidates)
        is_cand.at(static_cast<std::size_t>(c)) = 1;
    auto cand = [&](Tick c) { return is_cand[static_cast<std::size_t>(floor_mod(c, victim_period))] != 0; };

    Tick gap = -1;
    for (Tick c = 0; c < victim_period; ++c) {
        if (!cand(c)) {
            gap = c;
            break;
        }
    }
    if (gap < 0)
        return ColumnRun{0, victim_period};

    // Walk once around the ladder starting just after a non-candidate column,
    // so every run (including one that wraps) is seen contiguously.
    ColumnRun best{victim_period, 0};
    Tick run_start = 0, run_len = 0;
    for (Tick i = 1; i <= victim_period; ++i) {
        Tick c = gap + i;
        if (cand(c)) {
            if (run_len == 0)
                run_start = floor_mod(c, victim_period);
            ++run_len;
            continue;
        }
        if (run_len > best.length || (run_len == best.length && run_len > 0 && run_start < best.start))
            best = {run_start, run_len};
        run_len = 0;
    }
    return best;
}

std::optional<Tick> infer_phi_v(const std::vector<Tick>& candidates, Tick victim_period)
{
    auto run = longest_candidate_run(candidates, victim_period);
    if (!run)
        return std::nullopt;
    return run->start;
}

Tick predict_next_arrival(Tick t, Tick phi_v_hat, Tick victim_period)
{
    return t + floor_mod(phi_v_hat - t, victim_period);
}

namespace {

void finish(AttackResult& r, Tick victim_period)
{
    r.candidates = compute_candidates(r.e_recon, victim_period);
    if (auto run = longest_candidate_run(r.candidates, victim_period)) {
        r.phi_v_hat = run->start;
        r.longest_run = run->length;
    }
}

void require_observable(const TaskSet& ts)
{
    if (ts.observer().period <= ts.victim().period)
        throw ObservabilityError("victim arrivals are unobservable: observer period must exceed victim period");
}

}  // namespace

AttackResult run_dyps(const ScheduleTrace& trace, const TaskSet& ts, Interval window, std::optional<Tick> override_phi_o)
{
    require_observable(ts);
    ObserverView view = extract_observer_view(trace, ts, window);

    AttackResult r;
    r.phi_o_hat = override_phi_o ? floor_mod(*override_phi_o, view.observer_period) : reconstruct_phi_o(view);
    ValidIntervals valid = reconstruct_valid_intervals(view, r.phi_o_hat);
    r.e_recon = std::move(valid.intervals);
    r.counts = valid.counts;
    finish(r, view.victim_period);
    return r;
}

AttackResult run_scheduleak_baseline(const ScheduleTrace& trace, const TaskSet& ts, Interval window)
{
    require_observable(ts);
    ObserverView view = extract_observer_view(trace, ts, window);

    AttackResult r;
    r.phi_o_hat = reconstruct_phi_o(view);
    r.e_recon.reserve(view.own_slices.size());
    for (const auto& s : view.own_slices)
        r.e_recon.push_back(s.interval);
    r.counts.kept = static_cast<std::int64_t>(r.e_recon.size());
    finish(r, view.victim_period);
    return r;
}

std::string attack_result_to_json(const AttackResult& r)
{
    nlohmann::json doc;
    doc["phi_o_hat"] = r.phi_o_hat;
    doc["phi_v_hat"] = r.phi_v_hat ? nlohmann::json(*r.phi_v_hat) : nlohmann::json(nullptr);
    doc["candidate_count"] = r.candidates.size();
    doc["longest_run_len"] = r.longest_run;
    doc["intervals_kept"] = r.counts.kept;
    doc["intervals_truncated"] = r.counts.truncated;
    doc["intervals_dropped"] = r.counts.dropped;
    return doc.dump(2) + "\n";
}

}  // namespace dyps
