#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dyps/edf_sim.hpp"
#include "dyps/task_model.hpp"

namespace dyps {

/// Raised when the observer cannot witness victim arrivals (T_o <= T_v).
class ObservabilityError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct StartTime {
    std::int64_t job_index = 0;
    Tick start = 0;

    friend bool operator==(const StartTime&, const StartTime&) = default;
};

struct OwnSlice {
    std::int64_t job_index = 0;
    Interval interval;
};

/// What the observer task can measure about itself: when each of its jobs
/// started and when it ran. Nothing about other tasks.
struct ObserverView {
    std::vector<StartTime> start_times; ///< strictly increasing
    std::vector<OwnSlice> own_slices;   ///< sorted by begin
    Tick observer_period = 0;
    Tick victim_period = 0;
};

struct IntervalCounts {
    std::int64_t kept = 0;      ///< slices entirely inside the valid region
    std::int64_t truncated = 0; ///< slices partially clipped
    std::int64_t dropped = 0;   ///< slices entirely outside

    friend bool operator==(const IntervalCounts&, const IntervalCounts&) = default;
};

struct ValidIntervals {
    std::vector<Interval> intervals;
    IntervalCounts counts;
};

struct AttackResult {
    Tick phi_o_hat = 0;
    std::vector<Interval> e_recon;
    std::vector<Tick> candidates; ///< ascending columns in [0, T_v)
    std::optional<Tick> phi_v_hat;
    Tick longest_run = 0;
    IntervalCounts counts;
};

// Step 0: observer-side measurements.

/// Start times and slices of the observer jobs whose period [a, a + T_o)
/// lies inside `window`. Throws std::invalid_argument if there are none.
ObserverView extract_observer_view(const ScheduleTrace& trace, const TaskSet& ts, Interval window);

// Step 1: observer phase.

/// Of two start times p periods apart, the one closer to its own arrival.
Tick closer_start(Tick s_k, Tick s_kp, std::int64_t p, Tick observer_period);

/// min over collected starts of (s - p * T_o), mod T_o, where p is the job
/// distance from the first collected start.
Tick reconstruct_phi_o(const ObserverView& view);

/// Same as above over the first `count` start times only.
Tick reconstruct_phi_o(const ObserverView& view, std::size_t count);

/// Arrival implied by a start time under the reconstructed phase.
Tick project_arrival(Tick start, Tick phi_o_hat, Tick observer_period);

// Step 2: valid execution intervals.

/// Clips each observer job's slices to [a~, a~ + T_o - T_v), where a~ is
/// projected from that job's own start time.
ValidIntervals reconstruct_valid_intervals(const ObserverView& view, Tick phi_o_hat);

// Steps 3-4: ladder columns.

/// Columns of [0, T_v) never covered by any interval taken mod T_v.
std::vector<Tick> compute_candidates(const std::vector<Interval>& e_recon, Tick victim_period);

struct ColumnRun {
    Tick start = 0;
    Tick length = 0;
};

/// Longest circular run of candidate columns; ties go to the smallest start.
/// Empty candidates yield nullopt; a full set yields {0, T_v}.
std::optional<ColumnRun> longest_candidate_run(const std::vector<Tick>& candidates, Tick victim_period);

std::optional<Tick> infer_phi_v(const std::vector<Tick>& candidates, Tick victim_period);

/// Next tick >= t on the inferred victim arrival grid.
Tick predict_next_arrival(Tick t, Tick phi_v_hat, Tick victim_period);

// Whole pipelines.

/// The full four-step attack. With `override_phi_o` set, step 1 is skipped.
AttackResult run_dyps(const ScheduleTrace& trace, const TaskSet& ts, Interval window,
                      std::optional<Tick> override_phi_o = std::nullopt);

/// Prior fixed-priority attack applied unchanged to EDF: every observer slice
/// enters the ladder, no validity clipping.
AttackResult run_scheduleak_baseline(const ScheduleTrace& trace, const TaskSet& ts, Interval window);

/// JSON record with phi_o_hat, phi_v_hat, candidate_count, longest_run_len,
/// intervals_kept, intervals_truncated, intervals_dropped.
std::string attack_result_to_json(const AttackResult& r);

}  // namespace dyps
