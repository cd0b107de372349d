#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "dyps/rng.hpp"
#include "dyps/task_model.hpp"

namespace dyps {

/// Run-time variation of execution times and sporadic inter-arrival times.
struct VariationConfig {
    bool enabled = false;
    double exec_mean_factor = 0.8;
    double exec_p_le_wcet = 0.9999;
    double sporadic_lambda_factor = 1.2;
    std::uint64_t rng_seed = 0;

    /// Throws std::invalid_argument if the distribution parameters are unusable.
    void check() const;
};

enum class TieBreak { seeded_random, lowest_id };

const char* to_string(TieBreak tb);
TieBreak tie_break_from_string(const std::string& s);

struct Slice {
    TaskId task_id = 0;
    std::int64_t job_index = 0;
    Interval interval;

    friend bool operator==(const Slice&, const Slice&) = default;
};

/// Everything that happened in one simulation run.
struct ScheduleTrace {
    std::vector<Slice> slices;               ///< sorted by begin, non-overlapping
    std::vector<std::vector<JobRecord>> jobs; ///< jobs[task_id][job_index]
    Tick horizon = 0;
};

/// Raised when a job fails to complete by its absolute deadline.
class DeadlineMiss : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Preemptive uniprocessor EDF over [0, horizon).
///
/// Jobs released at the same tick as a completion see the completed job
/// already gone. A running job is only preempted by a strictly earlier
/// deadline; equal deadlines are ordered by task id (`lowest_id`) or by a
/// per-job random key (`seeded_random`) when picking the next job.
ScheduleTrace simulate(const TaskSet& ts, Tick horizon, const VariationConfig& var, TieBreak tie_break);

/// Execution time for one job. Returns `wcet` when variation is disabled.
Tick sample_exec_time(Tick wcet, const VariationConfig& var, Rng& rng);

/// Arrival following `prev_arrival` for a sporadic task with minimum
/// inter-arrival time `period`.
Tick next_sporadic_arrival(Tick prev_arrival, Tick period, const VariationConfig& var, Rng& rng);

/// Standard deviation used by sample_exec_time for a given WCET.
double exec_time_sigma(Tick wcet, const VariationConfig& var);

/// Text export: '#'-prefixed header lines, then "task_id,job_index,begin,end" rows.
void write_trace(std::ostream& os, const ScheduleTrace& trace, const VariationConfig& var, TieBreak tie_break);

}  // namespace dyps
