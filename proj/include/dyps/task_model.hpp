#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dyps/ratio.hpp"

namespace dyps {

/// Discrete time, in scheduler ticks.
using Tick = std::int64_t;

using TaskId = int;

enum class TaskKind { periodic, sporadic };

const char* to_string(TaskKind kind);
TaskKind task_kind_from_string(const std::string& s);

/// Static parameters of one implicit-deadline task.
struct TaskSpec {
    TaskId id = 0;
    Tick wcet = 1;
    Tick period = 1;
    Tick phase = 0;
    TaskKind kind = TaskKind::periodic;

    Tick deadline() const { return period; }
    Ratio utilization() const { return Ratio(wcet, period); }

    friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

/// A task set with the attacker (observer) and target (victim) roles assigned.
///
/// Tasks are stored in id order; ids are dense, `tasks[i].id == i`.
struct TaskSet {
    std::vector<TaskSpec> tasks;
    TaskId observer_id = 0;
    TaskId victim_id = 0;
    std::string seed_note;

    const TaskSpec& task(TaskId id) const { return tasks.at(static_cast<std::size_t>(id)); }
    const TaskSpec& observer() const { return task(observer_id); }
    const TaskSpec& victim() const { return task(victim_id); }
    std::size_t size() const { return tasks.size(); }

    /// Exact test of sum(C_i / T_i) <= 1 (arbitrary precision; the common
    /// denominator of many periods overflows 64 bits).
    bool utilization_at_most_one() const;

    /// sum(C_i / T_i), rounded to double.
    double utilization() const;

    friend bool operator==(const TaskSet&, const TaskSet&) = default;
};

/// Half-open interval [begin, end) on the tick axis.
struct Interval {
    Tick begin = 0;
    Tick end = 0;

    Tick length() const { return end - begin; }
    bool empty() const { return end <= begin; }
    bool contains(Tick t) const { return begin <= t && t < end; }

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Realized parameters of one job, as produced by the simulator.
struct JobRecord {
    TaskId task_id = 0;
    std::int64_t job_index = 0;
    Tick arrival = 0;
    Tick abs_deadline = 0;
    Tick exec_budget = 0;
    std::optional<Tick> start;
    std::optional<Tick> completion;
};

/// Returns every violated task-set invariant as a human readable message.
/// An empty result means the set is valid.
std::vector<std::string> validate_taskset(const TaskSet& ts);

Tick gcd_pair(Tick a, Tick b);

/// Throws std::overflow_error if the result does not fit in a Tick.
Tick lcm_pair(Tick a, Tick b);

/// LCM of all periods; throws std::overflow_error on overflow.
Tick hyperperiod(const TaskSet& ts);

/// Non-negative remainder, for modular arithmetic on possibly negative ticks.
inline Tick floor_mod(Tick a, Tick m)
{
    Tick r = a % m;
    return r < 0 ? r + m : r;
}

}  // namespace dyps
