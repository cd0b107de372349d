#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dyps/rng.hpp"
#include "dyps/task_model.hpp"

namespace dyps {

/// Acceptance filter applied to generated candidates.
struct GenConstraint {
    enum class Kind {
        none,
        coverage_ge_one,         ///< C_DyPS >= 1
        coverage_in_bin,         ///< lo <= C_DyPS < hi
        force_harmonic,          ///< some non-observer T_i divides T_o, and C_DyPS >= 1
        force_invalid_intervals, ///< C_o > T_o - T_v
    };
    Kind kind = Kind::coverage_ge_one;
    double lo = 0.0;
    double hi = 0.0;

    static GenConstraint coverage_bin(double lo, double hi) { return {Kind::coverage_in_bin, lo, hi}; }
};

std::string to_string(const GenConstraint& c);
GenConstraint gen_constraint_from_string(const std::string& s);

struct GenConfig {
    int n_tasks = 5;
    double util_low = 0.001;
    double util_high = 0.1;
    Tick period_min = 100;
    Tick period_max = 1000;
    double sporadic_fraction = 0.5;
    GenConstraint constraint;
    /// Reject sets where any non-observer period divides T_o.
    bool exclude_harmonic = false;
    std::uint64_t rng_seed = 0;
    int max_attempts = 100000;

    void check() const;
};

class GenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// n utilizations summing to `total`, uniformly distributed over the simplex.
std::vector<double> uunifast(int n, double total, Rng& rng);

/// Unfiltered candidate number `index` of the stream defined by cfg.rng_seed.
/// Depends only on (seed, index, n_tasks, util range, period range,
/// sporadic_fraction); the constraint never changes it.
TaskSet generate_candidate(const GenConfig& cfg, std::uint64_t index);

struct GeneratedSet {
    TaskSet taskset;
    std::uint64_t candidate_index = 0;
};

/// First candidate that validates and satisfies the constraint. Throws
/// GenerationError after cfg.max_attempts candidates.
GeneratedSet generate_indexed(const GenConfig& cfg);

TaskSet generate(const GenConfig& cfg);

/// True if any task other than the observer has a period dividing T_o.
bool has_harmonic_with_observer(const TaskSet& ts);

bool satisfies(const TaskSet& ts, const GenConstraint& c);

}  // namespace dyps
