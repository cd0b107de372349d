#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dyps/attack.hpp"
#include "dyps/edf_sim.hpp"
#include "dyps/taskset_gen.hpp"

namespace dyps {

enum class Experiment {
    phio_starts,
    harmonic_delay,
    error_injection,
    duration_sweep,
    heatmap,
    coverage_sweep,
    baseline_compare,
};

const char* to_string(Experiment e);
Experiment experiment_from_string(const std::string& s);
const std::vector<Experiment>& all_experiments();

struct Bin {
    double lo = 0.0;
    double hi = 0.0;
};

/// The ten bins [0.001 + 0.1x, 0.1 + 0.1x), x = 0..9, used both for total
/// utilization and for the coverage ratio.
std::vector<Bin> standard_bins();

struct ExperimentConfig {
    Experiment experiment = Experiment::duration_sweep;
    int sets_per_cell = 20;
    std::vector<int> duration_lcm_multiples{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    /// Attack length for experiments that use a single duration.
    int attack_duration = 10;
    std::vector<Bin> util_bins = standard_bins();
    std::vector<int> task_counts{5, 7, 9, 11, 13, 15};
    std::uint64_t master_seed = 1;
    std::string output_path;
    bool variation = true;
    TieBreak tie_break = TieBreak::seeded_random;
    /// Attack windows start at the first observer arrival >= warmup_periods * T_o.
    Tick warmup_periods = 5;
    /// Worker threads; 0 picks the hardware concurrency.
    int threads = 0;

    void check() const;
};

/// Defaults for one experiment; sets_per_cell is 100 with paper_scale.
ExperimentConfig default_experiment_config(Experiment e, bool paper_scale = false);

/// A finished experiment: CSV header plus pre-formatted rows.
struct ResultTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column_index(const std::string& name) const;
    /// Numeric view of a column; empty cells become NaN.
    std::vector<double> numeric_column(const std::string& name) const;
    std::vector<std::string> column(const std::string& name) const;
};

ResultTable run_experiment(const ExperimentConfig& cfg);

void write_csv(std::ostream& os, const ResultTable& table);

/// [a, a + duration * LCM(T_o, T_v)) where a is the first observer arrival
/// at or after warmup_periods * T_o.
Interval attack_window(const TaskSet& ts, int duration_lcm_multiple, Tick warmup_periods = 5);

/// Horizon that covers the longest attack window plus one observer period.
Tick horizon_for(const TaskSet& ts, int max_duration_lcm_multiple, Tick warmup_periods = 5);

/// Precision of an attack outcome. An absent inference is scored against a
/// uniformly drawn column from `guess_seed`; the flag reports that case.
struct Scored {
    double precision = 0.0;
    bool failed = false;
};
Scored score_inference(const std::optional<Tick>& phi_v_hat, Tick phi_v, Tick victim_period, std::uint64_t guess_seed);

/// Number of leading start times needed before the reconstructed observer
/// phase is exact, or nullopt if all of them are not enough.
std::optional<std::size_t> starts_until_exact(const ObserverView& view, Tick true_phi_o);

}  // namespace dyps
