// dyps: command-line front end for the EDF simulator, the phase-inference
// attack and the experiment harness.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include "CLI11.hpp"

#include "dyps/attack.hpp"
#include "dyps/edf_sim.hpp"
#include "dyps/experiments.hpp"
#include "dyps/metrics.hpp"
#include "dyps/taskset_gen.hpp"
#include "dyps/taskset_io.hpp"

namespace fs = std::filesystem;
using namespace dyps;

namespace {

// Output stream that is either a file or stdout ("-" or empty path).
class Output {
public:
    explicit Output(const std::string& path)
    {
        if (path.empty() || path == "-")
            return;
        if (auto parent = fs::path(path).parent_path(); !parent.empty())
            fs::create_directories(parent);
        file_ = std::make_unique<std::ofstream>(path);
        if (!*file_)
            throw std::runtime_error("cannot open " + path + " for writing");
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

struct RunOptions {
    std::uint64_t seed = 1;
    std::string tie_break = "random";
    bool no_variation = false;

    void add_to(CLI::App* cmd)
    {
        cmd->add_option("--seed", seed, "RNG seed");
        cmd->add_option("--tie-break", tie_break, "Equal-deadline tie-break")
            ->check(CLI::IsMember({"random", "lowest-id"}));
        cmd->add_flag("--no-variation", no_variation, "Run every job at its WCET, sporadic tasks strictly periodic");
    }

    VariationConfig variation() const
    {
        VariationConfig v;
        v.enabled = !no_variation;
        v.rng_seed = seed;
        return v;
    }
};

int cmd_gen_tasksets(int n_tasks, double util_low, double util_high, const std::string& constraint, int count,
                     std::uint64_t seed, bool exclude_harmonic, const std::string& out_dir)
{
    fs::create_directories(out_dir);
    std::ofstream manifest(fs::path(out_dir) / "manifest.csv");
    manifest << "set_id,file,seed,constraint,utilization,coverage_dyps\n";
    for (int i = 0; i < count; ++i) {
        GenConfig cfg;
        cfg.n_tasks = n_tasks;
        cfg.util_low = util_low;
        cfg.util_high = util_high;
        cfg.constraint = gen_constraint_from_string(constraint);
        cfg.exclude_harmonic = exclude_harmonic;
        cfg.rng_seed = derive_seed(seed, {static_cast<std::uint64_t>(i)});
        TaskSet ts = generate(cfg);

        char name[32];
        std::snprintf(name, sizeof name, "set_%04d.json", i);
        write_taskset(fs::path(out_dir) / name, ts);

        const auto& o = ts.observer();
        manifest << i << ',' << name << ',' << cfg.rng_seed << ',' << to_string(cfg.constraint) << ','
                 << ts.utilization() << ',' << coverage_dyps(o.wcet, o.period, ts.victim().period).to_double() << '\n';
    }
    std::cerr << "wrote " << count << " task sets to " << out_dir << "\n";
    return 0;
}

int cmd_simulate(const std::string& taskset_path, Tick horizon, const RunOptions& run, const std::string& out)
{
    TaskSet ts = read_taskset(taskset_path);
    if (horizon <= 0)
        horizon = 2 * hyperperiod(ts);
    auto var = run.variation();
    auto tb = tie_break_from_string(run.tie_break);
    auto trace = simulate(ts, horizon, var, tb);
    Output o(out);
    write_trace(o.stream(), trace, var, tb);
    return 0;
}

int cmd_attack(const std::string& taskset_path, int duration, Tick warmup, bool baseline,
               std::optional<Tick> phi_o, const RunOptions& run, const std::string& out)
{
    TaskSet ts = read_taskset(taskset_path);
    auto trace = simulate(ts, horizon_for(ts, duration, warmup), run.variation(), tie_break_from_string(run.tie_break));
    const Interval window = attack_window(ts, duration, warmup);
    AttackResult r = baseline ? run_scheduleak_baseline(trace, ts, window) : run_dyps(trace, ts, window, phi_o);
    Output o(out);
    o.stream() << attack_result_to_json(r);
    if (r.phi_v_hat) {
        std::cerr << "true phi_v=" << ts.victim().phase << " inferred=" << *r.phi_v_hat << " precision="
                  << inference_precision(*r.phi_v_hat, ts.victim().phase, ts.victim().period) << "\n";
    } else {
        std::cerr << "no candidate column left; inference failed\n";
    }
    return 0;
}

int cmd_experiment(const std::string& name, bool paper_scale, std::optional<int> sets_per_cell, int threads,
                   const RunOptions& run, const std::string& out)
{
    std::vector<Experiment> which;
    if (name == "all")
        which = all_experiments();
    else
        which.push_back(experiment_from_string(name));

    for (Experiment e : which) {
        ExperimentConfig cfg = default_experiment_config(e, paper_scale);
        if (sets_per_cell)
            cfg.sets_per_cell = *sets_per_cell;
        cfg.master_seed = run.seed;
        cfg.variation = !run.no_variation;
        cfg.tie_break = tie_break_from_string(run.tie_break);
        cfg.threads = threads;

        std::string path = out;
        if (which.size() > 1)
            path = (fs::path(out.empty() ? "results" : out) / (std::string(to_string(e)) + ".csv")).string();
        cfg.output_path = path;

        std::cerr << "running " << to_string(e) << " (" << cfg.sets_per_cell << " sets per cell)\n";
        ResultTable table = run_experiment(cfg);
        Output o(path);
        write_csv(o.stream(), table);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"EDF scheduler side-channel laboratory"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("gen-tasksets", "Generate synthetic task sets");
    int n_tasks = 5, count = 10;
    double util_low = 0.001, util_high = 1.0;
    std::string constraint = "coverage_ge_one", gen_out = "tasksets";
    std::uint64_t gen_seed = 1;
    bool exclude_harmonic = false;
    gen->add_option("--n-tasks", n_tasks, "Tasks per set")->check(CLI::Range(4, 1000));
    gen->add_option("--util-low", util_low, "Lower bound of total utilization");
    gen->add_option("--util-high", util_high, "Upper bound of total utilization (exclusive)");
    gen->add_option("--constraint", constraint,
                    "none | coverage_ge_one | coverage_in_bin:LO:HI | force_harmonic | force_invalid_intervals");
    gen->add_option("--count", count, "Number of sets")->check(CLI::PositiveNumber);
    gen->add_option("--seed", gen_seed, "Master seed");
    gen->add_flag("--exclude-harmonic", exclude_harmonic, "Reject sets with a period dividing T_o");
    gen->add_option("--out", gen_out, "Output directory");

    auto* sim = app.add_subcommand("simulate", "Simulate a task set under EDF and export the trace");
    std::string sim_taskset, sim_out;
    Tick sim_horizon = 0;
    RunOptions sim_run;
    sim->add_option("taskset", sim_taskset, "Task-set file")->required();
    sim->add_option("--horizon", sim_horizon, "Ticks to simulate (default: two hyperperiods)");
    sim->add_option("--out", sim_out, "Trace file (default: stdout)");
    sim_run.add_to(sim);

    auto* att = app.add_subcommand("attack", "Run the phase-inference attack on one task set");
    std::string att_taskset, att_out;
    int att_duration = 10;
    Tick att_warmup = 5;
    bool att_baseline = false;
    std::optional<Tick> att_phi_o;
    RunOptions att_run;
    att->add_option("taskset", att_taskset, "Task-set file")->required();
    att->add_option("--duration", att_duration, "Attack length in LCM(T_o, T_v) units")->check(CLI::PositiveNumber);
    att->add_option("--warmup", att_warmup, "Observer periods to skip before attacking");
    att->add_flag("--baseline", att_baseline, "Use the unclipped fixed-priority baseline");
    att->add_option("--phi-o", att_phi_o, "Use this observer phase instead of reconstructing it");
    att->add_option("--out", att_out, "Result file (default: stdout)");
    att_run.add_to(att);

    auto* exp = app.add_subcommand("experiment", "Run an evaluation experiment and write CSV");
    std::string exp_name, exp_out;
    bool paper_scale = false;
    std::optional<int> sets_per_cell;
    int threads = 0;
    RunOptions exp_run;
    std::vector<std::string> names{"all"};
    for (Experiment e : all_experiments())
        names.push_back(to_string(e));
    exp->add_option("name", exp_name, "Experiment name or 'all'")->required()->check(CLI::IsMember(names));
    exp->add_option("--sets-per-cell", sets_per_cell, "Task sets per grid cell (default 20)")
        ->check(CLI::PositiveNumber);
    exp->add_flag("--paper-scale", paper_scale, "100 task sets per cell");
    exp->add_option("--threads", threads, "Worker threads (0 = all cores)");
    exp->add_option("--out", exp_out, "CSV path, or directory for 'all' (default: stdout / results/)");
    exp_run.add_to(exp);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen)
            return cmd_gen_tasksets(n_tasks, util_low, util_high, constraint, count, gen_seed, exclude_harmonic, gen_out);
        if (*sim)
            return cmd_simulate(sim_taskset, sim_horizon, sim_run, sim_out);
        if (*att)
            return cmd_attack(att_taskset, att_duration, att_warmup, att_baseline, att_phi_o, att_run, att_out);
        if (*exp)
            return cmd_experiment(exp_name, paper_scale, sets_per_cell, threads, exp_run, exp_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
