#include "dyps/taskset_gen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "dyps/metrics.hpp"

namespace dyps {

std::string to_string(const GenConstraint& c)
{
    using K = GenConstraint::Kind;
    switch (c.kind) {
    case K::none:
        return "none";
    case K::coverage_ge_one:
        return "coverage_ge_one";
    case K::coverage_in_bin: {
        std::ostringstream os;
        os << "coverage_in_bin:" << c.lo << ':' << c.hi;
        return os.str();
    }
    case K::force_harmonic:
        return "force_harmonic";
    case K::force_invalid_intervals:
        return "force_invalid_intervals";
    }
    return "?";
}

GenConstraint gen_constraint_from_string(const std::string& s)
{
    using K = GenConstraint::Kind;
    if (s == "none")
        return {K::none};
    if (s == "coverage_ge_one")
        return {K::coverage_ge_one};
    if (s == "force_harmonic")
        return {K::force_harmonic};
    if (s == "force_invalid_intervals")
        return {K::force_invalid_intervals};
    const std::string prefix = "coverage_in_bin:";
    if (s.rfind(prefix, 0) == 0) {
        auto rest = s.substr(prefix.size());
        auto colon = rest.find(':');
        if (colon != std::string::npos) {
            double lo = std::stod(rest.substr(0, colon));
            double hi = std::stod(rest.substr(colon + 1));
            return GenConstraint::coverage_bin(lo, hi);
        }
    }
    throw std::invalid_argument("unknown constraint: " + s + " (expected none, coverage_ge_one, "
                                "coverage_in_bin:LO:HI, force_harmonic or force_invalid_intervals)");
}

void GenConfig::check() const
{
    // With three tasks the observer and victim slots (n/3 and n - n/3 - 1) coincide.
    if (n_tasks < 4)
        throw std::invalid_argument("n_tasks must be >= 4");
    if (!(util_low > 0.0 && util_low < util_high && util_high <= 1.0))
        throw std::invalid_argument("utilization range must satisfy 0 < low < high <= 1");
    if (period_min < 1 || period_max < period_min)
        throw std::invalid_argument("invalid period range");
    if (period_max - period_min + 1 < n_tasks)
        throw std::invalid_argument("period range too small for distinct periods");
    if (sporadic_fraction < 0.0 || sporadic_fraction > 1.0)
        throw std::invalid_argument("sporadic_fraction must lie in [0, 1]");
    if (constraint.kind == GenConstraint::Kind::coverage_in_bin && !(constraint.lo < constraint.hi))
        throw std::invalid_argument("coverage bin must satisfy lo < hi");
    if (max_attempts < 1)
        throw std::invalid_argument("max_attempts must be >= 1");
}

std::vector<double> uunifast(int n, double total, Rng& rng)
{
    if (n < 1)
        throw std::invalid_argument("uunifast: n must be >= 1");
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    double remaining = total;
    for (int i = 1; i < n; ++i) {
        double next = remaining * std::pow(unit(rng), 1.0 / static_cast<double>(n - i));
        out.push_back(remaining - next);
        remaining = next;
    }
    out.push_back(remaining);
    return out;
}

namespace {

struct Draft {
    double util;
    TaskSpec spec;
    bool observer = false;
    bool victim = false;
};

Tick wcet_for(double util, Tick period)
{
    return std::clamp<Tick>(std::llround(util * static_cast<double>(period)), 1, period);
}

// Sorts by descending period and assigns dense ids; roles follow the tasks.
TaskSet assemble(std::vector<Draft> drafts, const std::string& note)
{
    std::stable_sort(drafts.begin(), drafts.end(),
                     [](const Draft& a, const Draft& b) { return a.spec.period > b.spec.period; });
    TaskSet ts;
    ts.seed_note = note;
    for (std::size_t i = 0; i < drafts.size(); ++i) {
        auto spec = drafts[i].spec;
        spec.id = static_cast<TaskId>(i);
        ts.tasks.push_back(spec);
        if (drafts[i].observer)
            ts.observer_id = spec.id;
        if (drafts[i].victim)
            ts.victim_id = spec.id;
    }
    return ts;
}

std::vector<Draft> draw_drafts(const GenConfig& cfg, Rng& rng)
{
    const int n = cfg.n_tasks;
    std::uniform_real_distribution<double> util_dist(cfg.util_low, cfg.util_high);
    const double total = util_dist(rng);
    const auto utils = uunifast(n, total, rng);

    std::uniform_int_distribution<Tick> period_dist(cfg.period_min, cfg.period_max);
    std::set<Tick> used;
    std::vector<Tick> periods;
    while (static_cast<int>(periods.size()) < n) {
        Tick p = period_dist(rng);
        if (used.insert(p).second)
            periods.push_back(p);
    }

    std::vector<Draft> drafts(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        auto& d = drafts[static_cast<std::size_t>(i)];
        d.util = utils[static_cast<std::size_t>(i)];
        d.spec.period = periods[static_cast<std::size_t>(i)];
        d.spec.wcet = wcet_for(d.util, d.spec.period);
        d.spec.phase = std::uniform_int_distribution<Tick>(0, d.spec.period - 1)(rng);
    }

    std::sort(drafts.begin(), drafts.end(), [](const Draft& a, const Draft& b) { return a.spec.period > b.spec.period; });
    const int third = n / 3;
    drafts[static_cast<std::size_t>(third)].observer = true;
    drafts[static_cast<std::size_t>(n - third - 1)].victim = true;

    std::vector<std::size_t> others;
    for (std::size_t i = 0; i < drafts.size(); ++i)
        if (!drafts[i].observer && !drafts[i].victim)
            others.push_back(i);
    std::shuffle(others.begin(), others.end(), rng);
    auto n_sporadic = static_cast<std::size_t>(std::floor(static_cast<double>(n) * cfg.sporadic_fraction));
    n_sporadic = std::min(n_sporadic, others.size());
    for (std::size_t i = 0; i < n_sporadic; ++i)
        drafts[others[i]].spec.kind = TaskKind::sporadic;
    return drafts;
}

// Makes one shorter-period, non-role task harmonic with the observer.
// Returns false if no admissible divisor exists.
bool force_harmonic(std::vector<Draft>& drafts, const GenConfig& cfg, Rng& rng)
{
    const auto obs = std::find_if(drafts.begin(), drafts.end(), [](const Draft& d) { return d.observer; });
    const Tick t_o = obs->spec.period;
    for (const auto& d : drafts)
        if (!d.observer && t_o % d.spec.period == 0)
            return true;

    std::vector<std::size_t> slots;
    for (std::size_t i = 0; i < drafts.size(); ++i)
        if (!drafts[i].observer && !drafts[i].victim && drafts[i].spec.period < t_o)
            slots.push_back(i);
    if (slots.empty())
        return false;
    const std::size_t slot = slots[std::uniform_int_distribution<std::size_t>(0, slots.size() - 1)(rng)];

    std::set<Tick> taken;
    for (std::size_t i = 0; i < drafts.size(); ++i)
        if (i != slot)
            taken.insert(drafts[i].spec.period);
    std::vector<Tick> divisors;
    for (Tick d = cfg.period_min; d < t_o && d <= cfg.period_max; ++d)
        if (t_o % d == 0 && !taken.count(d))
            divisors.push_back(d);
    if (divisors.empty())
        return false;

    auto& task = drafts[slot];
    task.spec.period = divisors[std::uniform_int_distribution<std::size_t>(0, divisors.size() - 1)(rng)];
    task.spec.wcet = wcet_for(task.util, task.spec.period);
    task.spec.phase = std::uniform_int_distribution<Tick>(0, task.spec.period - 1)(rng);
    return true;
}

}  // namespace

bool has_harmonic_with_observer(const TaskSet& ts)
{
    const Tick t_o = ts.observer().period;
    for (const auto& t : ts.tasks)
        if (t.id != ts.observer_id && t_o % t.period == 0)
            return true;
    return false;
}

bool satisfies(const TaskSet& ts, const GenConstraint& c)
{
    using K = GenConstraint::Kind;
    const auto& o = ts.observer();
    const auto& v = ts.victim();
    switch (c.kind) {
    case K::none:
        return true;
    case K::coverage_ge_one:
        return coverage_dyps(o.wcet, o.period, v.period) >= Ratio(1);
    case K::coverage_in_bin: {
        double cov = coverage_dyps(o.wcet, o.period, v.period).to_double();
        return c.lo <= cov && cov < c.hi;
    }
    case K::force_harmonic:
        return has_harmonic_with_observer(ts) && coverage_dyps(o.wcet, o.period, v.period) >= Ratio(1);
    case K::force_invalid_intervals:
        return o.wcet > o.period - v.period;
    }
    return false;
}

TaskSet generate_candidate(const GenConfig& cfg, std::uint64_t index)
{
    Rng rng = make_rng(cfg.rng_seed, {index});
    auto drafts = draw_drafts(cfg, rng);
    std::ostringstream note;
    note << "seed=" << cfg.rng_seed << " candidate=" << index;
    return assemble(std::move(drafts), note.str());
}

GeneratedSet generate_indexed(const GenConfig& cfg)
{
    cfg.check();
    for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
        const auto index = static_cast<std::uint64_t>(attempt);
        Rng rng = make_rng(cfg.rng_seed, {index});
        auto drafts = draw_drafts(cfg, rng);
        if (cfg.constraint.kind == GenConstraint::Kind::force_harmonic) {
            Rng fix_rng = make_rng(cfg.rng_seed, {index, 1});
            if (!force_harmonic(drafts, cfg, fix_rng))
                continue;
        }
        std::ostringstream note;
        note << "seed=" << cfg.rng_seed << " candidate=" << index << " constraint=" << to_string(cfg.constraint);
        TaskSet ts = assemble(std::move(drafts), note.str());
        if (!validate_taskset(ts).empty())
            continue;
        if (cfg.exclude_harmonic && has_harmonic_with_observer(ts))
            continue;
        if (!satisfies(ts, cfg.constraint))
            continue;
        return {std::move(ts), index};
    }
    throw GenerationError("no task set satisfying " + to_string(cfg.constraint) + " after "
                          + std::to_string(cfg.max_attempts) + " attempts");
}

TaskSet generate(const GenConfig& cfg)
{
    return generate_indexed(cfg).taskset;
}

}  // namespace dyps
