#include "dyps/task_model.hpp"

#include <set>
#include <sstream>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

namespace dyps {

const char* to_string(TaskKind kind)
{
    return kind == TaskKind::periodic ? "periodic" : "sporadic";
}

TaskKind task_kind_from_string(const std::string& s)
{
    if (s == "periodic")
        return TaskKind::periodic;
    if (s == "sporadic")
        return TaskKind::sporadic;
    throw std::invalid_argument("unknown task kind: " + s);
}

bool TaskSet::utilization_at_most_one() const
{
    boost::multiprecision::cpp_rational u = 0;
    for (const auto& t : tasks)
        u += boost::multiprecision::cpp_rational(t.wcet, t.period);
    return u <= 1;
}

double TaskSet::utilization() const
{
    double u = 0.0;
    for (const auto& t : tasks)
        u += static_cast<double>(t.wcet) / static_cast<double>(t.period);
    return u;
}

std::vector<std::string> validate_taskset(const TaskSet& ts)
{
    std::vector<std::string> errs;
    auto fail = [&](const std::string& msg) { errs.push_back(msg); };

    if (ts.tasks.size() < 2)
        fail("task set needs at least two tasks");

    bool params_ok = true;
    for (std::size_t i = 0; i < ts.tasks.size(); ++i) {
        const auto& t = ts.tasks[i];
        std::ostringstream who;
        who << "task " << i << ": ";
        if (t.id != static_cast<TaskId>(i))
            fail(who.str() + "ids must be dense and in storage order");
        if (t.period < 1) {
            fail(who.str() + "period must be >= 1");
            params_ok = false;
            continue;
        }
        if (t.wcet < 1 || t.wcet > t.period) {
            fail(who.str() + "wcet must lie in [1, period]");
            params_ok = false;
        }
        if (t.phase < 0 || t.phase >= t.period)
            fail(who.str() + "phase must lie in [0, period)");
    }

    std::set<Tick> periods;
    for (const auto& t : ts.tasks) {
        if (!periods.insert(t.period).second) {
            fail("periods must be distinct (duplicate period " + std::to_string(t.period) + ")");
            break;
        }
    }

    if (params_ok && !ts.tasks.empty() && !ts.utilization_at_most_one())
        fail("total utilization exceeds 1");

    auto role_ok = [&](TaskId id) { return id >= 0 && static_cast<std::size_t>(id) < ts.tasks.size(); };
    if (!role_ok(ts.observer_id))
        fail("observer id out of range");
    if (!role_ok(ts.victim_id))
        fail("victim id out of range");
    if (role_ok(ts.observer_id) && role_ok(ts.victim_id)) {
        const auto& o = ts.observer();
        const auto& v = ts.victim();
        if (ts.observer_id == ts.victim_id)
            fail("observer and victim must be different tasks");
        else if (o.period <= v.period)
            fail("observer period must exceed victim period");
        if (o.kind != TaskKind::periodic)
            fail("observer task must be periodic");
        if (v.kind != TaskKind::periodic)
            fail("victim task must be periodic");
    }
    return errs;
}

Tick gcd_pair(Tick a, Tick b)
{
    if (a < 1 || b < 1)
        throw std::invalid_argument("gcd_pair: arguments must be >= 1");
    while (b != 0) {
        Tick t = a % b;
        a = b;
        b = t;
    }
    return a;
}

Tick lcm_pair(Tick a, Tick b)
{
    Tick g = gcd_pair(a, b);
    Tick out = 0;
    if (__builtin_mul_overflow(a / g, b, &out))
        throw std::overflow_error("lcm overflows the tick type");
    return out;
}

Tick hyperperiod(const TaskSet& ts)
{
    Tick h = 1;
    for (const auto& t : ts.tasks)
        h = lcm_pair(h, t.period);
    return h;
}

}  // namespace dyps
