#pragma once

#include "dyps/task_model.hpp"

namespace fixtures {

// Four-task set used in the worked examples: observer T=10, victim T=8.
inline dyps::TaskSet worked_example()
{
    dyps::TaskSet ts;
    ts.tasks = {
        {0, 1, 15, 3, dyps::TaskKind::periodic},
        {1, 4, 10, 1, dyps::TaskKind::periodic},
        {2, 2, 8, 2, dyps::TaskKind::periodic},
        {3, 1, 6, 4, dyps::TaskKind::periodic},
    };
    ts.observer_id = 1;
    ts.victim_id = 2;
    return ts;
}

inline dyps::TaskSet pair(dyps::Tick to, dyps::Tick co, dyps::Tick po, dyps::Tick tv, dyps::Tick cv, dyps::Tick pv)
{
    dyps::TaskSet ts;
    ts.tasks = {{0, co, to, po, dyps::TaskKind::periodic}, {1, cv, tv, pv, dyps::TaskKind::periodic}};
    ts.observer_id = 0;
    ts.victim_id = 1;
    return ts;
}

}  // namespace fixtures
