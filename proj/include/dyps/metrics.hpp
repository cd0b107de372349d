#pragma once

#include "dyps/ratio.hpp"
#include "dyps/task_model.hpp"

namespace dyps {

/// Whether the observer can witness victim arrivals at all under EDF.
/// Requires distinct periods.
bool observable(Tick observer_period, Tick victim_period);

/// Inverse of the number of observer arrivals within LCM(T_o, T_i),
/// i.e. GCD(T_o, T_i) / T_i.
Ratio sigma(Tick observer_period, Tick other_period);

/// Upper bound on the fraction of observer arrivals whose start can be
/// delayed by a single other task with period `other_period` and WCET
/// `other_wcet`: ceil(u_i / sigma) * sigma.
Ratio psi(Tick observer_period, Tick other_period, Tick other_wcet);

/// Fraction of ladder columns the observer's valid execution can touch:
/// min(C_o, T_o - T_v) / GCD(T_o, T_v). Requires T_o > T_v.
Ratio coverage_dyps(Tick observer_wcet, Tick observer_period, Tick victim_period);

/// Coverage ratio without validity clipping: C_o / GCD(T_o, T_v).
Ratio coverage_scheduleak(Tick observer_wcet, Tick observer_period, Tick victim_period);

/// One-sided distance of the reconstructed observer phase to the right of
/// the true one, (phi_hat - phi) mod T_o.
Tick phase_offset(Tick phi_o_hat, Tick phi_o, Tick observer_period);

/// phase_offset / T_o, in [0, 1).
double error_ratio(Tick phi_o_hat, Tick phi_o, Tick observer_period);

/// |eps / (T_v / 2) - 1| with eps = |phi_v_hat - phi_v| (plain absolute
/// difference, not circular distance).
double inference_precision(Tick phi_v_hat, Tick phi_v, Tick victim_period);

}  // namespace dyps
