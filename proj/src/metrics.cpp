#include "dyps/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dyps {

bool observable(Tick observer_period, Tick victim_period)
{
    if (observer_period == victim_period)
        throw std::invalid_argument("observable: periods must be distinct");
    return observer_period > victim_period;
}

Ratio sigma(Tick observer_period, Tick other_period)
{
    return Ratio(gcd_pair(observer_period, other_period), other_period);
}

Ratio psi(Tick observer_period, Tick other_period, Tick other_wcet)
{
    if (other_wcet < 1 || other_wcet > other_period)
        throw std::invalid_argument("psi: wcet must lie in [1, period]");
    Tick g = gcd_pair(observer_period, other_period);
    Tick steps = (other_wcet + g - 1) / g;
    return Ratio(steps * g, other_period);
}

Ratio coverage_dyps(Tick observer_wcet, Tick observer_period, Tick victim_period)
{
    if (observer_period <= victim_period)
        throw std::invalid_argument("coverage_dyps: observer period must exceed victim period");
    Tick valid = std::min(observer_wcet, observer_period - victim_period);
    return Ratio(valid, gcd_pair(observer_period, victim_period));
}

Ratio coverage_scheduleak(Tick observer_wcet, Tick observer_period, Tick victim_period)
{
    return Ratio(observer_wcet, gcd_pair(observer_period, victim_period));
}

Tick phase_offset(Tick phi_o_hat, Tick phi_o, Tick observer_period)
{
    return floor_mod(phi_o_hat - phi_o, observer_period);
}

double error_ratio(Tick phi_o_hat, Tick phi_o, Tick observer_period)
{
    return static_cast<double>(phase_offset(phi_o_hat, phi_o, observer_period))
           / static_cast<double>(observer_period);
}

double inference_precision(Tick phi_v_hat, Tick phi_v, Tick victim_period)
{
    Tick eps = phi_v_hat > phi_v ? phi_v_hat - phi_v : phi_v - phi_v_hat;
    // |2 eps / T_v - 1| == |2 eps - T_v| / T_v, exact in the numerator.
    Tick num = 2 * eps - victim_period;
    return static_cast<double>(num < 0 ? -num : num) / static_cast<double>(victim_period);
}

}  // namespace dyps
