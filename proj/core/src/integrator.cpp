#include "seqihr/integrator.hpp"

#include <algorithm>
#include <cmath>

namespace seqihr {

double RawTrajectory::component_at(std::size_t k, double t) const {
    auto it = std::lower_bound(times.begin(), times.end(), t);
    if (it == times.end())
        return states.back()[k];
    const std::size_t hi = static_cast<std::size_t>(it - times.begin());
    if (hi == 0 || *it == t)
        return states[hi][k];
    const std::size_t lo = hi - 1;
    const double w = (t - times[lo]) / (times[hi] - times[lo]);
    return (1.0 - w) * states[lo][k] + w * states[hi][k];
}

namespace {

std::vector<double> pack(const CompartmentState& x) {
    return {x.s, x.e, x.i, x.q, x.h, x.r, x.d};
}

CompartmentState unpack(const std::vector<double>& y, double t) {
    CompartmentState x;
    x.s = y[0];
    x.e = y[1];
    x.i = y[2];
    x.q = y[3];
    x.h = y[4];
    x.r = y[5];
    x.d = y[6];
    x.t = t;
    return x;
}

} // namespace

Trajectory integrate(const RhsFn& rhs_fn, const CompartmentState& initial,
                     const ModelParams& params, const IntegrationConfig& config) {
    auto f = [&](double t, const std::vector<double>& y, std::vector<double>& dydt) {
        const Derivative dx = rhs_fn(params, unpack(y, t));
        dydt[0] = dx.ds;
        dydt[1] = dx.de;
        dydt[2] = dx.di;
        dydt[3] = dx.dq;
        dydt[4] = dx.dh;
        dydt[5] = dx.dr;
        dydt[6] = dx.dd;
    };
    RawTrajectory raw = integrate_raw(f, pack(initial), initial.t, config);

    Trajectory traj;
    traj.times = std::move(raw.times);
    traj.states.reserve(traj.times.size());
    for (std::size_t k = 0; k < traj.times.size(); ++k)
        traj.states.push_back(unpack(raw.states[k], traj.times[k]));
    return traj;
}

Trajectory simulate(const ModelParams& params, const CompartmentState& initial,
                    const IntegrationConfig& config) {
    params.validate();
    return integrate([](const ModelParams& p, const CompartmentState& x) { return rhs(p, x); },
                     initial, params, config);
}

double Trajectory::deaths_at(double t) const {
    auto it = std::lower_bound(times.begin(), times.end(), t);
    if (it == times.end())
        return states.back().d;
    const std::size_t hi = static_cast<std::size_t>(it - times.begin());
    if (hi == 0 || *it == t)
        return states[hi].d;
    const std::size_t lo = hi - 1;
    const double w = (t - times[lo]) / (times[hi] - times[lo]);
    return (1.0 - w) * states[lo].d + w * states[hi].d;
}

std::vector<double> daily_deaths(const Trajectory& traj) {
    if (traj.times.size() < 2)
        throw NumericError("daily_deaths: trajectory must cover at least one step");
    const double t0 = traj.times.front();
    const double span = traj.times.back() - t0;
    if (span < 2.0)
        throw NumericError("daily_deaths: trajectory must cover at least 2 days");

    const std::size_t days = static_cast<std::size_t>(std::floor(span + 1e-9));
    std::vector<double> out(days);
    double prev = traj.deaths_at(t0);
    for (std::size_t k = 0; k < days; ++k) {
        const double cur = traj.deaths_at(t0 + static_cast<double>(k + 1));
        out[k] = std::max(0.0, cur - prev);
        prev = cur;
    }
    return out;
}

} // namespace seqihr
