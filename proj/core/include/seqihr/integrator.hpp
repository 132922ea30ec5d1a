#ifndef SEQIHR_INTEGRATOR_HPP
#define SEQIHR_INTEGRATOR_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "seqihr/errors.hpp"
#include "seqihr/model.hpp"

namespace seqihr {

struct IntegrationConfig {
    double dt = 0.25;            ///< step in days, in (0, 1]
    double horizon = 365.0;      ///< days
    bool clamp_negatives = true; ///< zero out roundoff-negative compartments

    void validate() const {
        if (!(dt > 0.0 && dt <= 1.0))
            throw ConfigError("dt must lie in (0, 1]");
        if (!(horizon > 0.0))
            throw ConfigError("horizon must be positive");
    }
};

/// Roundoff band for the negative clamp: components in (-kClampTol, 0) are
/// set to zero after a step; anything below -kClampTol means the step size
/// is too large for the dynamics.
inline constexpr double kClampTol = 1e-12;

/// Dense output of a fixed-step integration over a flat state vector.
struct RawTrajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> states;

    /// State component k, linearly interpolated at time t (exact on grid).
    double component_at(std::size_t k, double t) const;
};

/// Classical fixed-step RK4 on dy/dt = f(t, y). Grid is t0 + j*dt with a
/// shortened final step so the last grid point lands exactly on
/// t0 + horizon when horizon is not a multiple of dt.
///
/// After each step every component in (-kClampTol, 0) is clamped to 0 when
/// clamp_negatives is set; a component below -kClampTol raises NumericError
/// (retry with a smaller dt), as does any non-finite component.
template <class Rhs>
RawTrajectory integrate_raw(Rhs&& f, std::vector<double> y0, double t0,
                            const IntegrationConfig& config) {
    config.validate();

    const std::size_t dim = y0.size();
    const double n_exact = config.horizon / config.dt;
    std::size_t n_steps = static_cast<std::size_t>(std::ceil(n_exact - 1e-9));
    if (n_steps == 0)
        n_steps = 1;

    RawTrajectory out;
    out.times.reserve(n_steps + 1);
    out.states.reserve(n_steps + 1);
    out.times.push_back(t0);
    out.states.push_back(y0);

    std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
    std::vector<double> y = std::move(y0);

    for (std::size_t step = 0; step < n_steps; ++step) {
        const double t = t0 + static_cast<double>(step) * config.dt;
        const double t_next =
            (step + 1 == n_steps) ? t0 + config.horizon
                                  : t0 + static_cast<double>(step + 1) * config.dt;
        const double h = t_next - t;

        f(t, y, k1);
        for (std::size_t j = 0; j < dim; ++j)
            tmp[j] = y[j] + 0.5 * h * k1[j];
        f(t + 0.5 * h, tmp, k2);
        for (std::size_t j = 0; j < dim; ++j)
            tmp[j] = y[j] + 0.5 * h * k2[j];
        f(t + 0.5 * h, tmp, k3);
        for (std::size_t j = 0; j < dim; ++j)
            tmp[j] = y[j] + h * k3[j];
        f(t_next, tmp, k4);

        for (std::size_t j = 0; j < dim; ++j) {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
            if (!std::isfinite(y[j]))
                throw NumericError("integration produced a non-finite state at t=" +
                                   std::to_string(t_next));
            if (y[j] < 0.0) {
                if (y[j] > -kClampTol) {
                    if (config.clamp_negatives)
                        y[j] = 0.0;
                } else {
                    throw NumericError("component " + std::to_string(j) + " fell to " +
                                       std::to_string(y[j]) + " at t=" + std::to_string(t_next) +
                                       "; reduce dt");
                }
            }
        }

        out.times.push_back(t_next);
        out.states.push_back(y);
    }
    return out;
}

/// Time series of the single-group model on the integration grid.
struct Trajectory {
    std::vector<double> times;
    std::vector<CompartmentState> states;

    const CompartmentState& front() const { return states.front(); }
    const CompartmentState& back() const { return states.back(); }

    /// Cumulative deaths at day t (linear interpolation off-grid).
    double deaths_at(double t) const;
};

/// Per-calendar-day increments of the death accumulator:
/// entry k is D(day k+1) - D(day k), for k = 0 .. floor(horizon)-1.
std::vector<double> daily_deaths(const Trajectory& traj);

using RhsFn = std::function<Derivative(const ModelParams&, const CompartmentState&)>;

/// Integrates a SEQIHR-shaped right-hand side from `initial`.
Trajectory integrate(const RhsFn& rhs_fn, const CompartmentState& initial,
                     const ModelParams& params, const IntegrationConfig& config);

/// Convenience wrapper using the standard model rhs.
Trajectory simulate(const ModelParams& params, const CompartmentState& initial,
                    const IntegrationConfig& config);

} // namespace seqihr

#endif
