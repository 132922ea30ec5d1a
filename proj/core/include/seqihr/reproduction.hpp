#ifndef SEQIHR_REPRODUCTION_HPP
#define SEQIHR_REPRODUCTION_HPP

#include <array>

#include "seqihr/model.hpp"

namespace seqihr {

/// Dense 6x6 matrix over the compartment ordering (S, E, I, Q, H, R).
using Matrix6 = std::array<std::array<double, 6>, 6>;

/// Analytic Jacobian of the model rhs with respect to (S,E,I,Q,H,R),
/// beta resolved at state.t. Throws NumericError when N = 0.
Matrix6 jacobian(const ModelParams& params, const CompartmentState& state);

/// Control reproduction number at the given state:
///
///   R_C = (S/N) * (mu*a_I*N + a_S*L)
///         / (mu*a_S*N + mu*a_S*L/M_S
///            + (L*S/N)*(r_I + r_H*a_H + mu*(1 + a_E + a_Q + a_H)))
///
/// with L the force of infection at the state. At the disease-free point
/// (L=0) this reduces to (S/N)*(a_I/a_S), the basic reproduction number.
/// Throws NumericError if the denominator is not positive.
double control_reproduction_number(const ModelParams& params, const CompartmentState& state);

/// Basic reproduction number: R_C evaluated at the disease-free equilibrium.
double basic_reproduction_number(const ModelParams& params);

/// Behavioral threshold check, independent of any reproduction formula:
/// seeds E(0)=1e-8 at the disease-free point (nu=0, inflow balancing mu so
/// N stays 1), integrates 60 days, and returns the log-linear growth rate
/// of E+I fitted over days 30..60.
double threshold_growth_rate(const ModelParams& params);

struct ReproductionReport {
    double r_c = 0.0;         ///< at the supplied state
    double r_0 = 0.0;         ///< at the disease-free equilibrium
    double growth_rate = 0.0; ///< per-day seed growth rate (simulation)
    bool threshold_consistent = false; ///< sign(r_0 - 1) matches sign(growth_rate)
};

ReproductionReport reproduction_report(const ModelParams& params,
                                       const CompartmentState& state);

} // namespace seqihr

#endif
