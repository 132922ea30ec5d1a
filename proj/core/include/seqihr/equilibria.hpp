#ifndef SEQIHR_EQUILIBRIA_HPP
#define SEQIHR_EQUILIBRIA_HPP

#include <string>

#include "seqihr/model.hpp"

namespace seqihr {

/**
 * Composite coefficients that express the pandemic steady state in terms
 * of I*:  E* = alpha_e I*, Q* = alpha_q I*, H* = alpha_h I*, and the
 * steady contact pressure L* = alpha_i I*. alpha_s couples S* to the
 * infection balance, alpha_n collects the COVID-death drains, and alpha_r
 * enters the recovered closed form.
 */
struct EquilibriumCoefficients {
    double alpha_e;
    double alpha_s;
    double alpha_i;
    double alpha_q;
    double alpha_h;
    double alpha_r;
    double alpha_n;

    /// Coefficients for a frozen contact rate `beta`.
    /// Requires sigma_e > 0, mu > 0 and all outflow coefficients > 0.
    static EquilibriumCoefficients from(const ModelParams& params, double beta);
};

struct EquilibriumPoint {
    enum class Kind { disease_free, pandemic };
    Kind kind = Kind::disease_free;
    CompartmentState state;
    double residual = 0.0;   ///< max-abs rhs at the point, always measured
    bool admissible = false; ///< all compartments finite and >= 0
};

/// Closed-form disease-free steady state:
///   S0* = pi/M_S, E0*=I0*=Q0*=H0*=0, R0* = nu*pi/(M_R*M_S), N0* = pi/mu.
/// Throws NumericError when mu = 0 (N0* undefined).
EquilibriumPoint disease_free_equilibrium(const ModelParams& params);

/// Closed-form endemic point plus an independently computed numerical root,
/// with their component-wise maximum relative gap.
struct PandemicEquilibriumResult {
    EquilibriumPoint closed_form;
    EquilibriumPoint numerical;
    bool numerical_converged = false; ///< Newton reached step-norm <= 1e-12
    double max_rel_gap = 0.0;         ///< over (S,E,I,Q,H,R), closed form vs numerical
    bool mismatch_warning = false;    ///< max_rel_gap > 1e-4 with both points admissible
    double beta = 0.0;                ///< frozen contact rate used

    /// Human-readable comparison of the two points, component by component.
    std::string divergence_report() const;
};

/// Computes both endemic points with beta frozen at params.beta.at(beta_time).
/// The numerical root (long-run integration endpoint polished by damped
/// Newton) is the authoritative one; the closed form is evaluated as a
/// checked claim and never altered to match.
PandemicEquilibriumResult pandemic_equilibrium(const ModelParams& params,
                                               double beta_time = 0.0);

} // namespace seqihr

#endif
