#ifndef SEQIHR_MODEL_HPP
#define SEQIHR_MODEL_HPP

#include <vector>

namespace seqihr {

/// Piecewise-constant contact-rate schedule beta(t).
/// Segments are (start_day, value) pairs; the first segment starts at day 0
/// and segment starts are strictly increasing.
struct BetaSchedule {
    struct Segment {
        double start_day;
        double value;
    };
    std::vector<Segment> segments;

    BetaSchedule() = default;
    explicit BetaSchedule(double constant_value) : segments{{0.0, constant_value}} {}
    BetaSchedule(std::initializer_list<Segment> segs) : segments(segs) {}

    /// Value of beta at time t (days). t before day 0 resolves to segment 0.
    double at(double t) const;

    void validate() const;
};

/**
 * Scalar epidemiological rates of the SEQIHR model, all per day.
 *
 * Compartments: susceptible S, exposed E, infected-symptomatic I,
 * quarantined Q, hospitalized/isolated H, recovered R, plus the cumulative
 * COVID-death accumulator D.
 */
struct ModelParams {
    double pi_birth = 0.0; ///< natural inflow (births), population mass / day
    double mu = 0.0;       ///< natural death rate
    double nu = 0.0;       ///< vaccination rate of susceptibles

    BetaSchedule beta{0.0}; ///< effective contact rate schedule

    double eps_e = 0.0; ///< contact modifier of exposed, in [0,1]
    double eps_q = 0.0; ///< contact modifier of quarantined, in [0,1]
    double eps_h = 0.0; ///< contact modifier of hospitalized, in [0,1]

    double s_r = 0.0; ///< return-to-susceptible rate of recovered

    double gamma_e = 0.0; ///< quarantine rate of exposed
    double gamma_i = 0.0; ///< isolation (hospitalization) rate of infected

    double r_i = 0.0; ///< recovery rate of infected
    double r_h = 0.0; ///< recovery rate of hospitalized
    double r_q = 0.0; ///< recovery rate of quarantined

    double sigma_e = 0.0; ///< symptom-development rate of exposed
    double sigma_q = 0.0; ///< hospitalization rate of quarantined

    double d_i = 0.0; ///< COVID death rate of infected
    double d_h = 0.0; ///< COVID death rate of hospitalized

    /// When true, the quarantined-recovery inflow r_q*Q into R is dropped,
    /// reproducing the variant form of the recovered equation. Population
    /// mass then leaks at rate r_q*Q. Wired to the CLI --strict-paper-eq6
    /// comparison flag; keep false for mass-conserving runs.
    bool omit_rq_recovery = false;

    /// Throws ConfigError if any rate is negative, a modifier leaves [0,1],
    /// or the beta schedule is malformed.
    void validate() const;
};

/// State of the compartments at time t. Masses share the unit of N
/// (default normalized so that N(0) = 1). n() is always derived.
struct CompartmentState {
    double s = 0.0;
    double e = 0.0;
    double i = 0.0;
    double q = 0.0;
    double h = 0.0;
    double r = 0.0;
    double d = 0.0; ///< cumulative COVID deaths
    double t = 0.0; ///< time in days

    double n() const { return s + e + i + q + h + r; }
};

/// Aggregate per-day outflow rates of each compartment.
struct OutflowCoefficients {
    double m_s, m_e, m_i, m_q, m_h, m_r;

    static OutflowCoefficients from(const ModelParams& p) {
        return {p.nu + p.mu,
                p.gamma_e + p.sigma_e + p.mu,
                p.gamma_i + p.d_i + p.r_i + p.mu,
                p.r_q + p.sigma_q + p.mu,
                p.d_h + p.r_h + p.mu,
                p.mu + p.s_r};
    }
};

/// Time derivative of (S,E,I,Q,H,R,D), per day.
struct Derivative {
    double ds = 0.0;
    double de = 0.0;
    double di = 0.0;
    double dq = 0.0;
    double dh = 0.0;
    double dr = 0.0;
    double dd = 0.0;
};

/// L = beta(t) * (I + eps_e*E + eps_q*Q + eps_h*H).
/// This is the aggregate contact pressure; the per-susceptible infection
/// rate is L/N.
double force_of_infection(const ModelParams& params, const CompartmentState& state);

/// Right-hand side of the SEQIHR system. Throws NumericError when N = 0.
Derivative rhs(const ModelParams& params, const CompartmentState& state);

/// Residual of the population balance
///   (dS+dE+dI+dQ+dH+dR) - (pi_birth - mu*N - d_i*I - d_h*H).
/// Zero (to roundoff) whenever the r_q*Q recovery inflow is active.
double mass_balance(const ModelParams& params, const CompartmentState& state,
                    const Derivative& deriv);

} // namespace seqihr

#endif
