#ifndef SEQIHR_MULTIRISK_HPP
#define SEQIHR_MULTIRISK_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "seqihr/integrator.hpp"
#include "seqihr/model.hpp"

namespace seqihr {

/// Economic and epidemiological inputs of one age group.
struct MRGroupParams {
    std::string id;       ///< short label ("y", "m", "o")
    double n = 0.0;       ///< population share; shares sum to ~1
    double w = 0.0;       ///< per-capita daily production when working
    double lbar = 1.0;    ///< maximum lockdown severity, in [0,1]
    double ifr = 0.0;     ///< target infection fatality ratio
    double kappa = 1.0;   ///< share of recovered allowed to work, in [0,1]
    double delta = 0.0;   ///< remaining work time in days

    /// Common factor applied to d_i and d_h so the group's simulated
    /// infection fatality ratio hits `ifr`; filled by calibrate_group_fatality
    /// (or set directly in tests).
    double death_scale = 1.0;

    /// Total cost of one death in daily-output units,
    /// w/r + chi_daily - (w/r) e^{-r delta}; filled alongside death_scale.
    double chi_hat = 0.0;
};

/// Parameters of the age-stratified model plus the planner's economics.
struct MRParams {
    ModelParams epi;                  ///< shared rates and contact schedule
    std::vector<MRGroupParams> groups;

    double theta = 1.0;  ///< lockdown transmission effectiveness, in [0,1]
    double mixing = 1.0; ///< constant cross-group contact weight (rho)

    double interest_rate = 0.01 / 365.0; ///< daily discount rate
    double chi = 20.0;  ///< death cost in annual representative-worker outputs
    double w_ref = 1.0; ///< representative daily production defining chi

    double seed_e0 = 1e-4; ///< initial exposed mass, split across groups by share

    /// Comparison variant: discount with e^{+rt} instead of e^{-rt}.
    /// Wired to the CLI --strict-paper-discount flag.
    bool discount_positive_exponent = false;

    double total_share() const;
    std::size_t group_index(const std::string& id) const; ///< throws ConfigError

    /// Throws ConfigError unless shares sum to 1 within 1e-2 and all fields
    /// are in range. Shares are accepted as given; call normalize_shares()
    /// for exact unity.
    void validate() const;
    void normalize_shares();
};

/// Per-group compartment masses; the shared clock lives on MRState.
struct GroupState {
    double s = 0.0, e = 0.0, i = 0.0, q = 0.0, h = 0.0, r = 0.0;
    double d = 0.0;
    double n() const { return s + e + i + q + h + r; }
};

struct MRState {
    std::vector<GroupState> groups;
    double t = 0.0;
    double total_population() const;
    double total_deaths() const;
};

/// S_i = (1-e0)*n_i, E_i = e0*n_i, everything else empty.
MRState mr_initial_state(const MRParams& mr, double e0);

/// Piecewise-constant lockdown schedules L_i(t) in [0, lbar_i].
struct LockdownPolicy {
    enum class Kind { uniform, targeted };
    struct Segment {
        double start_day;
        double level;
    };

    Kind kind = Kind::targeted;
    std::vector<std::vector<Segment>> schedules; ///< one schedule per group

    double level_at(std::size_t group, double t) const;

    static LockdownPolicy none(std::size_t n_groups);
    /// One constant level per group (kind targeted), or a single shared
    /// constant level (kind uniform).
    static LockdownPolicy constant(Kind kind, const std::vector<double>& levels);

    void validate(const MRParams& mr) const;

    /// Canonical text form, e.g. "targeted|0.1000,0.0000,1.0000"; used as
    /// the policy id and for lexicographic tie-breaking.
    std::string encode() const;
};

/// Per-group derivatives of the stratified system. Each group follows the
/// single-group equations with its scaled death rates; infection couples
/// the groups through
///   lambda_i = beta(t) (1 - theta L_i) * mixing
///              * sum_j (1 - theta L_j)(I_j + eps_e E_j + eps_q Q_j + eps_h H_j) / N
/// with N the current total population.
std::vector<Derivative> mr_rhs(const MRParams& mr, const LockdownPolicy& policy,
                               const MRState& state);

struct MRTrajectory {
    std::vector<double> times;
    std::vector<MRState> states;
    const MRState& back() const { return states.back(); }
};

MRTrajectory simulate_mr(const MRParams& mr, const LockdownPolicy& policy,
                         const MRState& initial, const IntegrationConfig& config);

/// Employed mass of group i at the state:
///   max(0, 1-mu-L_i) (S+E+I+R) - (gamma_e+sigma_e)E - (gamma_i+d_i^i)I
///   - (1-r_q)Q - (1-r_h)H + kappa_i R,
/// clamped into [0, group population].
double employment(const MRParams& mr, const LockdownPolicy& policy, const MRState& state,
                  std::size_t group);

/// Total death cost coefficient of a group for given discounting inputs.
double death_cost(const MRGroupParams& g, double r, double chi_annual, double w_ref);

/// Present value of social costs over the trajectory horizon (trapezoid):
///   integral e^{-rt} sum_i [ w_i (n_i - EMP_i(t)) + chi_hat_i (d_i^i I_i + d_h^i H_i) ] dt.
double social_cost(const MRParams& mr, const LockdownPolicy& policy,
                   const MRTrajectory& traj, double r, double chi_annual);

struct EconomicOutcome {
    double gdp_loss = 0.0;    ///< fraction of no-pandemic output over [0,T]
    double death_rate = 0.0;  ///< cumulative deaths / initial population
    double social_cost = 0.0;
    std::vector<std::vector<double>> emp_series; ///< [group][grid point]
};

EconomicOutcome economic_outcome(const MRParams& mr, const LockdownPolicy& policy,
                                 const MRTrajectory& traj);

/// Infection fatality ratio of a single-group run of `params` with death
/// rates scaled by `death_scale`: cumulative deaths over cumulative
/// infections once the epidemic has burned out.
double simulated_ifr(const ModelParams& params, double death_scale);

/// Secant solve of simulated_ifr(base, scale) = target_ifr.
double solve_death_scale(const ModelParams& base, double target_ifr);

/// Fills death_scale (secant on a single-group run) and chi_hat for every
/// group. Throws ConvergenceError if a secant solve stalls.
void calibrate_group_fatality(MRParams& mr);

/// Young / middle / old calibration: shares 0.542 / 0.246 / 0.211,
/// production 1 / 1 / 0, lockdown caps 0.7 / 0.7 / 1.0, infection
/// fatality targets 3.15e-4 / 1.32e-3 / 3.0e-3, remaining work 15 years
/// for the working groups and none for the old.
std::vector<MRGroupParams> default_groups();

/// Fully assembled policy-study baseline: default rates, the unmitigated
/// contact-rate counterfactual, the default group table with fatality
/// scaling solved, and the standard epidemic seed.
MRParams default_mr_baseline();

} // namespace seqihr

#endif
