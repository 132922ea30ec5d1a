#ifndef SEQIHR_POLICY_HPP
#define SEQIHR_POLICY_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "seqihr/multirisk.hpp"

namespace seqihr {

/// Enumerable lockdown policy space: per-group level grids (0 to lbar_i in
/// `step` increments) over `intervals` piecewise-constant time intervals.
/// The uniform space shares one schedule across groups, capped at the
/// smallest lbar, and is an exact subset of the targeted space.
struct PolicyGrid {
    LockdownPolicy::Kind kind = LockdownPolicy::Kind::targeted;
    double step = 0.05;
    int intervals = 1;
    std::vector<double> interval_breaks = {0.0}; ///< first must be day 0

    std::vector<LockdownPolicy> enumerate(const MRParams& mr) const;
};

struct FrontierPoint {
    LockdownPolicy policy;
    double gdp_loss = 0.0;
    double death_rate = 0.0;
    double social_cost = 0.0;
    bool dominated = false;
};

/// Integrates the stratified model under the policy with the configured
/// epidemic seed and fills the outcome triple.
FrontierPoint evaluate_policy(const MRParams& mr, const LockdownPolicy& policy,
                              const IntegrationConfig& config = {});

/// Non-dominated subset in (gdp_loss, death_rate): weak dominance in both
/// coordinates, strict in at least one. Exact ties on both coordinates keep
/// the lexicographically smallest policy encoding. Result is sorted by
/// gdp_loss ascending (death_rate then strictly decreasing).
std::vector<FrontierPoint> pareto_front(const std::vector<FrontierPoint>& points);

struct SweepResult {
    std::vector<FrontierPoint> all;      ///< canonical enumeration order
    std::vector<FrontierPoint> frontier; ///< non-dominated, gdp ascending
    std::vector<std::pair<std::string, std::string>> failures; ///< (policy id, error)

    /// Frontier point with minimum gdp_loss (the GDP-maximizing outcome).
    const FrontierPoint& gdp_max() const;

    /// Achievable death-rate bracket {lower, upper} at a gdp_loss budget:
    /// upper is the best frontier point within budget, lower the next
    /// frontier point beyond it.
    std::pair<double, double> death_rate_bracket(double gdp_budget) const;
};

/// Evaluates every grid policy (on `workers` threads; result bytes are
/// independent of the worker count) and extracts the frontier. Failed
/// evaluations are reported and skipped.
SweepResult frontier_sweep(const MRParams& mr, const PolicyGrid& grid, int workers = 1,
                           const IntegrationConfig& config = {});

struct OptimalPolicyResult {
    FrontierPoint point;
    bool converged = false;
    int evaluations = 0;
};

/// Minimizes social cost at the given chi over the targeted grid, then
/// refines continuously (simplex search inside the level box) from the best
/// grid point. Non-convergence returns the best point found with
/// converged=false.
OptimalPolicyResult optimal_policy(const MRParams& mr, double chi,
                                   const PolicyGrid& grid = {}, std::uint64_t seed = 0,
                                   const IntegrationConfig& config = {});

/// Canonical frontier CSV:
/// kind,L_<g1>,...,L_<gk>,gdp_loss,death_rate,social_cost,on_frontier
std::string frontier_csv(const MRParams& mr, const SweepResult& sweep);

/// Text block naming the GDP-max point and the death-rate bracket at the
/// gdp_loss budget (one section per sweep given).
std::string frontier_summary(const MRParams& mr,
                             const std::vector<std::pair<std::string, const SweepResult*>>& sweeps,
                             double gdp_budget);

} // namespace seqihr

#endif
