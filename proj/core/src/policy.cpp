#include "seqihr/policy.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include "seqihr/errors.hpp"
#include "seqihr/nelder_mead.hpp"

namespace seqihr {

namespace {

std::vector<double> level_set(double lbar, double step) {
    std::vector<double> levels;
    for (int k = 0;; ++k) {
        const double v = k * step;
        if (v > lbar + 1e-9)
            break;
        levels.push_back(std::min(v, lbar));
    }
    if (levels.empty() || std::abs(levels.back() - lbar) > 1e-9)
        levels.push_back(lbar);
    return levels;
}

LockdownPolicy from_interval_levels(LockdownPolicy::Kind kind,
                                    const std::vector<double>& breaks,
                                    const std::vector<std::vector<double>>& levels) {
    LockdownPolicy p;
    p.kind = kind;
    for (const auto& group_levels : levels) {
        std::vector<LockdownPolicy::Segment> sched;
        for (std::size_t s = 0; s < breaks.size(); ++s)
            sched.push_back({breaks[s], group_levels[s]});
        p.schedules.push_back(std::move(sched));
    }
    return p;
}

} // namespace

std::vector<LockdownPolicy> PolicyGrid::enumerate(const MRParams& mr) const {
    if (!(step > 0.0))
        throw ConfigError("grid step must be positive");
    if (intervals < 1)
        throw ConfigError("grid needs at least one interval");
    if (static_cast<int>(interval_breaks.size()) != intervals || interval_breaks.front() != 0.0)
        throw ConfigError("interval_breaks must list one start per interval, first at day 0");

    const std::size_t n_groups = mr.groups.size();
    const bool uniform = kind == LockdownPolicy::Kind::uniform;

    // Axes: one per (group, interval) for targeted, one per interval shared
    // across groups for uniform.
    std::vector<std::vector<double>> axes;
    if (uniform) {
        double shared_cap = 1.0;
        for (const auto& g : mr.groups)
            shared_cap = std::min(shared_cap, g.lbar);
        for (int s = 0; s < intervals; ++s)
            axes.push_back(level_set(shared_cap, step));
    } else {
        for (const auto& g : mr.groups)
            for (int s = 0; s < intervals; ++s)
                axes.push_back(level_set(g.lbar, step));
    }

    double size_estimate = 1.0;
    for (const auto& axis : axes)
        size_estimate *= static_cast<double>(axis.size());
    if (size_estimate > 2e6)
        throw ConfigError("policy grid would enumerate " + std::to_string(size_estimate) +
                          " policies; refine through the continuous search instead");

    std::vector<LockdownPolicy> out;
    out.reserve(static_cast<std::size_t>(size_estimate));
    std::vector<std::size_t> idx(axes.size(), 0);
    while (true) {
        std::vector<std::vector<double>> levels(n_groups, std::vector<double>(intervals));
        for (std::size_t g = 0; g < n_groups; ++g)
            for (int s = 0; s < intervals; ++s)
                levels[g][s] = uniform ? axes[s][idx[s]]
                                       : axes[g * intervals + s][idx[g * intervals + s]];
        out.push_back(from_interval_levels(kind, interval_breaks, levels));

        std::size_t axis = 0;
        while (axis < axes.size() && ++idx[axis] == axes[axis].size()) {
            idx[axis] = 0;
            ++axis;
        }
        if (axis == axes.size())
            break;
    }
    return out;
}

FrontierPoint evaluate_policy(const MRParams& mr, const LockdownPolicy& policy,
                              const IntegrationConfig& config) {
    const MRTrajectory traj = simulate_mr(mr, policy, mr_initial_state(mr, mr.seed_e0), config);
    const EconomicOutcome outcome = economic_outcome(mr, policy, traj);
    FrontierPoint pt;
    pt.policy = policy;
    pt.gdp_loss = outcome.gdp_loss;
    pt.death_rate = outcome.death_rate;
    pt.social_cost = outcome.social_cost;
    return pt;
}

std::vector<FrontierPoint> pareto_front(const std::vector<FrontierPoint>& points) {
    if (points.empty())
        throw ConfigError("pareto_front: no points");
    std::vector<std::size_t> order(points.size());
    for (std::size_t k = 0; k < order.size(); ++k)
        order[k] = k;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (points[a].gdp_loss != points[b].gdp_loss)
            return points[a].gdp_loss < points[b].gdp_loss;
        if (points[a].death_rate != points[b].death_rate)
            return points[a].death_rate < points[b].death_rate;
        return points[a].policy.encode() < points[b].policy.encode();
    });

    std::vector<FrontierPoint> front;
    double best_death = std::numeric_limits<double>::infinity();
    for (std::size_t k : order) {
        const auto& p = points[k];
        if (!front.empty() && p.gdp_loss == front.back().gdp_loss &&
            p.death_rate == front.back().death_rate)
            continue; // tie on both coordinates: keep the first (smallest encoding)
        if (p.death_rate < best_death) {
            front.push_back(p);
            front.back().dominated = false;
            best_death = p.death_rate;
        }
    }
    return front;
}

const FrontierPoint& SweepResult::gdp_max() const {
    if (frontier.empty())
        throw NumericError("sweep has an empty frontier");
    return frontier.front(); // sorted by gdp_loss ascending
}

std::pair<double, double> SweepResult::death_rate_bracket(double gdp_budget) const {
    if (frontier.empty())
        throw NumericError("sweep has an empty frontier");
    // frontier is gdp-ascending with strictly decreasing death rate
    double upper = std::numeric_limits<double>::quiet_NaN();
    double lower = std::numeric_limits<double>::quiet_NaN();
    for (const auto& p : frontier) {
        if (p.gdp_loss <= gdp_budget)
            upper = p.death_rate; // best achieved within budget
        else {
            lower = p.death_rate; // next point just beyond the budget
            break;
        }
    }
    if (std::isnan(upper))
        upper = frontier.front().death_rate;
    if (std::isnan(lower))
        lower = frontier.back().death_rate;
    return {lower, upper};
}

SweepResult frontier_sweep(const MRParams& mr, const PolicyGrid& grid, int workers,
                           const IntegrationConfig& config) {
    const std::vector<LockdownPolicy> policies = grid.enumerate(mr);
    const std::size_t n = policies.size();

    std::vector<FrontierPoint> results(n);
    std::vector<std::string> errors(n);
    std::atomic<std::size_t> next{0};

    auto work = [&]() {
        while (true) {
            const std::size_t k = next.fetch_add(1);
            if (k >= n)
                return;
            try {
                results[k] = evaluate_policy(mr, policies[k], config);
            } catch (const std::exception& ex) {
                results[k].policy = policies[k];
                errors[k] = ex.what();
            }
        }
    };

    const int n_workers = std::max(1, std::min<int>(workers, static_cast<int>(n)));
    if (n_workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_workers));
        for (int t = 0; t < n_workers; ++t)
            pool.emplace_back(work);
        for (auto& t : pool)
            t.join();
    }

    SweepResult sweep;
    for (std::size_t k = 0; k < n; ++k) {
        if (!errors[k].empty()) {
            sweep.failures.emplace_back(policies[k].encode(), errors[k]);
            continue;
        }
        sweep.all.push_back(std::move(results[k]));
    }
    if (sweep.all.empty())
        throw NumericError("frontier sweep: every policy evaluation failed");

    sweep.frontier = pareto_front(sweep.all);
    // flag dominated points in the full listing
    for (auto& p : sweep.all) {
        p.dominated = true;
        for (const auto& f : sweep.frontier) {
            if (p.gdp_loss == f.gdp_loss && p.death_rate == f.death_rate &&
                p.policy.encode() == f.policy.encode()) {
                p.dominated = false;
                break;
            }
        }
    }
    return sweep;
}

OptimalPolicyResult optimal_policy(const MRParams& mr, double chi, const PolicyGrid& grid,
                                   std::uint64_t seed, const IntegrationConfig& config) {
    MRParams params = mr;
    params.chi = chi;
    for (auto& g : params.groups)
        g.chi_hat = death_cost(g, params.interest_rate, chi, params.w_ref);

    PolicyGrid targeted = grid;
    targeted.kind = LockdownPolicy::Kind::targeted;

    const std::vector<LockdownPolicy> policies = targeted.enumerate(params);
    OptimalPolicyResult out;
    double best_cost = std::numeric_limits<double>::infinity();
    LockdownPolicy best_policy = policies.front();
    for (const auto& policy : policies) {
        const FrontierPoint pt = evaluate_policy(params, policy, config);
        ++out.evaluations;
        if (pt.social_cost < best_cost) {
            best_cost = pt.social_cost;
            best_policy = policy;
            out.point = pt;
        }
    }

    // Continuous refinement inside the level box from the best grid point.
    const std::size_t n_groups = params.groups.size();
    const int intervals = targeted.intervals;
    std::vector<double> x0;
    for (std::size_t g = 0; g < n_groups; ++g)
        for (int s = 0; s < intervals; ++s)
            x0.push_back(best_policy.schedules[g][s].level);

    auto clamp_levels = [&](const std::vector<double>& x) {
        std::vector<std::vector<double>> levels(n_groups, std::vector<double>(intervals));
        for (std::size_t g = 0; g < n_groups; ++g)
            for (int s = 0; s < intervals; ++s)
                levels[g][s] = std::clamp(x[g * intervals + s], 0.0, params.groups[g].lbar);
        return from_interval_levels(LockdownPolicy::Kind::targeted,
                                    targeted.interval_breaks, levels);
    };

    int refine_evals = 0;
    auto objective = [&](const std::vector<double>& x) {
        ++refine_evals;
        return evaluate_policy(params, clamp_levels(x), config).social_cost;
    };

    NelderMeadOptions nm;
    nm.simplex_tol = 1e-6;
    nm.max_evals = 300;
    nm.restarts = 2;
    nm.seed = seed;
    nm.initial_step.assign(x0.size(), targeted.step);
    const NelderMeadResult r = nelder_mead(objective, x0, nm);
    out.evaluations += refine_evals;
    out.converged = r.converged;
    if (r.fx < best_cost)
        out.point = evaluate_policy(params, clamp_levels(r.x), config);
    return out;
}

namespace {

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

} // namespace

std::string frontier_csv(const MRParams& mr, const SweepResult& sweep) {
    std::string out = "kind";
    for (const auto& g : mr.groups)
        out += ",L_" + g.id;
    out += ",gdp_loss,death_rate,social_cost,on_frontier\n";

    for (const auto& p : sweep.all) {
        out += p.policy.kind == LockdownPolicy::Kind::uniform ? "uniform" : "targeted";
        for (std::size_t g = 0; g < mr.groups.size(); ++g) {
            out += ",";
            for (std::size_t s = 0; s < p.policy.schedules[g].size(); ++s) {
                if (s)
                    out += ";";
                out += format_value(p.policy.schedules[g][s].level);
            }
        }
        out += "," + format_value(p.gdp_loss);
        out += "," + format_value(p.death_rate);
        out += "," + format_value(p.social_cost);
        out += p.dominated ? ",0\n" : ",1\n";
    }
    return out;
}

std::string frontier_summary(const MRParams& mr,
                             const std::vector<std::pair<std::string, const SweepResult*>>& sweeps,
                             double gdp_budget) {
    (void)mr;
    std::string out;
    char line[256];
    for (const auto& [name, sweep] : sweeps) {
        const FrontierPoint& gm = sweep->gdp_max();
        std::snprintf(line, sizeof(line),
                      "%s frontier: %zu points, %zu on frontier\n", name.c_str(),
                      sweep->all.size(), sweep->frontier.size());
        out += line;
        std::snprintf(line, sizeof(line),
                      "  GDP-max point: policy %s  gdp_loss=%.4f%%  death_rate=%.4f%%\n",
                      gm.policy.encode().c_str(), 100.0 * gm.gdp_loss,
                      100.0 * gm.death_rate);
        out += line;
        const auto [lo, hi] = sweep->death_rate_bracket(gdp_budget);
        std::snprintf(line, sizeof(line),
                      "  at gdp_loss budget %.2f%%: death_rate in [%.4f%%, %.4f%%]\n",
                      100.0 * gdp_budget, 100.0 * lo, 100.0 * hi);
        out += line;
    }
    return out;
}

} // namespace seqihr
