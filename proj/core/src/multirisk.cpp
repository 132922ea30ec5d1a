#include "seqihr/multirisk.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "seqihr/calibration.hpp"
#include "seqihr/errors.hpp"

namespace seqihr {

double MRParams::total_share() const {
    double s = 0.0;
    for (const auto& g : groups)
        s += g.n;
    return s;
}

std::size_t MRParams::group_index(const std::string& id) const {
    for (std::size_t k = 0; k < groups.size(); ++k)
        if (groups[k].id == id)
            return k;
    throw ConfigError("unknown group id '" + id + "'");
}

void MRParams::validate() const {
    epi.validate();
    if (groups.empty())
        throw ConfigError("multirisk: no groups defined");
    for (const auto& g : groups) {
        if (g.id.empty())
            throw ConfigError("multirisk: group without id");
        if (!(g.n > 0.0))
            throw ConfigError("group " + g.id + ": share must be positive");
        if (!(g.w >= 0.0))
            throw ConfigError("group " + g.id + ": production must be >= 0");
        if (!(g.lbar >= 0.0 && g.lbar <= 1.0))
            throw ConfigError("group " + g.id + ": lbar must lie in [0,1]");
        if (!(g.kappa >= 0.0 && g.kappa <= 1.0))
            throw ConfigError("group " + g.id + ": kappa must lie in [0,1]");
        if (!(g.ifr >= 0.0 && g.ifr < 1.0))
            throw ConfigError("group " + g.id + ": ifr must lie in [0,1)");
        if (!(g.delta >= 0.0))
            throw ConfigError("group " + g.id + ": delta must be >= 0");
        if (!(g.death_scale >= 0.0))
            throw ConfigError("group " + g.id + ": death_scale must be >= 0");
    }
    const double total = total_share();
    if (std::abs(total - 1.0) > 1e-2)
        throw ConfigError("group shares sum to " + std::to_string(total) +
                          ", expected 1 within 1e-2");
    if (!(theta >= 0.0 && theta <= 1.0))
        throw ConfigError("theta must lie in [0,1]");
    if (!(mixing >= 0.0))
        throw ConfigError("mixing must be >= 0");
    if (!(interest_rate > 0.0))
        throw ConfigError("interest_rate must be positive");
    if (!(chi >= 0.0))
        throw ConfigError("chi must be >= 0");
    if (!(seed_e0 >= 0.0 && seed_e0 < 1.0))
        throw ConfigError("seed_e0 must lie in [0,1)");
}

void MRParams::normalize_shares() {
    const double total = total_share();
    if (!(total > 0.0))
        throw ConfigError("cannot normalize zero total share");
    for (auto& g : groups)
        g.n /= total;
}

double MRState::total_population() const {
    double s = 0.0;
    for (const auto& g : groups)
        s += g.n();
    return s;
}

double MRState::total_deaths() const {
    double s = 0.0;
    for (const auto& g : groups)
        s += g.d;
    return s;
}

MRState mr_initial_state(const MRParams& mr, double e0) {
    MRState x;
    x.groups.resize(mr.groups.size());
    for (std::size_t k = 0; k < mr.groups.size(); ++k) {
        x.groups[k].s = (1.0 - e0) * mr.groups[k].n;
        x.groups[k].e = e0 * mr.groups[k].n;
    }
    x.t = 0.0;
    return x;
}

double LockdownPolicy::level_at(std::size_t group, double t) const {
    const auto& sched = schedules.at(group);
    if (sched.empty())
        return 0.0;
    double level = sched.front().level;
    for (const auto& seg : sched) {
        if (seg.start_day <= t)
            level = seg.level;
        else
            break;
    }
    return level;
}

LockdownPolicy LockdownPolicy::none(std::size_t n_groups) {
    LockdownPolicy p;
    p.kind = Kind::targeted;
    p.schedules.assign(n_groups, {{0.0, 0.0}});
    return p;
}

LockdownPolicy LockdownPolicy::constant(Kind kind, const std::vector<double>& levels) {
    LockdownPolicy p;
    p.kind = kind;
    for (double level : levels)
        p.schedules.push_back({{0.0, level}});
    return p;
}

void LockdownPolicy::validate(const MRParams& mr) const {
    if (schedules.size() != mr.groups.size())
        throw ConfigError("policy has " + std::to_string(schedules.size()) +
                          " schedules for " + std::to_string(mr.groups.size()) + " groups");
    for (std::size_t k = 0; k < schedules.size(); ++k) {
        if (schedules[k].empty())
            throw ConfigError("policy: empty schedule for group " + mr.groups[k].id);
        double prev = -1.0;
        for (const auto& seg : schedules[k]) {
            if (seg.start_day <= prev)
                throw ConfigError("policy: segment starts must increase for group " +
                                  mr.groups[k].id);
            prev = seg.start_day;
            if (!(seg.level >= 0.0 && seg.level <= mr.groups[k].lbar + 1e-12))
                throw ConfigError("policy: level " + std::to_string(seg.level) +
                                  " outside [0, lbar] for group " + mr.groups[k].id);
        }
    }
}

std::string LockdownPolicy::encode() const {
    std::string out = kind == Kind::uniform ? "uniform|" : "targeted|";
    char buf[64];
    for (std::size_t k = 0; k < schedules.size(); ++k) {
        if (k)
            out += ",";
        for (std::size_t s = 0; s < schedules[k].size(); ++s) {
            if (s)
                out += ";";
            std::snprintf(buf, sizeof(buf), "%g:%.4f", schedules[k][s].start_day,
                          schedules[k][s].level);
            out += buf;
        }
    }
    return out;
}

namespace {

// Per-group effective rates with the fatality scaling applied.
struct GroupRates {
    double d_i, d_h;
    double m_i, m_h;
};

std::vector<GroupRates> group_rates(const MRParams& mr) {
    std::vector<GroupRates> out(mr.groups.size());
    for (std::size_t k = 0; k < mr.groups.size(); ++k) {
        const double c = mr.groups[k].death_scale;
        out[k].d_i = c * mr.epi.d_i;
        out[k].d_h = c * mr.epi.d_h;
        out[k].m_i = mr.epi.gamma_i + out[k].d_i + mr.epi.r_i + mr.epi.mu;
        out[k].m_h = out[k].d_h + mr.epi.r_h + mr.epi.mu;
    }
    return out;
}

} // namespace

std::vector<Derivative> mr_rhs(const MRParams& mr, const LockdownPolicy& policy,
                               const MRState& x) {
    const std::size_t n_groups = mr.groups.size();
    const double n_total = x.total_population();
    if (n_total == 0.0)
        throw NumericError("mr_rhs: total population is zero");

    const ModelParams& p = mr.epi;
    const double beta = p.beta.at(x.t);
    const auto rates = group_rates(mr);
    const double m_s = p.nu + p.mu;
    const double m_e = p.gamma_e + p.sigma_e + p.mu;
    const double m_q = p.r_q + p.sigma_q + p.mu;
    const double m_r = p.mu + p.s_r;

    double pressure = 0.0;
    for (std::size_t j = 0; j < n_groups; ++j) {
        const double lj = policy.level_at(j, x.t);
        const auto& g = x.groups[j];
        pressure += (1.0 - mr.theta * lj) *
                    (g.i + p.eps_e * g.e + p.eps_q * g.q + p.eps_h * g.h);
    }
    pressure *= mr.mixing / n_total;

    std::vector<Derivative> out(n_groups);
    for (std::size_t k = 0; k < n_groups; ++k) {
        const auto& g = x.groups[k];
        const double lk = policy.level_at(k, x.t);
        const double lambda = beta * (1.0 - mr.theta * lk) * pressure;
        const double infection = g.s * lambda;
        const double inflow = p.pi_birth * mr.groups[k].n;

        Derivative& dx = out[k];
        dx.ds = inflow - infection - m_s * g.s + p.s_r * g.r;
        dx.de = infection - m_e * g.e;
        dx.di = p.sigma_e * g.e - rates[k].m_i * g.i;
        dx.dq = p.gamma_e * g.e - m_q * g.q;
        dx.dh = p.gamma_i * g.i + p.sigma_q * g.q - rates[k].m_h * g.h;
        dx.dr = p.nu * g.s + p.r_i * g.i + p.r_h * g.h - m_r * g.r;
        if (!p.omit_rq_recovery)
            dx.dr += p.r_q * g.q;
        dx.dd = rates[k].d_i * g.i + rates[k].d_h * g.h;
    }
    return out;
}

MRTrajectory simulate_mr(const MRParams& mr, const LockdownPolicy& policy,
                         const MRState& initial, const IntegrationConfig& config) {
    mr.validate();
    policy.validate(mr);
    const std::size_t n_groups = mr.groups.size();

    std::vector<double> y0(7 * n_groups);
    for (std::size_t k = 0; k < n_groups; ++k) {
        const auto& g = initial.groups.at(k);
        double* y = &y0[7 * k];
        y[0] = g.s;
        y[1] = g.e;
        y[2] = g.i;
        y[3] = g.q;
        y[4] = g.h;
        y[5] = g.r;
        y[6] = g.d;
    }

    MRState scratch;
    scratch.groups.resize(n_groups);
    auto f = [&](double t, const std::vector<double>& y, std::vector<double>& dydt) {
        scratch.t = t;
        for (std::size_t k = 0; k < n_groups; ++k) {
            const double* v = &y[7 * k];
            auto& g = scratch.groups[k];
            g.s = v[0];
            g.e = v[1];
            g.i = v[2];
            g.q = v[3];
            g.h = v[4];
            g.r = v[5];
            g.d = v[6];
        }
        const std::vector<Derivative> dx = mr_rhs(mr, policy, scratch);
        for (std::size_t k = 0; k < n_groups; ++k) {
            double* v = &dydt[7 * k];
            v[0] = dx[k].ds;
            v[1] = dx[k].de;
            v[2] = dx[k].di;
            v[3] = dx[k].dq;
            v[4] = dx[k].dh;
            v[5] = dx[k].dr;
            v[6] = dx[k].dd;
        }
    };

    RawTrajectory raw = integrate_raw(f, std::move(y0), initial.t, config);

    MRTrajectory traj;
    traj.times = std::move(raw.times);
    traj.states.reserve(traj.times.size());
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        MRState state;
        state.t = traj.times[s];
        state.groups.resize(n_groups);
        for (std::size_t k = 0; k < n_groups; ++k) {
            const double* v = &raw.states[s][7 * k];
            auto& g = state.groups[k];
            g.s = v[0];
            g.e = v[1];
            g.i = v[2];
            g.q = v[3];
            g.h = v[4];
            g.r = v[5];
            g.d = v[6];
        }
        traj.states.push_back(std::move(state));
    }
    return traj;
}

double employment(const MRParams& mr, const LockdownPolicy& policy, const MRState& x,
                  std::size_t k) {
    const ModelParams& p = mr.epi;
    const auto& g = x.groups.at(k);
    const double level = policy.level_at(k, x.t);
    const double d_i_k = mr.groups[k].death_scale * p.d_i;

    const double working_share = std::max(0.0, 1.0 - p.mu - level);
    double emp = working_share * (g.s + g.e + g.i + g.r);
    emp -= (p.gamma_e + p.sigma_e) * g.e;
    emp -= (p.gamma_i + d_i_k) * g.i;
    emp -= (1.0 - p.r_q) * g.q;
    emp -= (1.0 - p.r_h) * g.h;
    emp += mr.groups[k].kappa * g.r;
    return std::clamp(emp, 0.0, g.n());
}

double death_cost(const MRGroupParams& g, double r, double chi_annual, double w_ref) {
    const double chi_daily = chi_annual * 365.0 * w_ref;
    return g.w / r + chi_daily - (g.w / r) * std::exp(-r * g.delta);
}

double social_cost(const MRParams& mr, const LockdownPolicy& policy,
                   const MRTrajectory& traj, double r, double chi_annual) {
    if (traj.times.size() < 2)
        throw NumericError("social_cost: trajectory too short");
    const std::size_t n_groups = mr.groups.size();
    const auto rates = group_rates(mr);

    std::vector<double> chi_hat(n_groups);
    for (std::size_t k = 0; k < n_groups; ++k)
        chi_hat[k] = death_cost(mr.groups[k], r, chi_annual, mr.w_ref);

    const double sign = mr.discount_positive_exponent ? 1.0 : -1.0;
    auto integrand = [&](const MRState& x) {
        double cost = 0.0;
        for (std::size_t k = 0; k < n_groups; ++k) {
            const auto& g = x.groups[k];
            const double emp = employment(mr, policy, x, k);
            cost += mr.groups[k].w * (mr.groups[k].n - emp);
            cost += chi_hat[k] * (rates[k].d_i * g.i + rates[k].d_h * g.h);
        }
        return std::exp(sign * r * x.t) * cost;
    };

    double total = 0.0;
    double prev = integrand(traj.states.front());
    for (std::size_t s = 1; s < traj.states.size(); ++s) {
        const double cur = integrand(traj.states[s]);
        total += 0.5 * (prev + cur) * (traj.times[s] - traj.times[s - 1]);
        prev = cur;
    }
    return total;
}

EconomicOutcome economic_outcome(const MRParams& mr, const LockdownPolicy& policy,
                                 const MRTrajectory& traj) {
    if (traj.times.size() < 2)
        throw NumericError("economic_outcome: trajectory too short");
    const std::size_t n_groups = mr.groups.size();
    const double horizon = traj.times.back() - traj.times.front();

    EconomicOutcome out;
    out.emp_series.assign(n_groups, std::vector<double>(traj.times.size()));
    for (std::size_t s = 0; s < traj.states.size(); ++s)
        for (std::size_t k = 0; k < n_groups; ++k)
            out.emp_series[k][s] = employment(mr, policy, traj.states[s], k);

    double lost_output = 0.0;
    double baseline_output = 0.0;
    for (std::size_t k = 0; k < n_groups; ++k) {
        double integral = 0.0;
        for (std::size_t s = 1; s < traj.times.size(); ++s) {
            const double lo = mr.groups[k].n - out.emp_series[k][s - 1];
            const double hi = mr.groups[k].n - out.emp_series[k][s];
            integral += 0.5 * (lo + hi) * (traj.times[s] - traj.times[s - 1]);
        }
        lost_output += mr.groups[k].w * integral;
        baseline_output += mr.groups[k].w * mr.groups[k].n;
    }
    out.gdp_loss = lost_output / (horizon * baseline_output);
    out.death_rate = traj.back().total_deaths() / mr.total_share();
    out.social_cost = social_cost(mr, policy, traj, mr.interest_rate, mr.chi);
    return out;
}

double simulated_ifr(const ModelParams& params, double death_scale) {
    // One normalized group, epidemic run to burnout; infections counted as
    // the integrated flow into E.
    ModelParams p = params;
    p.beta = BetaSchedule(0.3);
    p.nu = 0.0;
    p.pi_birth = p.mu;
    p.d_i *= death_scale;
    p.d_h *= death_scale;

    CompartmentState x0;
    x0.e = 1e-4;
    x0.s = 1.0 - x0.e;

    IntegrationConfig config;
    config.dt = 0.25;
    config.horizon = 1000.0;
    const Trajectory traj = simulate(p, x0, config);

    double infections = 0.0;
    auto inflow = [&](const CompartmentState& x) {
        return x.s * force_of_infection(p, x) / x.n();
    };
    for (std::size_t s = 1; s < traj.states.size(); ++s)
        infections += 0.5 * (inflow(traj.states[s - 1]) + inflow(traj.states[s])) *
                      (traj.times[s] - traj.times[s - 1]);
    if (!(infections > 0.0))
        throw NumericError("simulated_ifr: no epidemic under the probe contact rate");
    return traj.back().d / infections;
}

double solve_death_scale(const ModelParams& base, double target_ifr) {
    if (target_ifr == 0.0)
        return 0.0;
    const double ifr_unit = simulated_ifr(base, 1.0);
    if (!(ifr_unit > 0.0))
        throw NumericError("solve_death_scale: base parameters produce no deaths");

    // IFR is nearly linear in the scale for small targets; the linearized
    // guess starts the secant within a few percent.
    double x0 = target_ifr / ifr_unit;
    double f0 = simulated_ifr(base, x0) - target_ifr;
    double x1 = x0 * (1.0 - f0 / target_ifr);
    for (int it = 0; it < 60; ++it) {
        const double f1 = simulated_ifr(base, x1) - target_ifr;
        if (std::abs(f1) <= 1e-8 * target_ifr)
            return x1;
        const double denom = f1 - f0;
        if (denom == 0.0)
            break;
        const double x2 = x1 - f1 * (x1 - x0) / denom;
        x0 = x1;
        f0 = f1;
        x1 = std::max(0.0, x2);
    }
    throw ConvergenceError("solve_death_scale: secant did not converge to ifr=" +
                           std::to_string(target_ifr));
}

void calibrate_group_fatality(MRParams& mr) {
    for (auto& g : mr.groups) {
        g.death_scale = solve_death_scale(mr.epi, g.ifr);
        g.chi_hat = death_cost(g, mr.interest_rate, mr.chi, mr.w_ref);
    }
}

std::vector<MRGroupParams> default_groups() {
    MRGroupParams young{"y", 0.542, 1.0, 0.7, 0.000315, 1.0, 15.0 * 365.0, 1.0, 0.0};
    MRGroupParams middle{"m", 0.246, 1.0, 0.7, 0.00132, 1.0, 15.0 * 365.0, 1.0, 0.0};
    MRGroupParams old{"o", 0.211, 0.0, 1.0, 0.0030, 1.0, 0.0, 1.0, 0.0};
    return {young, middle, old};
}

MRParams default_mr_baseline() {
    MRParams mr;
    mr.epi = default_params();
    mr.epi.beta = baseline_unmitigated_beta();
    mr.groups = default_groups();
    mr.seed_e0 = baseline_2020_e0();
    calibrate_group_fatality(mr);
    return mr;
}

} // namespace seqihr
