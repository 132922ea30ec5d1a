#include <doctest.h>

#include <cmath>

#include "seqihr/calibration.hpp"
#include "seqihr/errors.hpp"
#include "seqihr/multirisk.hpp"

using namespace seqihr;

namespace {

MRParams identical_three_groups() {
    MRParams mr;
    mr.epi = default_params();
    mr.epi.beta = BetaSchedule(0.3);
    for (const char* id : {"a", "b", "c"}) {
        MRGroupParams g;
        g.id = id;
        g.n = 1.0 / 3.0;
        g.w = 1.0;
        g.lbar = 1.0;
        g.kappa = 0.5;
        g.delta = 1000.0;
        g.death_scale = 1.0; // exactly the shared base rates
        mr.groups.push_back(g);
    }
    return mr;
}

MRParams baseline_mr() {
    MRParams mr;
    mr.epi = default_params();
    mr.epi.beta = baseline_2020_beta();
    mr.groups = default_groups();
    mr.seed_e0 = baseline_2020_e0();
    return mr;
}

} // namespace

TEST_CASE("group table validation") {
    MRParams mr = baseline_mr();
    CHECK(mr.total_share() == doctest::Approx(0.999).epsilon(1e-12));
    CHECK_NOTHROW(mr.validate());

    SUBCASE("shares too far from unity are rejected") {
        mr.groups[0].n = 0.7;
        CHECK_THROWS_AS(mr.validate(), ConfigError);
    }
    SUBCASE("normalization is opt-in") {
        mr.normalize_shares();
        CHECK(mr.total_share() == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("group lookup") {
        CHECK(mr.group_index("o") == 2);
        CHECK_THROWS_AS(mr.group_index("zz"), ConfigError);
    }
}

TEST_CASE("policy schedules resolve and validate") {
    const MRParams mr = baseline_mr();
    LockdownPolicy p = LockdownPolicy::none(3);
    CHECK(p.level_at(0, 100.0) == 0.0);

    p.schedules[2] = {{0.0, 0.0}, {30.0, 1.0}, {200.0, 0.5}};
    CHECK(p.level_at(2, 10.0) == 0.0);
    CHECK(p.level_at(2, 30.0) == 1.0);
    CHECK(p.level_at(2, 250.0) == 0.5);
    CHECK_NOTHROW(p.validate(mr));

    SUBCASE("level above the group cap is rejected") {
        LockdownPolicy bad = LockdownPolicy::constant(LockdownPolicy::Kind::targeted,
                                                      {0.9, 0.0, 0.0});
        CHECK_THROWS_AS(bad.validate(mr), ConfigError); // lbar_y = 0.7
    }
    SUBCASE("encoding is canonical") {
        const LockdownPolicy c =
            LockdownPolicy::constant(LockdownPolicy::Kind::uniform, {0.1, 0.1, 0.1});
        CHECK(c.encode() == "uniform|0:0.1000,0:0.1000,0:0.1000");
    }
}

TEST_CASE("identical groups aggregate to the single-group model") {
    const MRParams mr = identical_three_groups();
    const double e0 = 1e-4;

    IntegrationConfig cfg;
    cfg.horizon = 365.0;
    const MRTrajectory mrt =
        simulate_mr(mr, LockdownPolicy::none(3), mr_initial_state(mr, e0), cfg);

    CompartmentState x0;
    x0.e = e0;
    x0.s = 1.0 - e0;
    const Trajectory single = simulate(mr.epi, x0, cfg);

    REQUIRE(mrt.states.size() == single.states.size());
    double worst = 0.0;
    for (std::size_t k = 0; k < mrt.states.size(); ++k) {
        double s = 0.0, e = 0.0, i = 0.0, d = 0.0;
        for (const auto& g : mrt.states[k].groups) {
            s += g.s;
            e += g.e;
            i += g.i;
            d += g.d;
        }
        worst = std::max(worst, std::abs(s - single.states[k].s));
        worst = std::max(worst, std::abs(e - single.states[k].e));
        worst = std::max(worst, std::abs(i - single.states[k].i));
        worst = std::max(worst, std::abs(d - single.states[k].d));
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("a fully shielded group acquires no new infections") {
    MRParams mr = baseline_mr();
    mr.theta = 1.0;
    for (auto& g : mr.groups)
        g.death_scale = 1.0;

    LockdownPolicy policy = LockdownPolicy::none(3);
    policy.schedules[2] = {{0.0, 1.0}}; // old group fully locked down

    // seed infection in the young group only
    MRState x0 = mr_initial_state(mr, 0.0);
    x0.groups[0].e = 1e-4;
    x0.groups[0].s -= 1e-4;

    IntegrationConfig cfg;
    cfg.horizon = 200.0;
    const MRTrajectory traj = simulate_mr(mr, policy, x0, cfg);

    // the old group's exposed stock stays empty: no inflow ever
    for (const auto& state : traj.states)
        CHECK(state.groups[2].e <= 1e-30);
    CHECK(traj.back().groups[2].d <= 1e-20);
}

TEST_CASE("mixing connects every group to a seeded one") {
    MRParams mr = baseline_mr();
    for (auto& g : mr.groups)
        g.death_scale = 1.0;
    MRState x0 = mr_initial_state(mr, 0.0);
    x0.groups[0].e = 1e-4; // young-only seed
    x0.groups[0].s -= 1e-4;

    IntegrationConfig cfg;
    cfg.horizon = 30.0;
    const MRTrajectory traj = simulate_mr(mr, LockdownPolicy::none(3), x0, cfg);
    CHECK(traj.back().groups[2].i > 0.0);
    CHECK(traj.back().groups[1].i > 0.0);
}

TEST_CASE("employment equation") {
    MRParams mr = baseline_mr();
    const std::size_t y = 0;

    SUBCASE("susceptible-only workforce under partial lockdown") {
        MRParams no_mu = mr;
        no_mu.epi.mu = 0.0;
        no_mu.epi.pi_birth = 0.0;
        MRState x = mr_initial_state(no_mu, 0.0);
        const LockdownPolicy p =
            LockdownPolicy::constant(LockdownPolicy::Kind::targeted, {0.3, 0.0, 0.0});
        CHECK(employment(no_mu, p, x, y) ==
              doctest::Approx(0.7 * no_mu.groups[y].n).epsilon(1e-12));
    }
    SUBCASE("full lockdown clamps the working share at zero") {
        MRState x = mr_initial_state(mr, 0.0);
        LockdownPolicy p = LockdownPolicy::none(3);
        p.schedules[2] = {{0.0, 1.0}};
        CHECK(employment(mr, p, x, 2) == 0.0);
    }
    SUBCASE("pre-pandemic baseline employment") {
        MRState x = mr_initial_state(mr, 0.0);
        const LockdownPolicy p = LockdownPolicy::none(3);
        CHECK(employment(mr, p, x, y) ==
              doctest::Approx((1.0 - mr.epi.mu) * mr.groups[y].n).epsilon(1e-12));
    }
    SUBCASE("bounds hold along an epidemic path") {
        MRParams run = mr;
        for (auto& g : run.groups)
            g.death_scale = 0.02;
        IntegrationConfig cfg;
        const LockdownPolicy p =
            LockdownPolicy::constant(LockdownPolicy::Kind::uniform, {0.4, 0.4, 0.4});
        const MRTrajectory traj = simulate_mr(run, p, mr_initial_state(run, 1e-4), cfg);
        for (std::size_t k = 0; k < traj.states.size(); k += 40) {
            for (std::size_t g = 0; g < 3; ++g) {
                const double emp = employment(run, p, traj.states[k], g);
                CHECK(emp >= 0.0);
                CHECK(emp <= traj.states[k].groups[g].n() + 1e-12);
            }
        }
    }
}

TEST_CASE("social cost") {
    MRParams mr = baseline_mr();
    for (auto& g : mr.groups)
        g.death_scale = 0.02;
    IntegrationConfig cfg;
    cfg.horizon = 120.0;

    SUBCASE("no pandemic and no lockdown costs next to nothing") {
        const LockdownPolicy p = LockdownPolicy::none(3);
        const MRTrajectory traj = simulate_mr(mr, p, mr_initial_state(mr, 0.0), cfg);
        const double cost = social_cost(mr, p, traj, mr.interest_rate, mr.chi);
        // only the mu-level share of the workforce is absent
        CHECK(cost <= 2.0 * mr.epi.mu * 120.0);
        CHECK(cost >= 0.0);
    }
    SUBCASE("death-cost scale is inert without deaths") {
        const LockdownPolicy p =
            LockdownPolicy::constant(LockdownPolicy::Kind::uniform, {0.5, 0.5, 0.5});
        const MRTrajectory traj = simulate_mr(mr, p, mr_initial_state(mr, 0.0), cfg);
        const double a = social_cost(mr, p, traj, mr.interest_rate, mr.chi);
        const double b = social_cost(mr, p, traj, mr.interest_rate, 2.0 * mr.chi);
        CHECK(a == doctest::Approx(b).epsilon(1e-12));
    }
    SUBCASE("vanishing interest rate approaches the undiscounted integral") {
        const LockdownPolicy p =
            LockdownPolicy::constant(LockdownPolicy::Kind::targeted, {0.2, 0.1, 0.6});
        const MRTrajectory traj = simulate_mr(mr, p, mr_initial_state(mr, 1e-4), cfg);

        const double tiny_r = 1e-12;
        const double cost = social_cost(mr, p, traj, tiny_r, mr.chi);

        // independent quadrature with the r->0 limit of the death cost,
        // chi_hat -> w*delta + chi*365*w_ref
        double expected = 0.0;
        const double chi_daily = mr.chi * 365.0 * mr.w_ref;
        for (std::size_t s = 1; s < traj.states.size(); ++s) {
            double lo = 0.0, hi = 0.0;
            for (std::size_t g = 0; g < mr.groups.size(); ++g) {
                const auto& grp = mr.groups[g];
                const double d_i = grp.death_scale * mr.epi.d_i;
                const double d_h = grp.death_scale * mr.epi.d_h;
                const double limit_chi_hat = grp.w * grp.delta + chi_daily;
                lo += grp.w * (grp.n - employment(mr, p, traj.states[s - 1], g)) +
                      limit_chi_hat * (d_i * traj.states[s - 1].groups[g].i +
                                       d_h * traj.states[s - 1].groups[g].h);
                hi += grp.w * (grp.n - employment(mr, p, traj.states[s], g)) +
                      limit_chi_hat * (d_i * traj.states[s].groups[g].i +
                                       d_h * traj.states[s].groups[g].h);
            }
            expected += 0.5 * (lo + hi) * (traj.times[s] - traj.times[s - 1]);
        }
        CHECK(cost == doctest::Approx(expected).epsilon(1e-6));
    }
    SUBCASE("positive-exponent comparison variant inflates the cost") {
        const LockdownPolicy p =
            LockdownPolicy::constant(LockdownPolicy::Kind::uniform, {0.3, 0.3, 0.3});
        const MRTrajectory traj = simulate_mr(mr, p, mr_initial_state(mr, 1e-4), cfg);
        MRParams variant = mr;
        variant.discount_positive_exponent = true;
        CHECK(social_cost(variant, p, traj, mr.interest_rate, mr.chi) >
              social_cost(mr, p, traj, mr.interest_rate, mr.chi));
    }
}

TEST_CASE("economic outcome") {
    MRParams mr = baseline_mr();
    for (auto& g : mr.groups)
        g.death_scale = 0.02;
    IntegrationConfig cfg;

    SUBCASE("no pandemic, no lockdown") {
        const LockdownPolicy p = LockdownPolicy::none(3);
        const MRTrajectory traj = simulate_mr(mr, p, mr_initial_state(mr, 0.0), cfg);
        const EconomicOutcome out = economic_outcome(mr, p, traj);
        CHECK(out.death_rate == 0.0);
        CHECK(out.gdp_loss <= 2.0 * mr.epi.mu);
        CHECK(out.gdp_loss >= 0.0);
    }
    SUBCASE("static full lockdown of the working groups loses 0.7 of output") {
        LockdownPolicy p = LockdownPolicy::constant(LockdownPolicy::Kind::targeted,
                                                    {0.7, 0.7, 1.0});
        const MRTrajectory traj = simulate_mr(mr, p, mr_initial_state(mr, 0.0), cfg);
        const EconomicOutcome out = economic_outcome(mr, p, traj);
        CHECK(out.gdp_loss == doctest::Approx(0.7 + mr.epi.mu).epsilon(1e-6));
    }
    SUBCASE("unmitigated baseline with a spring lockdown lands in the realistic decade") {
        // policy studies run against the no-policy counterfactual; the
        // two-wave 2020 schedule already embeds the mitigation it fits
        const MRParams base = default_mr_baseline();
        LockdownPolicy p = LockdownPolicy::none(3);
        for (auto& sched : p.schedules)
            sched = {{0.0, 0.0}, {15.0, 0.7}, {75.0, 0.0}};
        const MRTrajectory traj =
            simulate_mr(base, p, mr_initial_state(base, base.seed_e0), cfg);
        const EconomicOutcome out = economic_outcome(base, p, traj);
        CHECK(out.death_rate > 0.0005); // 0.05%
        CHECK(out.death_rate < 0.003);  // 0.3%
    }
}

TEST_CASE("tightening a producing group's lockdown never lowers gdp loss") {
    // grid-checked: the direct output cost of locking a w>0 group dominates
    // its epidemic-feedback savings (not true for the w=0 old group, whose
    // lockdown is output-positive through fewer working-group infections)
    const MRParams mr = default_mr_baseline();
    IntegrationConfig cfg;
    cfg.horizon = 180.0;
    for (std::size_t group : {std::size_t(0), std::size_t(1)}) {
        double prev = -1.0;
        for (double level : {0.0, 0.2, 0.4, 0.6}) {
            LockdownPolicy p = LockdownPolicy::none(3);
            p.schedules[group] = {{0.0, level}};
            const MRTrajectory traj =
                simulate_mr(mr, p, mr_initial_state(mr, mr.seed_e0), cfg);
            const double loss = economic_outcome(mr, p, traj).gdp_loss;
            CHECK(loss >= prev);
            prev = loss;
        }
    }
}

TEST_CASE("raising the old-group lockdown never raises old-group deaths") {
    MRParams mr = baseline_mr();
    calibrate_group_fatality(mr);
    IntegrationConfig cfg;

    double prev = std::numeric_limits<double>::infinity();
    for (double level : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        LockdownPolicy p = LockdownPolicy::none(3);
        p.schedules[2] = {{0.0, level}};
        const MRTrajectory traj = simulate_mr(mr, p, mr_initial_state(mr, mr.seed_e0), cfg);
        const double deaths_old = traj.back().groups[2].d;
        CHECK(deaths_old <= prev + 1e-15);
        prev = deaths_old;
    }
}

TEST_CASE("fatality scaling hits the group targets") {
    MRParams mr = baseline_mr();
    calibrate_group_fatality(mr);
    for (const auto& g : mr.groups) {
        if (g.ifr == 0.0)
            continue;
        const double achieved = simulated_ifr(mr.epi, g.death_scale);
        CHECK(achieved == doctest::Approx(g.ifr).epsilon(1e-6));
        CHECK(g.death_scale > 0.0);
        CHECK(g.death_scale < 1.0); // published group targets sit far below the raw cascade
    }
    // the death-cost coefficients follow w, delta and chi
    const auto& young = mr.groups[0];
    const auto& old = mr.groups[2];
    const double r = mr.interest_rate;
    CHECK(young.chi_hat ==
          doctest::Approx(young.w / r + mr.chi * 365.0 * mr.w_ref -
                          (young.w / r) * std::exp(-r * young.delta))
              .epsilon(1e-12));
    CHECK(old.chi_hat == doctest::Approx(mr.chi * 365.0 * mr.w_ref).epsilon(1e-12));
}

TEST_CASE("zero ifr target turns deaths off") {
    MRParams mr = baseline_mr();
    mr.groups[0].ifr = 0.0;
    calibrate_group_fatality(mr);
    CHECK(mr.groups[0].death_scale == 0.0);
}
