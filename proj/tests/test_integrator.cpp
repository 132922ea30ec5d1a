#include <doctest.h>

#include <cmath>

#include "seqihr/calibration.hpp"
#include "seqihr/errors.hpp"
#include "seqihr/integrator.hpp"

using namespace seqihr;

namespace {

// scalar decay y' = -y against the analytic solution
double decay_max_error(double dt) {
    IntegrationConfig cfg;
    cfg.dt = dt;
    cfg.horizon = 10.0;
    auto f = [](double, const std::vector<double>& y, std::vector<double>& dydt) {
        dydt[0] = -y[0];
    };
    const RawTrajectory traj = integrate_raw(f, {1.0}, 0.0, cfg);
    double err = 0.0;
    for (std::size_t k = 0; k < traj.times.size(); ++k)
        err = std::max(err, std::abs(traj.states[k][0] - std::exp(-traj.times[k])));
    return err;
}

} // namespace

TEST_CASE("zero rhs keeps the trajectory constant") {
    const ModelParams p = default_params();
    CompartmentState x0;
    x0.s = 0.6;
    x0.e = 0.1;
    x0.r = 0.3;
    IntegrationConfig cfg;
    cfg.horizon = 20.0;
    const Trajectory traj =
        integrate([](const ModelParams&, const CompartmentState&) { return Derivative{}; },
                  x0, p, cfg);
    for (const auto& x : traj.states) {
        CHECK(x.s == 0.6);
        CHECK(x.e == 0.1);
        CHECK(x.r == 0.3);
        CHECK(x.d == 0.0);
    }
}

TEST_CASE("classical fourth-order accuracy on the decay problem") {
    // At dt=0.25 the true max-abs error against e^{-t} is ~1.5e-5 (the
    // per-step defect h^5/120 accumulates to ~4 e^{-1} h^4/30 near t=1), and
    // each halving divides it by ~16.
    const double err_025 = decay_max_error(0.25);
    const double err_0125 = decay_max_error(0.125);
    const double err_00625 = decay_max_error(0.0625);

    CHECK(err_025 < 2e-5);
    CHECK(err_025 > 5e-6);
    CHECK(err_0125 < 1e-6);

    const double ratio1 = err_025 / err_0125;
    const double ratio2 = err_0125 / err_00625;
    CHECK(ratio1 >= 12.0);
    CHECK(ratio1 <= 20.0);
    CHECK(ratio2 >= 12.0);
    CHECK(ratio2 <= 20.0);
}

TEST_CASE("integration is deterministic") {
    ModelParams p = default_params();
    p.beta = BetaSchedule(0.3);
    CompartmentState x0;
    x0.e = 1e-4;
    x0.s = 1.0 - x0.e;
    IntegrationConfig cfg;
    const Trajectory a = simulate(p, x0, cfg);
    const Trajectory b = simulate(p, x0, cfg);
    REQUIRE(a.states.size() == b.states.size());
    for (std::size_t k = 0; k < a.states.size(); ++k) {
        CHECK(a.states[k].s == b.states[k].s);
        CHECK(a.states[k].e == b.states[k].e);
        CHECK(a.states[k].d == b.states[k].d);
    }
}

TEST_CASE("death accumulator is nondecreasing") {
    ModelParams p = default_params();
    p.beta = BetaSchedule(0.45);
    CompartmentState x0;
    x0.e = 1e-4;
    x0.s = 1.0 - x0.e;
    IntegrationConfig cfg;
    const Trajectory traj = simulate(p, x0, cfg);
    for (std::size_t k = 1; k < traj.states.size(); ++k)
        CHECK(traj.states[k].d >= traj.states[k - 1].d);
}

TEST_CASE("partial final step lands exactly on the horizon") {
    IntegrationConfig cfg;
    cfg.dt = 0.3;
    cfg.horizon = 1.0;
    auto f = [](double, const std::vector<double>& y, std::vector<double>& dydt) {
        dydt[0] = -y[0];
    };
    const RawTrajectory traj = integrate_raw(f, {1.0}, 0.0, cfg);
    CHECK(traj.times.back() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("blow-up raises a numeric error") {
    IntegrationConfig cfg;
    cfg.dt = 1.0;
    cfg.horizon = 400.0;
    auto f = [](double, const std::vector<double>& y, std::vector<double>& dydt) {
        dydt[0] = y[0] * y[0]; // finite-time blow-up
    };
    CHECK_THROWS_AS(integrate_raw(f, {1.0}, 0.0, cfg), NumericError);
}

TEST_CASE("negative excursion beyond the clamp band raises a step-size error") {
    IntegrationConfig cfg;
    cfg.dt = 1.0;
    cfg.horizon = 10.0;
    auto f = [](double, const std::vector<double>&, std::vector<double>& dydt) {
        dydt[0] = -1.0; // constant drain through zero
    };
    CHECK_THROWS_AS(integrate_raw(f, {0.5}, 0.0, cfg), NumericError);
}

TEST_CASE("daily deaths") {
    SUBCASE("constant accumulator gives zeros") {
        Trajectory traj;
        for (int k = 0; k <= 12; ++k) {
            traj.times.push_back(0.5 * k);
            CompartmentState x;
            x.s = 1.0;
            x.d = 0.25;
            x.t = 0.5 * k;
            traj.states.push_back(x);
        }
        const auto daily = daily_deaths(traj);
        REQUIRE(daily.size() == 6);
        for (double v : daily)
            CHECK(v == 0.0);
    }
    SUBCASE("unit-rate accumulator gives ones") {
        Trajectory traj;
        for (int k = 0; k <= 20; ++k) {
            const double t = 0.25 * k;
            CompartmentState x;
            x.s = 1.0;
            x.d = t;
            x.t = t;
            traj.times.push_back(t);
            traj.states.push_back(x);
        }
        const auto daily = daily_deaths(traj);
        REQUIRE(daily.size() == 5);
        for (double v : daily)
            CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("sum equals the final accumulator") {
        ModelParams p = default_params();
        p.beta = baseline_2020_beta();
        CompartmentState x0;
        x0.e = baseline_2020_e0();
        x0.s = 1.0 - x0.e;
        IntegrationConfig cfg;
        const Trajectory traj = simulate(p, x0, cfg);
        const auto daily = daily_deaths(traj);
        REQUIRE(daily.size() == 365);
        double total = 0.0;
        for (double v : daily) {
            CHECK(v >= 0.0);
            total += v;
        }
        CHECK(total == doctest::Approx(traj.back().d).epsilon(1e-10));

        // the baseline carries the two-wave 2020 shape: spring and winter
        // peaks clearly above the summer level
        auto window_max = [&](int a, int b) {
            double m = 0.0;
            for (int k = a; k < b; ++k)
                m = std::max(m, daily[static_cast<std::size_t>(k)]);
            return m;
        };
        double summer = 0.0;
        for (int k = 120; k < 200; ++k)
            summer += daily[static_cast<std::size_t>(k)] / 80.0;
        CHECK(window_max(20, 90) > 1.3 * summer);
        CHECK(window_max(240, 320) > 1.3 * summer);
    }
    SUBCASE("too short a span is rejected") {
        Trajectory traj;
        for (int k = 0; k <= 4; ++k) {
            traj.times.push_back(0.25 * k);
            CompartmentState x;
            x.s = 1.0;
            x.t = 0.25 * k;
            traj.states.push_back(x);
        }
        CHECK_THROWS_AS(daily_deaths(traj), NumericError);
    }
}
