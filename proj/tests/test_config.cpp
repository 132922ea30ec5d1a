#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "seqihr/config.hpp"
#include "seqihr/errors.hpp"

using namespace seqihr;

TEST_CASE("defaults serialize and parse back to the same bytes") {
    const RunConfig c;
    const std::string text = serialize_config(c);
    const RunConfig parsed = parse_config_text(text);
    CHECK(serialize_config(parsed) == text);
}

TEST_CASE("randomized configs round-trip exactly") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 25; ++k) {
        RunConfig c;
        c.model.mu = u(rng) * 1e-4;
        c.model.pi_birth = c.model.mu;
        c.model.beta = BetaSchedule{{0.0, u(rng)}, {30.0 + u(rng), u(rng)}};
        c.model.eps_h = u(rng);
        c.model.omit_rq_recovery = k % 2 == 0;
        c.integration.dt = 0.125 + 0.5 * u(rng);
        c.integration.horizon = 100.0 + 300.0 * u(rng);
        c.deaths_csv = k % 3 ? "" : "data/some.csv";
        c.segment_breaks = {0.0, 40.0 + u(rng), 100.0 + u(rng)};
        c.population = 1e6 + u(rng) * 1e9;
        c.e0 = 1e-6 * (1.0 + u(rng));
        c.groups[0].n = 0.5 + 0.05 * u(rng);
        c.groups[2].kappa = u(rng);
        c.theta = u(rng);
        c.chi = 40.0 * u(rng);
        c.grid_step = 0.01 + 0.2 * u(rng);
        c.chi_sweep = {1.0, 5.0, 20.0};
        c.workers = static_cast<int>(u(rng) * 16);
        c.seed = static_cast<std::uint64_t>(u(rng) * 1e6);

        const std::string text = serialize_config(c);
        CHECK(serialize_config(parse_config_text(text)) == text);
    }
}

TEST_CASE("parser diagnostics") {
    SUBCASE("unknown key is an error") {
        CHECK_THROWS_WITH_AS(parse_config_text("no_such_key = 3\n"),
                             doctest::Contains("no_such_key"), ConfigError);
    }
    SUBCASE("comments and blank lines are skipped") {
        const RunConfig c = parse_config_text("# comment\n\n  mu = 0.001 # inline\n");
        CHECK(c.model.mu == 0.001);
    }
    SUBCASE("malformed line is rejected with its number") {
        CHECK_THROWS_WITH_AS(parse_config_text("mu = 0.1\nnot a pair\n"),
                             doctest::Contains("line 2"), ConfigError);
    }
    SUBCASE("bad number is rejected") {
        CHECK_THROWS_AS(parse_config_text("mu = zebra\n"), ConfigError);
    }
    SUBCASE("unknown group raises") {
        CHECK_THROWS_AS(parse_config_text("group.z.n = 0.5\n"), ConfigError);
    }
    SUBCASE("custom group table") {
        const RunConfig c = parse_config_text("groups = a,b\n"
                                              "group.a.n = 0.6\n"
                                              "group.a.w = 1\n"
                                              "group.b.n = 0.4\n");
        REQUIRE(c.groups.size() == 2);
        CHECK(c.groups[0].id == "a");
        CHECK(c.groups[0].n == 0.6);
        CHECK(c.groups[1].n == 0.4);
    }
    SUBCASE("beta segments parse") {
        const RunConfig c = parse_config_text("beta = 0:0.4,45:0.1\n");
        REQUIRE(c.model.beta.segments.size() == 2);
        CHECK(c.model.beta.segments[1].start_day == 45.0);
        CHECK(c.model.beta.segments[1].value == 0.1);
        CHECK_THROWS_AS(parse_config_text("beta = 5:0.4\n"), ConfigError);
    }
}

TEST_CASE("policy file parsing") {
    const RunConfig c;
    MRParams mr = c.mr_params();

    const auto path = std::filesystem::temp_directory_path() / "policy_test.csv";
    {
        std::ofstream out(path);
        out << "group,start_day,level\n";
        out << "y,0,0.2\n";
        out << "y,60,0\n";
        out << "o,0,1.0\n";
    }
    const LockdownPolicy p = load_policy_csv(path.string(), mr);
    CHECK(p.level_at(0, 30.0) == 0.2);
    CHECK(p.level_at(0, 61.0) == 0.0);
    CHECK(p.level_at(1, 10.0) == 0.0); // unlisted group defaults to open
    CHECK(p.level_at(2, 300.0) == 1.0);

    SUBCASE("unknown group in the file") {
        const auto bad = std::filesystem::temp_directory_path() / "policy_bad.csv";
        std::ofstream out(bad);
        out << "group,start_day,level\nzz,0,0.5\n";
        out.close();
        CHECK_THROWS_AS(load_policy_csv(bad.string(), mr), ConfigError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_policy_csv("/nonexistent/p.csv", mr), DataError);
    }
}

TEST_CASE("mr_params assembles the economics block") {
    RunConfig c;
    c.theta = 0.8;
    c.chi = 10.0;
    c.e0 = 2e-4;
    c.normalize_shares = true;
    const MRParams mr = c.mr_params();
    CHECK(mr.theta == 0.8);
    CHECK(mr.chi == 10.0);
    CHECK(mr.seed_e0 == 2e-4);
    CHECK(mr.total_share() == doctest::Approx(1.0).epsilon(1e-12));
}
