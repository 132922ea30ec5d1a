// seqihr: SEQIHR epidemic-economics command line tool.
//
// Subcommands: simulate | equilibrium | reproduction | fit | frontier | policy
// Exit codes: 0 ok, 1 config error, 2 data error, 3 numeric error,
//             4 non-convergence.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "seqihr/calibration.hpp"
#include "seqihr/config.hpp"
#include "seqihr/equilibria.hpp"
#include "seqihr/errors.hpp"
#include "seqihr/integrator.hpp"
#include "seqihr/model.hpp"
#include "seqihr/multirisk.hpp"
#include "seqihr/policy.hpp"
#include "seqihr/reproduction.hpp"

#include "manifest.hpp"
#include "svg.hpp"

namespace {

using namespace seqihr;

struct CliOptions {
    std::string config_path;
    std::string out_dir = ".";
    bool plot = false;
    int workers = -1;       // -1: keep config value
    long long seed = -1;    // -1: keep config value
    bool strict_eq6 = false;
    bool strict_discount = false;
};

void add_common_options(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--config", opt.config_path, "key=value run configuration file");
    cmd->add_option("--out", opt.out_dir, "output directory (created if missing)");
    cmd->add_flag("--plot", opt.plot, "emit an SVG plot next to the CSV output");
    cmd->add_option("--workers", opt.workers, "worker threads for policy sweeps");
    cmd->add_option("--seed", opt.seed, "rng seed for fits and refinements");
    cmd->add_flag("--strict-paper-eq6", opt.strict_eq6,
                  "drop the r_q*Q recovery inflow (printed-equation variant)");
    cmd->add_flag("--strict-paper-discount", opt.strict_discount,
                  "discount social costs with e^{+rt} (printed-equation variant)");
}

RunConfig resolve_config(const CliOptions& opt) {
    RunConfig config = opt.config_path.empty() ? RunConfig() : load_config(opt.config_path);
    if (opt.workers >= 0)
        config.workers = opt.workers;
    if (opt.seed >= 0)
        config.seed = static_cast<std::uint64_t>(opt.seed);
    if (opt.strict_eq6)
        config.model.omit_rq_recovery = true;
    if (opt.strict_discount)
        config.discount_positive_exponent = true;
    config.model.validate();
    config.integration.validate();
    std::filesystem::create_directories(opt.out_dir);
    return config;
}

int effective_workers(const RunConfig& config) {
    if (config.workers > 0)
        return config.workers;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

std::string command_echo(const std::string& name, const CliOptions& opt) {
    std::string cmd = "seqihr " + name;
    if (!opt.config_path.empty())
        cmd += " --config " + opt.config_path;
    cmd += " --out " + opt.out_dir;
    if (opt.plot)
        cmd += " --plot";
    if (opt.strict_eq6)
        cmd += " --strict-paper-eq6";
    if (opt.strict_discount)
        cmd += " --strict-paper-discount";
    return cmd;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out)
        throw DataError("cannot write " + path);
    out << content;
}

std::string format_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

MRParams calibrated_mr(const RunConfig& config) {
    MRParams mr = config.mr_params();
    mr.validate();
    calibrate_group_fatality(mr);
    return mr;
}

std::vector<std::string> split_paths(const std::string& list) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : list) {
        if (c == ',') {
            if (!cur.empty())
                out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty())
        out.push_back(cur);
    return out;
}

// --- simulate ---------------------------------------------------------

int cmd_simulate(const CliOptions& opt) {
    const RunConfig config = resolve_config(opt);

    CompartmentState x0;
    x0.e = config.e0;
    x0.s = 1.0 - config.e0;
    const Trajectory traj = simulate(config.model, x0, config.integration);
    const std::vector<double> daily = daily_deaths(traj);

    std::string csv = "t,S,E,I,Q,H,R,D,daily_deaths\n";
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const auto& x = traj.states[k];
        const double t = traj.times[k];
        csv += format_g(t);
        for (double v : {x.s, x.e, x.i, x.q, x.h, x.r, x.d})
            csv += "," + format_g(v);
        const double day = t - traj.times.front();
        const bool on_day = std::abs(day - std::round(day)) < 1e-9 && day >= 1.0 &&
                            static_cast<std::size_t>(std::round(day)) <= daily.size();
        csv += ",";
        if (on_day)
            csv += format_g(daily[static_cast<std::size_t>(std::round(day)) - 1]);
        csv += "\n";
    }
    write_file(opt.out_dir + "/trajectory.csv", csv);

    if (opt.plot) {
        tools::SvgPlot plot("Daily deaths", "day", "deaths/day");
        std::vector<double> xs(daily.size());
        std::vector<double> ys(daily.size());
        for (std::size_t k = 0; k < daily.size(); ++k) {
            xs[k] = static_cast<double>(k);
            ys[k] = daily[k] * config.population;
        }
        plot.add_series(xs, ys, "steelblue", "model");
        if (!config.deaths_csv.empty()) {
            const DeathSeries series = load_death_csv(config.deaths_csv);
            std::vector<double> dx(series.smoothed.size());
            for (std::size_t k = 0; k < series.smoothed.size(); ++k)
                dx[k] = static_cast<double>(k + DeathSeries::kSmoothRadius);
            plot.add_series(dx, series.smoothed, "firebrick", "data (7-day avg)");
        }
        plot.write(opt.out_dir + "/daily_deaths.svg");
    }

    std::vector<std::string> inputs;
    if (!config.deaths_csv.empty())
        inputs.push_back(config.deaths_csv);
    tools::write_manifest(opt.out_dir, command_echo("simulate", opt),
                          serialize_config(config), inputs);
    std::cout << "simulate: " << traj.times.size() << " grid points, cumulative deaths "
              << format_g(traj.back().d * config.population) << " (scaled)\n";
    return 0;
}

// --- equilibrium ------------------------------------------------------

int cmd_equilibrium(const CliOptions& opt) {
    const RunConfig config = resolve_config(opt);

    const EquilibriumPoint dfe = disease_free_equilibrium(config.model);
    const PandemicEquilibriumResult pe = pandemic_equilibrium(config.model);

    std::string table;
    char line[256];
    std::snprintf(line, sizeof(line), "%-22s %14s %14s %14s\n", "point", "S", "E", "I");
    table += line;
    auto row = [&](const char* name, const EquilibriumPoint& p) {
        std::snprintf(line, sizeof(line), "%-22s %14.6g %14.6g %14.6g\n", name, p.state.s,
                      p.state.e, p.state.i);
        table += line;
        std::snprintf(line, sizeof(line),
                      "%-22s Q=%.6g H=%.6g R=%.6g  residual=%.3e admissible=%s\n", "",
                      p.state.q, p.state.h, p.state.r, p.residual,
                      p.admissible ? "yes" : "no");
        table += line;
    };
    row("disease-free", dfe);
    row("pandemic (closed)", pe.closed_form);
    row("pandemic (numerical)", pe.numerical);
    table += "\n" + pe.divergence_report();

    std::cout << table;
    write_file(opt.out_dir + "/equilibrium.txt", table);
    tools::write_manifest(opt.out_dir, command_echo("equilibrium", opt),
                          serialize_config(config), {});
    return 0;
}

// --- reproduction -----------------------------------------------------

int cmd_reproduction(const CliOptions& opt) {
    const RunConfig config = resolve_config(opt);

    CompartmentState state;
    state.e = config.e0;
    state.s = 1.0 - config.e0;
    if (config.rc_day > 0.0) {
        IntegrationConfig ic = config.integration;
        ic.horizon = config.rc_day;
        state = simulate(config.model, state, ic).back();
    }

    const ReproductionReport rep = reproduction_report(config.model, state);
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "R_0 (disease-free)     = %.6f\n"
                  "R_C (state at day %-4g)= %.6f\n"
                  "seed growth rate       = %+.6e / day\n"
                  "threshold consistent   = %s\n",
                  rep.r_0, config.rc_day, rep.r_c, rep.growth_rate,
                  rep.threshold_consistent ? "yes" : "NO");
    std::cout << buf;
    write_file(opt.out_dir + "/reproduction.txt", buf);
    tools::write_manifest(opt.out_dir, command_echo("reproduction", opt),
                          serialize_config(config), {});
    return 0;
}

// --- fit ---------------------------------------------------------------

int cmd_fit(const CliOptions& opt) {
    const RunConfig config = resolve_config(opt);
    if (config.deaths_csv.empty())
        throw DataError("fit: no deaths_csv configured");
    const DeathSeries series = load_death_csv(config.deaths_csv);

    FitOptions fopt;
    fopt.population = config.population;
    fopt.dt = config.integration.dt;
    fopt.seed = config.seed;
    const FitResult result = fit(config.model, series, config.segment_breaks, fopt);

    std::string csv = "segment_start,beta\n";
    for (const auto& seg : result.beta_segments.segments)
        csv += format_g(seg.start_day) + "," + format_g(seg.value) + "\n";
    char summary[256];
    std::snprintf(summary, sizeof(summary),
                  "# summary: e0=%.10g rmse=%.10g total_deaths_model=%.10g iterations=%d "
                  "converged=%s\n",
                  result.e0, result.rmse, result.total_deaths_model, result.iterations,
                  result.converged ? "true" : "false");
    csv += summary;
    write_file(opt.out_dir + "/fit_result.csv", csv);

    ModelParams fitted = config.model;
    fitted.beta = result.beta_segments;
    CompartmentState x0;
    x0.e = result.e0;
    x0.s = 1.0 - result.e0;
    IntegrationConfig ic = config.integration;
    ic.horizon = static_cast<double>(series.raw.size());
    ic.dt = fopt.dt;
    const Trajectory traj = simulate(fitted, x0, ic);
    const std::vector<double> daily = daily_deaths(traj);

    std::string curve = "day,model_deaths,smoothed_data\n";
    for (std::size_t k = 0; k < daily.size(); ++k) {
        curve += format_g(static_cast<double>(k)) + "," +
                 format_g(daily[k] * config.population) + ",";
        if (k >= DeathSeries::kSmoothRadius &&
            k - DeathSeries::kSmoothRadius < series.smoothed.size())
            curve += format_g(series.smoothed[k - DeathSeries::kSmoothRadius]);
        curve += "\n";
    }
    write_file(opt.out_dir + "/fit_curve.csv", curve);

    if (opt.plot) {
        tools::SvgPlot plot("Fit vs data", "day", "deaths/day");
        std::vector<double> xs(daily.size()), ys(daily.size());
        for (std::size_t k = 0; k < daily.size(); ++k) {
            xs[k] = static_cast<double>(k);
            ys[k] = daily[k] * config.population;
        }
        plot.add_series(xs, ys, "steelblue", "model");
        std::vector<double> dx(series.smoothed.size());
        for (std::size_t k = 0; k < series.smoothed.size(); ++k)
            dx[k] = static_cast<double>(k + DeathSeries::kSmoothRadius);
        plot.add_series(dx, series.smoothed, "firebrick", "data (7-day avg)");
        plot.write(opt.out_dir + "/fit.svg");
    }

    tools::write_manifest(opt.out_dir, command_echo("fit", opt), serialize_config(config),
                          {config.deaths_csv});
    std::cout << summary;
    return result.converged ? 0 : 4;
}

// --- frontier -----------------------------------------------------------

int cmd_frontier(const CliOptions& opt) {
    const RunConfig config = resolve_config(opt);
    const MRParams mr = calibrated_mr(config);
    const int workers = effective_workers(config);

    PolicyGrid grid;
    grid.step = config.grid_step;
    grid.intervals = config.grid_intervals;
    grid.interval_breaks = config.interval_breaks;

    std::vector<std::pair<std::string, SweepResult>> sweeps;
    if (config.grid_kind == "uniform" || config.grid_kind == "both") {
        grid.kind = LockdownPolicy::Kind::uniform;
        sweeps.emplace_back("uniform", frontier_sweep(mr, grid, workers, config.integration));
    }
    if (config.grid_kind == "targeted" || config.grid_kind == "both") {
        grid.kind = LockdownPolicy::Kind::targeted;
        sweeps.emplace_back("targeted", frontier_sweep(mr, grid, workers, config.integration));
    }

    std::string csv;
    for (std::size_t k = 0; k < sweeps.size(); ++k) {
        const std::string part = frontier_csv(mr, sweeps[k].second);
        csv += k == 0 ? part : part.substr(part.find('\n') + 1); // one shared header
    }
    write_file(opt.out_dir + "/frontier.csv", csv);

    std::vector<std::pair<std::string, const SweepResult*>> views;
    for (const auto& [name, sweep] : sweeps)
        views.emplace_back(name, &sweep);
    const std::string summary = frontier_summary(mr, views, config.gdp_budget);
    write_file(opt.out_dir + "/frontier_summary.txt", summary);
    std::cout << summary;

    std::string failures;
    for (const auto& [name, sweep] : sweeps)
        for (const auto& [policy, error] : sweep.failures)
            failures += name + "," + policy + "," + error + "\n";
    if (!failures.empty()) {
        write_file(opt.out_dir + "/failed_policies.csv", "kind,policy,error\n" + failures);
        std::cerr << "warning: some policies failed; see failed_policies.csv\n";
    }

    if (opt.plot) {
        tools::SvgPlot plot("Policy frontier", "gdp loss", "death rate");
        const char* colors[2] = {"steelblue", "seagreen"};
        for (std::size_t k = 0; k < sweeps.size(); ++k) {
            std::vector<double> xs, ys;
            for (const auto& p : sweeps[k].second.frontier) {
                xs.push_back(p.gdp_loss);
                ys.push_back(p.death_rate);
            }
            plot.add_series(xs, ys, colors[k % 2], sweeps[k].first);
        }
        plot.write(opt.out_dir + "/frontier.svg");
    }

    tools::write_manifest(opt.out_dir, command_echo("frontier", opt),
                          serialize_config(config), {});
    return 0;
}

// --- policy -------------------------------------------------------------

int cmd_policy(const CliOptions& opt) {
    const RunConfig config = resolve_config(opt);
    const MRParams mr = calibrated_mr(config);

    std::string outcomes = "policy_id,gdp_loss,death_rate,social_cost\n";
    std::vector<std::string> inputs;
    bool all_converged = true;

    for (const std::string& path : split_paths(config.policy_csv)) {
        const LockdownPolicy policy = load_policy_csv(path, mr);
        const FrontierPoint pt = evaluate_policy(mr, policy, config.integration);
        const std::string id = std::filesystem::path(path).stem().string();
        outcomes += id + "," + format_g(pt.gdp_loss) + "," + format_g(pt.death_rate) + "," +
                    format_g(pt.social_cost) + "\n";
        inputs.push_back(path);
    }

    const bool want_optimal = config.optimize || !config.chi_sweep.empty() || inputs.empty();
    if (want_optimal) {
        PolicyGrid grid;
        grid.kind = LockdownPolicy::Kind::targeted;
        grid.step = config.grid_step;
        grid.intervals = config.grid_intervals;
        grid.interval_breaks = config.interval_breaks;

        std::vector<double> chis = config.chi_sweep;
        if (chis.empty())
            chis.push_back(config.chi);
        for (double chi : chis) {
            const OptimalPolicyResult best =
                optimal_policy(mr, chi, grid, config.seed, config.integration);
            all_converged = all_converged && best.converged;
            outcomes += "optimal_chi_" + format_g(chi) + "," + format_g(best.point.gdp_loss) +
                        "," + format_g(best.point.death_rate) + "," +
                        format_g(best.point.social_cost) + "\n";
            std::cout << "chi=" << format_g(chi) << ": policy "
                      << best.point.policy.encode() << " gdp_loss "
                      << format_g(best.point.gdp_loss) << " death_rate "
                      << format_g(best.point.death_rate) << (best.converged ? "" : " [not converged]")
                      << "\n";
        }
    }

    write_file(opt.out_dir + "/policy_outcomes.csv", outcomes);
    tools::write_manifest(opt.out_dir, command_echo("policy", opt), serialize_config(config),
                          inputs);
    return all_converged ? 0 : 4;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SEQIHR epidemic-economics toolkit"};
    app.require_subcommand(1);

    CliOptions opt;
    int (*handlers[6])(const CliOptions&) = {cmd_simulate,  cmd_equilibrium, cmd_reproduction,
                                             cmd_fit,       cmd_frontier,    cmd_policy};
    const char* names[6] = {"simulate", "equilibrium", "reproduction",
                            "fit",      "frontier",    "policy"};
    const char* descriptions[6] = {
        "integrate the single-group model and write the trajectory",
        "print disease-free and pandemic steady states with residuals",
        "report R_0, R_C and the simulated threshold verdict",
        "fit contact-rate segments and the initial seed to a death series",
        "sweep lockdown policies and extract the Pareto frontier",
        "evaluate policy files and/or find the cost-optimal policy"};

    int selected = -1;
    for (int k = 0; k < 6; ++k) {
        CLI::App* cmd = app.add_subcommand(names[k], descriptions[k]);
        add_common_options(cmd, opt);
        cmd->callback([&selected, k]() { selected = k; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        return handlers[selected](opt);
    } catch (const seqihr::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const seqihr::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const seqihr::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const seqihr::ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
