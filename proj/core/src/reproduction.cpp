#include "seqihr/reproduction.hpp"

#include <cmath>
#include <vector>

#include "seqihr/equilibria.hpp"
#include "seqihr/errors.hpp"
#include "seqihr/integrator.hpp"

namespace seqihr {

Matrix6 jacobian(const ModelParams& p, const CompartmentState& x) {
    const double n = x.n();
    if (n == 0.0)
        throw NumericError("jacobian: total population is zero");

    const auto m = OutflowCoefficients::from(p);
    const double beta = p.beta.at(x.t);
    const double big_l = force_of_infection(p, x);
    const double sn = x.s / n;
    const double sl_nn = x.s * big_l / (n * n);

    // Partial derivatives of the infection term S*L/N (ordering S,E,I,Q,H,R).
    const double inf_d[6] = {
        big_l / n - sl_nn,           // dS
        beta * p.eps_e * sn - sl_nn, // dE
        beta * sn - sl_nn,           // dI
        beta * p.eps_q * sn - sl_nn, // dQ
        beta * p.eps_h * sn - sl_nn, // dH
        -sl_nn,                      // dR
    };

    Matrix6 j{};
    for (int c = 0; c < 6; ++c) {
        j[0][c] = -inf_d[c];
        j[1][c] = inf_d[c];
    }
    j[0][0] -= m.m_s;
    j[0][5] += p.s_r;
    j[1][1] -= m.m_e;

    j[2][1] = p.sigma_e;
    j[2][2] = -m.m_i;

    j[3][1] = p.gamma_e;
    j[3][3] = -m.m_q;

    j[4][2] = p.gamma_i;
    j[4][3] = p.sigma_q;
    j[4][4] = -m.m_h;

    j[5][0] = p.nu;
    j[5][2] = p.r_i;
    if (!p.omit_rq_recovery)
        j[5][3] = p.r_q;
    j[5][4] = p.r_h;
    j[5][5] = -m.m_r;
    return j;
}

double control_reproduction_number(const ModelParams& p, const CompartmentState& x) {
    const double n = x.n();
    if (n <= 0.0)
        throw NumericError("control reproduction number: total population is zero");

    const double beta = p.beta.at(x.t);
    const auto m = OutflowCoefficients::from(p);
    const auto a = EquilibriumCoefficients::from(p, beta);
    const double big_l = force_of_infection(p, x);

    const double numerator = p.mu * a.alpha_i * n + a.alpha_s * big_l;
    const double denominator =
        p.mu * a.alpha_s * n + p.mu * a.alpha_s * big_l / m.m_s +
        (big_l * x.s / n) *
            (p.r_i + p.r_h * a.alpha_h +
             p.mu * (1.0 + a.alpha_e + a.alpha_q + a.alpha_h));
    if (!(denominator > 0.0))
        throw NumericError("control reproduction number: nonpositive denominator");
    return (x.s / n) * numerator / denominator;
}

double basic_reproduction_number(const ModelParams& p) {
    return control_reproduction_number(p, disease_free_equilibrium(p).state);
}

double threshold_growth_rate(const ModelParams& params) {
    // Normalized disease-free start: no vaccination, inflow balancing natural
    // deaths so the population stays at 1.
    ModelParams p = params;
    p.nu = 0.0;
    p.pi_birth = p.mu;
    p.validate();

    constexpr double seed = 1e-8;
    CompartmentState x0;
    x0.s = 1.0 - seed;
    x0.e = seed;

    IntegrationConfig config;
    config.dt = 0.25;
    config.horizon = 60.0;
    const Trajectory traj = simulate(p, x0, config);

    // Log-linear slope of E+I over days 30..60; by then the fast transients
    // of the seeding have washed out and the dominant mode carries E+I.
    std::vector<double> ts, logs;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        if (traj.times[k] < 30.0)
            continue;
        const double mass = traj.states[k].e + traj.states[k].i;
        if (!(mass > 0.0) || !std::isfinite(mass))
            throw NumericError("threshold probe: infective mass vanished or diverged");
        ts.push_back(traj.times[k]);
        logs.push_back(std::log(mass));
    }

    const double n = static_cast<double>(ts.size());
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        st += ts[k];
        sy += logs[k];
        stt += ts[k] * ts[k];
        sty += ts[k] * logs[k];
    }
    return (n * sty - st * sy) / (n * stt - st * st);
}

ReproductionReport reproduction_report(const ModelParams& params,
                                       const CompartmentState& state) {
    ReproductionReport rep;
    rep.r_c = control_reproduction_number(params, state);
    rep.r_0 = basic_reproduction_number(params);
    rep.growth_rate = threshold_growth_rate(params);

    auto sgn = [](double v) { return v > 1e-6 ? 1 : (v < -1e-6 ? -1 : 0); };
    rep.threshold_consistent = sgn(rep.r_0 - 1.0) == sgn(rep.growth_rate);
    return rep;
}

} // namespace seqihr
