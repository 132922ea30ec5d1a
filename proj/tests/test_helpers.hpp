#ifndef SEQIHR_TEST_HELPERS_HPP
#define SEQIHR_TEST_HELPERS_HPP

#include <array>
#include <cmath>
#include <random>

#include "seqihr/calibration.hpp"
#include "seqihr/model.hpp"
#include "seqihr/reproduction.hpp"

namespace seqihr::testing {

/// Independent finite-difference Jacobian oracle: central differences at
/// steps h and h/2 combined by Richardson extrapolation. Never shares code
/// with the analytic Jacobian it checks.
inline Matrix6 fd_jacobian(const ModelParams& params, const CompartmentState& state,
                           double rel_step = 1e-6) {
    auto pack = [](const CompartmentState& x) {
        return std::array<double, 6>{x.s, x.e, x.i, x.q, x.h, x.r};
    };
    auto unpack = [&](const std::array<double, 6>& v) {
        CompartmentState x = state;
        x.s = v[0];
        x.e = v[1];
        x.i = v[2];
        x.q = v[3];
        x.h = v[4];
        x.r = v[5];
        return x;
    };
    auto eval = [&](const std::array<double, 6>& v) {
        const Derivative d = rhs(params, unpack(v));
        return std::array<double, 6>{d.ds, d.de, d.di, d.dq, d.dh, d.dr};
    };

    const std::array<double, 6> x0 = pack(state);
    Matrix6 jac{};
    for (int c = 0; c < 6; ++c) {
        const double h = rel_step * std::max(1.0, std::abs(x0[c]));
        auto central = [&](double step) {
            std::array<double, 6> xp = x0, xm = x0;
            xp[c] += step;
            xm[c] -= step;
            const auto fp = eval(xp);
            const auto fm = eval(xm);
            std::array<double, 6> col{};
            for (int r = 0; r < 6; ++r)
                col[r] = (fp[r] - fm[r]) / (2.0 * step);
            return col;
        };
        const auto d1 = central(h);
        const auto d2 = central(0.5 * h);
        for (int r = 0; r < 6; ++r)
            jac[r][c] = (4.0 * d2[r] - d1[r]) / 3.0;
    }
    return jac;
}

/// Random rates within +-50% of the canonical defaults, vaccination off.
inline ModelParams random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.5, 1.5);
    ModelParams p = default_params();
    p.mu *= u(rng);
    p.pi_birth = p.mu;
    p.nu = 0.0;
    p.beta = BetaSchedule(0.2 * u(rng));
    p.eps_h = std::min(1.0, p.eps_h * u(rng));
    p.gamma_e *= u(rng);
    p.gamma_i *= u(rng);
    p.r_i *= u(rng);
    p.r_h *= u(rng);
    p.r_q *= u(rng);
    p.sigma_e *= u(rng);
    p.sigma_q *= u(rng);
    p.d_i *= u(rng);
    p.d_h *= u(rng);
    return p;
}

/// Random strictly positive compartment state with N near 1.
inline CompartmentState random_state(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    CompartmentState x;
    x.s = 0.2 + 0.6 * u(rng);
    x.e = 0.05 * u(rng);
    x.i = 0.05 * u(rng);
    x.q = 0.05 * u(rng);
    x.h = 0.05 * u(rng);
    x.r = 0.3 * u(rng);
    x.d = 0.01 * u(rng);
    x.t = 0.0;
    return x;
}

} // namespace seqihr::testing

#endif
