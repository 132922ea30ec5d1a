#include "seqihr/model.hpp"

#include <cmath>
#include <string>

#include "seqihr/errors.hpp"

namespace seqihr {

double BetaSchedule::at(double t) const {
    if (segments.empty())
        throw ConfigError("beta schedule has no segments");
    double value = segments.front().value;
    for (const auto& seg : segments) {
        if (seg.start_day <= t)
            value = seg.value;
        else
            break;
    }
    return value;
}

void BetaSchedule::validate() const {
    if (segments.empty())
        throw ConfigError("beta schedule has no segments");
    if (segments.front().start_day != 0.0)
        throw ConfigError("beta schedule must start at day 0");
    double prev = -1.0;
    for (const auto& seg : segments) {
        if (seg.value < 0.0)
            throw ConfigError("beta value must be >= 0, got " + std::to_string(seg.value));
        if (seg.start_day <= prev)
            throw ConfigError("beta segment starts must be strictly increasing");
        prev = seg.start_day;
    }
}

void ModelParams::validate() const {
    auto require_nonneg = [](double v, const char* name) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw ConfigError(std::string(name) + " must be a finite nonnegative rate");
    };
    require_nonneg(pi_birth, "pi_birth");
    require_nonneg(mu, "mu");
    require_nonneg(nu, "nu");
    require_nonneg(s_r, "s_r");
    require_nonneg(gamma_e, "gamma_e");
    require_nonneg(gamma_i, "gamma_i");
    require_nonneg(r_i, "r_i");
    require_nonneg(r_h, "r_h");
    require_nonneg(r_q, "r_q");
    require_nonneg(sigma_e, "sigma_e");
    require_nonneg(sigma_q, "sigma_q");
    require_nonneg(d_i, "d_i");
    require_nonneg(d_h, "d_h");

    auto require_unit = [](double v, const char* name) {
        if (!(v >= 0.0 && v <= 1.0))
            throw ConfigError(std::string(name) + " must lie in [0,1]");
    };
    require_unit(eps_e, "eps_e");
    require_unit(eps_q, "eps_q");
    require_unit(eps_h, "eps_h");

    beta.validate();
}

double force_of_infection(const ModelParams& p, const CompartmentState& x) {
    const double beta = p.beta.at(x.t);
    return beta * (x.i + p.eps_e * x.e + p.eps_q * x.q + p.eps_h * x.h);
}

Derivative rhs(const ModelParams& p, const CompartmentState& x) {
    const double n = x.n();
    if (n == 0.0)
        throw NumericError("rhs: total population is zero");

    const auto m = OutflowCoefficients::from(p);
    const double infection = x.s * force_of_infection(p, x) / n;

    Derivative dx;
    dx.ds = p.pi_birth - infection - m.m_s * x.s + p.s_r * x.r;
    dx.de = infection - m.m_e * x.e;
    dx.di = p.sigma_e * x.e - m.m_i * x.i;
    dx.dq = p.gamma_e * x.e - m.m_q * x.q;
    dx.dh = p.gamma_i * x.i + p.sigma_q * x.q - m.m_h * x.h;
    dx.dr = p.nu * x.s + p.r_i * x.i + p.r_h * x.h - m.m_r * x.r;
    if (!p.omit_rq_recovery)
        dx.dr += p.r_q * x.q;
    dx.dd = p.d_i * x.i + p.d_h * x.h;
    return dx;
}

double mass_balance(const ModelParams& p, const CompartmentState& x, const Derivative& dx) {
    const double dn = dx.ds + dx.de + dx.di + dx.dq + dx.dh + dx.dr;
    return dn - (p.pi_birth - p.mu * x.n() - p.d_i * x.i - p.d_h * x.h);
}

} // namespace seqihr
