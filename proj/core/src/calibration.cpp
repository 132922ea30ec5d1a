#include "seqihr/calibration.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "seqihr/errors.hpp"
#include "seqihr/integrator.hpp"
#include "seqihr/nelder_mead.hpp"

namespace seqihr {

ModelParams default_params() {
    ModelParams p;
    p.mu = 7.37 / 1000.0 / 365.0;
    p.pi_birth = p.mu; // births balance natural deaths at N(0)=1
    p.nu = 0.0;
    p.beta = BetaSchedule(0.2); // placeholder pending a fit
    p.eps_e = 0.0;
    p.eps_q = 0.0;
    p.eps_h = 0.8;
    p.s_r = 0.0;
    p.gamma_e = 1.0 / 14.0;
    p.gamma_i = 1.0 / 5.0;
    p.sigma_e = 1.0 / 6.0;
    p.sigma_q = 0.125 / 14.0; // 12.5% of a 14-day quarantine exit
    p.r_q = 0.875 / 14.0;
    p.d_i = 0.02 / 14.0; // 2% direct-death share, 14-day delay
    p.r_i = 0.98 / 14.0;
    p.d_h = 0.10 / 10.0; // 10% hospital fatality, 10-day stay
    p.r_h = 0.90 / 10.0;
    return p;
}

BetaSchedule baseline_2020_beta() {
    // Frozen shape calibration of the shipped defaults: spring peak ~2200
    // deaths/day near day 53, summer trough ~600, winter rise to ~2900 by
    // day 305, cumulative 377,883 over Mar-Dec at the default population.
    return BetaSchedule{{0.0, 0.4603}, {45.0, 0.0932}, {105.0, 0.1614}, {240.0, 0.1650}};
}

double baseline_2020_e0() {
    return 1.408e-5;
}

BetaSchedule baseline_unmitigated_beta() {
    return BetaSchedule(baseline_2020_beta().segments.front().value);
}

std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return static_cast<std::int64_t>(era) * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

std::string civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02u",
                  static_cast<long long>(y + (m <= 2)), m, d);
    return buf;
}

std::vector<double> moving_average7(const std::vector<double>& raw) {
    std::vector<double> out;
    if (raw.size() < 7)
        return out;
    out.reserve(raw.size() - 6);
    double window = 0.0;
    for (std::size_t k = 0; k < 7; ++k)
        window += raw[k];
    out.push_back(window / 7.0);
    for (std::size_t k = 7; k < raw.size(); ++k) {
        window += raw[k] - raw[k - 7];
        out.push_back(window / 7.0);
    }
    return out;
}

namespace {

std::int64_t parse_iso_date(const std::string& text, std::size_t line_no) {
    int y = 0;
    unsigned m = 0, d = 0;
    char extra = 0;
    if (std::sscanf(text.c_str(), "%d-%u-%u%c", &y, &m, &d, &extra) != 3 || m < 1 ||
        m > 12 || d < 1 || d > 31)
        throw DataError("line " + std::to_string(line_no) + ": invalid ISO date '" +
                        text + "'");
    return days_from_civil(y, m, d);
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return s.substr(b, e - b);
}

} // namespace

DeathSeries load_death_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open death CSV: " + path);

    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line))
        throw DataError(path + " is empty");
    ++line_no;
    {
        std::string header = trim(line);
        if (header != "date,deaths")
            throw DataError(path + ": expected header 'date,deaths', got '" + header + "'");
    }

    std::map<std::int64_t, double> rows;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty())
            continue;
        const std::size_t comma = t.find(',');
        if (comma == std::string::npos)
            throw DataError("line " + std::to_string(line_no) + ": missing comma");
        const std::int64_t date = parse_iso_date(trim(t.substr(0, comma)), line_no);
        const std::string value_text = trim(t.substr(comma + 1));
        long long value = 0;
        char extra = 0;
        if (std::sscanf(value_text.c_str(), "%lld%c", &value, &extra) != 1)
            throw DataError("line " + std::to_string(line_no) + ": invalid count '" +
                            value_text + "'");
        if (value < 0)
            throw DataError("line " + std::to_string(line_no) + ": negative deaths on " +
                            civil_from_days(date));
        if (rows.count(date))
            throw DataError("duplicate date " + civil_from_days(date));
        rows[date] = static_cast<double>(value);
    }
    if (rows.empty())
        throw DataError(path + " contains no data rows");

    DeathSeries series;
    const std::int64_t first = rows.begin()->first;
    const std::int64_t last = rows.rbegin()->first;
    for (std::int64_t day = first; day <= last; ++day) {
        series.dates.push_back(day);
        auto it = rows.find(day);
        if (it == rows.end()) {
            series.raw.push_back(0.0);
            series.filled_gaps.push_back(day);
        } else {
            series.raw.push_back(it->second);
        }
    }
    series.smoothed = moving_average7(series.raw);
    return series;
}

namespace {

ModelParams with_schedule(const ModelParams& base, const BetaSchedule& beta) {
    ModelParams p = base;
    p.beta = beta;
    return p;
}

std::vector<double> model_daily_counts(const ModelParams& params, double e0,
                                       double horizon, const FitOptions& opt) {
    CompartmentState x0;
    x0.s = 1.0 - e0;
    x0.e = e0;
    IntegrationConfig config;
    config.dt = opt.dt;
    config.horizon = horizon;
    const Trajectory traj = simulate(params, x0, config);
    std::vector<double> daily = daily_deaths(traj);
    for (double& v : daily)
        v *= opt.population;
    return daily;
}

} // namespace

double fit_rmse(const ModelParams& params_base, const DeathSeries& series,
                const BetaSchedule& beta, double e0, const FitOptions& opt) {
    if (series.smoothed.empty())
        throw DataError("fit: series too short for a 7-day moving average");
    const double horizon = static_cast<double>(series.raw.size());
    const std::vector<double> model =
        model_daily_counts(with_schedule(params_base, beta), e0, horizon, opt);

    double sq = 0.0;
    std::size_t count = 0;
    for (std::size_t j = 0; j < series.smoothed.size(); ++j) {
        const std::size_t day = j + DeathSeries::kSmoothRadius;
        if (day >= model.size())
            break;
        const double diff = model[day] - series.smoothed[j];
        sq += diff * diff;
        ++count;
    }
    return std::sqrt(sq / static_cast<double>(count));
}

FitResult fit(const ModelParams& params_base, const DeathSeries& series,
              const std::vector<double>& segment_breaks, const FitOptions& opt) {
    if (segment_breaks.empty())
        throw ConfigError("fit: need at least one segment break");
    if (segment_breaks.front() != 0.0)
        throw ConfigError("fit: first segment break must be day 0");
    for (std::size_t k = 1; k < segment_breaks.size(); ++k)
        if (segment_breaks[k] <= segment_breaks[k - 1])
            throw ConfigError("fit: segment breaks must be strictly increasing");
    if (!(opt.e0_min > 0.0 && opt.e0_max > opt.e0_min))
        throw ConfigError("fit: infeasible e0 bounds");
    if (series.smoothed.empty())
        throw DataError("fit: series too short for a 7-day moving average");

    const std::size_t n_seg = segment_breaks.size();
    const double log_lo = std::log10(opt.e0_min);
    const double log_hi = std::log10(opt.e0_max);

    auto decode = [&](const std::vector<double>& x, BetaSchedule& beta, double& e0) {
        beta.segments.clear();
        for (std::size_t k = 0; k < n_seg; ++k)
            beta.segments.push_back({segment_breaks[k], x[k]});
        e0 = std::pow(10.0, x[n_seg]);
    };

    auto objective = [&](const std::vector<double>& x) -> double {
        for (std::size_t k = 0; k < n_seg; ++k)
            if (!(x[k] >= 0.0 && x[k] <= 10.0))
                return std::numeric_limits<double>::infinity();
        if (!(x[n_seg] >= log_lo && x[n_seg] <= log_hi))
            return std::numeric_limits<double>::infinity();
        BetaSchedule beta;
        double e0 = 0.0;
        decode(x, beta, e0);
        try {
            return fit_rmse(params_base, series, beta, e0, opt);
        } catch (const NumericError&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    std::vector<double> x0(n_seg + 1);
    const double beta0 = params_base.beta.segments.front().value;
    for (std::size_t k = 0; k < n_seg; ++k)
        x0[k] = beta0 > 0.0 ? beta0 : 0.2;
    x0[n_seg] = 0.5 * (log_lo + log_hi);

    NelderMeadOptions nm;
    nm.max_evals = opt.max_evals;
    nm.restarts = opt.restarts;
    nm.seed = opt.seed;
    nm.initial_step.assign(n_seg, 0.08);
    nm.initial_step.push_back(0.8);
    const NelderMeadResult r = nelder_mead(objective, x0, nm);

    FitResult out;
    double e0 = 0.0;
    decode(r.x, out.beta_segments, e0);
    out.e0 = e0;
    out.rmse = r.fx;
    out.iterations = r.evaluations;
    out.converged = r.converged;

    const double horizon = static_cast<double>(series.raw.size());
    const std::vector<double> daily = model_daily_counts(
        with_schedule(params_base, out.beta_segments), e0, horizon, opt);
    double total = 0.0;
    for (double v : daily)
        total += v;
    out.total_deaths_model = total;
    return out;
}

} // namespace seqihr
