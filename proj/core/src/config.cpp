#include "seqihr/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "seqihr/errors.hpp"

namespace seqihr {

RunConfig::RunConfig() : model(default_params()), groups(default_groups()) {
    model.beta = baseline_2020_beta();
    e0 = baseline_2020_e0();
}

MRParams RunConfig::mr_params() const {
    MRParams mr;
    mr.epi = model;
    mr.groups = groups;
    mr.theta = theta;
    mr.mixing = mixing;
    mr.interest_rate = interest_rate;
    mr.chi = chi;
    mr.w_ref = w_ref;
    mr.seed_e0 = e0;
    mr.discount_positive_exponent = discount_positive_exponent;
    if (normalize_shares)
        mr.normalize_shares();
    return mr;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size())
            throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': invalid number '" + value + "'");
    }
}

long long parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(value, &pos);
        if (pos != value.size())
            throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': invalid integer '" + value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1")
        return true;
    if (value == "false" || value == "0")
        return false;
    throw ConfigError("key '" + key + "': expected true/false, got '" + value + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    if (trim(value).empty())
        return out;
    for (const auto& item : split(value, ','))
        out.push_back(parse_double(key, trim(item)));
    return out;
}

BetaSchedule parse_beta(const std::string& value) {
    BetaSchedule beta;
    for (const auto& item : split(value, ',')) {
        const auto parts = split(trim(item), ':');
        if (parts.size() != 2)
            throw ConfigError("key 'beta': expected start:value segments, got '" + item + "'");
        beta.segments.push_back(
            {parse_double("beta", trim(parts[0])), parse_double("beta", trim(parts[1]))});
    }
    beta.validate();
    return beta;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_list(const std::vector<double>& v) {
    std::string out;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (k)
            out += ",";
        out += fmt(v[k]);
    }
    return out;
}

std::string fmt_beta(const BetaSchedule& beta) {
    std::string out;
    for (std::size_t k = 0; k < beta.segments.size(); ++k) {
        if (k)
            out += ",";
        out += fmt(beta.segments[k].start_day) + ":" + fmt(beta.segments[k].value);
    }
    return out;
}

} // namespace

RunConfig parse_config_text(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> pairs;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected key=value, got '" + line + "'");
        pairs.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }

    RunConfig c;

    // Group table first: deciding the group order lets group.<id>.<field>
    // keys resolve regardless of file order.
    for (const auto& [key, value] : pairs) {
        if (key == "groups") {
            c.group_order = value;
            c.groups.clear();
            for (const auto& id : split(value, ',')) {
                MRGroupParams g;
                g.id = trim(id);
                if (g.id.empty())
                    throw ConfigError("key 'groups': empty group id");
                // carry defaults when the id matches the built-in table
                for (const auto& dg : default_groups())
                    if (dg.id == g.id)
                        g = dg;
                c.groups.push_back(g);
            }
        }
    }

    auto group_field = [&](const std::string& key) -> double* {
        const auto parts = split(key, '.');
        if (parts.size() != 3 || parts[0] != "group")
            return nullptr;
        for (auto& g : c.groups) {
            if (g.id != parts[1])
                continue;
            if (parts[2] == "n")
                return &g.n;
            if (parts[2] == "w")
                return &g.w;
            if (parts[2] == "lbar")
                return &g.lbar;
            if (parts[2] == "ifr")
                return &g.ifr;
            if (parts[2] == "kappa")
                return &g.kappa;
            if (parts[2] == "delta")
                return &g.delta;
            throw ConfigError("unknown group field '" + parts[2] + "' in key '" + key + "'");
        }
        throw ConfigError("key '" + key + "' names a group not listed in 'groups'");
    };

    for (const auto& [key, value] : pairs) {
        if (key == "groups")
            continue;
        if (double* field = group_field(key)) {
            *field = parse_double(key, value);
            continue;
        }

        if (key == "pi_birth")
            c.model.pi_birth = parse_double(key, value);
        else if (key == "mu")
            c.model.mu = parse_double(key, value);
        else if (key == "nu")
            c.model.nu = parse_double(key, value);
        else if (key == "beta")
            c.model.beta = parse_beta(value);
        else if (key == "eps_e")
            c.model.eps_e = parse_double(key, value);
        else if (key == "eps_q")
            c.model.eps_q = parse_double(key, value);
        else if (key == "eps_h")
            c.model.eps_h = parse_double(key, value);
        else if (key == "s_r")
            c.model.s_r = parse_double(key, value);
        else if (key == "gamma_e")
            c.model.gamma_e = parse_double(key, value);
        else if (key == "gamma_i")
            c.model.gamma_i = parse_double(key, value);
        else if (key == "r_i")
            c.model.r_i = parse_double(key, value);
        else if (key == "r_h")
            c.model.r_h = parse_double(key, value);
        else if (key == "r_q")
            c.model.r_q = parse_double(key, value);
        else if (key == "sigma_e")
            c.model.sigma_e = parse_double(key, value);
        else if (key == "sigma_q")
            c.model.sigma_q = parse_double(key, value);
        else if (key == "d_i")
            c.model.d_i = parse_double(key, value);
        else if (key == "d_h")
            c.model.d_h = parse_double(key, value);
        else if (key == "omit_rq_recovery")
            c.model.omit_rq_recovery = parse_bool(key, value);
        else if (key == "dt")
            c.integration.dt = parse_double(key, value);
        else if (key == "horizon")
            c.integration.horizon = parse_double(key, value);
        else if (key == "clamp_negatives")
            c.integration.clamp_negatives = parse_bool(key, value);
        else if (key == "deaths_csv")
            c.deaths_csv = value;
        else if (key == "segment_breaks")
            c.segment_breaks = parse_list(key, value);
        else if (key == "population")
            c.population = parse_double(key, value);
        else if (key == "e0")
            c.e0 = parse_double(key, value);
        else if (key == "theta")
            c.theta = parse_double(key, value);
        else if (key == "mixing")
            c.mixing = parse_double(key, value);
        else if (key == "chi")
            c.chi = parse_double(key, value);
        else if (key == "interest_rate")
            c.interest_rate = parse_double(key, value);
        else if (key == "w_ref")
            c.w_ref = parse_double(key, value);
        else if (key == "normalize_shares")
            c.normalize_shares = parse_bool(key, value);
        else if (key == "discount_positive_exponent")
            c.discount_positive_exponent = parse_bool(key, value);
        else if (key == "grid_kind") {
            if (value != "uniform" && value != "targeted" && value != "both")
                throw ConfigError("grid_kind must be uniform, targeted or both");
            c.grid_kind = value;
        } else if (key == "grid_step")
            c.grid_step = parse_double(key, value);
        else if (key == "grid_intervals")
            c.grid_intervals = static_cast<int>(parse_int(key, value));
        else if (key == "interval_breaks")
            c.interval_breaks = parse_list(key, value);
        else if (key == "gdp_budget")
            c.gdp_budget = parse_double(key, value);
        else if (key == "policy_csv")
            c.policy_csv = value;
        else if (key == "chi_sweep")
            c.chi_sweep = parse_list(key, value);
        else if (key == "optimize")
            c.optimize = parse_bool(key, value);
        else if (key == "workers")
            c.workers = static_cast<int>(parse_int(key, value));
        else if (key == "seed")
            c.seed = static_cast<std::uint64_t>(parse_int(key, value));
        else if (key == "rc_day")
            c.rc_day = parse_double(key, value);
        else
            throw ConfigError("unknown config key '" + key + "'");
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string serialize_config(const RunConfig& c) {
    std::string out;
    auto emit = [&](const std::string& key, const std::string& value) {
        out += key + " = " + value + "\n";
    };

    emit("pi_birth", fmt(c.model.pi_birth));
    emit("mu", fmt(c.model.mu));
    emit("nu", fmt(c.model.nu));
    emit("beta", fmt_beta(c.model.beta));
    emit("eps_e", fmt(c.model.eps_e));
    emit("eps_q", fmt(c.model.eps_q));
    emit("eps_h", fmt(c.model.eps_h));
    emit("s_r", fmt(c.model.s_r));
    emit("gamma_e", fmt(c.model.gamma_e));
    emit("gamma_i", fmt(c.model.gamma_i));
    emit("r_i", fmt(c.model.r_i));
    emit("r_h", fmt(c.model.r_h));
    emit("r_q", fmt(c.model.r_q));
    emit("sigma_e", fmt(c.model.sigma_e));
    emit("sigma_q", fmt(c.model.sigma_q));
    emit("d_i", fmt(c.model.d_i));
    emit("d_h", fmt(c.model.d_h));
    emit("omit_rq_recovery", c.model.omit_rq_recovery ? "true" : "false");

    emit("dt", fmt(c.integration.dt));
    emit("horizon", fmt(c.integration.horizon));
    emit("clamp_negatives", c.integration.clamp_negatives ? "true" : "false");

    emit("deaths_csv", c.deaths_csv);
    emit("segment_breaks", fmt_list(c.segment_breaks));
    emit("population", fmt(c.population));
    emit("e0", fmt(c.e0));

    emit("groups", c.group_order);
    for (const auto& g : c.groups) {
        emit("group." + g.id + ".n", fmt(g.n));
        emit("group." + g.id + ".w", fmt(g.w));
        emit("group." + g.id + ".lbar", fmt(g.lbar));
        emit("group." + g.id + ".ifr", fmt(g.ifr));
        emit("group." + g.id + ".kappa", fmt(g.kappa));
        emit("group." + g.id + ".delta", fmt(g.delta));
    }
    emit("theta", fmt(c.theta));
    emit("mixing", fmt(c.mixing));
    emit("chi", fmt(c.chi));
    emit("interest_rate", fmt(c.interest_rate));
    emit("w_ref", fmt(c.w_ref));
    emit("normalize_shares", c.normalize_shares ? "true" : "false");
    emit("discount_positive_exponent", c.discount_positive_exponent ? "true" : "false");

    emit("grid_kind", c.grid_kind);
    emit("grid_step", fmt(c.grid_step));
    emit("grid_intervals", std::to_string(c.grid_intervals));
    emit("interval_breaks", fmt_list(c.interval_breaks));
    emit("gdp_budget", fmt(c.gdp_budget));

    emit("policy_csv", c.policy_csv);
    emit("chi_sweep", fmt_list(c.chi_sweep));
    emit("optimize", c.optimize ? "true" : "false");

    emit("workers", std::to_string(c.workers));
    emit("seed", std::to_string(c.seed));
    emit("rc_day", fmt(c.rc_day));
    return out;
}

LockdownPolicy load_policy_csv(const std::string& path, const MRParams& mr) {
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open policy file: " + path);

    LockdownPolicy policy;
    policy.kind = LockdownPolicy::Kind::targeted;
    policy.schedules.assign(mr.groups.size(), {});

    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line))
        throw DataError(path + " is empty");
    ++line_no;
    if (trim(line) != "group,start_day,level")
        throw DataError(path + ": expected header 'group,start_day,level'");

    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty())
            continue;
        const auto parts = split(t, ',');
        if (parts.size() != 3)
            throw DataError(path + " line " + std::to_string(line_no) +
                            ": expected group,start_day,level");
        const std::size_t g = mr.group_index(trim(parts[0]));
        policy.schedules[g].push_back({parse_double("start_day", trim(parts[1])),
                                       parse_double("level", trim(parts[2]))});
    }
    for (std::size_t g = 0; g < policy.schedules.size(); ++g)
        if (policy.schedules[g].empty())
            policy.schedules[g] = {{0.0, 0.0}};
    policy.validate(mr);
    return policy;
}

} // namespace seqihr
