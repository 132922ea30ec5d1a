#ifndef SEQIHR_CONFIG_HPP
#define SEQIHR_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "seqihr/calibration.hpp"
#include "seqihr/integrator.hpp"
#include "seqihr/model.hpp"
#include "seqihr/multirisk.hpp"

namespace seqihr {

/// Everything a run needs, serializable to and from a flat key=value file
/// (UTF-8, '#' comments, unknown keys rejected). Model keys use the
/// ModelParams field names verbatim; group economics use group.<id>.<field>.
struct RunConfig {
    ModelParams model;
    IntegrationConfig integration;

    // calibration
    std::string deaths_csv;
    std::vector<double> segment_breaks{0.0};
    double population = kDefaultPopulation;
    double e0 = 1e-4; ///< normalized initial exposed seed

    // multirisk economics
    std::string group_order = "y,m,o";
    std::vector<MRGroupParams> groups;
    double theta = 1.0;
    double mixing = 1.0;
    double chi = 20.0;
    double interest_rate = 0.01 / 365.0;
    double w_ref = 1.0;
    bool normalize_shares = false;
    bool discount_positive_exponent = false;

    // policy grid
    std::string grid_kind = "both"; ///< uniform | targeted | both
    double grid_step = 0.05;
    int grid_intervals = 1;
    std::vector<double> interval_breaks{0.0};
    double gdp_budget = 0.035;

    // policy command inputs
    std::string policy_csv; ///< comma-separated policy file list
    std::vector<double> chi_sweep;
    bool optimize = false;

    // runtime
    int workers = 0; ///< 0 = hardware concurrency
    std::uint64_t seed = 0;
    double rc_day = 0.0; ///< day at which the reproduction command reports R_C

    RunConfig();

    /// Assembled multirisk parameter block (fatality scaling not yet solved).
    MRParams mr_params() const;
};

/// Parses config text; throws ConfigError naming unknown or malformed keys.
RunConfig parse_config_text(const std::string& text);

/// Reads and parses a config file; throws ConfigError on IO failure.
RunConfig load_config(const std::string& path);

/// Full-precision serialization; parse_config_text(serialize_config(c))
/// reproduces c byte-for-byte on reserialization.
std::string serialize_config(const RunConfig& config);

/// Parses a policy file (CSV `group,start_day,level`) against the config's
/// group table. Throws DataError on malformed rows.
LockdownPolicy load_policy_csv(const std::string& path, const MRParams& mr);

} // namespace seqihr

#endif
