#ifndef SEQIHR_CALIBRATION_HPP
#define SEQIHR_CALIBRATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "seqihr/model.hpp"

namespace seqihr {

/// Canonical per-day rates mapped from the published duration/fraction
/// descriptions (quarantine 14 d; exposure-to-symptoms 6 d; symptoms-to-
/// hospital 5 d; 12.5% of quarantined hospitalized over a 14 d stay; 2% of
/// symptomatic exits are deaths with a 14 d delay; 10% hospital fatality
/// over a 10 d stay; hospitalized contact modifier 0.8; negligible 2020
/// vaccination; natural mortality 7.37 per 1000 per year; births balancing
/// natural deaths). beta is a placeholder single segment pending a fit.
ModelParams default_params();

/// Illustrative four-segment contact schedule reproducing the US 2020
/// two-wave daily-death shape (spring and winter peaks, ~378k cumulative
/// at the default population scale) together with its seed size.
BetaSchedule baseline_2020_beta();
double baseline_2020_e0();

/// Constant pre-mitigation contact rate: the spring segment of the 2020
/// schedule held over the whole horizon. This is the no-policy
/// counterfactual for lockdown studies — the 2020 schedule already embeds
/// the mitigation it was fitted to, so policies must act on the
/// unmitigated epidemic instead.
BetaSchedule baseline_unmitigated_beta();

/// Default absolute population used to scale normalized deaths to counts.
inline constexpr double kDefaultPopulation = 331000000.0;

/// Daily death counts on a contiguous calendar-day grid.
struct DeathSeries {
    std::vector<std::int64_t> dates; ///< days since 1970-01-01
    std::vector<double> raw;         ///< deaths per day, >= 0
    std::vector<double> smoothed;    ///< 7-day centered moving average
    std::vector<std::int64_t> filled_gaps; ///< dates inserted as zero

    /// smoothed[k] corresponds to dates[k + kSmoothRadius].
    static constexpr std::size_t kSmoothRadius = 3;
};

/// mean over each full 7-day window; output length = input length - 6.
std::vector<double> moving_average7(const std::vector<double>& raw);

/// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(int year, unsigned month, unsigned day);
std::string civil_from_days(std::int64_t days); ///< ISO-8601

/// Reads a `date,deaths` CSV (ISO-8601 dates, nonnegative integers).
/// Rows may arrive unsorted; duplicate dates are an error; missing days are
/// zero-filled and flagged. Throws DataError with the offending line.
DeathSeries load_death_csv(const std::string& path);

struct FitOptions {
    double population = kDefaultPopulation; ///< scale for model death counts
    double e0_min = 1e-9;                   ///< normalized initial exposed bounds
    double e0_max = 1e-3;
    double dt = 0.25;
    std::uint64_t seed = 0;
    int max_evals = 2000; ///< per restart
    int restarts = 5;
};

struct FitResult {
    BetaSchedule beta_segments;
    double e0 = 0.0;
    double rmse = 0.0;                ///< deaths/day against the smoothed series
    double total_deaths_model = 0.0;  ///< model cumulative deaths over the horizon
    int iterations = 0;               ///< objective evaluations
    bool converged = false;
};

/// Least-squares fit of the per-segment contact rates and the initial
/// exposed mass to the smoothed series, holding every other rate at
/// params_base. segment_breaks lists segment start days; the first must be
/// 0 (day 0 = first series date). Non-convergence returns best-so-far with
/// converged=false.
FitResult fit(const ModelParams& params_base, const DeathSeries& series,
              const std::vector<double>& segment_breaks, const FitOptions& options = {});

/// The fit objective for a candidate schedule, exposed so a fitted result
/// can be re-scored: RMSE between model daily deaths (scaled to counts)
/// and the smoothed series.
double fit_rmse(const ModelParams& params_base, const DeathSeries& series,
                const BetaSchedule& beta, double e0, const FitOptions& options = {});

} // namespace seqihr

#endif
