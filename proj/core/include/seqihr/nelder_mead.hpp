#ifndef SEQIHR_NELDER_MEAD_HPP
#define SEQIHR_NELDER_MEAD_HPP

#include <cstdint>
#include <functional>
#include <vector>

namespace seqihr {

struct NelderMeadOptions {
    double simplex_tol = 1e-8; ///< converged when max vertex spread <= this
    int max_evals = 2000;      ///< objective-evaluation budget per restart
    int restarts = 5;          ///< jittered simplices, each seeded at the best-so-far
    std::uint64_t seed = 0;    ///< jitter rng seed (restarts are deterministic)
    std::vector<double> initial_step; ///< per-coordinate; empty = auto from x0
};

struct NelderMeadResult {
    std::vector<double> x;
    double fx = 0.0;
    int evaluations = 0;
    bool converged = false; ///< simplex collapsed below tolerance at least once
};

/// Derivative-free simplex minimization (reflection / expansion /
/// contraction / shrink). The objective may return +inf to reject a point.
/// The best value is nonincreasing across restarts.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& x0,
                             const NelderMeadOptions& options = {});

} // namespace seqihr

#endif
