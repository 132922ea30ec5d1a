#include "seqihr/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "seqihr/errors.hpp"

namespace seqihr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double guard(double v) {
    return std::isnan(v) ? kInf : v;
}

struct Simplex {
    std::vector<std::vector<double>> x; ///< n+1 vertices
    std::vector<double> fx;

    std::size_t dim() const { return x.front().size(); }

    void order() {
        std::vector<std::size_t> idx(x.size());
        for (std::size_t k = 0; k < idx.size(); ++k)
            idx[k] = k;
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
        std::vector<std::vector<double>> nx(x.size());
        std::vector<double> nf(x.size());
        for (std::size_t k = 0; k < idx.size(); ++k) {
            nx[k] = std::move(x[idx[k]]);
            nf[k] = fx[idx[k]];
        }
        x = std::move(nx);
        fx = std::move(nf);
    }

    double spread() const {
        double s = 0.0;
        for (std::size_t v = 1; v < x.size(); ++v)
            for (std::size_t j = 0; j < dim(); ++j)
                s = std::max(s, std::abs(x[v][j] - x[0][j]));
        return s;
    }
};

} // namespace

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& x0,
                             const NelderMeadOptions& opt) {
    if (x0.empty())
        throw ConfigError("nelder_mead: empty start point");
    const std::size_t n = x0.size();

    std::vector<double> base_step(n);
    for (std::size_t j = 0; j < n; ++j) {
        if (!opt.initial_step.empty())
            base_step[j] = opt.initial_step[j];
        else
            base_step[j] = x0[j] != 0.0 ? 0.05 * std::abs(x0[j]) : 0.01;
    }

    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> jitter(0.5, 1.5);

    NelderMeadResult best;
    best.x = x0;
    best.fx = guard(f(x0));
    best.evaluations = 1;

    const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

    for (int restart = 0; restart < std::max(1, opt.restarts); ++restart) {
        Simplex s;
        s.x.assign(n + 1, best.x);
        for (std::size_t v = 1; v <= n; ++v) {
            const double scale = restart == 0 && v == 1 ? 1.0 : jitter(rng);
            s.x[v][v - 1] += base_step[v - 1] * scale;
        }
        s.fx.resize(n + 1);
        int evals = 0;
        for (std::size_t v = 0; v <= n; ++v) {
            s.fx[v] = guard(f(s.x[v]));
            ++evals;
        }

        while (evals < opt.max_evals) {
            s.order();
            if (s.spread() <= opt.simplex_tol) {
                best.converged = true;
                break;
            }

            std::vector<double> centroid(n, 0.0);
            for (std::size_t v = 0; v < n; ++v)
                for (std::size_t j = 0; j < n; ++j)
                    centroid[j] += s.x[v][j] / static_cast<double>(n);

            auto along = [&](double coef) {
                std::vector<double> p(n);
                for (std::size_t j = 0; j < n; ++j)
                    p[j] = centroid[j] + coef * (centroid[j] - s.x[n][j]);
                return p;
            };

            const auto xr = along(alpha);
            const double fr = guard(f(xr));
            ++evals;

            if (fr < s.fx[0]) {
                const auto xe = along(gamma);
                const double fe = guard(f(xe));
                ++evals;
                if (fe < fr) {
                    s.x[n] = xe;
                    s.fx[n] = fe;
                } else {
                    s.x[n] = xr;
                    s.fx[n] = fr;
                }
            } else if (fr < s.fx[n - 1]) {
                s.x[n] = xr;
                s.fx[n] = fr;
            } else {
                const bool outside = fr < s.fx[n];
                const auto xc = along(outside ? rho : -rho);
                const double fc = guard(f(xc));
                ++evals;
                if (fc < std::min(fr, s.fx[n])) {
                    s.x[n] = xc;
                    s.fx[n] = fc;
                } else {
                    for (std::size_t v = 1; v <= n; ++v) {
                        for (std::size_t j = 0; j < n; ++j)
                            s.x[v][j] = s.x[0][j] + sigma * (s.x[v][j] - s.x[0][j]);
                        s.fx[v] = guard(f(s.x[v]));
                        ++evals;
                    }
                }
            }
        }

        s.order();
        best.evaluations += evals;
        if (s.fx[0] < best.fx) {
            best.fx = s.fx[0];
            best.x = s.x[0];
        }
    }
    return best;
}

} // namespace seqihr
