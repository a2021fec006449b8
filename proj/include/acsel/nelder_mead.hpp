#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <vector>

namespace acsel {

struct NelderMeadOptions {
    int max_iters = 2000;
    double tol = 1e-8;          ///< relative spread of simplex objective values
    double initial_step = 0.1;  ///< relative edge length of the initial simplex
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    bool converged = false;
    long n_evals = 0;
};

/// Deterministic Nelder-Mead minimization of f starting from x0.
/// Standard reflection/expansion/contraction/shrink coefficients; stops
/// when the simplex objective spread falls below tol relative to the best
/// value, or after max_iters iterations.
inline NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                    const std::vector<double>& x0,
                                    const NelderMeadOptions& opts = {}) {
    const std::size_t d = x0.size();
    NelderMeadResult res;
    res.x = x0;
    if (d == 0) return res;

    std::vector<std::vector<double>> simplex(d + 1, x0);
    std::vector<double> fv(d + 1);
    for (std::size_t i = 0; i < d; ++i) {
        double step = opts.initial_step * std::max(1.0, std::fabs(x0[i]));
        simplex[i + 1][i] += step;
    }
    for (std::size_t i = 0; i <= d; ++i) fv[i] = f(simplex[i]);
    res.n_evals = static_cast<long>(d + 1);

    std::vector<std::size_t> order(d + 1);
    std::vector<double> centroid(d), xr(d), xe(d), xc(d);

    for (int iter = 0; iter < opts.max_iters; ++iter) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t best = order[0], worst = order[d], second = order[d - 1];

        const double spread = std::fabs(fv[worst] - fv[best]);
        if (spread <= opts.tol * (std::fabs(fv[best]) + opts.tol)) {
            res.converged = true;
            break;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i <= d; ++i) {
            if (i == worst) continue;
            for (std::size_t k = 0; k < d; ++k) centroid[k] += simplex[i][k];
        }
        for (std::size_t k = 0; k < d; ++k) centroid[k] /= static_cast<double>(d);

        for (std::size_t k = 0; k < d; ++k) xr[k] = centroid[k] + (centroid[k] - simplex[worst][k]);
        const double fr = f(xr);
        ++res.n_evals;

        if (fr < fv[order[0]]) {
            for (std::size_t k = 0; k < d; ++k)
                xe[k] = centroid[k] + 2.0 * (centroid[k] - simplex[worst][k]);
            const double fe = f(xe);
            ++res.n_evals;
            if (fe < fr) {
                simplex[worst] = xe;
                fv[worst] = fe;
            } else {
                simplex[worst] = xr;
                fv[worst] = fr;
            }
        } else if (fr < fv[second]) {
            simplex[worst] = xr;
            fv[worst] = fr;
        } else {
            const bool outside = fr < fv[worst];
            if (outside)
                for (std::size_t k = 0; k < d; ++k)
                    xc[k] = centroid[k] + 0.5 * (xr[k] - centroid[k]);
            else
                for (std::size_t k = 0; k < d; ++k)
                    xc[k] = centroid[k] + 0.5 * (simplex[worst][k] - centroid[k]);
            const double fc = f(xc);
            ++res.n_evals;
            if (fc < (outside ? fr : fv[worst])) {
                simplex[worst] = xc;
                fv[worst] = fc;
            } else {
                for (std::size_t i = 0; i <= d; ++i) {
                    if (i == best) continue;
                    for (std::size_t k = 0; k < d; ++k)
                        simplex[i][k] = simplex[best][k] + 0.5 * (simplex[i][k] - simplex[best][k]);
                    fv[i] = f(simplex[i]);
                    ++res.n_evals;
                }
            }
        }
    }

    const std::size_t best =
        static_cast<std::size_t>(std::min_element(fv.begin(), fv.end()) - fv.begin());
    res.x = simplex[best];
    res.value = fv[best];
    return res;
}

}  // namespace acsel
