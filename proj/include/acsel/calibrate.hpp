#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "acsel/criteria.hpp"
#include "acsel/fit.hpp"
#include "acsel/model.hpp"

/**
 * Dimension-jump calibration of the penalty constant: trace the selected
 * model along a grid of c values under the penalty shape D log log n,
 * locate the largest collapse of the selected dimension, and reselect at
 * twice that constant.
 */
namespace acsel {

struct CalibrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct JumpPath {
    std::vector<double> grid;
    std::vector<int> selected_dims;
    std::vector<ModelSpec> selected_specs;
    std::vector<std::size_t> selected_indices;
    double c_hat_min = 0.0;
    double c_final = 0.0;  ///< 2 * c_hat_min
    ModelSpec final_model;
    std::size_t final_index = 0;
};

/// 60 log-spaced points on [0.01, 20].
inline std::vector<double> default_calibration_grid(std::size_t points = 60,
                                                    double lo = 0.01, double hi = 20.0) {
    std::vector<double> g(points);
    for (std::size_t i = 0; i < points; ++i)
        g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(points - 1));
    return g;
}

namespace detail {

/// argmin over fits of -loglik + c * D * log log n, tie-break by smaller
/// dimension then input order (same rule as select()).
inline std::size_t argmin_at(const std::vector<FittedModel>& fits, double lln, double c) {
    std::size_t best = 0;
    double best_val = 0.0;
    int best_dim = 0;
    for (std::size_t i = 0; i < fits.size(); ++i) {
        const int dim = dimension(fits[i].spec);
        const double val = -fits[i].loglik + c * dim * lln;
        if (i == 0 || val < best_val || (val == best_val && dim < best_dim)) {
            best = i;
            best_val = val;
            best_dim = dim;
        }
    }
    return best;
}

}  // namespace detail

/// Computes the step function c -> selected model over the grid.
inline JumpPath selection_path(const std::vector<FittedModel>& fits, std::size_t n,
                               const std::vector<double>& grid) {
    if (fits.empty()) throw std::invalid_argument("selection_path: no fitted models");
    if (grid.empty()) throw std::invalid_argument("selection_path: empty grid");
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (grid[i] <= 0.0 || (i > 0 && grid[i] <= grid[i - 1]))
            throw std::invalid_argument("selection_path: grid must be strictly increasing and positive");
    if (n < 16) throw std::invalid_argument("selection_path: n must be >= 16");

    const double lln = std::log(std::log(static_cast<double>(n)));
    JumpPath path;
    path.grid = grid;
    for (double c : grid) {
        const std::size_t idx = detail::argmin_at(fits, lln, c);
        path.selected_indices.push_back(idx);
        path.selected_specs.push_back(fits[idx].spec);
        path.selected_dims.push_back(dimension(fits[idx].spec));
    }
    return path;
}

/// Locates c_hat_min at the largest drop in selected dimension between
/// consecutive grid points (ties -> smallest c, drop attributed to the
/// right endpoint) and reselects at c_final = 2 * c_hat_min.
inline JumpPath dimension_jump(const std::vector<FittedModel>& fits, std::size_t n,
                               JumpPath path) {
    if (path.grid.size() < 2)
        throw std::invalid_argument("dimension_jump: need at least 2 grid points");
    int largest_drop = 0;
    std::size_t at = 0;
    for (std::size_t i = 1; i < path.grid.size(); ++i) {
        const int drop = path.selected_dims[i - 1] - path.selected_dims[i];
        if (drop > largest_drop) {
            largest_drop = drop;
            at = i;
        }
    }
    if (largest_drop == 0)
        throw CalibrationError(
            "dimension_jump: flat selection path (no dimension drop); widen the c grid");
    path.c_hat_min = path.grid[at];
    path.c_final = 2.0 * path.c_hat_min;
    const double lln = std::log(std::log(static_cast<double>(n)));
    path.final_index = detail::argmin_at(fits, lln, path.c_final);
    path.final_model = fits[path.final_index].spec;
    return path;
}

/// Full calibration: path over the grid, then dimension jump.
inline JumpPath calibrate_penalty(const std::vector<FittedModel>& fits, std::size_t n,
                                  const std::vector<double>& grid = default_calibration_grid()) {
    return dimension_jump(fits, n, selection_path(fits, n, grid));
}

}  // namespace acsel
