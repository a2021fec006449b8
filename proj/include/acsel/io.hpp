#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "acsel/calibrate.hpp"
#include "acsel/criteria.hpp"
#include "acsel/fit.hpp"
#include "acsel/model.hpp"
#include "acsel/montecarlo.hpp"

/**
 * CSV ingestion, the return transformation, autocorrelation diagnostics,
 * and the end-to-end return-series analysis workflow.
 */
namespace acsel {

struct PriceSeries {
    std::vector<std::string> timestamps;  ///< empty when the file has no such column
    std::vector<double> prices;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

}  // namespace detail

/// Loads one header-named numeric column from a CSV file.  Non-numeric
/// cells are rejected with their line number.
inline std::vector<double> load_csv(const std::string& path, const std::string& column) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("load_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("load_csv: empty file " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = detail::split_csv_line(line);
    std::size_t col = header.size();
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == column) col = i;
    if (col == header.size())
        throw std::invalid_argument("load_csv: column '" + column + "' not found in " + path);

    std::vector<double> out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = detail::split_csv_line(line);
        if (col >= cells.size())
            throw std::invalid_argument("load_csv: line " + std::to_string(lineno) +
                                        " has too few columns");
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(cells[col], &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != cells[col].size() || used == 0 || !std::isfinite(v))
            throw std::invalid_argument("load_csv: non-numeric cell '" + cells[col] +
                                        "' at line " + std::to_string(lineno));
        out.push_back(v);
    }
    return out;
}

/// r_t = log(P_{t+1} / P_t); requires strictly positive prices.
inline std::vector<double> log_returns(const std::vector<double>& prices) {
    if (prices.size() < 2) throw std::invalid_argument("log_returns: need at least 2 prices");
    std::vector<double> r(prices.size() - 1);
    for (std::size_t t = 0; t + 1 < prices.size(); ++t) {
        if (prices[t] <= 0.0 || prices[t + 1] <= 0.0)
            throw std::invalid_argument("log_returns: non-positive price at index " +
                                        std::to_string(prices[t] <= 0.0 ? t : t + 1));
        r[t] = std::log(prices[t + 1] / prices[t]);
    }
    return r;
}

/// Sample autocorrelations rho(0..max_lag), rho(0) = 1.
inline std::vector<double> acf(const std::vector<double>& x, std::size_t max_lag) {
    if (x.size() <= max_lag)
        throw std::invalid_argument("acf: need series longer than max_lag");
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double denom = 0.0;
    for (double v : x) denom += (v - mean) * (v - mean);
    if (denom == 0.0) throw std::invalid_argument("acf: constant series");
    std::vector<double> rho(max_lag + 1);
    for (std::size_t k = 0; k <= max_lag; ++k) {
        double num = 0.0;
        for (std::size_t t = 0; t + k < x.size(); ++t)
            num += (x[t] - mean) * (x[t + k] - mean);
        rho[k] = num / denom;
    }
    return rho;
}

struct FamilyBounds {
    int max_p = 5;
    int max_q = 5;
    int max_p_garch = 5;
    int max_q_garch = 5;
};

struct AnalysisOptions {
    FamilyBounds bounds;
    FitOptions fit_opts;
    Constraints constraints;
    std::vector<double> calibration_grid = default_calibration_grid();
    std::size_t acf_lags = 20;
    int workers = 1;
};

struct AnalysisResult {
    std::vector<FittedModel> fits;
    SelectionResult bic;
    SelectionResult calibrated;  ///< generalized HQ at the dimension-jump constant
    JumpPath path;
    double mu4_hat = 0.0;
    std::vector<double> acf_returns;
    std::vector<double> acf_squared;
};

/// Fits the whole enumerated family on a return series and selects under
/// both BIC and the dimension-jump-calibrated generalized-HQ penalty;
/// attaches ACF diagnostics of the returns and squared returns.
inline AnalysisResult analyze_returns(const std::vector<double>& x,
                                      const AnalysisOptions& opts = {}) {
    const std::size_t n = x.size();
    if (n < 16) throw std::invalid_argument("analyze_returns: need at least 16 observations");

    AnalysisResult res;
    const auto family = enumerate_family(opts.bounds.max_p, opts.bounds.max_q,
                                         opts.bounds.max_p_garch, opts.bounds.max_q_garch);
    FitOptions fo = opts.fit_opts;
    fo.with_covariance = false;
    res.fits.resize(family.size());
    detail::parallel_for_index(family.size(), opts.workers, [&](std::size_t i) {
        res.fits[i] = fit(family[i], x, fo, opts.constraints);
    });

    res.bic = select(res.fits, {PenaltyKind::BIC}, n);
    res.path = calibrate_penalty(res.fits, n, opts.calibration_grid);
    res.calibrated = select(res.fits, {PenaltyKind::GeneralizedHQ, res.path.c_final}, n);

    const std::size_t big = detail::largest_model_index(family);
    res.mu4_hat = estimate_mu4(res.fits[big].residuals);
    res.calibrated.mu4_hat = res.mu4_hat;
    res.bic.mu4_hat = res.mu4_hat;
    if (res.mu4_hat > 5.0)
        res.calibrated.note = "heavy-tail residuals: mu4_hat estimator may be unstable";

    std::vector<double> sq(x.size());
    for (std::size_t t = 0; t < x.size(); ++t) sq[t] = x[t] * x[t];
    const std::size_t lags = std::min(opts.acf_lags, n - 1);
    res.acf_returns = acf(x, lags);
    res.acf_squared = acf(sq, lags);
    return res;
}

}  // namespace acsel
