#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "acsel/model.hpp"

/**
 * Truncated conditional mean/variance filters and the Gaussian
 * quasi-log-likelihood.  Unobserved past is set to zero (MA innovations
 * included); the GARCH variance recursion starts at a0.  Conditional
 * variances are clamped at h_floor so the objective stays defined on the
 * whole box the optimizer explores.
 */
namespace acsel {

struct FilterOutput {
    std::vector<double> f_hat;      ///< conditional means
    std::vector<double> h_hat;      ///< conditional variances, >= h_floor
    std::vector<double> residuals;  ///< (x_t - f_hat_t) / sqrt(h_hat_t)
};

namespace detail {

/// Core recursion: fills f and h (sized n) for the series x under theta.
inline void run_filter(const ModelSpec& spec, const std::vector<double>& theta,
                       const std::vector<double>& x, const Constraints& c,
                       std::vector<double>& f, std::vector<double>& h,
                       std::vector<double>& eps_scratch) {
    const std::size_t n = x.size();
    const int p = spec.p, q = spec.q;
    f.resize(n);
    h.resize(n);
    if (spec.family == Family::ARMA) {
        const double sigma2 = std::max(theta[p + q], c.h_floor);
        eps_scratch.resize(n);
        for (std::size_t t = 0; t < n; ++t) {
            double m = 0.0;
            for (int i = 1; i <= p; ++i)
                if (t >= static_cast<std::size_t>(i)) m += theta[i - 1] * x[t - i];
            for (int j = 1; j <= q; ++j)
                if (t >= static_cast<std::size_t>(j)) m += theta[p + j - 1] * eps_scratch[t - j];
            f[t] = m;
            h[t] = sigma2;
            eps_scratch[t] = x[t] - m;
        }
    } else {
        const double a0 = theta[0];
        double coeff_sum = 0.0;
        for (int i = 1; i <= p + q; ++i) coeff_sum += theta[i];
        const double h_init =
            c.garch_init_unconditional && coeff_sum < 1.0 ? a0 / (1.0 - coeff_sum) : a0;
        for (std::size_t t = 0; t < n; ++t) {
            double v = a0;
            for (int i = 1; i <= p; ++i)
                if (t >= static_cast<std::size_t>(i)) v += theta[i] * x[t - i] * x[t - i];
            for (int j = 1; j <= q; ++j)
                v += theta[p + j] * (t >= static_cast<std::size_t>(j) ? h[t - j] : h_init);
            f[t] = 0.0;
            h[t] = std::max(v, c.h_floor);
        }
    }
}

}  // namespace detail

/// Computes the truncated conditional means, variances and standardized
/// residuals of x under (spec, theta).  Throws on constraint violation.
inline FilterOutput filter(const ModelSpec& spec, const std::vector<double>& theta,
                           const std::vector<double>& x, const Constraints& c = {}) {
    if (x.empty()) throw std::invalid_argument("filter: empty series");
    if (!constraint_check(spec, theta, c))
        throw std::invalid_argument("filter: theta violates constraints for " + to_string(spec));
    FilterOutput out;
    std::vector<double> eps;
    detail::run_filter(spec, theta, x, c, out.f_hat, out.h_hat, eps);
    out.residuals.resize(x.size());
    for (std::size_t t = 0; t < x.size(); ++t)
        out.residuals[t] = (x[t] - out.f_hat[t]) / std::sqrt(out.h_hat[t]);
    return out;
}

/// Reusable scratch space for repeated likelihood evaluations on one
/// series (optimizer line searches, finite differences).
struct LikelihoodWorkspace {
    std::vector<double> f, h, eps;
};

/// Quasi-log-likelihood -(1/2) sum_t [ (x_t - f_t)^2 / h_t + log h_t ],
/// evaluated without feasibility checks -- callers project first.
inline double quasi_log_likelihood_unchecked(const ModelSpec& spec,
                                             const std::vector<double>& theta,
                                             const std::vector<double>& x,
                                             const Constraints& c,
                                             LikelihoodWorkspace& ws) {
    detail::run_filter(spec, theta, x, c, ws.f, ws.h, ws.eps);
    const std::size_t n = x.size();
    double acc = 0.0;
    if (spec.family == Family::ARMA) {
        // constant variance: one log, not n
        const double sigma2 = ws.h[0];
        double ss = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            const double d = x[t] - ws.f[t];
            ss += d * d;
        }
        acc = ss / sigma2 + n * std::log(sigma2);
    } else {
        for (std::size_t t = 0; t < n; ++t) {
            const double d = x[t] - ws.f[t];
            acc += d * d / ws.h[t] + std::log(ws.h[t]);
        }
    }
    return -0.5 * acc;
}

/// Quasi-log-likelihood with constraint and finiteness checks.
inline double quasi_log_likelihood(const ModelSpec& spec, const std::vector<double>& theta,
                                   const std::vector<double>& x, const Constraints& c = {}) {
    const FilterOutput fo = filter(spec, theta, x, c);
    double acc = 0.0;
    for (std::size_t t = 0; t < x.size(); ++t) {
        const double d = x[t] - fo.f_hat[t];
        const double q_t = d * d / fo.h_hat[t] + std::log(fo.h_hat[t]);
        if (!std::isfinite(q_t))
            throw std::runtime_error("quasi_log_likelihood: non-finite contribution at t=" +
                                     std::to_string(t));
        acc += q_t;
    }
    return -0.5 * acc;
}

/// Per-observation contrasts q_t(theta); sum equals -2 * quasi_log_likelihood.
inline std::vector<double> qll_terms(const ModelSpec& spec, const std::vector<double>& theta,
                                     const std::vector<double>& x, const Constraints& c = {}) {
    const FilterOutput fo = filter(spec, theta, x, c);
    std::vector<double> q(x.size());
    for (std::size_t t = 0; t < x.size(); ++t) {
        const double d = x[t] - fo.f_hat[t];
        q[t] = d * d / fo.h_hat[t] + std::log(fo.h_hat[t]);
    }
    return q;
}

}  // namespace acsel
