#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "acsel/likelihood.hpp"
#include "acsel/model.hpp"
#include "acsel/nelder_mead.hpp"

/**
 * Gaussian QMLE per candidate model: multistart Nelder-Mead over the
 * projected constraint set, plus finite-difference estimates of the
 * limiting Hessian F and score covariance G and the sandwich standard
 * errors sqrt(diag(F^-1 G F^-1) / n).
 */
namespace acsel {

/// Raised when every optimizer start produced a non-finite objective.
struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FitOptions {
    int multistarts = 5;
    int max_iters = 2000;
    double tol = 1e-8;
    std::uint64_t seed = 0;
    /// Additional user-supplied starting points (e.g. embeddings of nested
    /// fits); appended to the heuristic + random starts.
    std::vector<std::vector<double>> extra_starts;
    /// ARMA only: hold the innovation variance fixed at this value.
    std::optional<double> fixed_variance;
    /// Fill f_matrix/g_matrix/std_errors after optimizing.
    bool with_covariance = true;
};

struct FittedModel {
    ModelSpec spec;
    std::vector<double> theta;
    double loglik = 0.0;
    bool converged = false;
    bool at_boundary = false;
    long n_evals = 0;
    std::size_t n = 0;
    std::vector<double> residuals;
    Eigen::MatrixXd f_matrix;  ///< empty unless covariance was requested
    Eigen::MatrixXd g_matrix;
    std::optional<std::vector<double>> std_errors;
};

namespace detail {

inline double sample_variance(const std::vector<double>& x) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    return ss / static_cast<double>(x.size());
}

/// Zero-padded least-squares AR(p) fit; returns (phi, residual variance).
inline std::pair<std::vector<double>, double> ls_ar_fit(const std::vector<double>& x, int p) {
    const std::size_t n = x.size();
    if (p == 0) {
        double ss = 0.0;
        for (double v : x) ss += v * v;
        return {{}, ss / static_cast<double>(n)};
    }
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), p);
    Eigen::VectorXd y(static_cast<Eigen::Index>(n));
    for (std::size_t t = 0; t < n; ++t) {
        y(static_cast<Eigen::Index>(t)) = x[t];
        for (int i = 1; i <= p; ++i)
            if (t >= static_cast<std::size_t>(i))
                A(static_cast<Eigen::Index>(t), i - 1) = x[t - i];
    }
    Eigen::VectorXd phi = (A.transpose() * A)
                              .ldlt()
                              .solve(A.transpose() * y);
    const double rss = (y - A * phi).squaredNorm();
    std::vector<double> out(phi.data(), phi.data() + p);
    return {out, rss / static_cast<double>(n)};
}

inline std::vector<double> heuristic_start(const ModelSpec& spec, const std::vector<double>& x,
                                           const Constraints& c) {
    std::vector<double> theta(static_cast<std::size_t>(dimension(spec)), 0.0);
    if (spec.family == Family::ARMA) {
        auto [phi, s2] = ls_ar_fit(x, spec.p);
        for (int i = 0; i < spec.p; ++i) theta[static_cast<std::size_t>(i)] = phi[static_cast<std::size_t>(i)];
        theta.back() = std::max(s2, c.h_floor);
    } else {
        const double v = sample_variance(x);
        theta[0] = 0.1 * std::max(v, c.h_floor);
        for (int i = 1; i <= spec.p; ++i) theta[static_cast<std::size_t>(i)] = 0.05;
        for (int j = 1; j <= spec.q; ++j) theta[static_cast<std::size_t>(spec.p + j)] = 0.8 / spec.q;
    }
    return project_feasible(spec, theta, c);
}

inline std::vector<double> random_start(const ModelSpec& spec, double data_var,
                                        std::mt19937_64& rng, const Constraints& c) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<double> theta(static_cast<std::size_t>(dimension(spec)), 0.0);
    if (spec.family == Family::ARMA) {
        for (int i = 0; i < spec.p + spec.q; ++i)
            theta[static_cast<std::size_t>(i)] = (2.0 * u01(rng) - 1.0) * 0.8 / std::max(1, spec.p + spec.q);
        theta.back() = data_var * (0.2 + 1.8 * u01(rng));
    } else {
        theta[0] = data_var * (0.05 + 0.45 * u01(rng));
        for (int i = 1; i <= spec.p; ++i) theta[static_cast<std::size_t>(i)] = 0.3 * u01(rng);
        for (int j = 1; j <= spec.q; ++j) theta[static_cast<std::size_t>(spec.p + j)] = 0.6 * u01(rng);
    }
    return project_feasible(spec, theta, c);
}

inline bool on_boundary(const ModelSpec& spec, const std::vector<double>& theta,
                        const Constraints& c, double slack = 1e-7) {
    const int d = dimension(spec);
    const double cap = 1.0 - c.eps_stat;
    if (spec.family == Family::ARMA) {
        double l1 = 0.0;
        for (int i = 0; i < d - 1; ++i) l1 += std::fabs(theta[static_cast<std::size_t>(i)]);
        return l1 >= cap - slack || theta[static_cast<std::size_t>(d - 1)] <= c.h_floor + slack;
    }
    if (theta[0] <= c.h_floor + slack) return true;
    double l1 = 0.0;
    for (int i = 1; i < d; ++i) {
        if (theta[static_cast<std::size_t>(i)] <= slack) return true;
        l1 += theta[static_cast<std::size_t>(i)];
    }
    return l1 >= cap - slack;
}

/// Per-observation contrasts without feasibility checks (the objective is
/// defined everywhere thanks to the h_floor clamp).
inline void qll_terms_unchecked(const ModelSpec& spec, const std::vector<double>& theta,
                                const std::vector<double>& x, const Constraints& c,
                                LikelihoodWorkspace& ws, std::vector<double>& q) {
    run_filter(spec, theta, x, c, ws.f, ws.h, ws.eps);
    q.resize(x.size());
    for (std::size_t t = 0; t < x.size(); ++t) {
        const double d = x[t] - ws.f[t];
        q[t] = d * d / ws.h[t] + std::log(ws.h[t]);
    }
}

}  // namespace detail

/// Finite-difference estimates of F = (1/n) sum_t Hess q_t and
/// G = (1/n) sum_t grad q_t grad q_t^T at theta, by central differences
/// with step eps^(1/3) * max(1, |theta_i|).
inline std::pair<Eigen::MatrixXd, Eigen::MatrixXd> estimate_FG(const ModelSpec& spec,
                                                               const std::vector<double>& theta,
                                                               const std::vector<double>& x,
                                                               const Constraints& c = {}) {
    const int d = dimension(spec);
    const std::size_t n = x.size();
    const double h_rel = std::cbrt(std::numeric_limits<double>::epsilon());
    std::vector<double> step(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i)
        step[static_cast<std::size_t>(i)] = h_rel * std::max(1.0, std::fabs(theta[static_cast<std::size_t>(i)]));

    LikelihoodWorkspace ws;
    std::vector<double> q;
    auto mean_q = [&](const std::vector<double>& th) {
        detail::qll_terms_unchecked(spec, th, x, c, ws, q);
        double s = 0.0;
        for (double v : q) s += v;
        return s / static_cast<double>(n);
    };

    // Per-observation gradients for G.
    Eigen::MatrixXd grads(static_cast<Eigen::Index>(n), d);
    std::vector<double> qp, qm;
    for (int i = 0; i < d; ++i) {
        std::vector<double> th = theta;
        th[static_cast<std::size_t>(i)] += step[static_cast<std::size_t>(i)];
        detail::qll_terms_unchecked(spec, th, x, c, ws, q);
        qp = q;
        th[static_cast<std::size_t>(i)] = theta[static_cast<std::size_t>(i)] - step[static_cast<std::size_t>(i)];
        detail::qll_terms_unchecked(spec, th, x, c, ws, q);
        qm = q;
        const double inv = 1.0 / (2.0 * step[static_cast<std::size_t>(i)]);
        for (std::size_t t = 0; t < n; ++t)
            grads(static_cast<Eigen::Index>(t), i) = (qp[t] - qm[t]) * inv;
    }
    Eigen::MatrixXd G = grads.transpose() * grads / static_cast<double>(n);

    // Hessian of the mean contrast for F.
    Eigen::MatrixXd F(d, d);
    const double q0 = mean_q(theta);
    for (int i = 0; i < d; ++i) {
        const double hi = step[static_cast<std::size_t>(i)];
        {
            std::vector<double> th = theta;
            th[static_cast<std::size_t>(i)] += hi;
            const double fp = mean_q(th);
            th[static_cast<std::size_t>(i)] = theta[static_cast<std::size_t>(i)] - hi;
            const double fm = mean_q(th);
            F(i, i) = (fp - 2.0 * q0 + fm) / (hi * hi);
        }
        for (int j = i + 1; j < d; ++j) {
            const double hj = step[static_cast<std::size_t>(j)];
            std::vector<double> th = theta;
            auto eval = [&](double si, double sj) {
                th[static_cast<std::size_t>(i)] = theta[static_cast<std::size_t>(i)] + si * hi;
                th[static_cast<std::size_t>(j)] = theta[static_cast<std::size_t>(j)] + sj * hj;
                return mean_q(th);
            };
            const double v =
                (eval(1, 1) - eval(1, -1) - eval(-1, 1) + eval(-1, -1)) / (4.0 * hi * hj);
            F(i, j) = v;
            F(j, i) = v;
        }
    }

    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (!std::isfinite(F(i, j)) || !std::isfinite(G(i, j)))
                throw std::runtime_error("estimate_FG: non-finite entry at (" +
                                         std::to_string(i) + "," + std::to_string(j) + ")");
    return {F, G};
}

/// Sandwich standard errors sqrt(diag(F^-1 G F^-1) / n); absent when F is
/// near-singular (condition number above 1e12) or the diagonal is not
/// nonnegative.
inline std::optional<std::vector<double>> sandwich_std_errors(const Eigen::MatrixXd& F,
                                                              const Eigen::MatrixXd& G,
                                                              std::size_t n) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(F, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= 0.0 || sv(0) / sv(sv.size() - 1) > 1e12) return std::nullopt;
    const Eigen::MatrixXd Finv = svd.solve(Eigen::MatrixXd::Identity(F.rows(), F.cols()));
    const Eigen::MatrixXd Sigma = Finv * G * Finv / static_cast<double>(n);
    std::vector<double> out(static_cast<std::size_t>(Sigma.rows()));
    for (Eigen::Index i = 0; i < Sigma.rows(); ++i) {
        if (Sigma(i, i) < 0.0) return std::nullopt;
        out[static_cast<std::size_t>(i)] = std::sqrt(Sigma(i, i));
    }
    return out;
}

/// Similarity-equivalent form Sigma = G F^-1 of the normalized covariance;
/// approximately 2I for Gaussian noise, block (2I, (mu4-1)I) in general.
inline Eigen::MatrixXd sigma_block_check(const Eigen::MatrixXd& F, const Eigen::MatrixXd& G) {
    return G * F.inverse();
}

/// Maximizes the quasi-log-likelihood over the constraint set by projected
/// multistart Nelder-Mead.  Deterministic given (spec, x, opts).
inline FittedModel fit(const ModelSpec& spec, const std::vector<double>& x,
                       const FitOptions& opts = {}, const Constraints& cons = {}) {
    const int d = dimension(spec);
    if (x.size() < static_cast<std::size_t>(d + 10))
        throw std::invalid_argument("fit: series too short for " + to_string(spec) + " (need >= " +
                                    std::to_string(d + 10) + " observations)");
    if (opts.multistarts < 1) throw std::invalid_argument("fit: multistarts must be >= 1");
    for (const auto& v : x)
        if (!std::isfinite(v)) throw std::invalid_argument("fit: series contains non-finite values");

    // h_floor is specified in units of the data variance.
    Constraints c = cons;
    const double data_var = detail::sample_variance(x);
    c.h_floor = cons.h_floor * std::max(data_var, std::numeric_limits<double>::min());

    const bool fix_var = opts.fixed_variance.has_value() && spec.family == Family::ARMA;
    LikelihoodWorkspace ws;
    auto objective = [&](const std::vector<double>& raw) {
        std::vector<double> th = project_feasible(spec, raw, c);
        if (fix_var) th.back() = *opts.fixed_variance;
        const double ll = quasi_log_likelihood_unchecked(spec, th, x, c, ws);
        return std::isfinite(ll) ? -ll : std::numeric_limits<double>::infinity();
    };

    std::vector<std::vector<double>> starts;
    starts.push_back(detail::heuristic_start(spec, x, c));
    std::mt19937_64 rng(opts.seed);
    for (int s = 1; s < opts.multistarts; ++s)
        starts.push_back(detail::random_start(spec, std::max(data_var, c.h_floor), rng, c));
    for (const auto& e : opts.extra_starts) starts.push_back(project_feasible(spec, e, c));

    NelderMeadOptions nm_opts;
    nm_opts.max_iters = opts.max_iters;
    nm_opts.tol = opts.tol;

    FittedModel best;
    best.spec = spec;
    best.n = x.size();
    double best_val = std::numeric_limits<double>::infinity();
    bool any_finite = false;
    bool any_converged = false;
    for (auto& s : starts) {
        if (fix_var) s.back() = *opts.fixed_variance;
        const double start_val = objective(s);
        NelderMeadResult r = nelder_mead(objective, s, nm_opts);
        best.n_evals += r.n_evals + 1;
        // never return worse than the start itself
        if (start_val < r.value) {
            r.x = s;
            r.value = start_val;
        }
        if (!std::isfinite(r.value)) continue;
        any_finite = true;
        any_converged = any_converged || r.converged;
        if (r.value < best_val) {
            best_val = r.value;
            best.theta = project_feasible(spec, r.x, c);
            if (fix_var) best.theta.back() = *opts.fixed_variance;
        }
    }
    if (!any_finite) throw FitError("fit: all starts produced a non-finite objective for " +
                                    to_string(spec));
    best.converged = any_converged;

    best.loglik = -best_val;
    best.at_boundary = detail::on_boundary(spec, best.theta, c);
    best.residuals = filter(spec, best.theta, x, c).residuals;

    if (opts.with_covariance) {
        auto [F, G] = estimate_FG(spec, best.theta, x, c);
        best.f_matrix = F;
        best.g_matrix = G;
        if (!best.at_boundary) best.std_errors = sandwich_std_errors(F, G, x.size());
    }
    return best;
}

}  // namespace acsel
