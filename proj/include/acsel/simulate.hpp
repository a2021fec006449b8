#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "acsel/model.hpp"
#include "acsel/noise.hpp"

namespace acsel {

inline constexpr int kDefaultBurnIn = 500;

/// Simulates a trajectory of the process identified by (spec, theta) driven
/// by an explicitly supplied unit-variance noise sequence of length
/// n + burn_in.  The recursion starts from zeros; the first burn_in values
/// are discarded.
///
/// ARMA: X_t = sum phi_i X_{t-i} + sum psi_j e_{t-j} + e_t with
/// e_t = sigma * xi_t.  GARCH: H_t = a0 + sum a_i X^2_{t-i} + sum b_j H_{t-j},
/// X_t = sqrt(H_t) * xi_t, H initialized at a0 (or the unconditional
/// variance when Constraints says so).
inline std::vector<double> simulate_with_noise(const ModelSpec& spec,
                                               const std::vector<double>& theta,
                                               const std::vector<double>& xi,
                                               std::size_t n, int burn_in,
                                               const Constraints& c = {}) {
    if (burn_in < 0) throw std::invalid_argument("simulate: burn_in must be >= 0");
    if (!constraint_check(spec, theta, c))
        throw std::invalid_argument("simulate: theta violates constraints for " + to_string(spec));
    const std::size_t total = n + static_cast<std::size_t>(burn_in);
    if (xi.size() < total) throw std::invalid_argument("simulate: noise sequence too short");

    std::vector<double> x(total, 0.0);
    const int p = spec.p, q = spec.q;
    if (spec.family == Family::ARMA) {
        const double sigma = std::sqrt(theta[p + q]);
        std::vector<double> e(total, 0.0);
        for (std::size_t t = 0; t < total; ++t) {
            e[t] = sigma * xi[t];
            double v = e[t];
            for (int i = 1; i <= p; ++i)
                if (t >= static_cast<std::size_t>(i)) v += theta[i - 1] * x[t - i];
            for (int j = 1; j <= q; ++j)
                if (t >= static_cast<std::size_t>(j)) v += theta[p + j - 1] * e[t - j];
            x[t] = v;
        }
    } else {
        const double a0 = theta[0];
        double coeff_sum = 0.0;
        for (int i = 1; i <= p + q; ++i) coeff_sum += theta[i];
        const double h_init =
            c.garch_init_unconditional ? a0 / (1.0 - coeff_sum) : a0;
        std::vector<double> h(total, h_init);
        for (std::size_t t = 0; t < total; ++t) {
            double v = a0;
            for (int i = 1; i <= p; ++i)
                if (t >= static_cast<std::size_t>(i)) v += theta[i] * x[t - i] * x[t - i];
            for (int j = 1; j <= q; ++j)
                v += theta[p + j] * (t >= static_cast<std::size_t>(j) ? h[t - j] : h_init);
            if (!(v > 0.0))
                throw std::logic_error("simulate: nonpositive conditional variance at t=" +
                                       std::to_string(t));
            h[t] = v;
            x[t] = std::sqrt(v) * xi[t];
        }
    }
    return {x.begin() + burn_in, x.end()};
}

/// Simulates n observations of (spec, theta) with noise drawn from `noise`,
/// discarding burn_in initial values.  Output is a bitwise-deterministic
/// function of (spec, theta, noise.seed, n, burn_in).
inline std::vector<double> simulate_process(const ModelSpec& spec,
                                            const std::vector<double>& theta,
                                            const NoiseSpec& noise, std::size_t n,
                                            int burn_in = kDefaultBurnIn,
                                            const Constraints& c = {}) {
    const auto xi = gen_noise(noise, n + static_cast<std::size_t>(burn_in));
    return simulate_with_noise(spec, theta, xi, n, burn_in, c);
}

}  // namespace acsel
