#pragma once

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

/**
 * Candidate model space for affine causal time series: ARMA(p,q) for the
 * conditional mean, GARCH(p,q) for the conditional variance (ARCH(p) is
 * GARCH(p,0)).  A spec identifies one candidate; parameter vectors are
 * plain ordered doubles with the layout documented per family below.
 */
namespace acsel {

enum class Family { ARMA, GARCH };

/// Identifies one candidate model: family plus orders.
/// ARMA(p,q): p AR lags, q MA lags.  GARCH(p,q): p ARCH lags (squared
/// observations), q variance lags.  ARCH(p) == GARCH(p,0).
struct ModelSpec {
    Family family = Family::ARMA;
    int p = 0;
    int q = 0;

    friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

inline ModelSpec arma(int p, int q) { return {Family::ARMA, p, q}; }
inline ModelSpec garch(int p, int q) { return {Family::GARCH, p, q}; }

/// Parameter-space configuration shared by constraint checks, filters and
/// the fitter.  eps_stat keeps the l1 contraction condition strict;
/// h_floor realizes the positive lower bound on conditional variances.
struct Constraints {
    double eps_stat = 1e-3;
    double h_floor = 1e-6;
    /// When true, the GARCH variance recursion is initialized at the
    /// unconditional variance a0/(1 - sum a - sum b) instead of a0.
    bool garch_init_unconditional = false;
};

/// Number of estimated parameters D_m.
/// ARMA(p,q) -> p+q+1 (innovation variance included);
/// GARCH(p,q) -> p+q+1 (a0 included).
inline int dimension(const ModelSpec& spec) {
    return spec.p + spec.q + 1;
}

/// Canonical string form, e.g. "ARMA(2,0)" or "GARCH(1,1)".
inline std::string to_string(const ModelSpec& spec) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s(%d,%d)",
                  spec.family == Family::ARMA ? "ARMA" : "GARCH", spec.p, spec.q);
    return buf;
}

/// Parses the canonical string form emitted by to_string.
inline ModelSpec parse_spec(const std::string& s) {
    int p = -1, q = -1;
    char name[8] = {0};
    if (std::sscanf(s.c_str(), "%7[A-Z](%d,%d)", name, &p, &q) != 3 || p < 0 || q < 0)
        throw std::invalid_argument("unparsable model spec: " + s);
    std::string fam(name);
    if (fam == "ARMA") return arma(p, q);
    if (fam == "GARCH") return garch(p, q);
    throw std::invalid_argument("unknown model family: " + s);
}

/// All ARMA(p,q), 0 <= p <= max_p, 0 <= q <= max_q, then all GARCH(p,q),
/// 0 <= p <= max_p_garch, 1 <= q <= max_q_garch, each block in
/// lexicographic order.  Bounds (5,5,5,5) give the 66-model family.
inline std::vector<ModelSpec> enumerate_family(int max_p, int max_q,
                                               int max_p_garch, int max_q_garch) {
    if (max_p < 0 || max_q < 0 || max_p_garch < 0 || max_q_garch < 0)
        throw std::invalid_argument("enumerate_family: negative bound");
    std::vector<ModelSpec> out;
    for (int p = 0; p <= max_p; ++p)
        for (int q = 0; q <= max_q; ++q)
            out.push_back(arma(p, q));
    for (int p = 0; p <= max_p_garch; ++p)
        for (int q = 1; q <= max_q_garch; ++q)
            out.push_back(garch(p, q));
    return out;
}

/// Componentwise order nesting within a family; cross-family never nests.
inline bool is_nested(const ModelSpec& inner, const ModelSpec& outer) {
    return inner.family == outer.family && inner.p <= outer.p && inner.q <= outer.q;
}

namespace detail {
inline void check_length(const ModelSpec& spec, const std::vector<double>& theta) {
    if (static_cast<int>(theta.size()) != dimension(spec))
        throw std::invalid_argument(
            "parameter vector length " + std::to_string(theta.size()) +
            " does not match dimension " + std::to_string(dimension(spec)) +
            " of " + to_string(spec));
}
}  // namespace detail

/// Membership test for the stationarity/positivity region Theta(m).
///
/// Layouts: ARMA theta = (phi_1..phi_p, psi_1..psi_q, sigma2) with
/// sum |phi| + |psi| <= 1 - eps_stat and sigma2 >= h_floor;
/// GARCH theta = (a0, a_1..a_p, b_1..b_q) with a0 >= h_floor,
/// a_i, b_j >= 0 and sum a + sum b <= 1 - eps_stat.
inline bool constraint_check(const ModelSpec& spec, const std::vector<double>& theta,
                             const Constraints& c = {}) {
    detail::check_length(spec, theta);
    const int d = dimension(spec);
    if (spec.family == Family::ARMA) {
        double l1 = 0.0;
        for (int i = 0; i < d - 1; ++i) l1 += std::fabs(theta[i]);
        return l1 <= 1.0 - c.eps_stat && theta[d - 1] >= c.h_floor;
    }
    if (theta[0] < c.h_floor) return false;
    double l1 = 0.0;
    for (int i = 1; i < d; ++i) {
        if (theta[i] < 0.0) return false;
        l1 += theta[i];
    }
    return l1 <= 1.0 - c.eps_stat;
}

/// Maps an arbitrary vector of the right length onto the constraint set:
/// clamps the floored coordinates and rescales the l1-bounded block when it
/// exceeds 1 - eps_stat.  Identity on feasible input.
inline std::vector<double> project_feasible(const ModelSpec& spec, std::vector<double> theta,
                                            const Constraints& c = {}) {
    detail::check_length(spec, theta);
    const int d = dimension(spec);
    const double cap = 1.0 - c.eps_stat;
    // shrink slightly past the boundary so the rescaled sum stays feasible
    // under floating-point roundoff
    constexpr double kMargin = 1.0 - 1e-12;
    if (spec.family == Family::ARMA) {
        double l1 = 0.0;
        for (int i = 0; i < d - 1; ++i) l1 += std::fabs(theta[i]);
        if (l1 > cap)
            for (int i = 0; i < d - 1; ++i) theta[i] *= kMargin * cap / l1;
        if (theta[d - 1] < c.h_floor) theta[d - 1] = c.h_floor;
        return theta;
    }
    if (theta[0] < c.h_floor) theta[0] = c.h_floor;
    double l1 = 0.0;
    for (int i = 1; i < d; ++i) {
        if (theta[i] < 0.0) theta[i] = 0.0;
        l1 += theta[i];
    }
    if (l1 > cap)
        for (int i = 1; i < d; ++i) theta[i] *= kMargin * cap / l1;
    return theta;
}

}  // namespace acsel
