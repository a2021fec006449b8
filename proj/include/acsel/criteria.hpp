#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "acsel/fit.hpp"
#include "acsel/model.hpp"

/**
 * Penalized selection over a fitted family: the generalized Hannan-Quinn
 * penalty 2 c D log log n, BIC and AIC, the minimal-constant formulas
 * driven by the noise fourth moment, and the plug-in kurtosis estimator.
 */
namespace acsel {

enum class PenaltyKind { GeneralizedHQ, BIC, AIC };

struct PenaltySpec {
    PenaltyKind kind = PenaltyKind::GeneralizedHQ;
    double c = 1.0;  ///< multiplicative constant, GeneralizedHQ only
};

inline std::string to_string(const PenaltySpec& p) {
    switch (p.kind) {
        case PenaltyKind::BIC: return "BIC";
        case PenaltyKind::AIC: return "AIC";
        default: return "HQ(c=" + std::to_string(p.c) + ")";
    }
}

/// kappa_n(m): GeneralizedHQ -> 2 c D log log n; BIC -> D log n; AIC -> 2 D.
inline double penalty_value(const PenaltySpec& p, std::size_t n, int D) {
    if (D < 1) throw std::invalid_argument("penalty_value: D must be >= 1");
    switch (p.kind) {
        case PenaltyKind::BIC:
            return D * std::log(static_cast<double>(n));
        case PenaltyKind::AIC:
            return 2.0 * D;
        default:
            if (p.c <= 0.0) throw std::invalid_argument("penalty_value: HQ constant c must be > 0");
            if (n < 16)
                throw std::invalid_argument("penalty_value: GeneralizedHQ requires n >= 16");
            return 2.0 * p.c * D * std::log(std::log(static_cast<double>(n)));
    }
}

/// Plug-in fourth-moment estimator (1/n) sum residuals^4, computed from
/// the residuals of the largest model in the family.
inline double estimate_mu4(const std::vector<double>& residuals) {
    if (residuals.empty()) throw std::invalid_argument("estimate_mu4: empty residuals");
    double acc = 0.0;
    for (double r : residuals) acc += r * r * r * r;
    return acc / static_cast<double>(residuals.size());
}

/// Minimal penalty constant max(alpha1/4, alpha2/4): alpha1 = 2 for
/// mean-type coordinates, alpha2 = mu4 - 1 for variance-type coordinates.
inline double c_min_constant(bool has_mean_params, bool has_variance_params, double mu4) {
    if (mu4 <= 1.0) throw std::invalid_argument("c_min_constant: mu4 must be > 1");
    double c = 0.0;
    if (has_mean_params) c = std::max(c, 0.5);
    if (has_variance_params) c = std::max(c, (mu4 - 1.0) / 4.0);
    return c;
}

/// Per-model minimal term (alpha1 D^1 + alpha2 D^2) / 4.  ARMA known
/// variance -> D/2; ARMA unknown variance -> (D-1)/2 + (mu4-1)/4;
/// GARCH -> (mu4-1)/4 * D.
inline double c_min_model_term(const ModelSpec& spec, double mu4, bool known_variance = false) {
    if (mu4 <= 1.0) throw std::invalid_argument("c_min_model_term: mu4 must be > 1");
    const int D = dimension(spec);
    if (spec.family == Family::GARCH) return (mu4 - 1.0) / 4.0 * D;
    if (known_variance) return 0.5 * (D - 1);  // sigma2 not counted in D_m then
    return 0.5 * (D - 1) + (mu4 - 1.0) / 4.0;
}

enum class Classification { True, Overfitted, Wrong };

inline std::string to_string(Classification c) {
    switch (c) {
        case Classification::True: return "True";
        case Classification::Overfitted: return "Overfitted";
        default: return "Wrong";
    }
}

/// True iff equal; Overfitted iff the truth is strictly nested in the
/// selection; Wrong otherwise.
inline Classification classify(const ModelSpec& true_spec, const ModelSpec& selected) {
    if (selected == true_spec) return Classification::True;
    if (is_nested(true_spec, selected)) return Classification::Overfitted;
    return Classification::Wrong;
}

struct SelectionRow {
    ModelSpec spec;
    int dim = 0;
    double loglik = 0.0;
    double penalty = 0.0;
    double criterion = 0.0;  ///< -2 loglik + penalty
};

struct SelectionResult {
    std::vector<SelectionRow> table;
    ModelSpec selected;
    std::size_t selected_index = 0;
    std::optional<double> c_used;
    std::optional<double> mu4_hat;
    std::optional<std::string> note;  ///< e.g. heavy-tail mu4 instability flag
};

/// Minimizes -2 loglik + kappa_n over the fits.  Ties broken by smaller
/// dimension, then input order.  All fits must share the series length n.
inline SelectionResult select(const std::vector<FittedModel>& fits, const PenaltySpec& p,
                              std::size_t n) {
    if (fits.empty()) throw std::invalid_argument("select: no fitted models");
    SelectionResult res;
    res.table.reserve(fits.size());
    for (const auto& f : fits) {
        if (f.n != n)
            throw std::invalid_argument("select: fit of " + to_string(f.spec) +
                                        " has mismatched series length");
        SelectionRow row;
        row.spec = f.spec;
        row.dim = dimension(f.spec);
        row.loglik = f.loglik;
        row.penalty = penalty_value(p, n, row.dim);
        row.criterion = -2.0 * f.loglik + row.penalty;
        res.table.push_back(row);
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < res.table.size(); ++i) {
        const auto& a = res.table[i];
        const auto& b = res.table[best];
        if (a.criterion < b.criterion ||
            (a.criterion == b.criterion && a.dim < b.dim))
            best = i;
    }
    res.selected = res.table[best].spec;
    res.selected_index = best;
    if (p.kind == PenaltyKind::GeneralizedHQ) res.c_used = p.c;
    return res;
}

}  // namespace acsel
