#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "acsel/criteria.hpp"
#include "acsel/fit.hpp"
#include "acsel/model.hpp"
#include "acsel/simulate.hpp"

/**
 * Replicated consistency experiments: simulate a data-generating process,
 * fit every candidate, select under the c_min / 2 c_min generalized-HQ
 * penalties and BIC, and tabulate Wrong/True/Overfitted percentages.
 * Replication r uses seed base_seed + r, so results are independent of
 * scheduling.
 */
namespace acsel {

/// How the penalty constant is formed from the estimated fourth moment.
enum class CminRule {
    Half,        ///< Gaussian noise: c_min = 1/2, no estimation needed
    MaxHalfMu4,  ///< ARMA-type truth: max(1/2, (mu4_hat - 1)/4)
    Mu4Only,     ///< GARCH-type truth: (mu4_hat - 1)/4
};

struct ExperimentConfig {
    ModelSpec dgp;
    std::vector<double> theta;
    NoiseKind noise_kind = NoiseKind::GaussianStd;
    int noise_dof = 5;
    std::vector<int> n_values;
    int replications = 100;
    std::vector<ModelSpec> candidates;
    CminRule cmin_rule = CminRule::Half;
    std::uint64_t base_seed = 1;
    int burn_in = kDefaultBurnIn;
    int workers = 1;
    FitOptions fit_opts;
    Constraints constraints;
};

struct ExperimentCell {
    int n = 0;
    std::string penalty;  ///< "cmin", "2cmin" or "BIC"
    int wrong = 0;
    int true_ = 0;
    int overfitted = 0;
    int replications = 0;
    double pct_wrong() const { return 100.0 * wrong / replications; }
    double pct_true() const { return 100.0 * true_ / replications; }
    double pct_overfitted() const { return 100.0 * overfitted / replications; }
};

struct ReplicationLog {
    int n = 0;
    std::uint64_t seed = 0;
    double mu4_hat = 0.0;
    double c_min_hat = 0.0;
    ModelSpec selected_cmin, selected_2cmin, selected_bic;
    bool fit_failure = false;
};

struct ExperimentReport {
    std::vector<ExperimentCell> cells;  ///< ordered by (n, penalty in cmin/2cmin/BIC order)
    std::vector<ReplicationLog> log;
    double wall_seconds = 0.0;
};

/// The paper's three data-generating processes.
struct DgpPreset {
    std::string name;
    ModelSpec spec;
    std::vector<double> theta;
};

inline std::vector<DgpPreset> dgp_presets() {
    return {
        {"I", arma(2, 0), {0.5, 0.2, 1.0}},
        {"II", garch(2, 0), {0.2, 0.4, 0.2}},
        {"III", arma(6, 0), {0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 1.0}},
    };
}

inline DgpPreset dgp_preset(const std::string& name) {
    for (const auto& p : dgp_presets())
        if (p.name == name) return p;
    throw std::invalid_argument("unknown DGP preset: " + name + " (expected I, II or III)");
}

/// The 66-model family extended with pure-ARCH specs GARCH(p,0), so ARCH
/// truths are selectable as True.
inline std::vector<ModelSpec> mc_candidate_family(int max_p = 5, int max_q = 5,
                                                  int max_p_garch = 5, int max_q_garch = 5) {
    auto fam = enumerate_family(max_p, max_q, max_p_garch, max_q_garch);
    for (int p = 1; p <= max_p_garch; ++p) fam.push_back(garch(p, 0));
    return fam;
}

/// AR(1..max_p) hierarchical family used for DGP III.
inline std::vector<ModelSpec> ar_family(int max_p) {
    std::vector<ModelSpec> fam;
    for (int p = 1; p <= max_p; ++p) fam.push_back(arma(p, 0));
    return fam;
}

namespace detail {

/// Largest model whose residuals feed the mu4 estimator: the max-dimension
/// GARCH when the family has one, otherwise the max-dimension model.
inline std::size_t largest_model_index(const std::vector<ModelSpec>& candidates) {
    std::size_t best = 0;
    bool best_garch = false;
    int best_dim = -1;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const bool g = candidates[i].family == Family::GARCH;
        const int dim = dimension(candidates[i]);
        if ((g && !best_garch) || (g == best_garch && dim > best_dim)) {
            best = i;
            best_garch = g;
            best_dim = dim;
        }
    }
    return best;
}

/// Runs fn(i) for i in [0, count), spread over `workers` threads.  Results
/// must be written to disjoint, preallocated slots.
template <typename Fn>
inline void parallel_for_index(std::size_t count, int workers, Fn&& fn) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const int nthreads = std::min<std::size_t>(workers, count);
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t)
        pool.emplace_back([&, t] {
            for (std::size_t i = static_cast<std::size_t>(t); i < count;
                 i += static_cast<std::size_t>(nthreads))
                fn(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace detail

inline double resolve_c_min(CminRule rule, double mu4_hat) {
    switch (rule) {
        case CminRule::Half: return 0.5;
        case CminRule::MaxHalfMu4: return std::max(0.5, (mu4_hat - 1.0) / 4.0);
        default: return (mu4_hat - 1.0) / 4.0;
    }
}

/// Runs the replicated experiment.  Identical config (including base_seed)
/// gives an identical report regardless of the worker count.
inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    if (cfg.replications < 1) throw std::invalid_argument("run_experiment: replications >= 1");
    if (cfg.candidates.empty()) throw std::invalid_argument("run_experiment: no candidates");
    for (int n : cfg.n_values)
        if (n < 16) throw std::invalid_argument("run_experiment: all n must be >= 16");
    if (!constraint_check(cfg.dgp, cfg.theta, cfg.constraints))
        throw std::invalid_argument("run_experiment: DGP parameters violate constraints");

    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t mu4_idx = detail::largest_model_index(cfg.candidates);
    ExperimentReport report;

    for (int n : cfg.n_values) {
        std::vector<ReplicationLog> logs(static_cast<std::size_t>(cfg.replications));
        detail::parallel_for_index(
            static_cast<std::size_t>(cfg.replications), cfg.workers, [&](std::size_t r) {
                ReplicationLog& lg = logs[r];
                lg.n = n;
                lg.seed = cfg.base_seed + r;
                NoiseSpec noise{cfg.noise_kind, cfg.noise_dof, lg.seed};
                const auto x = simulate_process(cfg.dgp, cfg.theta, noise,
                                                static_cast<std::size_t>(n), cfg.burn_in,
                                                cfg.constraints);
                std::vector<FittedModel> fits;
                fits.reserve(cfg.candidates.size());
                FitOptions fo = cfg.fit_opts;
                fo.with_covariance = false;
                try {
                    for (const auto& spec : cfg.candidates)
                        fits.push_back(fit(spec, x, fo, cfg.constraints));
                } catch (const std::exception&) {
                    // recorded as Wrong, never silently dropped
                    lg.fit_failure = true;
                    lg.selected_cmin = lg.selected_2cmin = lg.selected_bic =
                        ModelSpec{cfg.dgp.family, -1, -1};
                    return;
                }
                lg.mu4_hat = estimate_mu4(fits[mu4_idx].residuals);
                lg.c_min_hat = resolve_c_min(cfg.cmin_rule, lg.mu4_hat);
                const auto sz = static_cast<std::size_t>(n);
                lg.selected_cmin =
                    select(fits, {PenaltyKind::GeneralizedHQ, lg.c_min_hat}, sz).selected;
                lg.selected_2cmin =
                    select(fits, {PenaltyKind::GeneralizedHQ, 2.0 * lg.c_min_hat}, sz).selected;
                lg.selected_bic = select(fits, {PenaltyKind::BIC}, sz).selected;
            });

        ExperimentCell cmin{n, "cmin"}, twocmin{n, "2cmin"}, bic{n, "BIC"};
        auto tally = [&](ExperimentCell& cell, const ModelSpec& sel, bool failure) {
            ++cell.replications;
            if (failure) {
                ++cell.wrong;
                return;
            }
            switch (classify(cfg.dgp, sel)) {
                case Classification::True: ++cell.true_; break;
                case Classification::Overfitted: ++cell.overfitted; break;
                default: ++cell.wrong;
            }
        };
        for (const auto& lg : logs) {
            tally(cmin, lg.selected_cmin, lg.fit_failure);
            tally(twocmin, lg.selected_2cmin, lg.fit_failure);
            tally(bic, lg.selected_bic, lg.fit_failure);
        }
        report.cells.push_back(cmin);
        report.cells.push_back(twocmin);
        report.cells.push_back(bic);
        report.log.insert(report.log.end(), logs.begin(), logs.end());
    }

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

}  // namespace acsel
