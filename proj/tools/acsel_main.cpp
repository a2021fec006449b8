// Command line front end: simulate, fit, select, calibrate, mc, analyze, acf.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "acsel/io.hpp"
#include "acsel/serialize.hpp"

namespace {

std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

std::vector<int> parse_ints(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
    return out;
}

acsel::NoiseKind parse_noise(const std::string& s, int& dof) {
    if (s == "gaussian") return acsel::NoiseKind::GaussianStd;
    if (s == "student5") {
        dof = 5;
        return acsel::NoiseKind::StudentStandardized;
    }
    if (s.rfind("student", 0) == 0) {
        dof = std::stoi(s.substr(7));
        return acsel::NoiseKind::StudentStandardized;
    }
    throw std::invalid_argument("unknown noise kind: " + s +
                                " (expected gaussian, student5, student<dof>)");
}

acsel::FamilyBounds parse_bounds(const std::string& s) {
    const auto v = parse_ints(s);
    if (v.size() != 4) throw std::invalid_argument("bounds must be p,q,P,Q");
    return {v[0], v[1], v[2], v[3]};
}

void emit(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << content;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Penalized quasi-likelihood model selection for ARMA/ARCH/GARCH time series"};
    app.require_subcommand(1);

    std::uint64_t seed = 1;
    std::string output_mode = "text";
    int workers = 1;
    app.add_option("--seed", seed, "base RNG seed")->capture_default_str();
    app.add_option("--output", output_mode, "output format: json, csv or text")
        ->check(CLI::IsMember({"json", "csv", "text"}))
        ->capture_default_str();
    app.add_option("--workers", workers, "worker thread count")->capture_default_str();

    // simulate
    auto* sim = app.add_subcommand("simulate", "simulate a trajectory of a model");
    std::string sim_model = "ARMA(2,0)", sim_theta = "0.5,0.2,1.0", sim_noise = "gaussian";
    std::size_t sim_n = 1000;
    int sim_burn = acsel::kDefaultBurnIn;
    std::string sim_out;
    sim->add_option("--model", sim_model, "model spec, e.g. ARMA(2,0) or GARCH(1,1)");
    sim->add_option("--theta", sim_theta, "comma-separated parameter vector");
    sim->add_option("--noise", sim_noise, "gaussian | student5 | student<dof>");
    sim->add_option("--n", sim_n, "observations to emit");
    sim->add_option("--burn-in", sim_burn, "discarded initial samples");
    sim->add_option("--out", sim_out, "output file (default stdout)");

    // fit
    auto* fitc = app.add_subcommand("fit", "fit one model by Gaussian QMLE");
    std::string fit_input, fit_column = "x", fit_model = "GARCH(1,1)";
    int fit_starts = 5;
    fitc->add_option("--input", fit_input, "input CSV")->required();
    fitc->add_option("--column", fit_column, "column name");
    fitc->add_option("--model", fit_model, "model spec");
    fitc->add_option("--multistarts", fit_starts, "optimizer starts");

    // select
    auto* sel = app.add_subcommand("select", "penalized selection over an enumerated family");
    std::string sel_input, sel_column = "x", sel_bounds = "5,5,5,5", sel_penalty = "bic";
    double sel_c = 1.0;
    int sel_starts = 3;
    sel->add_option("--input", sel_input, "input CSV")->required();
    sel->add_option("--column", sel_column, "column name");
    sel->add_option("--bounds", sel_bounds, "family bounds max_p,max_q,max_P,max_Q");
    sel->add_option("--penalty", sel_penalty, "bic | aic | hq")
        ->check(CLI::IsMember({"bic", "aic", "hq"}));
    sel->add_option("--c", sel_c, "HQ multiplicative constant");
    sel->add_option("--multistarts", sel_starts, "optimizer starts per model");

    // calibrate
    auto* cal = app.add_subcommand("calibrate", "dimension-jump calibration of the HQ constant");
    std::string cal_input, cal_column = "x", cal_bounds = "5,5,5,5", cal_path_csv;
    int cal_starts = 3;
    cal->add_option("--input", cal_input, "input CSV")->required();
    cal->add_option("--column", cal_column, "column name");
    cal->add_option("--bounds", cal_bounds, "family bounds max_p,max_q,max_P,max_Q");
    cal->add_option("--path-csv", cal_path_csv, "write the c -> model path as CSV");
    cal->add_option("--multistarts", cal_starts, "optimizer starts per model");

    // mc
    auto* mc = app.add_subcommand("mc", "replicated Monte Carlo consistency experiment");
    std::string mc_preset = "I", mc_n = "1000", mc_noise = "gaussian";
    int mc_reps = 100;
    mc->add_option("--preset", mc_preset, "DGP preset: I, II or III");
    mc->add_option("--n", mc_n, "comma-separated sample sizes");
    mc->add_option("--reps", mc_reps, "replications per sample size");
    mc->add_option("--noise", mc_noise, "gaussian | student5 | student<dof>");

    // analyze
    auto* ana = app.add_subcommand("analyze", "full return-series analysis (BIC + calibrated HQ)");
    std::string ana_input, ana_column = "x", ana_bounds = "5,5,5,5";
    bool ana_prices = false;
    std::size_t ana_lags = 20;
    int ana_starts = 3;
    ana->add_option("--input", ana_input, "input CSV")->required();
    ana->add_option("--column", ana_column, "column name");
    ana->add_flag("--prices", ana_prices, "input column holds prices; take log returns first");
    ana->add_option("--bounds", ana_bounds, "family bounds max_p,max_q,max_P,max_Q");
    ana->add_option("--lags", ana_lags, "ACF lags");
    ana->add_option("--multistarts", ana_starts, "optimizer starts per model");

    // acf
    auto* acfc = app.add_subcommand("acf", "sample autocorrelation function");
    std::string acf_input, acf_column = "x";
    std::size_t acf_lags = 20;
    bool acf_squared = false;
    acfc->add_option("--input", acf_input, "input CSV")->required();
    acfc->add_option("--column", acf_column, "column name");
    acfc->add_option("--lags", acf_lags, "maximum lag");
    acfc->add_flag("--squared", acf_squared, "ACF of the squared series");

    for (auto* sc : app.get_subcommands(nullptr)) sc->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim) {
            const auto spec = acsel::parse_spec(sim_model);
            int dof = 5;
            const auto kind = parse_noise(sim_noise, dof);
            const auto x = acsel::simulate_process(spec, parse_doubles(sim_theta),
                                                   {kind, dof, seed}, sim_n, sim_burn);
            std::string content = output_mode == "csv" ? "x\n" : "";
            char buf[32];
            for (double v : x) {
                std::snprintf(buf, sizeof(buf), "%.12g\n", v);
                content += buf;
            }
            emit(sim_out, content);
            std::cerr << "# model=" << acsel::to_string(spec) << " noise=" << sim_noise
                      << " seed=" << seed << " burn_in=" << sim_burn << "\n";
        } else if (*fitc) {
            const auto x = acsel::load_csv(fit_input, fit_column);
            acsel::FitOptions opts;
            opts.multistarts = fit_starts;
            opts.seed = seed;
            const auto fm = acsel::fit(acsel::parse_spec(fit_model), x, opts);
            std::cout << acsel::versioned("fit", acsel::to_json(fm)).dump(2) << "\n";
        } else if (*sel) {
            const auto x = acsel::load_csv(sel_input, sel_column);
            const auto b = parse_bounds(sel_bounds);
            const auto family =
                acsel::enumerate_family(b.max_p, b.max_q, b.max_p_garch, b.max_q_garch);
            acsel::FitOptions opts;
            opts.multistarts = sel_starts;
            opts.seed = seed;
            opts.with_covariance = false;
            std::vector<acsel::FittedModel> fits(family.size());
            acsel::detail::parallel_for_index(family.size(), workers, [&](std::size_t i) {
                fits[i] = acsel::fit(family[i], x, opts);
            });
            acsel::PenaltySpec p;
            if (sel_penalty == "bic") p = {acsel::PenaltyKind::BIC};
            else if (sel_penalty == "aic") p = {acsel::PenaltyKind::AIC};
            else p = {acsel::PenaltyKind::GeneralizedHQ, sel_c};
            const auto result = acsel::select(fits, p, x.size());
            if (output_mode == "json")
                std::cout << acsel::versioned("selection", acsel::to_json(result)).dump(2) << "\n";
            else
                std::cout << acsel::selection_text_table(result);
        } else if (*cal) {
            const auto x = acsel::load_csv(cal_input, cal_column);
            const auto b = parse_bounds(cal_bounds);
            const auto family =
                acsel::enumerate_family(b.max_p, b.max_q, b.max_p_garch, b.max_q_garch);
            acsel::FitOptions opts;
            opts.multistarts = cal_starts;
            opts.seed = seed;
            opts.with_covariance = false;
            std::vector<acsel::FittedModel> fits(family.size());
            acsel::detail::parallel_for_index(family.size(), workers, [&](std::size_t i) {
                fits[i] = acsel::fit(family[i], x, opts);
            });
            const auto path = acsel::calibrate_penalty(fits, x.size());
            if (!cal_path_csv.empty()) emit(cal_path_csv, acsel::jump_path_csv(path));
            if (output_mode == "json")
                std::cout << acsel::versioned("calibration", acsel::to_json(path)).dump(2) << "\n";
            else
                std::cout << "c_hat_min " << path.c_hat_min << "\nc_final " << path.c_final
                          << "\nfinal_model " << acsel::to_string(path.final_model) << "\n";
        } else if (*mc) {
            const auto preset = acsel::dgp_preset(mc_preset);
            acsel::ExperimentConfig cfg;
            cfg.dgp = preset.spec;
            cfg.theta = preset.theta;
            int dof = 5;
            cfg.noise_kind = parse_noise(mc_noise, dof);
            cfg.noise_dof = dof;
            cfg.n_values = parse_ints(mc_n);
            cfg.replications = mc_reps;
            cfg.base_seed = seed;
            cfg.workers = workers;
            cfg.fit_opts.multistarts = 3;
            if (mc_preset == "III") {
                cfg.candidates = acsel::ar_family(15);
                cfg.cmin_rule = cfg.noise_kind == acsel::NoiseKind::GaussianStd
                                    ? acsel::CminRule::Half
                                    : acsel::CminRule::MaxHalfMu4;
            } else {
                cfg.candidates = acsel::mc_candidate_family();
                if (cfg.noise_kind == acsel::NoiseKind::GaussianStd)
                    cfg.cmin_rule = acsel::CminRule::Half;
                else
                    cfg.cmin_rule = preset.spec.family == acsel::Family::ARMA
                                        ? acsel::CminRule::MaxHalfMu4
                                        : acsel::CminRule::Mu4Only;
            }
            const auto report = acsel::run_experiment(cfg);
            if (output_mode == "json")
                std::cout << acsel::versioned("experiment", acsel::to_json(report)).dump(2) << "\n";
            else
                std::cout << acsel::report_csv(report);
        } else if (*ana) {
            auto x = acsel::load_csv(ana_input, ana_column);
            if (ana_prices) x = acsel::log_returns(x);
            acsel::AnalysisOptions opts;
            opts.bounds = parse_bounds(ana_bounds);
            opts.fit_opts.multistarts = ana_starts;
            opts.fit_opts.seed = seed;
            opts.acf_lags = ana_lags;
            opts.workers = workers;
            const auto res = acsel::analyze_returns(x, opts);
            if (output_mode == "json") {
                nlohmann::json j{{"bic", acsel::to_json(res.bic)},
                                 {"calibrated", acsel::to_json(res.calibrated)},
                                 {"jump_path", acsel::to_json(res.path)},
                                 {"mu4_hat", res.mu4_hat},
                                 {"acf_returns", res.acf_returns},
                                 {"acf_squared", res.acf_squared}};
                std::cout << acsel::versioned("analysis", j).dump(2) << "\n";
            } else {
                std::cout << "BIC selection:        " << acsel::to_string(res.bic.selected) << "\n"
                          << "Calibrated selection: " << acsel::to_string(res.calibrated.selected)
                          << " (c_hat_min=" << res.path.c_hat_min
                          << ", c_final=" << res.path.c_final << ")\n"
                          << "mu4_hat:              " << res.mu4_hat << "\n";
            }
        } else if (*acfc) {
            auto x = acsel::load_csv(acf_input, acf_column);
            if (acf_squared)
                for (auto& v : x) v *= v;
            const auto rho = acsel::acf(x, acf_lags);
            std::string content = "lag,rho\n";
            char buf[48];
            for (std::size_t k = 0; k < rho.size(); ++k) {
                std::snprintf(buf, sizeof(buf), "%zu,%.10g\n", k, rho[k]);
                content += buf;
            }
            std::cout << content;
        }
    } catch (const acsel::FitError& e) {
        std::cerr << "fit failure: " << e.what() << "\n";
        return 3;
    } catch (const acsel::CalibrationError& e) {
        std::cerr << "calibration failure: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
