#pragma once

#include <json.hpp>
#include <string>

#include "acsel/calibrate.hpp"
#include "acsel/criteria.hpp"
#include "acsel/fit.hpp"
#include "acsel/io.hpp"
#include "acsel/montecarlo.hpp"

/// JSON / CSV emission for the CLI.  Every JSON document carries a
/// top-level schema_version.
namespace acsel {

inline constexpr int kSchemaVersion = 1;

inline nlohmann::json to_json(const FittedModel& f) {
    nlohmann::json j{
        {"spec", to_string(f.spec)},
        {"theta", f.theta},
        {"loglik", f.loglik},
        {"converged", f.converged},
        {"at_boundary", f.at_boundary},
        {"n_evals", f.n_evals},
        {"n", f.n},
    };
    if (f.std_errors)
        j["std_errors"] = *f.std_errors;
    else
        j["std_errors"] = nullptr;
    return j;
}

inline nlohmann::json to_json(const SelectionResult& r) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.table)
        rows.push_back({{"spec", to_string(row.spec)},
                        {"D", row.dim},
                        {"loglik", row.loglik},
                        {"penalty", row.penalty},
                        {"criterion", row.criterion}});
    nlohmann::json j{{"table", rows}, {"selected", to_string(r.selected)}};
    j["c_used"] = r.c_used ? nlohmann::json(*r.c_used) : nlohmann::json(nullptr);
    j["mu4_hat"] = r.mu4_hat ? nlohmann::json(*r.mu4_hat) : nlohmann::json(nullptr);
    if (r.note) j["note"] = *r.note;
    return j;
}

inline nlohmann::json to_json(const JumpPath& p) {
    nlohmann::json pts = nlohmann::json::array();
    for (std::size_t i = 0; i < p.grid.size(); ++i)
        pts.push_back({{"c", p.grid[i]},
                       {"spec", to_string(p.selected_specs[i])},
                       {"D", p.selected_dims[i]}});
    return {{"path", pts},
            {"c_hat_min", p.c_hat_min},
            {"c_final", p.c_final},
            {"final_model", to_string(p.final_model)}};
}

inline nlohmann::json to_json(const ExperimentReport& r) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : r.cells)
        cells.push_back({{"n", c.n},
                         {"penalty", c.penalty},
                         {"W", c.pct_wrong()},
                         {"T", c.pct_true()},
                         {"O", c.pct_overfitted()},
                         {"replications", c.replications}});
    return {{"cells", cells}, {"wall_seconds", r.wall_seconds}};
}

/// Wraps a payload as a versioned top-level document.
inline nlohmann::json versioned(const std::string& kind, nlohmann::json payload) {
    return {{"schema_version", kSchemaVersion}, {"kind", kind}, {"result", std::move(payload)}};
}

inline std::string jump_path_csv(const JumpPath& p) {
    std::string out = "c,spec,D\n";
    for (std::size_t i = 0; i < p.grid.size(); ++i) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.10g,", p.grid[i]);
        out += buf;
        out += to_string(p.selected_specs[i]) + "," + std::to_string(p.selected_dims[i]) + "\n";
    }
    return out;
}

inline std::string report_csv(const ExperimentReport& r) {
    std::string out = "n,penalty,W,T,O\n";
    for (const auto& c : r.cells) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%d,%s,%.1f,%.1f,%.1f\n", c.n, c.penalty.c_str(),
                      c.pct_wrong(), c.pct_true(), c.pct_overfitted());
        out += buf;
    }
    return out;
}

inline std::string selection_text_table(const SelectionResult& r) {
    char buf[160];
    std::string out;
    std::snprintf(buf, sizeof(buf), "%-12s %4s %14s %12s %14s\n", "model", "D", "loglik",
                  "penalty", "criterion");
    out += buf;
    for (std::size_t i = 0; i < r.table.size(); ++i) {
        const auto& row = r.table[i];
        std::snprintf(buf, sizeof(buf), "%-12s %4d %14.4f %12.4f %14.4f%s\n",
                      to_string(row.spec).c_str(), row.dim, row.loglik, row.penalty,
                      row.criterion, i == r.selected_index ? "  <- selected" : "");
        out += buf;
    }
    return out;
}

}  // namespace acsel
