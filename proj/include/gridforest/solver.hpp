#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gridforest/errors.hpp"
#include "gridforest/milp.hpp"
#include "gridforest/subprocess.hpp"

namespace gridforest {

enum class SolveStatus { optimal, infeasible, unbounded, limit };

inline const char* to_string(SolveStatus s) {
    switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::limit: return "limit";
    }
    return "?";
}

struct SolveOptions {
    double integrality_tol = 1e-6;
    double rel_gap = 0.0;   // exact optima by default; variant comparisons need them
    double time_limit_s = 0.0; // 0 = no limit
    unsigned seed = 0;         // engines that are deterministic anyway may ignore it
};

struct SolveOutcome {
    SolveStatus status = SolveStatus::infeasible;
    double objective = 0.0;
    std::vector<double> values;    // by VarId; filled for optimal (and limit incumbents)
    long long nodes_explored = -1; // -1 = backend could not report
    double wall_ms = 0.0;

    bool has_values() const { return !values.empty(); }
};

/// Persistent external solving service. A model is loaded once and can then
/// be re-solved under different variable fixings, which keeps candidate
/// topology enumeration cheap. The backend is chosen by a configuration key:
/// "auto" (environment variable GRIDFOREST_SOLVER_BACKEND, else the bundled
/// script), "scipy" (the bundled script), or a path to an executable.
class SolverBackend {
public:
    explicit SolverBackend(std::string config = "auto") : config_(std::move(config)) {}

    SolveOutcome solve(const MilpModel& model, const SolveOptions& opts = {}) {
        load(model);
        return solve_loaded(opts);
    }

    void load(const MilpModel& model) {
        ensure_process();
        nlohmann::json payload;
        payload["sense"] =
            model.objective().sense == ObjectiveSense::maximize ? "max" : "min";
        std::vector<double> obj(model.variable_count(), 0.0);
        for (const auto& t : model.objective().terms) obj[t.var] = t.coeff;
        payload["obj"] = obj;
        auto lb = nlohmann::json::array();
        auto ub = nlohmann::json::array();
        auto integrality = nlohmann::json::array();
        for (const auto& v : model.variables()) {
            lb.push_back(std::isinf(v.lb) ? nlohmann::json(nullptr) : nlohmann::json(v.lb));
            ub.push_back(std::isinf(v.ub) ? nlohmann::json(nullptr) : nlohmann::json(v.ub));
            integrality.push_back(v.kind == VarKind::binary ? 1 : 0);
        }
        payload["lb"] = std::move(lb);
        payload["ub"] = std::move(ub);
        payload["integrality"] = std::move(integrality);
        auto rows = nlohmann::json::array();
        for (const auto& c : model.constraints()) {
            nlohmann::json row;
            auto& idx = row["idx"] = nlohmann::json::array();
            auto& val = row["val"] = nlohmann::json::array();
            for (const auto& t : c.terms) {
                idx.push_back(t.var);
                val.push_back(t.coeff);
            }
            row["sense"] = c.sense == ConstraintSense::le   ? "le"
                           : c.sense == ConstraintSense::eq ? "eq"
                                                            : "ge";
            row["rhs"] = c.rhs;
            rows.push_back(std::move(row));
        }
        payload["rows"] = std::move(rows);
        auto reply = request({{"op", "load"}, {"model", std::move(payload)}});
        if (!reply.value("ok", false))
            throw SolverError("backend rejected the model");
        loaded_vars_ = model.variable_count();
        loaded_binary_ = std::vector<bool>(model.variable_count(), false);
        for (int v = 0; v < model.variable_count(); ++v)
            loaded_binary_[v] = model.variable(v).kind == VarKind::binary;
    }

    /// Solves the loaded model; `fixes` pins variables to values through
    /// their bounds for this call only.
    SolveOutcome solve_loaded(const SolveOptions& opts = {},
                              const std::vector<std::pair<VarId, double>>& fixes = {}) {
        if (loaded_vars_ < 0) throw SolverError("no model loaded");
        nlohmann::json req{{"op", "solve"},
                           {"opts",
                            {{"rel_gap", opts.rel_gap},
                             {"time_limit", opts.time_limit_s},
                             {"seed", opts.seed}}}};
        if (!fixes.empty()) {
            auto idx = nlohmann::json::array();
            auto val = nlohmann::json::array();
            for (const auto& [v, x] : fixes) {
                if (v < 0 || v >= loaded_vars_)
                    throw SolverError("fix references unknown variable id " +
                                      std::to_string(v));
                idx.push_back(v);
                val.push_back(x);
            }
            req["fix"] = {{"idx", std::move(idx)}, {"val", std::move(val)}};
        }
        auto t0 = std::chrono::steady_clock::now();
        auto reply = request(req);
        auto t1 = std::chrono::steady_clock::now();

        SolveOutcome out;
        out.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        const std::string status = reply.at("status").get<std::string>();
        if (status == "optimal")
            out.status = SolveStatus::optimal;
        else if (status == "infeasible")
            out.status = SolveStatus::infeasible;
        else if (status == "unbounded")
            out.status = SolveStatus::unbounded;
        else if (status == "limit")
            out.status = SolveStatus::limit;
        else
            throw SolverError("backend returned unknown status '" + status + "'");
        if (reply.contains("nodes") && !reply["nodes"].is_null())
            out.nodes_explored = reply["nodes"].get<long long>();
        if (reply.contains("x")) {
            out.objective = reply.at("objective").get<double>();
            out.values = reply["x"].get<std::vector<double>>();
            if (static_cast<int>(out.values.size()) != loaded_vars_)
                throw SolverError("backend returned a wrong-size solution vector");
            if (out.status == SolveStatus::optimal)
                for (int v = 0; v < loaded_vars_; ++v)
                    if (loaded_binary_[v] &&
                        std::fabs(out.values[v] - std::round(out.values[v])) >
                            opts.integrality_tol)
                        throw SolverError("binary variable " + std::to_string(v) +
                                          " is fractional in an optimal solution");
        }
        return out;
    }

    /// Masks (bit j = value of vars[j]) of every 0/1 assignment under which
    /// the loaded model stays feasible, ascending. Enumerated backend-side to
    /// spare one round trip per assignment.
    std::vector<std::uint64_t> feasible_grid(const std::vector<VarId>& vars) {
        if (loaded_vars_ < 0) throw SolverError("no model loaded");
        auto idx = nlohmann::json::array();
        for (VarId v : vars) {
            if (v < 0 || v >= loaded_vars_)
                throw SolverError("grid references unknown variable id " + std::to_string(v));
            idx.push_back(v);
        }
        auto reply = request({{"op", "feasible_grid"}, {"idx", std::move(idx)}});
        return reply.at("feasible_masks").get<std::vector<std::uint64_t>>();
    }

    std::string engine() {
        ensure_process();
        return engine_;
    }

private:
    void ensure_process() {
        if (process_ && process_->alive()) return;
        process_.reset();
        std::string script = config_;
        if (config_ == "auto") {
            const char* env = std::getenv("GRIDFOREST_SOLVER_BACKEND");
            script = env && *env ? env : GRIDFOREST_DEFAULT_BACKEND_SCRIPT;
        } else if (config_ == "scipy") {
            script = GRIDFOREST_DEFAULT_BACKEND_SCRIPT;
        }
        std::vector<std::string> argv;
        if (script.size() > 3 && script.substr(script.size() - 3) == ".py")
            argv = {"python3", script};
        else
            argv = {script};
        process_ = std::make_unique<Subprocess>(argv);
        loaded_vars_ = -1;
        auto reply = request({{"op", "ping"}});
        if (!reply.value("ok", false))
            throw SolverError("backend failed the handshake");
        engine_ = reply.value("engine", "unknown");
    }

    nlohmann::json request(const nlohmann::json& req) {
        process_->write_line(req.dump());
        auto reply = nlohmann::json::parse(process_->read_line());
        if (reply.contains("error"))
            throw SolverError("backend error: " + reply["error"].get<std::string>());
        return reply;
    }

    std::string config_;
    std::unique_ptr<Subprocess> process_;
    std::string engine_;
    int loaded_vars_ = -1;
    std::vector<bool> loaded_binary_;
};

} // namespace gridforest
