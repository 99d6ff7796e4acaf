#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gridforest/errors.hpp"

namespace gridforest {

enum class VarKind { continuous, binary };
enum class ConstraintSense { le, eq, ge };
enum class ObjectiveSense { minimize, maximize };

using VarId = int;

struct LinTerm {
    VarId var = -1;
    double coeff = 0.0;
};

struct Variable {
    std::string name;
    VarKind kind = VarKind::continuous;
    double lb = 0.0;
    double ub = 0.0;
};

struct Constraint {
    std::string name;
    std::vector<LinTerm> terms; // sorted by var id, duplicates merged
    ConstraintSense sense = ConstraintSense::le;
    double rhs = 0.0;
};

struct Objective {
    ObjectiveSense sense = ObjectiveSense::minimize;
    std::vector<LinTerm> terms;
};

/// Sparse mixed-integer linear model. Rows and columns are append-only so a
/// builder's contribution to the size counters is exactly what it added;
/// bounds stay mutable so candidate topologies can be pinned without
/// rebuilding.
class MilpModel {
public:
    VarId add_continuous(const std::string& name, double lb, double ub) {
        return add_variable(name, VarKind::continuous, lb, ub);
    }

    VarId add_binary(const std::string& name) {
        return add_variable(name, VarKind::binary, 0.0, 1.0);
    }

    int add_constraint(const std::string& name, std::vector<LinTerm> terms,
                       ConstraintSense sense, double rhs) {
        check_name(name);
        if (constraint_names_.count(name))
            throw ModelError("duplicate constraint name '" + name + "'");
        auto row = normalize(std::move(terms)); // may throw; register the name after
        constraint_names_.emplace(name, static_cast<int>(constraints_.size()));
        constraints_.push_back({name, std::move(row), sense, rhs});
        return static_cast<int>(constraints_.size()) - 1;
    }

    void set_objective(ObjectiveSense sense, std::vector<LinTerm> terms) {
        objective_.sense = sense;
        objective_.terms = normalize(std::move(terms));
    }

    /// Tightens (or restores) variable bounds; a binary stays within [0,1].
    void set_var_bounds(VarId v, double lb, double ub) {
        auto& var = mutable_variable(v);
        if (lb > ub)
            throw ModelError("empty bound interval for variable '" + var.name + "'");
        if (var.kind == VarKind::binary && (lb < 0.0 || ub > 1.0))
            throw ModelError("binary variable '" + var.name + "' bounds must stay in [0,1]");
        var.lb = lb;
        var.ub = ub;
    }

    void fix_var(VarId v, double value) { set_var_bounds(v, value, value); }

    int variable_count() const { return static_cast<int>(variables_.size()); }
    int constraint_count() const { return static_cast<int>(constraints_.size()); }

    int binary_count() const {
        int c = 0;
        for (const auto& v : variables_)
            if (v.kind == VarKind::binary) ++c;
        return c;
    }

    const std::vector<Variable>& variables() const { return variables_; }
    const std::vector<Constraint>& constraints() const { return constraints_; }
    const Objective& objective() const { return objective_; }

    const Variable& variable(VarId v) const {
        if (v < 0 || v >= variable_count())
            throw ModelError("variable id " + std::to_string(v) + " out of range");
        return variables_[v];
    }

    VarId var_by_name(const std::string& name) const {
        auto it = var_names_.find(name);
        if (it == var_names_.end())
            throw ModelError("no variable named '" + name + "'");
        return it->second;
    }

    // ---- serialization ----

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["format"] = "milp";
        j["version"] = 1;
        j["objective"] = {{"sense", objective_.sense == ObjectiveSense::maximize
                                        ? "max"
                                        : "min"},
                          {"terms", terms_to_json(objective_.terms)}};
        auto& vars = j["variables"] = nlohmann::json::array();
        for (const auto& v : variables_) {
            nlohmann::json vj{{"name", v.name},
                              {"kind", v.kind == VarKind::binary ? "binary" : "continuous"}};
            vj["lb"] = bound_to_json(v.lb);
            vj["ub"] = bound_to_json(v.ub);
            vars.push_back(std::move(vj));
        }
        auto& rows = j["constraints"] = nlohmann::json::array();
        for (const auto& c : constraints_)
            rows.push_back({{"name", c.name},
                            {"sense", sense_to_string(c.sense)},
                            {"rhs", c.rhs},
                            {"terms", terms_to_json(c.terms)}});
        return j;
    }

    static MilpModel from_json(const nlohmann::json& j) {
        if (!j.is_object() || j.value("format", "") != "milp" || j.value("version", 0) != 1)
            throw ModelError("not a version-1 model document");
        MilpModel m;
        for (const auto& vj : j.at("variables")) {
            const std::string kind = vj.at("kind").get<std::string>();
            const std::string name = vj.at("name").get<std::string>();
            double lb = bound_from_json(vj.at("lb"), -inf());
            double ub = bound_from_json(vj.at("ub"), inf());
            if (kind == "binary") {
                VarId v = m.add_binary(name);
                m.set_var_bounds(v, lb, ub);
            } else if (kind == "continuous") {
                m.add_continuous(name, lb, ub);
            } else {
                throw ModelError("unknown variable kind '" + kind + "'");
            }
        }
        for (const auto& cj : j.at("constraints"))
            m.add_constraint(cj.at("name").get<std::string>(),
                             terms_from_json(cj.at("terms"), m.variable_count()),
                             sense_from_string(cj.at("sense").get<std::string>()),
                             cj.at("rhs").get<double>());
        const auto& oj = j.at("objective");
        const std::string sense = oj.at("sense").get<std::string>();
        if (sense != "max" && sense != "min")
            throw ModelError("unknown objective sense '" + sense + "'");
        m.set_objective(sense == "max" ? ObjectiveSense::maximize : ObjectiveSense::minimize,
                        terms_from_json(oj.at("terms"), m.variable_count()));
        return m;
    }

    /// CPLEX-style LP text, for inspection with any off-the-shelf solver.
    std::string to_lp_format() const {
        std::string out;
        out += objective_.sense == ObjectiveSense::maximize ? "Maximize\n" : "Minimize\n";
        out += " obj:";
        if (objective_.terms.empty())
            out += " 0 " + (variables_.empty() ? std::string("x") : variables_[0].name);
        else
            append_terms(out, objective_.terms);
        out += "\nSubject To\n";
        for (const auto& c : constraints_) {
            out += " " + c.name + ":";
            append_terms(out, c.terms);
            switch (c.sense) {
            case ConstraintSense::le: out += " <= "; break;
            case ConstraintSense::eq: out += " = "; break;
            case ConstraintSense::ge: out += " >= "; break;
            }
            out += fmt(c.rhs) + "\n";
        }
        out += "Bounds\n";
        for (const auto& v : variables_) {
            if (std::isinf(v.lb) && std::isinf(v.ub)) {
                out += " " + v.name + " free\n";
                continue;
            }
            out += " " + (std::isinf(v.lb) ? std::string("-infinity") : fmt(v.lb)) + " <= " +
                   v.name + " <= " + (std::isinf(v.ub) ? std::string("+infinity") : fmt(v.ub)) +
                   "\n";
        }
        bool any_binary = false;
        for (const auto& v : variables_)
            if (v.kind == VarKind::binary) {
                if (!any_binary) out += "Binary\n";
                any_binary = true;
                out += " " + v.name + "\n";
            }
        out += "End\n";
        return out;
    }

    static double inf() { return std::numeric_limits<double>::infinity(); }

private:
    VarId add_variable(const std::string& name, VarKind kind, double lb, double ub) {
        check_name(name);
        if (!var_names_.emplace(name, static_cast<int>(variables_.size())).second)
            throw ModelError("duplicate variable name '" + name + "'");
        if (lb > ub)
            throw ModelError("empty bound interval for variable '" + name + "'");
        variables_.push_back({name, kind, lb, ub});
        return static_cast<int>(variables_.size()) - 1;
    }

    Variable& mutable_variable(VarId v) {
        if (v < 0 || v >= variable_count())
            throw ModelError("variable id " + std::to_string(v) + " out of range");
        return variables_[v];
    }

    /// Sort by variable, merge duplicates, drop explicit zeros, check ids.
    std::vector<LinTerm> normalize(std::vector<LinTerm> terms) const {
        for (const auto& t : terms)
            if (t.var < 0 || t.var >= variable_count())
                throw ModelError("term references unknown variable id " +
                                 std::to_string(t.var));
        std::sort(terms.begin(), terms.end(),
                  [](const LinTerm& a, const LinTerm& b) { return a.var < b.var; });
        std::vector<LinTerm> out;
        for (const auto& t : terms) {
            if (!out.empty() && out.back().var == t.var)
                out.back().coeff += t.coeff;
            else
                out.push_back(t);
        }
        std::erase_if(out, [](const LinTerm& t) { return t.coeff == 0.0; });
        return out;
    }

    static void check_name(const std::string& name) {
        if (name.empty() || (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_'))
            throw ModelError("name '" + name + "' must start with a letter or underscore");
        for (char ch : name)
            if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_')
                throw ModelError("name '" + name + "' contains characters unusable in LP text");
    }

    static std::string fmt(double x) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return buf;
    }

    void append_terms(std::string& out, const std::vector<LinTerm>& terms) const {
        for (const auto& t : terms) {
            double c = t.coeff;
            out += c < 0 ? " - " : " + ";
            out += fmt(std::fabs(c)) + " " + variables_[t.var].name;
        }
    }

    static const char* sense_to_string(ConstraintSense s) {
        switch (s) {
        case ConstraintSense::le: return "le";
        case ConstraintSense::eq: return "eq";
        case ConstraintSense::ge: return "ge";
        }
        return "?";
    }

    static ConstraintSense sense_from_string(const std::string& s) {
        if (s == "le") return ConstraintSense::le;
        if (s == "eq") return ConstraintSense::eq;
        if (s == "ge") return ConstraintSense::ge;
        throw ModelError("unknown constraint sense '" + s + "'");
    }

    static nlohmann::json bound_to_json(double b) {
        if (std::isinf(b)) return nullptr; // JSON has no infinity
        return b;
    }

    static double bound_from_json(const nlohmann::json& j, double when_null) {
        if (j.is_null()) return when_null;
        return j.get<double>();
    }

    static nlohmann::json terms_to_json(const std::vector<LinTerm>& terms) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& t : terms) arr.push_back({t.var, t.coeff});
        return arr;
    }

    static std::vector<LinTerm> terms_from_json(const nlohmann::json& arr, int var_count) {
        if (!arr.is_array()) throw ModelError("terms must be an array");
        std::vector<LinTerm> out;
        for (const auto& tj : arr) {
            if (!tj.is_array() || tj.size() != 2)
                throw ModelError("each term must be a [var, coeff] pair");
            int v = tj[0].get<int>();
            if (v < 0 || v >= var_count)
                throw ModelError("term references unknown variable id " + std::to_string(v));
            out.push_back({v, tj[1].get<double>()});
        }
        return out;
    }

    std::vector<Variable> variables_;
    std::vector<Constraint> constraints_;
    Objective objective_;
    std::unordered_map<std::string, int> var_names_;
    std::unordered_map<std::string, int> constraint_names_;
};

/// Copy of the model with every binary re-kinded continuous (bounds kept).
inline MilpModel lp_relaxation(const MilpModel& model) {
    MilpModel relaxed;
    for (const auto& v : model.variables())
        relaxed.add_continuous(v.name, v.lb, v.ub);
    for (const auto& c : model.constraints())
        relaxed.add_constraint(c.name, c.terms, c.sense, c.rhs);
    relaxed.set_objective(model.objective().sense, model.objective().terms);
    return relaxed;
}

} // namespace gridforest
