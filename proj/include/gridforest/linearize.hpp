#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "gridforest/errors.hpp"
#include "gridforest/milp.hpp"

namespace gridforest {

/// Adds z = a*b for binary a, b via the McCormick envelope
/// (z <= a, z <= b, z >= a + b - 1), exact at every 0/1 assignment.
inline VarId mccormick_binary_product(MilpModel& model, VarId a, VarId b,
                                      const std::string& name) {
    if (model.variable(a).kind != VarKind::binary ||
        model.variable(b).kind != VarKind::binary)
        throw ModelError("product '" + name + "' requires two binary factors");
    VarId z = model.add_continuous(name, 0.0, 1.0);
    model.add_constraint(name + "_le_a", {{z, 1.0}, {a, -1.0}}, ConstraintSense::le, 0.0);
    model.add_constraint(name + "_le_b", {{z, 1.0}, {b, -1.0}}, ConstraintSense::le, 0.0);
    model.add_constraint(name + "_ge_sum", {{z, 1.0}, {a, -1.0}, {b, -1.0}},
                         ConstraintSense::ge, -1.0);
    return z;
}

/// Outer polygonal approximation of p^2 + q^2 <= (gate * s_cap)^2: tangent
/// half-planes cos(t_k) p + sin(t_k) q <= gate * s_cap at t_k = 2*pi*k/segments.
/// With the gate at 0 the opposing cut pairs force p = q = 0; cut-feasible
/// points overshoot the disc radius by at most the secant factor
/// 1/cos(pi/segments).
inline void polygonal_capacity_cuts(MilpModel& model, VarId p, VarId q, double s_cap,
                                    VarId gate, const std::string& name,
                                    int segments = 12) {
    if (segments < 4 || segments % 2 != 0)
        throw ModelError("capacity polygon '" + name + "' needs an even segment count >= 4");
    if (s_cap < 0)
        throw ModelError("capacity polygon '" + name + "' has a negative radius");
    const double step = 2.0 * std::acos(-1.0) / segments;
    for (int k = 0; k < segments; ++k) {
        const double c = std::cos(step * k);
        const double s = std::sin(step * k);
        model.add_constraint(name + "_cut" + std::to_string(k),
                             {{p, c}, {q, s}, {gate, -s_cap}}, ConstraintSense::le, 0.0);
    }
}

} // namespace gridforest
