#pragma once

#include "kloptim/linalg.hpp"

namespace kloptim {

// Closed-form proximal operators. Every shipped kind has a single-valued
// prox, so the set-valued "argmin" of the general theory never bites here.
struct ProxOperator {
    enum class Kind { zero, l1, squared_l2, ball_projection, box_projection };

    Kind kind = Kind::zero;
    double weight = 0.0;  // l1 / squared_l2
    double radius = 1.0;  // ball_projection
    Vec lo, hi;           // box_projection

    static ProxOperator zero();
    static ProxOperator l1(double weight);
    static ProxOperator squared_l2(double weight);
    static ProxOperator ball(double radius);
    static ProxOperator box(Vec lo, Vec hi);

    // Value of the regularizer itself (indicator kinds return 0 inside,
    // +inf outside is never needed by the monitors and is clamped to 0).
    double value(const Vec& x) const;
};

// argmin_u  reg(u) + 1/(2*eta) ||u - v||^2, evaluated in closed form.
Vec apply_prox(const ProxOperator& op, const Vec& v, double eta);

}  // namespace kloptim
