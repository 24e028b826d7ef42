#include "kloptim/prox.hpp"

#include <algorithm>
#include <cmath>

#include "kloptim/errors.hpp"

namespace kloptim {

ProxOperator ProxOperator::zero() { return {}; }

ProxOperator ProxOperator::l1(double weight) {
    if (weight < 0.0) throw InputError("prox l1: weight must be >= 0");
    ProxOperator p;
    p.kind = Kind::l1;
    p.weight = weight;
    return p;
}

ProxOperator ProxOperator::squared_l2(double weight) {
    if (weight < 0.0) throw InputError("prox squared_l2: weight must be >= 0");
    ProxOperator p;
    p.kind = Kind::squared_l2;
    p.weight = weight;
    return p;
}

ProxOperator ProxOperator::ball(double radius) {
    if (radius <= 0.0) throw InputError("prox ball: radius must be positive");
    ProxOperator p;
    p.kind = Kind::ball_projection;
    p.radius = radius;
    return p;
}

ProxOperator ProxOperator::box(Vec lo, Vec hi) {
    if (lo.size() != hi.size()) throw InputError("prox box: bound sizes differ");
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (lo[i] > hi[i]) throw InputError("prox box: lo > hi componentwise");
    ProxOperator p;
    p.kind = Kind::box_projection;
    p.lo = std::move(lo);
    p.hi = std::move(hi);
    return p;
}

double ProxOperator::value(const Vec& x) const {
    switch (kind) {
        case Kind::zero:
        case Kind::ball_projection:
        case Kind::box_projection:
            return 0.0;
        case Kind::l1: {
            double s = 0.0;
            for (double v : x) s += std::fabs(v);
            return weight * s;
        }
        case Kind::squared_l2:
            return 0.5 * weight * dot(x, x);
    }
    return 0.0;
}

Vec apply_prox(const ProxOperator& op, const Vec& v, double eta) {
    if (eta <= 0.0) throw InputError("apply_prox: eta must be positive");
    switch (op.kind) {
        case ProxOperator::Kind::zero:
            return v;
        case ProxOperator::Kind::l1: {
            const double t = eta * op.weight;
            Vec r(v.size());
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (v[i] > t)
                    r[i] = v[i] - t;
                else if (v[i] < -t)
                    r[i] = v[i] + t;
                else
                    r[i] = 0.0;
            }
            return r;
        }
        case ProxOperator::Kind::squared_l2:
            return scaled(v, 1.0 / (1.0 + eta * op.weight));
        case ProxOperator::Kind::ball_projection: {
            const double n = norm2(v);
            if (n <= op.radius) return v;
            return scaled(v, op.radius / n);
        }
        case ProxOperator::Kind::box_projection: {
            if (op.lo.size() != v.size())
                throw InputError("apply_prox: box bounds do not match vector size");
            Vec r(v.size());
            for (std::size_t i = 0; i < v.size(); ++i)
                r[i] = std::clamp(v[i], op.lo[i], op.hi[i]);
            return r;
        }
    }
    throw InputError("apply_prox: unsupported prox kind");
}

}  // namespace kloptim
