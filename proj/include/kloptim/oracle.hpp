#pragma once

#include <functional>
#include <optional>
#include <string>

#include "kloptim/linalg.hpp"

namespace kloptim {

// Desingularizer data phi(t) = (c/theta) t^theta on a sampled neighborhood.
struct KLSpec {
    double theta = 0.5;  // in (0, 1]
    double c = 1.0;
    double eps = 1.0;  // neighborhood radius
    double lam = 1.0;  // value window
};

// Objective bundle with analytically known constants so every monitor has
// something exact to compare against. Constants hold on the ball of radius
// valid_radius around the origin.
struct SmoothOracle {
    std::string id;
    std::size_t dim = 0;

    std::function<double(const Vec&)> value;
    std::function<Vec(const Vec&)> gradient;
    std::function<SymMatrix(const Vec&)> hessian;

    double lipschitz_grad = 0.0;   // L, gradient Lipschitz constant on the ball
    double lipschitz_hess = 0.0;   // L2, Hessian Lipschitz constant on the ball
    double valid_radius = 1.0;     // R
    double f_star = 0.0;           // global/limit value
    std::function<double(const Vec&)> solution_distance;  // dist to solution set
    std::optional<double> kl_theta;  // known KL exponent, when the family has one
};

// f(x) = scale * ||x||^p for p in {2, 3, 4, 6}; f* = 0, solution set {0},
// kl_theta = 1/p. Constants on the ball of the given radius:
//   L  = scale * p(p-1) R^(p-2)
//   L2 = scale * p(p-1)(p-2) R^(p-3)   (0 for p = 2)
SmoothOracle make_power_norm(std::size_t dim, double p, double scale,
                             double radius = 0.0);

// f(x) = 1/2 x^T Q x - b^T x with Q positive definite. Minimizer and f* are
// computed at construction; kl_theta = 1/2, L2 = 0.
SmoothOracle make_quadratic(const SymMatrix& Q, const Vec& b);

// f(x) = 1/2 x^T D x + (gamma/4)||x||^4 with indefinite D. The origin is a
// strict saddle; global minimizers lie along the most negative eigendirections
// of D at radius sqrt(-lambda_min/gamma). kl_theta is left unset.
SmoothOracle make_saddle_confined(const SymMatrix& D, double gamma,
                                  double radius = 0.0);

// Max over coordinates of the mixed relative error between analytic and
// central-difference gradient/Hessian entries (denominator 1 + |analytic|).
double check_derivatives(const SmoothOracle& oracle, const Vec& x, double step);

}  // namespace kloptim
