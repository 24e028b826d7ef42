#pragma once

#include <functional>
#include <optional>
#include <string>

#include "kloptim/linalg.hpp"
#include "kloptim/prox.hpp"

namespace kloptim {

// Regularized nonconvex-strongly-concave minimax problem
//   min_x max_{y in Y}  f(x,y) + g(x) - h(y)
// with exact side oracles for the zoo instances: the maximizer map y*(x)
// and Phi(x) + g(x) with Phi(x) = max_y f(x,y) - h(y).
struct MinimaxOracle {
    std::string id;
    std::size_t dim_x = 0;
    std::size_t dim_y = 0;

    std::function<double(const Vec&, const Vec&)> f_value;
    std::function<Vec(const Vec&, const Vec&)> grad_x;
    std::function<Vec(const Vec&, const Vec&)> grad_y;

    double mu = 1.0;     // strong concavity modulus in y
    double L = 1.0;      // joint smoothness
    double kappa = 1.0;  // L / mu

    ProxOperator prox_g;  // x-side regularizer (possibly nonconvex kinds)
    ProxOperator prox_h;  // y-side regularizer, includes the Y projection

    // Exact maximizer oracle. When absent, y_star_fallback() runs inner
    // prox-ascent to inner_tol and the tolerance is recorded on the trace.
    std::function<Vec(const Vec&)> y_star;
    std::function<double(const Vec&)> phi_plus_g;  // exact for zoo members
    double y_radius = 0.0;  // radius of the compact Y (0 = unbounded)

    // Known minimizer of Phi+g and its value, for rate monitoring.
    std::optional<Vec> x_star;
    std::optional<double> h_star;
    std::optional<double> kl_theta;  // known KL exponent of Phi+g, when it has one

    // Inner prox-ascent maximizer, used when no closed-form y_star exists.
    Vec y_star_fallback(const Vec& x, double tol, std::size_t max_iters = 200000) const;
};

// f(x,y) = 1/2 x^T Dx x + x^T A y - mu/2 ||y||^2 on Y = ball(y_radius).
//   y*(x) = A^T x / mu  (exact while interior)
//   Phi(x) = 1/2 x^T (Dx + A A^T / mu) x
//   L = spectral norm of the full Hessian [[Dx, A], [A^T, -mu I]]
// A is dim_x x dim_y row-major; Dx empty means zero.
MinimaxOracle make_bilinear_minimax(std::size_t dim_x, std::size_t dim_y,
                                    const std::vector<double>& A, double mu,
                                    const SymMatrix& Dx, const ProxOperator& g_spec,
                                    double y_radius);

}  // namespace kloptim
