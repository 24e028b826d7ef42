#include "kloptim/minimax.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kloptim/errors.hpp"

namespace kloptim {

Vec MinimaxOracle::y_star_fallback(const Vec& x, double tol, std::size_t max_iters) const {
    Vec y(dim_y, 0.0);
    const double eta = 1.0 / L;
    for (std::size_t it = 0; it < max_iters; ++it) {
        Vec w = y;
        axpy(w, eta, grad_y(x, y));
        Vec y_next = apply_prox(prox_h, w, eta);
        const double step = dist2(y_next, y);
        y = std::move(y_next);
        if (step <= tol) return y;
    }
    throw NumericalError("y_star_fallback: inner maximizer did not reach tolerance");
}

MinimaxOracle make_bilinear_minimax(std::size_t dim_x, std::size_t dim_y,
                                    const std::vector<double>& A, double mu,
                                    const SymMatrix& Dx, const ProxOperator& g_spec,
                                    double y_radius) {
    if (mu <= 0.0) throw InputError("bilinear: mu must be positive");
    if (A.size() != dim_x * dim_y) throw InputError("bilinear: A has wrong shape");
    const bool has_dx = Dx.dim() != 0;
    if (has_dx && Dx.dim() != dim_x) throw InputError("bilinear: Dx has wrong dimension");
    if (y_radius <= 0.0) throw InputError("bilinear: y_radius must be positive");

    // full Hessian [[Dx, A], [A^T, -mu I]]
    const std::size_t n = dim_x + dim_y;
    SymMatrix full(n);
    for (std::size_t i = 0; i < dim_x; ++i)
        for (std::size_t j = i; j < dim_x; ++j) full.set(i, j, has_dx ? Dx(i, j) : 0.0);
    for (std::size_t i = 0; i < dim_x; ++i)
        for (std::size_t j = 0; j < dim_y; ++j) full.set(i, dim_x + j, A[i * dim_y + j]);
    for (std::size_t j = 0; j < dim_y; ++j) full.set(dim_x + j, dim_x + j, -mu);

    const auto full_ed = sym_eig(full);
    const double L = std::max(std::fabs(full_ed.eigenvalues.front()),
                              std::fabs(full_ed.eigenvalues.back()));

    // Phi(x) = 1/2 x^T (Dx + A A^T / mu) x
    SymMatrix P(dim_x);
    for (std::size_t i = 0; i < dim_x; ++i)
        for (std::size_t j = i; j < dim_x; ++j) {
            double s = has_dx ? Dx(i, j) : 0.0;
            for (std::size_t k = 0; k < dim_y; ++k)
                s += A[i * dim_y + k] * A[j * dim_y + k] / mu;
            P.set(i, j, s);
        }

    MinimaxOracle o;
    o.id = "bilinear:" + std::to_string(dim_x) + "x" + std::to_string(dim_y);
    o.dim_x = dim_x;
    o.dim_y = dim_y;
    o.mu = mu;
    o.L = L;
    o.kappa = L / mu;
    o.prox_g = g_spec;
    o.prox_h = ProxOperator::ball(y_radius);
    o.y_radius = y_radius;

    auto Ay = [A, dim_x, dim_y](const Vec& y) {
        Vec r(dim_x, 0.0);
        for (std::size_t i = 0; i < dim_x; ++i)
            for (std::size_t k = 0; k < dim_y; ++k) r[i] += A[i * dim_y + k] * y[k];
        return r;
    };
    auto Atx = [A, dim_x, dim_y](const Vec& x) {
        Vec r(dim_y, 0.0);
        for (std::size_t k = 0; k < dim_y; ++k)
            for (std::size_t i = 0; i < dim_x; ++i) r[k] += A[i * dim_y + k] * x[i];
        return r;
    };

    o.f_value = [Dx, has_dx, Ay, mu](const Vec& x, const Vec& y) {
        double v = has_dx ? 0.5 * Dx.quadratic_form(x) : 0.0;
        v += dot(Ay(y), x);
        v -= 0.5 * mu * dot(y, y);
        return v;
    };
    o.grad_x = [Dx, has_dx, Ay](const Vec& x, const Vec& y) {
        Vec g = Ay(y);
        if (has_dx) {
            const Vec dxx = Dx.multiply(x);
            for (std::size_t i = 0; i < g.size(); ++i) g[i] += dxx[i];
        }
        return g;
    };
    o.grad_y = [Atx, mu](const Vec& x, const Vec& y) {
        Vec g = Atx(x);
        axpy(g, -mu, y);
        return g;
    };
    o.y_star = [Atx, mu](const Vec& x) { return scaled(Atx(x), 1.0 / mu); };
    o.phi_plus_g = [P, g_spec](const Vec& x) {
        return 0.5 * P.quadratic_form(x) + g_spec.value(x);
    };

    // With Phi convex, every shipped g is minimized at the origin, so
    // Phi+g is too; that gives an exact H* for the rate monitors. Strong
    // convexity of Phi additionally pins the KL exponent at 1/2.
    const double p_min_eig = min_eigenvalue(P);
    if (p_min_eig >= -1e-12) {
        o.x_star = Vec(dim_x, 0.0);
        o.h_star = 0.0;
        if (p_min_eig > 1e-12) o.kl_theta = 0.5;
    }
    return o;
}

}  // namespace kloptim
