#include "kloptim/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kloptim/errors.hpp"

namespace kloptim {

SmoothOracle make_power_norm(std::size_t dim, double p, double scale, double radius) {
    if (dim < 1) throw InputError("power_norm: dim must be >= 1");
    if (scale <= 0.0) throw InputError("power_norm: scale must be positive");
    if (p != 2.0 && p != 3.0 && p != 4.0 && p != 6.0)
        throw InputError("power_norm: p must be one of {2, 3, 4, 6}");
    const double R = radius > 0.0 ? radius : 1.0;

    SmoothOracle o;
    o.id = "power" + std::to_string(static_cast<int>(p)) + ":d=" + std::to_string(dim);
    o.dim = dim;
    o.value = [scale, p](const Vec& x) { return scale * std::pow(norm2(x), p); };
    o.gradient = [scale, p, dim](const Vec& x) {
        const double u = norm2(x);
        if (u == 0.0) return Vec(dim, 0.0);
        return scaled(x, scale * p * std::pow(u, p - 2.0));
    };
    o.hessian = [scale, p, dim](const Vec& x) {
        // scale*p*( u^(p-2) I + (p-2) u^(p-4) x x^T ), zero at the origin
        SymMatrix H(dim);
        const double u = norm2(x);
        if (u == 0.0) {
            if (p == 2.0)
                for (std::size_t i = 0; i < dim; ++i) H.set(i, i, 2.0 * scale);
            return H;
        }
        const double a = scale * p * std::pow(u, p - 2.0);
        const double b = scale * p * (p - 2.0) * std::pow(u, p - 4.0);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = i; j < dim; ++j)
                H.set(i, j, b * x[i] * x[j] + (i == j ? a : 0.0));
        return H;
    };
    o.lipschitz_grad = scale * p * (p - 1.0) * std::pow(R, p - 2.0);
    o.lipschitz_hess =
        p == 2.0 ? 0.0 : scale * p * (p - 1.0) * (p - 2.0) * std::pow(R, p - 3.0);
    o.valid_radius = R;
    o.f_star = 0.0;
    o.solution_distance = [](const Vec& x) { return norm2(x); };
    o.kl_theta = 1.0 / p;
    return o;
}

SmoothOracle make_quadratic(const SymMatrix& Q, const Vec& b) {
    if (Q.dim() != b.size()) throw InputError("quadratic: dimension mismatch");
    const auto ed = sym_eig(Q);
    if (ed.eigenvalues.front() <= 0.0)
        throw InputError("quadratic: Q must be positive definite");

    const Vec x_star = solve_shifted(Q, 0.0, scaled(b, -1.0));
    const double f_star = 0.5 * Q.quadratic_form(x_star) - dot(b, x_star);

    SmoothOracle o;
    o.id = "quad:d=" + std::to_string(Q.dim());
    o.dim = Q.dim();
    o.value = [Q, b](const Vec& x) { return 0.5 * Q.quadratic_form(x) - dot(b, x); };
    o.gradient = [Q, b](const Vec& x) { return sub(Q.multiply(x), b); };
    o.hessian = [Q](const Vec&) { return Q; };
    o.lipschitz_grad = std::max(std::fabs(ed.eigenvalues.front()), ed.eigenvalues.back());
    o.lipschitz_hess = 0.0;
    o.valid_radius = std::numeric_limits<double>::infinity();
    o.f_star = f_star;
    o.solution_distance = [x_star](const Vec& x) { return dist2(x, x_star); };
    o.kl_theta = 0.5;
    return o;
}

SmoothOracle make_saddle_confined(const SymMatrix& D, double gamma, double radius) {
    if (gamma <= 0.0) throw InputError("saddle: gamma must be positive");
    const std::size_t dim = D.dim();
    const auto ed = sym_eig(D);
    const double lam_min = ed.eigenvalues.front();
    const double lam_max = ed.eigenvalues.back();
    if (lam_min >= 0.0 || lam_max <= 0.0)
        throw InputError("saddle: D must be indefinite (no saddle otherwise)");

    // Global minimizers: the sphere of radius rho in the bottom eigenspace.
    const double rho = std::sqrt(-lam_min / gamma);
    const double f_min = -lam_min * lam_min / (4.0 * gamma);

    // eigenvectors spanning the bottom eigenspace (within a spectral-gap tol)
    std::vector<Vec> bottom;
    const double gap_tol = 1e-10 * (1.0 + std::fabs(lam_min));
    for (std::size_t j = 0; j < dim; ++j)
        if (ed.eigenvalues[j] <= lam_min + gap_tol) bottom.push_back(ed.eigenvector(j));

    const double R = radius > 0.0 ? radius : 2.0 * rho + 1.0;

    SmoothOracle o;
    o.id = "saddle:d=" + std::to_string(dim);
    o.dim = dim;
    o.value = [D, gamma](const Vec& x) {
        const double u2 = dot(x, x);
        return 0.5 * D.quadratic_form(x) + 0.25 * gamma * u2 * u2;
    };
    o.gradient = [D, gamma](const Vec& x) {
        Vec g = D.multiply(x);
        axpy(g, gamma * dot(x, x), x);
        return g;
    };
    o.hessian = [D, gamma, dim](const Vec& x) {
        SymMatrix H(dim);
        const double u2 = dot(x, x);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = i; j < dim; ++j)
                H.set(i, j, D(i, j) + 2.0 * gamma * x[i] * x[j] +
                                (i == j ? gamma * u2 : 0.0));
        return H;
    };
    o.lipschitz_grad = std::max(std::fabs(lam_min), std::fabs(lam_max)) + 3.0 * gamma * R * R;
    o.lipschitz_hess = 6.0 * gamma * R;
    o.valid_radius = R;
    o.f_star = f_min;
    o.solution_distance = [bottom, rho](const Vec& x) {
        // distance to the sphere {v in bottom eigenspace : ||v|| = rho}
        double proj2 = 0.0;
        for (const auto& v : bottom) {
            const double c = dot(v, x);
            proj2 += c * c;
        }
        const double perp2 = std::max(0.0, dot(x, x) - proj2);
        const double proj = std::sqrt(proj2);
        if (proj == 0.0) {
            // equidistant from the whole sphere
            return std::sqrt(perp2 + rho * rho);
        }
        const double radial = proj - rho;
        return std::sqrt(perp2 + radial * radial);
    };
    return o;
}

double check_derivatives(const SmoothOracle& oracle, const Vec& x, double step) {
    if (step < 1e-7 || step > 1e-3)
        throw InputError("check_derivatives: step must be in [1e-7, 1e-3]");
    const std::size_t n = oracle.dim;
    const Vec g = oracle.gradient(x);
    const SymMatrix H = oracle.hessian(x);

    auto rel = [](double a, double b) { return std::fabs(a - b) / (1.0 + std::fabs(a)); };

    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        Vec xp = x, xm = x;
        xp[i] += step;
        xm[i] -= step;
        const double fd = (oracle.value(xp) - oracle.value(xm)) / (2.0 * step);
        worst = std::max(worst, rel(g[i], fd));
        const Vec gp = oracle.gradient(xp);
        const Vec gm = oracle.gradient(xm);
        for (std::size_t j = 0; j < n; ++j)
            worst = std::max(worst, rel(H(j, i), (gp[j] - gm[j]) / (2.0 * step)));
    }
    return worst;
}

}  // namespace kloptim
