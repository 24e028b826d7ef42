#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kloptim/errors.hpp"
#include "kloptim/minimax.hpp"
#include "kloptim/oracle.hpp"
#include "kloptim/ratelab.hpp"
#include "kloptim/rng.hpp"
#include "kloptim/zoo.hpp"

using namespace kloptim;

namespace {

// spectral norm of the difference of two symmetric matrices
double spec_norm_diff(const SymMatrix& A, const SymMatrix& B) {
    SymMatrix D(A.dim());
    for (std::size_t i = 0; i < A.dim(); ++i)
        for (std::size_t j = i; j < A.dim(); ++j) D.set(i, j, A(i, j) - B(i, j));
    const auto ed = sym_eig(D);
    return std::max(std::fabs(ed.eigenvalues.front()), std::fabs(ed.eigenvalues.back()));
}

Vec sample_in_ball(Rng& rng, std::size_t d, double radius) {
    // log-uniform radius over 8 decades, uniform direction; the wide spread
    // keeps direction-dependent offsets from biasing log-log slopes
    const double r = radius * std::pow(10.0, -8.0 * rng.uniform());
    return scaled(rng.unit_vec(d), r);
}

}  // namespace

TEST_CASE("power_norm p=2 quadratic example") {
    const auto o = make_power_norm(2, 2.0, 0.5);
    CHECK(o.value({1.0, 1.0}) == doctest::Approx(1.0).epsilon(1e-14));
    const Vec g = o.gradient({1.0, 1.0});
    CHECK(g[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(g[1] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(*o.kl_theta == doctest::Approx(0.5));
}

TEST_CASE("power_norm p=3 at the minimizer") {
    const auto o = make_power_norm(3, 3.0, 1.0);
    const Vec zero(3, 0.0);
    CHECK(o.value(zero) == 0.0);
    CHECK(norm2(o.gradient(zero)) == 0.0);
    CHECK(o.hessian(zero).max_abs() == 0.0);
}

TEST_CASE("power_norm p=4 log-log slope is 4/3, theta 1/4") {
    const auto o = make_power_norm(3, 4.0, 1.0);
    Rng rng(5);
    std::vector<double> lg, lr;
    for (int i = 0; i < 100; ++i) {
        const Vec x = sample_in_ball(rng, 3, 1.0);
        lr.push_back(std::log(o.value(x) - o.f_star));
        lg.push_back(std::log(norm2(o.gradient(x))));
    }
    const auto fit = linear_fit(lg, lr);
    CHECK(fit.slope == doctest::Approx(4.0 / 3.0).epsilon(1e-10));
    CHECK(*o.kl_theta == doctest::Approx(0.25));
}

TEST_CASE("power_norm rejects unsupported p") {
    CHECK_THROWS_AS(make_power_norm(2, 5.0, 1.0), InputError);
    CHECK_THROWS_AS(make_power_norm(0, 4.0, 1.0), InputError);
}

TEST_CASE("quadratic identity instance") {
    const auto o = make_quadratic(SymMatrix::identity(2), {0.0, 0.0});
    CHECK(o.f_star == doctest::Approx(0.0));
    CHECK(o.solution_distance({0.0, 0.0}) == doctest::Approx(0.0));
    CHECK(*o.kl_theta == doctest::Approx(0.5));
}

TEST_CASE("quadratic diag(1,4) with b=(1,4)") {
    const auto o = make_quadratic(SymMatrix::diagonal({1.0, 4.0}), {1.0, 4.0});
    // direct solve oracle: x* = (1, 1), f* = -2.5
    CHECK(o.solution_distance({1.0, 1.0}) <= 1e-12);
    CHECK(o.f_star == doctest::Approx(-2.5).epsilon(1e-14));
    CHECK(norm2(o.gradient({1.0, 1.0})) <= 1e-12);
}

TEST_CASE("quadratic rejects indefinite Q") {
    CHECK_THROWS_AS(make_quadratic(SymMatrix::diagonal({1.0, -1.0}), {0.0, 0.0}),
                    InputError);
}

TEST_CASE("saddle_confined diag(-1,1)") {
    const auto o = make_saddle_confined(SymMatrix::diagonal({-1.0, 1.0}), 1.0);

    // solving grad f = 0 along e1: -x + x^3 = 0 => x = +-1
    for (double sign : {-1.0, 1.0}) {
        const Vec m{sign, 0.0};
        CHECK(norm2(o.gradient(m)) <= 1e-12);
        CHECK(o.value(m) == doctest::Approx(-0.25).epsilon(1e-14));
        CHECK(o.solution_distance(m) <= 1e-12);
    }
    CHECK(o.f_star == doctest::Approx(-0.25));

    // saddle certificate at the origin
    const Vec zero{0.0, 0.0};
    CHECK(norm2(o.gradient(zero)) == 0.0);
    CHECK(min_eigenvalue(o.hessian(zero)) == doctest::Approx(-1.0));
    CHECK(o.solution_distance(zero) == doctest::Approx(1.0));

    CHECK_THROWS_AS(make_saddle_confined(SymMatrix::identity(2), 1.0), InputError);
}

TEST_CASE("check_derivatives on the smooth zoo") {
    Rng rng(17);

    const auto quad = make_quadratic(SymMatrix::diagonal({1.0, 4.0, 9.0}), {1.0, 0.0, 2.0});
    CHECK(check_derivatives(quad, rng.normal_vec(3), 1e-5) <= 1e-9);

    const auto p4 = make_power_norm(3, 4.0, 1.0);
    CHECK(check_derivatives(p4, rng.unit_vec(3), 1e-5) <= 1e-5);

    // the kink in the third derivative of ||x||^3 at 0 makes the Hessian
    // difference O(3h), so a step below 1e-5/3 is needed there
    const auto p3 = make_power_norm(3, 3.0, 1.0);
    CHECK(check_derivatives(p3, Vec(3, 0.0), 1e-6) <= 1e-5);

    CHECK_THROWS_AS(check_derivatives(p3, Vec(3, 0.0), 1e-2), InputError);
}

TEST_CASE("zoo invariant: derivatives at 100 random ball points") {
    Rng rng(23);
    std::vector<SmoothOracle> zoo;
    zoo.push_back(make_power_norm(4, 2.0, 1.0));
    zoo.push_back(make_power_norm(4, 3.0, 0.7));
    zoo.push_back(make_power_norm(4, 4.0, 1.3));
    zoo.push_back(make_power_norm(4, 6.0, 1.0));
    zoo.push_back(make_quadratic(SymMatrix::diagonal({1.0, 2.0, 5.0, 10.0}),
                                 {1.0, -1.0, 0.5, 0.0}));
    zoo.push_back(make_saddle_confined(SymMatrix::diagonal({-1.0, 1.0, 2.0, 3.0}), 1.0));

    for (const auto& o : zoo) {
        double worst = 0.0;
        const double sample_radius = std::min(o.valid_radius, 2.0);
        for (int i = 0; i < 100; ++i) {
            const Vec x = scaled(rng.unit_vec(o.dim), sample_radius * rng.uniform());
            worst = std::max(worst, check_derivatives(o, x, 1e-5));
            CHECK(o.value(x) >= o.f_star - 1e-12 * (1.0 + std::fabs(o.f_star)));
        }
        CHECK(worst <= 1e-5);
    }
}

TEST_CASE("zoo invariant: sampled KL inequality for known-theta members") {
    Rng rng(31);
    for (double p : {2.0, 3.0, 4.0, 6.0}) {
        const auto o = make_power_norm(3, p, 1.0);
        const double theta = *o.kl_theta;
        std::vector<double> lg, lr;
        double c_emp = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const Vec x = sample_in_ball(rng, 3, 1.0);
            const double r = o.value(x) - o.f_star;
            const double g = norm2(o.gradient(x));
            lr.push_back(std::log(r));
            lg.push_back(std::log(g));
            c_emp = std::max(c_emp, r / std::pow(g, 1.0 / (1.0 - theta)));
        }
        CHECK(std::isfinite(c_emp));
        const auto fit = linear_fit(lg, lr);
        CHECK(std::fabs(fit.slope - 1.0 / (1.0 - theta)) <= 0.03);
    }

    // anisotropic quadratic: slope still 2 over log-uniform radii
    const auto q = make_quadratic(SymMatrix::diagonal({1.0, 10.0, 100.0}), {0.0, 0.0, 0.0});
    std::vector<double> lg, lr;
    for (int i = 0; i < 1000; ++i) {
        const Vec x = sample_in_ball(rng, 3, 1.0);
        lr.push_back(std::log(q.value(x) - q.f_star));
        lg.push_back(std::log(norm2(q.gradient(x))));
    }
    const auto fit = linear_fit(lg, lr);
    CHECK(std::fabs(fit.slope - 2.0) <= 0.03);
}

TEST_CASE("declared L and L2 are valid (and nearly tight) on the ball") {
    Rng rng(41);
    for (double p : {3.0, 4.0, 6.0}) {
        const double R = 2.0;
        const auto o = make_power_norm(3, p, 1.0, R);
        double worst_ratio_h = 0.0;
        for (int i = 0; i < 200; ++i) {
            const Vec x = scaled(rng.unit_vec(3), R * rng.uniform());
            const Vec y = scaled(rng.unit_vec(3), R * rng.uniform());
            const double dxy = dist2(x, y);
            if (dxy < 1e-8) continue;
            worst_ratio_h = std::max(worst_ratio_h,
                                     spec_norm_diff(o.hessian(x), o.hessian(y)) / dxy);
            // gradient Lipschitz via the Hessian norm bound
            const auto ed = sym_eig(o.hessian(x));
            const double hn = std::max(std::fabs(ed.eigenvalues.front()),
                                       std::fabs(ed.eigenvalues.back()));
            CHECK(hn <= o.lipschitz_grad * (1.0 + 1e-12));
        }
        CHECK(worst_ratio_h <= o.lipschitz_hess * (1.0 + 1e-9));
        // tightness along the ray: the constant is attained in the limit
        const Vec a = scaled(Vec{1.0, 0.0, 0.0}, R);
        const Vec b = scaled(Vec{1.0, 0.0, 0.0}, R * (1.0 - 1e-6));
        const double ray_ratio = spec_norm_diff(o.hessian(a), o.hessian(b)) / dist2(a, b);
        CHECK(ray_ratio >= 0.9 * o.lipschitz_hess);
    }
}

TEST_CASE("bilinear 1-D constants") {
    const auto o = make_bilinear_minimax(1, 1, {1.0}, 1.0, SymMatrix(),
                                         ProxOperator::zero(), 100.0);
    // eigenvalues of [[0,1],[1,-1]] are (-1 +- sqrt(5))/2
    const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
    CHECK(o.L == doctest::Approx(golden).epsilon(1e-12));
    CHECK(o.kappa == doctest::Approx(golden).epsilon(1e-12));
    CHECK(o.y_star({2.0})[0] == doctest::Approx(2.0));
    CHECK(o.phi_plus_g({2.0}) == doctest::Approx(2.0));
    // x = 0: y*(0) = 0, Phi(0) = 0
    CHECK(o.y_star({0.0})[0] == doctest::Approx(0.0));
    CHECK(o.phi_plus_g({0.0}) == doctest::Approx(0.0));
    CHECK_THROWS_AS(make_bilinear_minimax(1, 1, {1.0}, -1.0, SymMatrix(),
                                          ProxOperator::zero(), 100.0),
                    InputError);
}

TEST_CASE("minimax invariants: y* fixed point, kappa-Lipschitz, Phi smoothness") {
    Rng rng(53);
    std::vector<double> A(12);
    for (auto& v : A) v = rng.normal();
    const auto o =
        make_bilinear_minimax(3, 4, A, 2.0, SymMatrix(), ProxOperator::zero(), 1000.0);

    const double eta_y = 1.0 / o.L;
    auto grad_phi = [&](const Vec& x) { return o.grad_x(x, o.y_star(x)); };

    for (int i = 0; i < 100; ++i) {
        const Vec x1 = rng.normal_vec(3);
        const Vec x2 = rng.normal_vec(3);

        // y*(x) is a fixed point of the prox-ascent map
        const Vec ys = o.y_star(x1);
        Vec w = ys;
        axpy(w, eta_y, o.grad_y(x1, ys));
        CHECK(dist2(ys, apply_prox(o.prox_h, w, eta_y)) <= 1e-8);

        const double dx = dist2(x1, x2);
        CHECK(dist2(o.y_star(x1), o.y_star(x2)) <= o.kappa * dx + 1e-8);
        CHECK(dist2(grad_phi(x1), grad_phi(x2)) <= o.L * (1.0 + o.kappa) * dx + 1e-8);
    }
}

TEST_CASE("zoo grammar resolves ids") {
    const auto p4 = resolve_problem("power4:d=10", 123);
    REQUIRE(p4.smooth.has_value());
    CHECK(p4.smooth->dim == 10);
    CHECK(p4.x0.size() == 10);
    CHECK(norm2(p4.x0) == doctest::Approx(1.0));
    CHECK(p4.default_M == doctest::Approx(2.0 * p4.smooth->lipschitz_hess));

    const auto q = resolve_problem("quad:cond=100", 123);
    REQUIRE(q.smooth.has_value());
    CHECK(q.default_M == doctest::Approx(20.0));  // L2 = 0 falls back to a damped default

    const auto s = resolve_problem("saddle:2d", 9);
    REQUIRE(s.smooth.has_value());
    CHECK(s.smooth->dim == 2);
    CHECK(norm2(s.x0) == doctest::Approx(0.1));

    const auto b = resolve_problem("bilinear:1d", 7);
    REQUIRE(b.minimax.has_value());
    CHECK(b.minimax->kappa == doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0));

    CHECK_THROWS_AS(resolve_problem("rosenbrock", 1), InputError);
    CHECK_THROWS_AS(resolve_problem("quad:bogus=3", 1), InputError);

    // deterministic resolution
    const auto a1 = resolve_problem("quad:cond=10,d=5", 77);
    const auto a2 = resolve_problem("quad:cond=10,d=5", 77);
    CHECK(a1.x0 == a2.x0);
    CHECK(a1.smooth->value(a1.x0) == a2.smooth->value(a2.x0));
}
