#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kloptim/errors.hpp"
#include "kloptim/linalg.hpp"
#include "kloptim/rng.hpp"

using namespace kloptim;

namespace {

double reconstruction_error(const SymMatrix& H, const EigenDecomposition& ed) {
    const std::size_t n = H.dim();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                s += ed.vec(i, k) * ed.eigenvalues[k] * ed.vec(j, k);
            worst = std::max(worst, std::fabs(s - H(i, j)));
        }
    return worst;
}

double orthonormality_error(const EigenDecomposition& ed) {
    const std::size_t n = ed.dim;
    double worst = 0.0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += ed.vec(i, a) * ed.vec(i, b);
            worst = std::max(worst, std::fabs(s - (a == b ? 1.0 : 0.0)));
        }
    return worst;
}

// independent oracle for the smallest eigenvalue: power iteration on c*I - H
double min_eig_power_iteration(const SymMatrix& H, Rng& rng) {
    const std::size_t n = H.dim();
    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += std::fabs(H(i, j));
        c = std::max(c, row);  // Gershgorin bound on |eigenvalues|
    }
    c += 1.0;
    Vec v = rng.unit_vec(n);
    double lam_shift = 0.0;
    for (int it = 0; it < 20000; ++it) {
        Vec w = scaled(v, c);
        const Vec hv = H.multiply(v);
        for (std::size_t i = 0; i < n; ++i) w[i] -= hv[i];
        const double nrm = norm2(w);
        v = scaled(w, 1.0 / nrm);
        lam_shift = nrm;
    }
    // Rayleigh quotient at the converged vector
    const Vec hv = H.multiply(v);
    (void)lam_shift;
    return dot(v, hv);
}

}  // namespace

TEST_CASE("sym_eig identity") {
    const auto ed = sym_eig(SymMatrix::identity(3));
    for (double ev : ed.eigenvalues) CHECK(ev == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(orthonormality_error(ed) <= 1e-10);
}

TEST_CASE("sym_eig diagonal ordering and eigenvectors") {
    const auto ed = sym_eig(SymMatrix::diagonal({3.0, -1.0}));
    CHECK(ed.eigenvalues[0] == doctest::Approx(-1.0));
    CHECK(ed.eigenvalues[1] == doctest::Approx(3.0));
    // eigenvector of -1 is e2, of 3 is e1 (up to sign, fixed positive)
    CHECK(std::fabs(ed.vec(1, 0)) == doctest::Approx(1.0));
    CHECK(std::fabs(ed.vec(0, 1)) == doctest::Approx(1.0));
    CHECK(ed.vec(1, 0) > 0.0);
    CHECK(ed.vec(0, 1) > 0.0);
}

TEST_CASE("sym_eig random 5x5 reconstruction") {
    Rng rng(42);
    const SymMatrix H = rng.symmetric(5, -3.0, 3.0);
    const auto ed = sym_eig(H);
    CHECK(reconstruction_error(H, ed) <= 1e-8 * (1.0 + H.max_abs()));
    CHECK(orthonormality_error(ed) <= 1e-10);
}

TEST_CASE("sym_eig rejects bad input") {
    SymMatrix H(2);
    H.set(0, 1, std::nan(""));
    CHECK_THROWS_AS(sym_eig(H), InputError);
    CHECK_THROWS_AS(sym_eig(SymMatrix()), InputError);
}

TEST_CASE("sym_eig property battery: sizes up to 64, scales up to 1e6") {
    Rng rng(7);
    for (std::size_t n : {1u, 2u, 3u, 8u, 17u, 64u}) {
        for (double scale : {1.0, 1e-3, 1e6}) {
            const SymMatrix H = rng.symmetric(n, -scale, scale);
            const auto ed = sym_eig(H);
            CHECK(orthonormality_error(ed) <= 1e-10);
            CHECK(reconstruction_error(H, ed) <= 1e-8 * (1.0 + H.max_abs()));
            for (std::size_t i = 0; i + 1 < n; ++i)
                CHECK(ed.eigenvalues[i] <= ed.eigenvalues[i + 1]);
        }
    }
}

TEST_CASE("sym_eig deterministic for fixed input") {
    Rng rng(11);
    const SymMatrix H = rng.symmetric(6, -2.0, 2.0);
    const auto a = sym_eig(H);
    const auto b = sym_eig(H);
    CHECK(a.eigenvalues == b.eigenvalues);
    CHECK(a.vectors == b.vectors);
}

TEST_CASE("solve_shifted identity") {
    const Vec s = solve_shifted(SymMatrix::identity(2), 0.0, {1.0, 0.0});
    CHECK(s[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(s[1] == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("solve_shifted diagonal") {
    // (diag(1,2) + I) s = -(2,3)  =>  s = (-1,-1)
    const Vec s = solve_shifted(SymMatrix::diagonal({1.0, 2.0}), 1.0, {2.0, 3.0});
    CHECK(s[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(s[1] == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("solve_shifted residual on random SPD systems") {
    Rng rng(3);
    for (int rep = 0; rep < 25; ++rep) {
        const std::size_t n = 4;
        SymMatrix B = rng.symmetric(n, -2.0, 2.0);
        // A = B^T B + 0.1 I is SPD
        SymMatrix A(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                double s = 0.0;
                for (std::size_t k = 0; k < n; ++k) s += B(k, i) * B(k, j);
                A.set(i, j, s + (i == j ? 0.1 : 0.0));
            }
        const Vec g = rng.normal_vec(n);
        const Vec s = solve_shifted(A, 0.0, g);
        Vec r = A.multiply(s);
        for (std::size_t i = 0; i < n; ++i) r[i] += g[i];
        CHECK(norm2(r) <= 1e-10 * (1.0 + norm2(g)));
    }
}

TEST_CASE("solve_shifted flags indefinite or singular systems") {
    CHECK_THROWS_AS(solve_shifted(SymMatrix::diagonal({-1.0, 2.0}), 0.0, {1.0, 1.0}),
                    SingularityError);
    CHECK_THROWS_AS(solve_shifted(SymMatrix::diagonal({1.0, 0.0}), 0.0, {1.0, 1.0}),
                    SingularityError);
}

TEST_CASE("min_eigenvalue examples and power-iteration oracle") {
    CHECK(min_eigenvalue(SymMatrix::diagonal({-2.0, 5.0})) == doctest::Approx(-2.0));
    CHECK(min_eigenvalue(SymMatrix::identity(4)) == doctest::Approx(1.0));

    Rng rng(19);
    for (int rep = 0; rep < 5; ++rep) {
        const SymMatrix H = rng.symmetric(6, -4.0, 4.0);
        const double lam = min_eigenvalue(H);
        const double oracle = min_eig_power_iteration(H, rng);
        CHECK(lam == doctest::Approx(oracle).epsilon(1e-8));
        CHECK(lam == doctest::Approx(sym_eig(H).eigenvalues.front()).epsilon(1e-12));
    }
}
