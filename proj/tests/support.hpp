#pragma once

// Shared test-side oracles. These stay independent of the implementation
// paths they check: the grid scans and bisections only use model_value-style
// arithmetic, never the secular machinery.

#include <cmath>
#include <limits>

#include "kloptim/cubic.hpp"
#include "kloptim/linalg.hpp"
#include "kloptim/rng.hpp"

namespace testsupport {

using kloptim::CubicModel;
using kloptim::Rng;
using kloptim::SymMatrix;
using kloptim::Vec;

// Dense 2-D scan of the cubic model over [lo,hi]^2 followed by two local
// refinement rounds. The returned value is an upper bound on the true
// minimum that tightens with the resolution.
inline double grid_min_2d(const CubicModel& m, double lo, double hi, double step) {
    const double g1 = m.g[0], g2 = m.g[1];
    const double h11 = m.H(0, 0), h12 = m.H(0, 1), h22 = m.H(1, 1);
    const double c = m.M / 6.0;
    auto eval = [&](double s1, double s2) {
        const double q = 0.5 * (h11 * s1 * s1 + 2.0 * h12 * s1 * s2 + h22 * s2 * s2);
        const double n2 = s1 * s1 + s2 * s2;
        return g1 * s1 + g2 * s2 + q + c * n2 * std::sqrt(n2);
    };

    double best = std::numeric_limits<double>::infinity();
    double b1 = 0.0, b2 = 0.0;
    const long n = std::lround((hi - lo) / step);
    for (long i = 0; i <= n; ++i) {
        const double s1 = lo + step * static_cast<double>(i);
        for (long j = 0; j <= n; ++j) {
            const double s2 = lo + step * static_cast<double>(j);
            const double v = eval(s1, s2);
            if (v < best) {
                best = v;
                b1 = s1;
                b2 = s2;
            }
        }
    }
    double width = step;
    for (int round = 0; round < 2; ++round) {
        const double fine = width / 20.0;
        const double c1 = b1, c2 = b2;
        for (int i = -20; i <= 20; ++i)
            for (int j = -20; j <= 20; ++j) {
                const double v = eval(c1 + fine * i, c2 + fine * j);
                if (v < best) {
                    best = v;
                    b1 = c1 + fine * i;
                    b2 = c2 + fine * j;
                }
            }
        width = fine;
    }
    return best;
}

// A certified hard-case instance: gradient orthogonal to the bottom
// eigenspace and M small enough that the interior secular root is absent.
inline CubicModel make_hard_case_instance(Rng& rng, std::size_t n, bool exact_zero) {
    const auto Q = rng.orthogonal(n);
    Vec eigs(n);
    eigs[0] = rng.uniform(-3.0, -0.5);
    for (std::size_t i = 1; i < n; ++i) eigs[i] = eigs[0] + 0.3 + rng.uniform(0.0, 4.0);

    Vec d(n);
    d[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i) d[i] = rng.uniform(-2.0, 2.0);

    const double M = rng.uniform(0.3, 3.0);
    double n_perp2 = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double w = d[i] / (eigs[i] - eigs[0]);
        n_perp2 += w * w;
    }
    // rescale d so (M/2)||s_perp|| lands strictly below -lambda_min
    const double target = rng.uniform(0.2, 0.8) * 2.0 * (-eigs[0]) / M;
    const double factor = target / std::sqrt(n_perp2);
    for (std::size_t i = 1; i < n; ++i) d[i] *= factor;

    if (!exact_zero) d[0] = 1e-14 * kloptim::norm2(d);  // below the 1e-12 threshold

    CubicModel m;
    m.M = M;
    m.H = SymMatrix(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += Q[i * n + k] * eigs[k] * Q[j * n + k];
            m.H.set(i, j, s);
        }
    m.g.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) m.g[i] += Q[i * n + k] * d[k];
    return m;
}

inline CubicModel random_instance(Rng& rng, std::size_t max_dim) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * max_dim);
    CubicModel m;
    m.g = rng.uniform_vec(n, -5.0, 5.0);
    m.H = rng.symmetric(n, -5.0, 5.0);
    m.M = rng.uniform(0.1, 10.0);
    return m;
}

}  // namespace testsupport
