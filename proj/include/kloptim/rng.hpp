#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "kloptim/linalg.hpp"

namespace kloptim {

// mt19937_64 with hand-rolled distributions. std::uniform_real_distribution
// and friends are implementation-defined, which would break byte-identical
// traces across standard libraries.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // uniform in [0, 1)
    double uniform() { return std::ldexp(static_cast<double>(gen_() >> 11), -53); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Box-Muller, one value per call
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    std::uint64_t next_u64() { return gen_(); }

    Vec normal_vec(std::size_t n) {
        Vec v(n);
        for (auto& x : v) x = normal();
        return v;
    }

    Vec uniform_vec(std::size_t n, double lo, double hi) {
        Vec v(n);
        for (auto& x : v) x = uniform(lo, hi);
        return v;
    }

    // random symmetric matrix with entries in [lo, hi]
    SymMatrix symmetric(std::size_t n, double lo, double hi) {
        SymMatrix m(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) m.set(i, j, uniform(lo, hi));
        return m;
    }

    // random orthogonal matrix via Gram-Schmidt on normal columns,
    // returned row-major (q[i*n+j] = entry (i,j))
    std::vector<double> orthogonal(std::size_t n) {
        std::vector<double> q(n * n);
        for (std::size_t j = 0; j < n; ++j) {
            Vec col = normal_vec(n);
            for (std::size_t prev = 0; prev < j; ++prev) {
                double proj = 0.0;
                for (std::size_t i = 0; i < n; ++i) proj += q[i * n + prev] * col[i];
                for (std::size_t i = 0; i < n; ++i) col[i] -= proj * q[i * n + prev];
            }
            double nrm = norm2(col);
            if (nrm < 1e-12) {
                // astronomically unlikely; restart the column deterministically
                --j;
                continue;
            }
            for (std::size_t i = 0; i < n; ++i) q[i * n + j] = col[i] / nrm;
        }
        return q;
    }

    // uniform direction on the unit sphere
    Vec unit_vec(std::size_t n) {
        Vec v = normal_vec(n);
        double nrm = norm2(v);
        while (nrm < 1e-12) {
            v = normal_vec(n);
            nrm = norm2(v);
        }
        return scaled(v, 1.0 / nrm);
    }

  private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace kloptim
