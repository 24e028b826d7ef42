#include "kloptim/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "kloptim/errors.hpp"

namespace kloptim {

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

double dist2(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

Vec add(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Vec sub(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Vec scaled(const Vec& a, double c) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
    return r;
}

void axpy(Vec& a, double c, const Vec& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += c * b[i];
}

bool all_finite(const Vec& a) {
    return std::all_of(a.begin(), a.end(), [](double v) { return std::isfinite(v); });
}

SymMatrix SymMatrix::identity(std::size_t dim) {
    SymMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m.set(i, i, 1.0);
    return m;
}

SymMatrix SymMatrix::diagonal(const Vec& d) {
    SymMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m.set(i, i, d[i]);
    return m;
}

void SymMatrix::add_to_diagonal(double v) {
    for (std::size_t i = 0; i < n_; ++i) a_[i * n_ + i] += v;
}

Vec SymMatrix::multiply(const Vec& x) const {
    Vec y(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        double s = 0.0;
        const double* row = &a_[i * n_];
        for (std::size_t j = 0; j < n_; ++j) s += row[j] * x[j];
        y[i] = s;
    }
    return y;
}

double SymMatrix::quadratic_form(const Vec& x) const { return dot(x, multiply(x)); }

double SymMatrix::max_abs() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::fabs(v));
    return m;
}

bool SymMatrix::finite() const {
    return std::all_of(a_.begin(), a_.end(), [](double v) { return std::isfinite(v); });
}

Vec EigenDecomposition::eigenvector(std::size_t j) const {
    Vec v(dim);
    for (std::size_t i = 0; i < dim; ++i) v[i] = vec(i, j);
    return v;
}

Vec EigenDecomposition::to_eigen_basis(const Vec& x) const {
    Vec w(dim, 0.0);
    for (std::size_t j = 0; j < dim; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < dim; ++i) s += vec(i, j) * x[i];
        w[j] = s;
    }
    return w;
}

Vec EigenDecomposition::from_eigen_basis(const Vec& w) const {
    Vec x(dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < dim; ++j) s += vec(i, j) * w[j];
        x[i] = s;
    }
    return x;
}

namespace {

double hypot2(double a, double b) { return std::sqrt(a * a + b * b); }

// Householder reduction to tridiagonal form (Jama tred2 lineage).
void tred2(std::size_t n, std::vector<double>& V, Vec& d, Vec& e) {
    for (std::size_t j = 0; j < n; ++j) d[j] = V[(n - 1) * n + j];

    for (std::size_t i = n - 1; i > 0; --i) {
        double scale = 0.0;
        double h = 0.0;
        for (std::size_t k = 0; k < i; ++k) scale += std::fabs(d[k]);
        if (scale == 0.0) {
            e[i] = d[i - 1];
            for (std::size_t j = 0; j < i; ++j) {
                d[j] = V[(i - 1) * n + j];
                V[i * n + j] = 0.0;
                V[j * n + i] = 0.0;
            }
        } else {
            for (std::size_t k = 0; k < i; ++k) {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            double f = d[i - 1];
            double g = std::sqrt(h);
            if (f > 0) g = -g;
            e[i] = scale * g;
            h = h - f * g;
            d[i - 1] = f - g;
            for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;

            for (std::size_t j = 0; j < i; ++j) {
                f = d[j];
                V[j * n + i] = f;
                g = e[j] + V[j * n + j] * f;
                for (std::size_t k = j + 1; k <= i - 1; ++k) {
                    g += V[k * n + j] * d[k];
                    e[k] += V[k * n + j] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for (std::size_t j = 0; j < i; ++j) {
                e[j] /= h;
                f += e[j] * d[j];
            }
            const double hh = f / (h + h);
            for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
            for (std::size_t j = 0; j < i; ++j) {
                f = d[j];
                g = e[j];
                for (std::size_t k = j; k <= i - 1; ++k)
                    V[k * n + j] -= (f * e[k] + g * d[k]);
                d[j] = V[(i - 1) * n + j];
                V[i * n + j] = 0.0;
            }
        }
        d[i] = h;
    }

    // accumulate transformations
    for (std::size_t i = 0; i + 1 < n; ++i) {
        V[(n - 1) * n + i] = V[i * n + i];
        V[i * n + i] = 1.0;
        const double h = d[i + 1];
        if (h != 0.0) {
            for (std::size_t k = 0; k <= i; ++k) d[k] = V[k * n + (i + 1)] / h;
            for (std::size_t j = 0; j <= i; ++j) {
                double g = 0.0;
                for (std::size_t k = 0; k <= i; ++k) g += V[k * n + (i + 1)] * V[k * n + j];
                for (std::size_t k = 0; k <= i; ++k) V[k * n + j] -= g * d[k];
            }
        }
        for (std::size_t k = 0; k <= i; ++k) V[k * n + (i + 1)] = 0.0;
    }
    for (std::size_t j = 0; j < n; ++j) {
        d[j] = V[(n - 1) * n + j];
        V[(n - 1) * n + j] = 0.0;
    }
    V[(n - 1) * n + (n - 1)] = 1.0;
    e[0] = 0.0;
}

// Implicit-shift QL on the tridiagonal form (Jama tql2 lineage).
void tql2(std::size_t n, std::vector<double>& V, Vec& d, Vec& e) {
    for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;

    double f = 0.0;
    double tst1 = 0.0;
    const double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t l = 0; l < n; ++l) {
        tst1 = std::max(tst1, std::fabs(d[l]) + std::fabs(e[l]));
        std::size_t m = l;
        while (m < n) {
            if (std::fabs(e[m]) <= eps * tst1) break;
            ++m;
        }

        if (m > l) {
            int iter = 0;
            do {
                if (++iter > 64)
                    throw NumericalError("sym_eig: QL iteration failed to converge");

                double g = d[l];
                double p = (d[l + 1] - g) / (2.0 * e[l]);
                double r = hypot2(p, 1.0);
                if (p < 0) r = -r;
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                const double dl1 = d[l + 1];
                double h = g - d[l];
                for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
                f = f + h;

                p = d[m];
                double c = 1.0;
                double c2 = c;
                double c3 = c;
                const double el1 = e[l + 1];
                double s = 0.0;
                double s2 = 0.0;
                for (std::size_t i = m - 1; i + 1 > l; --i) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = hypot2(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    for (std::size_t k = 0; k < n; ++k) {
                        h = V[k * n + (i + 1)];
                        V[k * n + (i + 1)] = s * V[k * n + i] + c * h;
                        V[k * n + i] = c * V[k * n + i] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (std::fabs(e[l]) > eps * tst1);
        }
        d[l] = d[l] + f;
        e[l] = 0.0;
    }

    // sort ascending, carrying eigenvectors along
    for (std::size_t i = 0; i + 1 < n; ++i) {
        std::size_t k = i;
        double p = d[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            if (d[j] < p) {
                k = j;
                p = d[j];
            }
        }
        if (k != i) {
            d[k] = d[i];
            d[i] = p;
            for (std::size_t j = 0; j < n; ++j) std::swap(V[j * n + i], V[j * n + k]);
        }
    }
}

}  // namespace

EigenDecomposition sym_eig(const SymMatrix& H) {
    const std::size_t n = H.dim();
    if (n == 0) throw InputError("sym_eig: dimension must be >= 1");
    if (!H.finite()) throw InputError("sym_eig: matrix has non-finite entries");

    EigenDecomposition ed;
    ed.dim = n;
    ed.vectors = H.data();
    ed.eigenvalues.assign(n, 0.0);
    Vec e(n, 0.0);

    if (n == 1) {
        ed.eigenvalues[0] = H(0, 0);
        ed.vectors[0] = 1.0;
        return ed;
    }

    tred2(n, ed.vectors, ed.eigenvalues, e);
    tql2(n, ed.vectors, ed.eigenvalues, e);

    // sign convention: first coordinate with |v_i| > 0.5/sqrt(dim) positive
    const double sig = 0.5 / std::sqrt(static_cast<double>(n));
    for (std::size_t j = 0; j < n; ++j) {
        double lead = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (std::fabs(ed.vectors[i * n + j]) > sig) {
                lead = ed.vectors[i * n + j];
                break;
            }
        }
        if (lead < 0.0)
            for (std::size_t i = 0; i < n; ++i) ed.vectors[i * n + j] = -ed.vectors[i * n + j];
    }
    return ed;
}

Vec solve_shifted(const SymMatrix& H, double shift, const Vec& g) {
    const std::size_t n = H.dim();
    if (g.size() != n) throw InputError("solve_shifted: dimension mismatch");
    if (!H.finite() || !all_finite(g) || !std::isfinite(shift))
        throw InputError("solve_shifted: non-finite input");

    // Cholesky of A = H + shift*I (lower triangle)
    std::vector<double> L(n * n, 0.0);
    double diag_max = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        diag_max = std::max(diag_max, std::fabs(H(i, i) + shift));
    const double pivot_floor = std::max(diag_max, 1.0) * 1e-14;

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = H(i, j) + (i == j ? shift : 0.0);
            for (std::size_t k = 0; k < j; ++k) s -= L[i * n + k] * L[j * n + k];
            if (i == j) {
                if (s <= pivot_floor)
                    throw SingularityError(
                        "solve_shifted: shifted matrix is singular or not positive "
                        "definite (pivot " +
                        std::to_string(s) + ")");
                L[i * n + i] = std::sqrt(s);
            } else {
                L[i * n + j] = s / L[j * n + j];
            }
        }
    }

    auto chol_solve = [&](const Vec& rhs) {
        Vec y(n);
        for (std::size_t i = 0; i < n; ++i) {
            double s = rhs[i];
            for (std::size_t k = 0; k < i; ++k) s -= L[i * n + k] * y[k];
            y[i] = s / L[i * n + i];
        }
        Vec x(n);
        for (std::size_t i = n; i-- > 0;) {
            double s = y[i];
            for (std::size_t k = i + 1; k < n; ++k) s -= L[k * n + i] * x[k];
            x[i] = s / L[i * n + i];
        }
        return x;
    };

    Vec s = chol_solve(scaled(g, -1.0));

    // iterative refinement until the certified residual holds
    for (int pass = 0; pass < 3; ++pass) {
        Vec r = H.multiply(s);
        axpy(r, shift, s);
        for (std::size_t i = 0; i < n; ++i) r[i] += g[i];
        const double res = norm2(r);
        if (res <= tol::kSolveResidual * (1.0 + norm2(g))) return s;
        Vec corr = chol_solve(r);
        for (std::size_t i = 0; i < n; ++i) s[i] -= corr[i];
    }
    Vec r = H.multiply(s);
    axpy(r, shift, s);
    for (std::size_t i = 0; i < n; ++i) r[i] += g[i];
    if (norm2(r) > tol::kSolveResidual * (1.0 + norm2(g)))
        throw SingularityError("solve_shifted: residual did not reach tolerance, "
                               "matrix too ill-conditioned");
    return s;
}

double min_eigenvalue(const SymMatrix& H) { return sym_eig(H).eigenvalues.front(); }

}  // namespace kloptim
