#pragma once

#include <cstddef>
#include <vector>

namespace kloptim {

using Vec = std::vector<double>;

// -------- dense vector helpers --------

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& a);
// ||a - b||
double dist2(const Vec& a, const Vec& b);
Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec scaled(const Vec& a, double c);
// a += c*b
void axpy(Vec& a, double c, const Vec& b);
bool all_finite(const Vec& a);

// Dense symmetric matrix, full row-major storage mirrored on write.
class SymMatrix {
  public:
    SymMatrix() = default;
    explicit SymMatrix(std::size_t dim) : n_(dim), a_(dim * dim, 0.0) {}

    static SymMatrix identity(std::size_t dim);
    static SymMatrix diagonal(const Vec& d);

    std::size_t dim() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
    // writes both (i,j) and (j,i)
    void set(std::size_t i, std::size_t j, double v) {
        a_[i * n_ + j] = v;
        a_[j * n_ + i] = v;
    }
    void add_to_diagonal(double v);

    Vec multiply(const Vec& x) const;
    double quadratic_form(const Vec& x) const;  // x^T A x
    double max_abs() const;
    bool finite() const;

    const std::vector<double>& data() const { return a_; }

  private:
    std::size_t n_ = 0;
    std::vector<double> a_;
};

// Eigenvalues ascending; eigenvectors are the columns of an orthonormal
// matrix, stored row-major (vectors[i*dim+j] = component i of eigenvector j).
// Each eigenvector's sign is normalized so its first coordinate of
// significant magnitude is positive, which keeps repeated runs bit-identical.
struct EigenDecomposition {
    std::size_t dim = 0;
    Vec eigenvalues;
    std::vector<double> vectors;

    double vec(std::size_t i, std::size_t j) const { return vectors[i * dim + j]; }
    Vec eigenvector(std::size_t j) const;
    // V^T x and V x
    Vec to_eigen_basis(const Vec& x) const;
    Vec from_eigen_basis(const Vec& w) const;
};

// Householder tridiagonalization followed by implicit-shift QL.
// Deterministic for a fixed input.
EigenDecomposition sym_eig(const SymMatrix& H);

// Solves (H + shift*I) s = -g for a positive definite shifted matrix.
// Cholesky with one pass of iterative refinement; residual is certified to
// 1e-10 * (1 + ||g||).
Vec solve_shifted(const SymMatrix& H, double shift, const Vec& g);

// First entry of sym_eig(H).eigenvalues.
double min_eigenvalue(const SymMatrix& H);

namespace tol {
// Module constants; monitors depend on these staying fixed.
inline constexpr double kSolveResidual = 1e-10;
inline constexpr double kEigReconstruction = 1e-8;
inline constexpr double kOrthonormality = 1e-10;
}  // namespace tol

}  // namespace kloptim
