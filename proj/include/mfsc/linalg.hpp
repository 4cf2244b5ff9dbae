#ifndef MFSC_LINALG_HPP
#define MFSC_LINALG_HPP

#include <cstddef>
#include <vector>

namespace mfsc {

using Vector = std::vector<double>;

// Dense row-major matrix, value semantics.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double value = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, value) {}

    static Matrix identity(std::size_t n);

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Vector column(std::size_t j) const;
    void set_column(std::size_t j, const Vector& v);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, const Vector& x);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
double max_abs_diff(const Matrix& a, const Matrix& b);

// Symmetric matrix with enforced storage symmetry: set(i,j) writes both
// triangles, so entries(i,j) == entries(j,i) holds exactly.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(std::size_t order, double value = 0.0)
        : order_(order), data_(order * order, value) {}

    static SymMatrix identity(std::size_t n);

    double operator()(std::size_t i, std::size_t j) const { return data_[i * order_ + j]; }
    void set(std::size_t i, std::size_t j, double v) {
        data_[i * order_ + j] = v;
        data_[j * order_ + i] = v;
    }

    std::size_t order() const { return order_; }
    double trace() const;
    double frobenius_norm() const;
    Matrix to_matrix() const;

private:
    std::size_t order_ = 0;
    std::vector<double> data_;
};

Vector operator*(const SymMatrix& a, const Vector& x);

// Eigenvalues sorted descending (ties keep the lower pre-sort index first);
// column k of `vectors` pairs with values[k].  The entry of largest magnitude
// in each vector is made positive so the decomposition is deterministic.
struct EigDecomposition {
    Vector values;
    Matrix vectors;
};

// Lower-triangular Cholesky factor of an SPD matrix, A = L L^T.
// Throws NonPositiveDefinite when a pivot falls below 1e-14 * max diagonal.
Matrix cholesky_spd(const SymMatrix& a);

// Cyclic Jacobi rotations; unconditionally stable for symmetric input.
// Throws NoConvergence (with sweep count) if the off-diagonal mass does not
// vanish within the sweep cap.
EigDecomposition eig_sym(const SymMatrix& a);

// Minimum-norm least-squares solution: expand rhs in the eigenbasis of A,
// invert components with |lambda| > null_tol * max|lambda|, zero the rest.
Vector minnorm_solve(const SymMatrix& a, const Vector& rhs, double null_tol = 1e-8);

// Square tridiagonal matrix stored as three diagonals.
struct Tridiagonal {
    Vector sub;   // size n-1, entry i sits at (i+1, i)
    Vector diag;  // size n
    Vector super; // size n-1, entry i sits at (i, i+1)

    std::size_t order() const { return diag.size(); }
};

Vector operator*(const Tridiagonal& a, const Vector& x);
Matrix to_dense(const Tridiagonal& a);

// Thomas algorithm; throws SingularPivot when a pivot degenerates.
Vector tridiag_solve(const Tridiagonal& bands, Vector rhs);

// Lower bidiagonal Cholesky factor of an SPD tridiagonal matrix.
struct LowerBidiagonal {
    Vector diag; // size n
    Vector sub;  // size n-1

    std::size_t order() const { return diag.size(); }
};

LowerBidiagonal cholesky_tridiag(const Tridiagonal& spd);

Vector lower_bidiag_apply(const LowerBidiagonal& l, const Vector& x);        // L x
Vector lower_bidiag_transpose_apply(const LowerBidiagonal& l, const Vector& x); // L^T x

// Small dense solve with partial pivoting (internal plumbing for reduced systems).
Vector lu_solve(Matrix a, Vector b);

// Convenience numerics shared across modules.
double dot(const Vector& a, const Vector& b);
double norm_inf(const Vector& a);
double norm2(const Vector& a);
Vector axpy(double alpha, const Vector& x, const Vector& y); // alpha*x + y

} // namespace mfsc

#endif
