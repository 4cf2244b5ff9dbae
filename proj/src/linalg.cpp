#include "mfsc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mfsc/errors.hpp"

namespace mfsc {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Vector Matrix::column(std::size_t j) const {
    Vector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
}

void Matrix::set_column(std::size_t j, const Vector& v) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw DimMismatch("matrix product dimension mismatch");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

Vector operator*(const Matrix& a, const Vector& x) {
    if (a.cols() != x.size()) throw DimMismatch("matrix-vector dimension mismatch");
    Vector y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimMismatch("matrix sum dimension mismatch");
    Matrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
    return c;
}

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

SymMatrix SymMatrix::identity(std::size_t n) {
    SymMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1.0);
    return m;
}

double SymMatrix::trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < order_; ++i) t += (*this)(i, i);
    return t;
}

double SymMatrix::frobenius_norm() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
}

Matrix SymMatrix::to_matrix() const {
    Matrix m(order_, order_);
    for (std::size_t i = 0; i < order_; ++i)
        for (std::size_t j = 0; j < order_; ++j) m(i, j) = (*this)(i, j);
    return m;
}

Vector operator*(const SymMatrix& a, const Vector& x) {
    if (a.order() != x.size()) throw DimMismatch("symmetric matrix-vector dimension mismatch");
    Vector y(a.order(), 0.0);
    for (std::size_t i = 0; i < a.order(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.order(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

Matrix cholesky_spd(const SymMatrix& a) {
    const std::size_t n = a.order();
    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(a(i, i)));
    const double tol = 1e-14 * max_diag;

    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (d <= tol) throw NonPositiveDefinite("cholesky_spd: pivot below tolerance");
        l(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    return l;
}

EigDecomposition eig_sym(const SymMatrix& a) {
    const std::size_t n = a.order();
    Matrix w = a.to_matrix();
    Matrix v = Matrix::identity(n);

    auto off_norm2 = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += w(i, j) * w(i, j);
        return s;
    };

    const double total2 = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) s += w(i, j) * w(i, j);
        return s;
    }();

    const double stop = 1e-30 * std::max(total2, 1e-300);
    const std::size_t max_sweeps = 64;
    std::size_t sweep = 0;
    while (n > 1 && off_norm2() > stop) {
        if (++sweep > max_sweeps)
            throw NoConvergence("eig_sym: Jacobi sweeps exhausted", max_sweeps);
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = w(p, q);
                if (std::abs(apq) < 1e-300) continue;
                const double theta = (w(q, q) - w(p, p)) / (2.0 * apq);
                const double sgn = theta >= 0.0 ? 1.0 : -1.0;
                const double t = sgn / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                const double app = w(p, p);
                const double aqq = w(q, q);
                w(p, p) = app - t * apq;
                w(q, q) = aqq + t * apq;
                w(p, q) = 0.0;
                w(q, p) = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    if (r != p && r != q) {
                        const double arp = w(r, p);
                        const double arq = w(r, q);
                        w(r, p) = arp - s * (arq + tau * arp);
                        w(p, r) = w(r, p);
                        w(r, q) = arq + s * (arp - tau * arq);
                        w(q, r) = w(r, q);
                    }
                    const double vrp = v(r, p);
                    const double vrq = v(r, q);
                    v(r, p) = vrp - s * (vrq + tau * vrp);
                    v(r, q) = vrq + s * (vrp - tau * vrq);
                }
            }
        }
    }

    // Sort descending; ties keep the lower pre-sort column first.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return w(i, i) > w(j, j); });

    EigDecomposition eig;
    eig.values.resize(n);
    eig.vectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t src = order[k];
        eig.values[k] = w(src, src);
        // Largest-magnitude entry forced positive (first such entry on ties).
        std::size_t imax = 0;
        double amax = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (std::abs(v(i, src)) > amax) {
                amax = std::abs(v(i, src));
                imax = i;
            }
        }
        const double flip = v(imax, src) < 0.0 ? -1.0 : 1.0;
        for (std::size_t i = 0; i < n; ++i) eig.vectors(i, k) = flip * v(i, src);
    }
    return eig;
}

Vector minnorm_solve(const SymMatrix& a, const Vector& rhs, double null_tol) {
    if (a.order() != rhs.size()) throw DimMismatch("minnorm_solve dimension mismatch");
    const EigDecomposition eig = eig_sym(a);
    const std::size_t n = a.order();
    double max_abs = 0.0;
    for (double lam : eig.values) max_abs = std::max(max_abs, std::abs(lam));
    const double cutoff = null_tol * max_abs;

    Vector x(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double lam = eig.values[k];
        if (std::abs(lam) <= cutoff) continue;
        double coeff = 0.0;
        for (std::size_t i = 0; i < n; ++i) coeff += eig.vectors(i, k) * rhs[i];
        coeff /= lam;
        for (std::size_t i = 0; i < n; ++i) x[i] += coeff * eig.vectors(i, k);
    }
    return x;
}

Vector operator*(const Tridiagonal& a, const Vector& x) {
    const std::size_t n = a.order();
    if (x.size() != n) throw DimMismatch("tridiagonal matrix-vector dimension mismatch");
    Vector y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = a.diag[i] * x[i];
        if (i > 0) s += a.sub[i - 1] * x[i - 1];
        if (i + 1 < n) s += a.super[i] * x[i + 1];
        y[i] = s;
    }
    return y;
}

Matrix to_dense(const Tridiagonal& a) {
    const std::size_t n = a.order();
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = a.diag[i];
        if (i > 0) m(i, i - 1) = a.sub[i - 1];
        if (i + 1 < n) m(i, i + 1) = a.super[i];
    }
    return m;
}

Vector tridiag_solve(const Tridiagonal& bands, Vector rhs) {
    const std::size_t n = bands.order();
    if (rhs.size() != n) throw DimMismatch("tridiag_solve dimension mismatch");
    double scale = 0.0;
    for (double d : bands.diag) scale = std::max(scale, std::abs(d));
    for (double d : bands.sub) scale = std::max(scale, std::abs(d));
    for (double d : bands.super) scale = std::max(scale, std::abs(d));
    const double tol = 1e-14 * std::max(scale, 1e-300);

    Vector c(n > 1 ? n - 1 : 0);
    Vector diag = bands.diag;
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) diag[i] -= bands.sub[i - 1] * c[i - 1];
        if (std::abs(diag[i]) <= tol) throw SingularPivot("tridiag_solve: singular pivot");
        if (i + 1 < n) c[i] = bands.super[i] / diag[i];
        if (i > 0) rhs[i] -= bands.sub[i - 1] * rhs[i - 1];
        rhs[i] /= diag[i];
    }
    for (std::size_t i = n; i-- > 1;) rhs[i - 1] -= c[i - 1] * rhs[i];
    return rhs;
}

LowerBidiagonal cholesky_tridiag(const Tridiagonal& spd) {
    const std::size_t n = spd.order();
    double max_diag = 0.0;
    for (double d : spd.diag) max_diag = std::max(max_diag, std::abs(d));
    const double tol = 1e-14 * max_diag;

    LowerBidiagonal l;
    l.diag.resize(n);
    l.sub.resize(n > 0 ? n - 1 : 0);
    for (std::size_t i = 0; i < n; ++i) {
        double d = spd.diag[i];
        if (i > 0) d -= l.sub[i - 1] * l.sub[i - 1];
        if (d <= tol) throw NonPositiveDefinite("cholesky_tridiag: pivot below tolerance");
        l.diag[i] = std::sqrt(d);
        if (i + 1 < n) l.sub[i] = spd.sub[i] / l.diag[i];
    }
    return l;
}

Vector lower_bidiag_apply(const LowerBidiagonal& l, const Vector& x) {
    const std::size_t n = l.order();
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = l.diag[i] * x[i];
        if (i > 0) y[i] += l.sub[i - 1] * x[i - 1];
    }
    return y;
}

Vector lower_bidiag_transpose_apply(const LowerBidiagonal& l, const Vector& x) {
    const std::size_t n = l.order();
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = l.diag[i] * x[i];
        if (i + 1 < n) y[i] += l.sub[i] * x[i + 1];
    }
    return y;
}

Vector lu_solve(Matrix a, Vector b) {
    const std::size_t n = a.rows();
    if (a.cols() != n || b.size() != n) throw DimMismatch("lu_solve dimension mismatch");
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
        if (std::abs(a(piv, k)) < 1e-300) throw SingularPivot("lu_solve: singular matrix");
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            std::swap(b[k], b[piv]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a(i, k) / a(k, k);
            a(i, k) = f;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
            b[i] -= f * b[k];
        }
    }
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = i + 1; j < n; ++j) b[i] -= a(i, j) * b[j];
        b[i] /= a(i, i);
    }
    return b;
}

double dot(const Vector& a, const Vector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm_inf(const Vector& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

double norm2(const Vector& a) { return std::sqrt(dot(a, a)); }

Vector axpy(double alpha, const Vector& x, const Vector& y) {
    Vector z(y);
    for (std::size_t i = 0; i < x.size(); ++i) z[i] += alpha * x[i];
    return z;
}

} // namespace mfsc
