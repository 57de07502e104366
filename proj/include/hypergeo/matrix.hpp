#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <boost/container/small_vector.hpp>

#include "errors.hpp"
#include "field.hpp"

namespace hypergeo {

// Small dense row-major matrix over R, C or H. Inline storage covers 4x4.
template <class S>
class Matrix {
public:
    using scalar_type = S;

    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(std::size_t(rows) * cols, S(0.0)) {
        if (rows < 0 || cols < 0) throw domain_error("negative matrix dimension");
    }
    Matrix(int rows, int cols, std::initializer_list<S> vals) : Matrix(rows, cols) {
        if (vals.size() != data_.size()) throw domain_error("initializer size mismatch");
        std::copy(vals.begin(), vals.end(), data_.begin());
    }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = S(1.0);
        return m;
    }
    static Matrix diagonal(std::span<const double> v) {
        Matrix m(int(v.size()), int(v.size()));
        for (int i = 0; i < m.rows_; ++i) m(i, i) = S(v[i]);
        return m;
    }

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    S& operator()(int i, int j) noexcept { return data_[std::size_t(i) * cols_ + j]; }
    const S& operator()(int i, int j) const noexcept { return data_[std::size_t(i) * cols_ + j]; }

    S* data() noexcept { return data_.data(); }
    const S* data() const noexcept { return data_.data(); }

    Matrix& operator+=(const Matrix& o) {
        check_same(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        check_same(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    Matrix& operator*=(double s) {
        for (auto& x : data_) x = x * s;
        return *this;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ &&
               std::equal(a.data_.begin(), a.data_.end(), b.data_.begin());
    }

private:
    void check_same(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw domain_error("matrix shape mismatch");
    }

    int rows_ = 0;
    int cols_ = 0;
    boost::container::small_vector<S, 16> data_;
};

template <class S> Matrix<S> operator+(Matrix<S> a, const Matrix<S>& b) { return a += b; }
template <class S> Matrix<S> operator-(Matrix<S> a, const Matrix<S>& b) { return a -= b; }
template <class S> Matrix<S> operator*(Matrix<S> a, double s) { return a *= s; }
template <class S> Matrix<S> operator*(double s, Matrix<S> a) { return a *= s; }

template <class S>
Matrix<S> operator*(const Matrix<S>& a, const Matrix<S>& b) {
    if (a.cols() != b.rows()) throw domain_error("matrix product shape mismatch");
    Matrix<S> c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            const S aik = a(i, k);
            for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

template <class S>
Matrix<S> adjoint(const Matrix<S>& a) {
    Matrix<S> r(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) r(j, i) = adj(a(i, j));
    return r;
}

template <class S>
double max_abs_diff(const Matrix<S>& a, const Matrix<S>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw domain_error("matrix shape mismatch");
    double m = 0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) m = std::max(m, std::sqrt(abs2(a(i, j) - b(i, j))));
    return m;
}

template <class S>
bool is_hermitian(const Matrix<S>& a, double tol = 1e-12) {
    return a.square() && max_abs_diff(a, adjoint(a)) <= tol;
}

template <class S>
bool is_unitary(const Matrix<S>& u, double tol = 1e-10) {
    return u.square() && max_abs_diff(adjoint(u) * u, Matrix<S>::identity(u.rows())) <= tol;
}

// a = A1 + A2 j  ->  [[A1, A2], [-conj(A2), conj(A1)]], a *-homomorphism into M_2q(C).
inline Matrix<cplx> complex_embed(const Matrix<Quaternion>& a) {
    const int m = a.rows(), n = a.cols();
    Matrix<cplx> c(2 * m, 2 * n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
            const Quaternion& h = a(i, j);
            const cplx z1(h.a, h.b), z2(h.c, h.d);
            c(i, j) = z1;
            c(i, n + j) = z2;
            c(m + i, j) = -std::conj(z2);
            c(m + i, n + j) = std::conj(z1);
        }
    return c;
}

namespace detail {

inline Eigen::MatrixXd to_eigen(const Matrix<double>& a) {
    Eigen::MatrixXd m(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    return m;
}
inline Eigen::MatrixXcd to_eigen(const Matrix<cplx>& a) {
    Eigen::MatrixXcd m(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    return m;
}
inline Eigen::MatrixXcd to_eigen(const Matrix<Quaternion>& a) { return to_eigen(complex_embed(a)); }

// Smallest eigenvalue of a Hermitian matrix (through chi for H).
template <class S>
double min_eigenvalue(const Matrix<S>& x) {
    auto m = to_eigen(x);
    using M = decltype(m);
    Eigen::SelfAdjointEigenSolver<M> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

}  // namespace detail

template <class S>
double det_dieudonne(const Matrix<S>& a) {
    if (!a.square()) throw domain_error("determinant of a non-square matrix");
    if (a.rows() == 0) return 1.0;
    auto m = detail::to_eigen(a);
    const double det = std::abs(m.determinant());
    if constexpr (std::is_same_v<S, Quaternion>) return std::sqrt(det);
    else return det;
}

inline constexpr double kPivotFloor = 1e-13;

// log Delta_r for r = 1..q of a Hermitian positive definite matrix.
// LDL* elimination without pivoting; a tiny pivot triggers an eigenvalue check.
template <class S>
void log_principal_minors(const Matrix<S>& x, std::span<double> out) {
    const int q = x.rows();
    if (!x.square() || int(out.size()) < q) throw domain_error("log_principal_minors: bad shape");
    double scale = 0;
    for (int i = 0; i < q; ++i) scale = std::max(scale, std::abs(re(x(i, i))));
    if (!(scale > 0)) throw domain_error("matrix is not positive definite");

    Matrix<S> a = x;
    double acc = 0;
    for (int k = 0; k < q; ++k) {
        const double d = re(a(k, k));
        if (!(d > kPivotFloor * scale)) {
            if (!(detail::min_eigenvalue(x) > 0)) throw domain_error("matrix is not positive definite");
            // Near-singular but PD: fall back to determinants of the leading blocks.
            for (int r = k; r < q; ++r) {
                Matrix<S> blk(r + 1, r + 1);
                for (int i = 0; i <= r; ++i)
                    for (int j = 0; j <= r; ++j) blk(i, j) = x(i, j);
                const double det = det_dieudonne(blk);
                if (!(det > 0)) throw domain_error("matrix is not positive definite");
                out[r] = std::log(det);
            }
            return;
        }
        acc += std::log(d);
        out[k] = acc;
        const double inv = 1.0 / d;
        for (int i = k + 1; i < q; ++i) {
            const S lik = a(i, k) * inv;
            for (int j = k + 1; j < q; ++j) a(i, j) -= lik * a(k, j);
        }
    }
}

// Delta_lambda from precomputed log-minors: exp(sum_r (l_r - l_{r+1}) log Delta_r), l_{q+1} = 0.
inline cplx power_from_log_minors(std::span<const double> logm, std::span<const cplx> lambda) {
    const std::size_t q = lambda.size();
    cplx e = 0;
    for (std::size_t r = 0; r < q; ++r) {
        const cplx next = r + 1 < q ? lambda[r + 1] : cplx(0);
        e += (lambda[r] - next) * logm[r];
    }
    return std::exp(e);
}

// Validated element of the cone of positive definite Hermitian matrices.
template <class S>
class ConePoint {
public:
    explicit ConePoint(Matrix<S> x) : x_(std::move(x)) {
        if (!x_.square() || x_.rows() < 1) throw domain_error("cone point must be a nonempty square matrix");
        double scale = 1;
        for (int i = 0; i < x_.rows(); ++i) scale = std::max(scale, std::abs(re(x_(i, i))));
        if (!is_hermitian(x_, 1e-12 * scale)) throw domain_error("cone point must be Hermitian");
        logm_.resize(x_.rows());
        log_principal_minors(x_, logm_);
    }

    int rank() const noexcept { return x_.rows(); }
    const Matrix<S>& matrix() const noexcept { return x_; }
    std::span<const double> log_minors() const noexcept { return logm_; }

    double principal_minor(int r) const {
        if (r < 1 || r > rank()) throw domain_error("principal minor index out of range");
        return std::exp(logm_[r - 1]);
    }

private:
    Matrix<S> x_;
    std::vector<double> logm_;
};

template <class S>
double principal_minor(const ConePoint<S>& x, int r) {
    return x.principal_minor(r);
}

template <class S>
cplx power_function(const ConePoint<S>& x, std::span<const cplx> lambda) {
    if (int(lambda.size()) != x.rank()) throw domain_error("power_function: lambda length must equal rank");
    return power_from_log_minors(x.log_minors(), lambda);
}

// Descending singular values. For H the chi-spectrum is doubled; every second value is kept.
template <class S>
std::vector<double> singular_values(const Matrix<S>& a) {
    auto m = detail::to_eigen(a);
    using M = decltype(m);
    Eigen::JacobiSVD<M> svd(m);
    auto sv = svd.singularValues();
    std::vector<double> s(sv.data(), sv.data() + sv.size());
    std::sort(s.begin(), s.end(), std::greater<>());
    if constexpr (std::is_same_v<S, Quaternion>) {
        std::vector<double> h;
        h.reserve(s.size() / 2);
        const double tol = 1e-9 * std::max(1.0, s.empty() ? 0.0 : s.front());
        for (std::size_t i = 0; i + 1 < s.size(); i += 2) {
            if (std::abs(s[i] - s[i + 1]) > tol) throw domain_error("quaternion singular values not paired");
            h.push_back(s[i]);
        }
        return h;
    } else {
        return s;
    }
}

template <class S>
double sigma_max(const Matrix<S>& a) {
    auto s = singular_values(a);
    return s.empty() ? 0.0 : s.front();
}

enum class Variant { g, g_tilde };

namespace detail {

// a = cosh t + sinh t w, rows of w scaled by sinh t_i.
template <class S>
Matrix<S> ball_shift(std::span<const double> t, const Matrix<S>& w) {
    const int q = int(t.size());
    Matrix<S> a(q, q);
    for (int i = 0; i < q; ++i) {
        const double sh = std::sinh(t[i]);
        for (int j = 0; j < q; ++j) a(i, j) = w(i, j) * sh;
        a(i, i) += S(std::cosh(t[i]));
    }
    return a;
}

// Unchecked g_t(u, w) for inner loops.
template <class S>
Matrix<S> build_g(std::span<const double> t, const Matrix<S>& u, const Matrix<S>& w, Variant v) {
    const Matrix<S> a = ball_shift(t, w);
    const Matrix<S> core = v == Variant::g ? adjoint(a) * a : a * adjoint(a);
    return adjoint(u) * core * u;
}

}  // namespace detail

template <class S>
ConePoint<S> build_g(std::span<const double> t, const Matrix<S>& u, const Matrix<S>& w, Variant v = Variant::g) {
    const int q = int(t.size());
    if (u.rows() != q || u.cols() != q || w.rows() != q || w.cols() != q)
        throw domain_error("build_g: shape mismatch");
    if (!is_unitary(u)) throw domain_error("build_g: u is not unitary");
    if (!(sigma_max(w) < 1.0)) throw domain_error("build_g: w is not in the open matrix ball");
    return ConePoint<S>(detail::build_g(t, u, w, v));
}

}  // namespace hypergeo
