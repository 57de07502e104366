#pragma once

#include <cmath>
#include <span>
#include <vector>

#include <boost/container/small_vector.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "errors.hpp"
#include "field.hpp"
#include "matrix.hpp"
#include "rng.hpp"

namespace hypergeo {

inline double gamma_bc(int d, int q) { return d * (q - 0.5) + 1.0; }

// Haar element of U_0(q, F): SO(q), U(q) or Sp(q).
// Gram-Schmidt on a Gaussian matrix; F^q is a right vector space, so coefficients act on the right.
template <class S>
Matrix<S> haar_unitary(int q, RngStream& rng) {
    if (q < 1) throw domain_error("haar_unitary: q must be positive");
    Matrix<S> g(q, q);
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j) g(i, j) = gaussian_scalar<S>(rng);
    for (int j = 0; j < q; ++j) {
        for (int k = 0; k < j; ++k) {
            S c(0.0);
            for (int i = 0; i < q; ++i) c += adj(g(i, k)) * g(i, j);
            for (int i = 0; i < q; ++i) g(i, j) -= g(i, k) * c;
        }
        double nrm = 0;
        for (int i = 0; i < q; ++i) nrm += abs2(g(i, j));
        nrm = 1.0 / std::sqrt(nrm);
        for (int i = 0; i < q; ++i) g(i, j) = g(i, j) * nrm;
    }
    if constexpr (std::is_same_v<S, double>) {
        if (q > 1 && detail::to_eigen(g).determinant() < 0)
            for (int i = 0; i < q; ++i) g(i, 0) = -g(i, 0);
        else if (q == 1 && g(0, 0) < 0)
            g(0, 0) = -g(0, 0);
    }
    return g;
}

// One row factor y_j of the P-map, a row vector in F^q.
template <class S>
struct BallFactor {
    boost::container::small_vector<S, 4> y;

    double norm2() const {
        double s = 0;
        for (const auto& v : y) s += abs2(v);
        return s;
    }
};

// Uniform point on the unit sphere of F^q (= S^{dq-1}).
template <class S>
BallFactor<S> uniform_sphere(int q, RngStream& rng) {
    BallFactor<S> f;
    f.y.resize(q);
    double n2 = 0;
    do {
        n2 = 0;
        for (int i = 0; i < q; ++i) {
            f.y[i] = gaussian_scalar<S>(rng);
            n2 += abs2(f.y[i]);
        }
    } while (!(n2 > 0));
    const double s = 1.0 / std::sqrt(n2);
    for (auto& v : f.y) v = v * s;
    return f;
}

// Row j is y_j (I - y_{j-1}^* y_{j-1})^{1/2} ... (I - y_1^* y_1)^{1/2}.
// (I - y^* y)^{1/2} = I - c y^* y with c = 1 / (1 + sqrt(1 - |y|^2)).
template <class S>
Matrix<S> p_map(std::span<const BallFactor<S>> factors, bool sphere_last = false) {
    const int q = int(factors.size());
    Matrix<S> w(q, q);
    boost::container::small_vector<double, 4> cs(q);
    for (int j = 0; j < q; ++j) {
        if (int(factors[j].y.size()) != q) throw domain_error("p_map: factor length must equal q");
        const double n2 = factors[j].norm2();
        const bool sphere_slot = sphere_last && j == q - 1;
        if (sphere_slot ? !(std::abs(n2 - 1.0) < 1e-9) : !(n2 < 1.0))
            throw domain_error("p_map: factor outside the unit ball");
        cs[j] = 1.0 / (1.0 + std::sqrt(std::max(0.0, 1.0 - n2)));
    }
    boost::container::small_vector<S, 4> v(q);
    for (int j = 0; j < q; ++j) {
        for (int k = 0; k < q; ++k) v[k] = factors[j].y[k];
        for (int i = j - 1; i >= 0; --i) {
            const auto& yi = factors[i].y;
            S s(0.0);
            for (int k = 0; k < q; ++k) s += v[k] * adj(yi[k]);
            s = s * cs[i];
            for (int k = 0; k < q; ++k) v[k] -= s * yi[k];
        }
        for (int k = 0; k < q; ++k) w(j, k) = v[k];
    }
    return w;
}

template <class S>
Matrix<S> p_map(const std::vector<BallFactor<S>>& factors, bool sphere_last = false) {
    return p_map(std::span<const BallFactor<S>>(factors), sphere_last);
}

namespace detail {

template <class S>
BallFactor<S> ball_factor(int q, double radial_b, RngStream& rng) {
    constexpr int d = field_dim_v<S>;
    BallFactor<S> f = uniform_sphere<S>(q, rng);
    const double r = std::sqrt(rng.beta(0.5 * d * q, radial_b));
    for (auto& v : f.y) v = v * r;
    return f;
}

}  // namespace detail

// Factors y_1..y_q of a draw from m_p: |y_j|^2 ~ Beta(dq/2, d(p-q-j+1)/2).
template <class S>
std::vector<BallFactor<S>> sample_mp_factors(int q, double p, RngStream& rng) {
    constexpr int d = field_dim_v<S>;
    if (!(p > 2 * q - 1)) throw domain_error("sample_mp requires p > 2q-1");
    std::vector<BallFactor<S>> fs;
    fs.reserve(q);
    for (int j = 1; j <= q; ++j) fs.push_back(detail::ball_factor<S>(q, 0.5 * d * (p - q - j + 1), rng));
    return fs;
}

template <class S>
Matrix<S> sample_mp(int q, double p, RngStream& rng) {
    return p_map(sample_mp_factors<S>(q, p, rng));
}

// p = 2q-1: y_j radial shape d(q-j)/2 for j < q, y_q uniform on the sphere.
template <class S>
std::vector<BallFactor<S>> sample_mp_degenerate_factors(int q, RngStream& rng) {
    constexpr int d = field_dim_v<S>;
    if (q < 1) throw domain_error("sample_mp_degenerate: q must be positive");
    std::vector<BallFactor<S>> fs;
    fs.reserve(q);
    for (int j = 1; j < q; ++j) fs.push_back(detail::ball_factor<S>(q, 0.5 * d * (q - j), rng));
    fs.push_back(uniform_sphere<S>(q, rng));
    return fs;
}

template <class S>
Matrix<S> sample_mp_degenerate(int q, RngStream& rng) {
    return p_map(sample_mp_degenerate_factors<S>(q, rng), true);
}

// Draw for common random numbers across p: directions and radial uniforms are fixed,
// radii come from the Beta inverse CDF at each requested p.
template <class S>
class CrnBallDraw {
public:
    CrnBallDraw(int q, RngStream& rng) : q_(q) {
        for (int j = 0; j < q; ++j) {
            dirs_.push_back(uniform_sphere<S>(q, rng));
            unif_.push_back(rng.uniform());
        }
    }

    std::vector<BallFactor<S>> factors(double p) const {
        constexpr int d = field_dim_v<S>;
        if (!(p > 2 * q_ - 1)) throw domain_error("CrnBallDraw requires p > 2q-1");
        std::vector<BallFactor<S>> fs = dirs_;
        for (int j = 1; j <= q_; ++j) {
            const double s = boost::math::ibeta_inv(0.5 * d * q_, 0.5 * d * (p - q_ - j + 1), unif_[j - 1]);
            const double r = std::sqrt(std::min(s, 1.0 - 1e-16));
            for (auto& v : fs[j - 1].y) v = v * r;
        }
        return fs;
    }

    Matrix<S> sample(double p) const { return p_map(factors(p)); }

private:
    int q_;
    std::vector<BallFactor<S>> dirs_;
    std::vector<double> unif_;
};

// log kappa_{pd/2} = (dq^2/2) log pi + sum_r [lgamma(d(p-q-r+1)/2) - lgamma(d(p-r+1)/2)].
inline double log_kappa(double p, int d, int q) {
    if (d != 1 && d != 2 && d != 4) throw domain_error("kappa: d must be 1, 2 or 4");
    if (q < 1) throw domain_error("kappa: q must be positive");
    if (!(p > 2 * q - 1)) throw domain_error("kappa: requires p > 2q-1");
    double s = 0.5 * d * q * q * std::log(M_PI);
    for (int r = 1; r <= q; ++r) s += std::lgamma(0.5 * d * (p - q - r + 1)) - std::lgamma(0.5 * d * (p - r + 1));
    return s;
}

inline double kappa(double p, int d, int q) { return std::exp(log_kappa(p, d, q)); }

}  // namespace hypergeo
