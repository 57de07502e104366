#pragma once

// Independent reference implementations used only by the tests.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using lcplx = std::complex<long double>;

// Gauss hypergeometric series, |z| < 1.
inline cplx hyp2f1(cplx a, cplx b, cplx c, double z) {
    lcplx term = 1, sum = 1;
    const lcplx A = a, B = b, C = c;
    for (int n = 0; n < 200000; ++n) {
        term *= (A + (long double)n) * (B + (long double)n) / ((C + (long double)n) * (long double)(n + 1)) *
                (long double)z;
        sum += term;
        if (n > 10 && std::abs(term) < 1e-19L * std::abs(sum)) break;
    }
    return cplx(sum);
}

// Jacobi function phi_lambda^{(alpha, beta)}(t) via the Pfaff-transformed series.
inline cplx jacobi_function(double alpha, double beta, cplx lambda, double t) {
    const double rho = alpha + beta + 1;
    const cplx i(0, 1);
    const double z = std::tanh(t) * std::tanh(t);
    return std::pow(std::cosh(t), -(rho + i * lambda)) *
           hyp2f1(0.5 * (rho + i * lambda), alpha + 1 - 0.5 * (rho - i * lambda), alpha + 1, z);
}

// 0F1(; mu; -x^2/4) through the classical Bessel function.
inline double hyp0f1_neg(double mu, double x) {
    if (x == 0) return 1;
    return std::tgamma(mu) * std::pow(0.5 * x, 1 - mu) * std::cyl_bessel_j(mu - 1, x);
}

// Partitions of n with at most k parts.
inline long long partition_count(int n, int k) {
    std::vector<std::vector<long long>> p(n + 1, std::vector<long long>(k + 1, 0));
    for (int j = 0; j <= k; ++j) p[0][j] = 1;
    for (int m = 1; m <= n; ++m)
        for (int j = 1; j <= k; ++j) p[m][j] = p[m][j - 1] + (m >= j ? p[m - j][j] : 0);
    return p[n][k];
}

// Is x a convex combination of pts? Phase-I simplex with Bland's rule on
// sum_i l_i v_i = x, sum_i l_i = 1, l >= 0.
inline bool convex_combination(const std::vector<std::vector<double>>& pts, const std::vector<double>& x,
                               double tol = 1e-9) {
    const int n = int(pts.size()), dim = int(x.size()), m = dim + 1;
    const int cols = n + m;
    // tableau rows: constraints; last column rhs
    std::vector<std::vector<double>> T(m, std::vector<double>(cols + 1, 0.0));
    for (int r = 0; r < m; ++r) {
        for (int j = 0; j < n; ++j) T[r][j] = r < dim ? pts[j][r] : 1.0;
        T[r][cols] = r < dim ? x[r] : 1.0;
        if (T[r][cols] < 0)
            for (int j = 0; j <= cols; ++j) T[r][j] = -T[r][j];
        T[r][n + r] = 1.0;
    }
    std::vector<int> basis(m);
    for (int r = 0; r < m; ++r) basis[r] = n + r;
    // objective: minimize sum of artificials, reduced costs c_j = -sum_r T[r][j] for structural columns
    for (int iter = 0; iter < 10000; ++iter) {
        int enter = -1;
        for (int j = 0; j < cols && enter < 0; ++j) {
            if (std::find(basis.begin(), basis.end(), j) != basis.end()) continue;
            double red = j >= n ? 1.0 : 0.0;
            for (int r = 0; r < m; ++r)
                if (basis[r] >= n) red -= T[r][j];
            if (red < -1e-12) enter = j;
        }
        if (enter < 0) break;
        int leave = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int r = 0; r < m; ++r)
            if (T[r][enter] > 1e-12) {
                const double ratio = T[r][cols] / T[r][enter];
                if (ratio < best - 1e-15 || (std::abs(ratio - best) <= 1e-15 && basis[r] < basis[leave])) {
                    best = ratio;
                    leave = r;
                }
            }
        if (leave < 0) break;
        const double piv = T[leave][enter];
        for (auto& v : T[leave]) v /= piv;
        for (int r = 0; r < m; ++r)
            if (r != leave && T[r][enter] != 0.0) {
                const double f = T[r][enter];
                for (int j = 0; j <= cols; ++j) T[r][j] -= f * T[leave][j];
            }
        basis[leave] = enter;
    }
    double infeas = 0;
    for (int r = 0; r < m; ++r)
        if (basis[r] >= n) infeas += T[r][cols];
    return infeas <= tol;
}

// One-sample Kolmogorov-Smirnov p-value (asymptotic with the Stephens correction).
inline double ks_pvalue(std::vector<double> xs, const std::function<double(double)>& cdf) {
    std::sort(xs.begin(), xs.end());
    const double n = double(xs.size());
    double D = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double F = cdf(xs[i]);
        D = std::max({D, (i + 1) / n - F, F - i / n});
    }
    const double lam = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * D;
    double q = 0;
    for (int k = 1; k < 200; ++k) q += 2 * ((k % 2) ? 1 : -1) * std::exp(-2.0 * k * k * lam * lam);
    return std::clamp(q, 0.0, 1.0);
}

}  // namespace oracle
