#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_gamma.h>

#include "errors.hpp"
#include "field.hpp"
#include "matrix.hpp"
#include "montecarlo.hpp"
#include "partition.hpp"
#include "quadrature.hpp"
#include "sampling.hpp"

namespace hypergeo {

// rho_i = d(p+q+2-2i)/2 - 1
inline std::vector<double> rho_bc(double p, int d, int q) {
    std::vector<double> r(q);
    for (int i = 1; i <= q; ++i) r[i - 1] = 0.5 * d * (p + q + 2 - 2 * i) - 1.0;
    return r;
}

// Multiplicities on the root classes 2e_i, 4e_i, 2(e_i +- e_j).
struct MultiplicityBC {
    double k1 = 0, k2 = 0, k3 = 0;
};

inline MultiplicityBC multiplicity_p(double p, int d, int q) {
    return {0.5 * d * (p - q), 0.5 * (d - 1), 0.5 * d};
}

inline std::vector<double> rho_k(const MultiplicityBC& k, int q) {
    std::vector<double> r(q);
    for (int i = 1; i <= q; ++i) r[i - 1] = k.k1 + 2 * k.k2 + 2 * k.k3 * (q - i);
    return r;
}

enum class Convention { plain, rho_shifted };

// lambda in C^q. rho_shifted means the caller supplies lambda and means lambda - i rho.
struct SpectralParam {
    std::vector<cplx> lambda;
    Convention convention = Convention::plain;

    SpectralParam() = default;
    SpectralParam(std::vector<cplx> l, Convention c = Convention::plain) : lambda(std::move(l)), convention(c) {
        for (const auto& z : lambda)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw domain_error("spectral parameter must be finite");
    }
    int rank() const noexcept { return int(lambda.size()); }
};

inline std::vector<cplx> to_plain(const SpectralParam& s, std::span<const double> rho) {
    if (s.convention == Convention::plain) return s.lambda;
    if (rho.size() != s.lambda.size()) throw domain_error("to_plain: rank mismatch");
    std::vector<cplx> r(s.lambda.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = s.lambda[i] - cplx(0, rho[i]);
    return r;
}

// t_1 >= ... >= t_q >= 0
class ChamberPoint {
public:
    ChamberPoint() = default;
    ChamberPoint(std::vector<double> t) : t_(std::move(t)) {  // NOLINT
        if (t_.empty()) throw domain_error("chamber point must be nonempty");
        for (std::size_t i = 0; i < t_.size(); ++i) {
            if (!std::isfinite(t_[i])) throw domain_error("chamber point must be finite");
            if (t_[i] < 0) throw domain_error("chamber point must have nonnegative entries");
            if (i > 0 && t_[i] > t_[i - 1]) throw domain_error("chamber point must be weakly decreasing");
        }
    }
    ChamberPoint(std::initializer_list<double> t) : ChamberPoint(std::vector<double>(t)) {}

    int rank() const noexcept { return int(t_.size()); }
    std::span<const double> values() const noexcept { return t_; }
    double operator[](int i) const noexcept { return t_[i]; }
    bool is_zero() const noexcept { return t_.front() == 0.0; }
    double tilde() const noexcept { return std::min(t_.front(), 1.0); }
    ChamberPoint scaled(double s) const {
        std::vector<double> r = t_;
        for (auto& x : r) x *= s;
        return ChamberPoint(std::move(r));
    }

private:
    std::vector<double> t_;
};

// ---------------------------------------------------------------- c-function

namespace detail {

inline bool at_pole(cplx z) {
    return std::abs(z.imag()) < 1e-13 && z.real() < 0.5 && std::abs(z.real() - std::round(z.real())) < 1e-12;
}

inline cplx lngamma(cplx z) {
    gsl_sf_result lnr, arg;
    gsl_error_handler_t* old = gsl_set_error_handler_off();
    const int status = gsl_sf_lngamma_complex_e(z.real(), z.imag(), &lnr, &arg);
    gsl_set_error_handler(old);
    if (status != GSL_SUCCESS) throw domain_error("complex log-gamma evaluation failed");
    return {lnr.val, arg.val};
}

struct PositiveRoot {
    std::vector<double> alpha;   // the root
    std::vector<double> coroot;  // 2 alpha / <alpha, alpha>
    double k = 0;                // k(alpha)
    double k_half = 0;           // k(alpha/2), zero when alpha/2 is not a root
};

inline std::vector<PositiveRoot> positive_roots_2bc(const MultiplicityBC& k, int q) {
    std::vector<PositiveRoot> out;
    for (int i = 0; i < q; ++i) {
        PositiveRoot a{std::vector<double>(q, 0.0), std::vector<double>(q, 0.0), k.k1, 0.0};
        a.alpha[i] = 2;
        a.coroot[i] = 1;
        out.push_back(a);
        PositiveRoot b{std::vector<double>(q, 0.0), std::vector<double>(q, 0.0), k.k2, k.k1};
        b.alpha[i] = 4;
        b.coroot[i] = 0.5;
        out.push_back(b);
    }
    for (int i = 0; i < q; ++i)
        for (int j = i + 1; j < q; ++j)
            for (int s : {-1, 1}) {
                PositiveRoot c{std::vector<double>(q, 0.0), std::vector<double>(q, 0.0), k.k3, 0.0};
                c.alpha[i] = 2;
                c.alpha[j] = 2 * s;
                c.coroot[i] = 0.5;
                c.coroot[j] = 0.5 * s;
                out.push_back(c);
            }
    return out;
}

}  // namespace detail

// Harish-Chandra c-function of R = 2 BC_q, normalized so that c(rho(k), k) = 1.
// Returns 0 when a denominator Gamma sits at a pole; throws pole_error for a numerator pole.
inline cplx c_function(std::span<const cplx> lambda, const MultiplicityBC& k, int q) {
    if (int(lambda.size()) != q) throw domain_error("c_function: lambda length must equal q");
    const auto rho = rho_k(k, q);
    cplx logc = 0;
    bool zero = false;
    for (const auto& a : detail::positive_roots_2bc(k, q)) {
        if (a.k == 0) continue;
        cplx lc = 0;
        double rc = 0;
        for (int i = 0; i < q; ++i) {
            lc += lambda[i] * a.coroot[i];
            rc += rho[i] * a.coroot[i];
        }
        const cplx num1 = lc + 0.5 * a.k_half, den1 = num1 + a.k;
        const cplx den2 = rc + 0.5 * a.k_half, num2 = den2 + a.k;
        for (cplx z : {num1, num2})
            if (detail::at_pole(z)) throw pole_error("c_function: Gamma pole at root", a.alpha);
        if (detail::at_pole(den1) || detail::at_pole(den2)) {
            zero = true;
            continue;
        }
        logc += detail::lngamma(num1) - detail::lngamma(den1) + detail::lngamma(num2) - detail::lngamma(den2);
    }
    return zero ? cplx(0) : std::exp(logc);
}

// ---------------------------------------------------------------- Monte Carlo core

namespace detail {

inline void check_p(double p, int q) {
    if (!(p > 2 * q - 1)) throw domain_error("p must exceed 2q-1 (use the degenerate evaluator at p = 2q-1)");
}

inline void check_ranks(int q, std::span<const std::vector<cplx>> exps, std::span<const ChamberPoint> ts) {
    if (q < 1) throw domain_error("rank q must be positive");
    for (const auto& e : exps)
        if (int(e.size()) != q) throw domain_error("spectral parameter rank must equal q");
    for (const auto& t : ts)
        if (t.rank() != q) throw domain_error("chamber point rank must equal q");
}

// E[Delta_e(g_t(u, w))] for a batch of exponents e (row) and points t (column).
// draw_w(rng) supplies w; u is Haar unless q = 1 (1x1 conjugation is trivial).
template <class S, class DrawW>
std::vector<McEstimate> power_integral(int q, std::span<const std::vector<cplx>> exps,
                                       std::span<const ChamberPoint> ts, const McOptions& opt, Variant v,
                                       DrawW&& draw_w) {
    check_ranks(q, exps, ts);
    const std::size_t ne = exps.size(), nt = ts.size();
    std::vector<McEstimate> out(ne * nt);
    std::vector<std::size_t> live;
    for (std::size_t j = 0; j < nt; ++j)
        if (!ts[j].is_zero()) live.push_back(j);
    for (auto& e : out) e = unit_estimate(opt.seed);
    if (live.empty() || ne == 0) return out;

    const bool haar = q > 1;
    auto body = [&](RngStream& rng, std::span<cplx> res) {
        const Matrix<S> u = haar ? haar_unitary<S>(q, rng) : Matrix<S>::identity(1);
        const Matrix<S> w = draw_w(rng);
        std::vector<double> logm(q);
        for (std::size_t jj = 0; jj < live.size(); ++jj) {
            const Matrix<S> g = haar ? detail::build_g(ts[live[jj]].values(), u, w, v)
                                     : detail::build_g(ts[live[jj]].values(), Matrix<S>::identity(1), w, v);
            log_principal_minors(g, logm);
            for (std::size_t i = 0; i < ne; ++i) res[i * live.size() + jj] = power_from_log_minors(logm, exps[i]);
        }
    };
    McRun run = run_monte_carlo(ne * live.size(), opt, body);
    for (std::size_t i = 0; i < ne; ++i)
        for (std::size_t jj = 0; jj < live.size(); ++jj) out[i * nt + live[jj]] = run.estimates[i * live.size() + jj];
    return out;
}

inline std::vector<cplx> phi_exponent(std::span<const cplx> lambda, std::span<const double> rho) {
    std::vector<cplx> e(lambda.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = 0.5 * (cplx(0, 1) * lambda[i] - rho[i]);
    return e;
}

template <class S>
std::vector<std::vector<cplx>> phi_exponents(int q, double p, std::span<const SpectralParam> lambdas) {
    const auto rho = rho_bc(p, field_dim_v<S>, q);
    std::vector<std::vector<cplx>> exps;
    exps.reserve(lambdas.size());
    for (const auto& l : lambdas) exps.push_back(phi_exponent(to_plain(l, rho), rho));
    return exps;
}

}  // namespace detail

// phi_lambda^p(t) = int Delta_{(i lambda - rho)/2}(g_t(u, w)) dm_p(w) du. Result index: [lambda][t].
template <class S>
std::vector<McEstimate> eval_phi_bc(int q, double p, std::span<const SpectralParam> lambdas,
                                    std::span<const ChamberPoint> ts, const McOptions& opt,
                                    Variant v = Variant::g) {
    detail::check_p(p, q);
    const auto exps = detail::phi_exponents<S>(q, p, lambdas);
    return detail::power_integral<S>(q, exps, ts, opt, v, [&](RngStream& rng) { return sample_mp<S>(q, p, rng); });
}

inline std::vector<McEstimate> eval_phi_bc(Field f, int q, double p, std::span<const SpectralParam> lambdas,
                                           std::span<const ChamberPoint> ts, const McOptions& opt,
                                           Variant v = Variant::g) {
    return dispatch_field(f, [&]<class S>(std::type_identity<S>) { return eval_phi_bc<S>(q, p, lambdas, ts, opt, v); });
}

inline McEstimate eval_phi_bc(Field f, double p, const SpectralParam& lambda, const ChamberPoint& t,
                              const McOptions& opt, Variant v = Variant::g) {
    return eval_phi_bc(f, t.rank(), p, std::span(&lambda, 1), std::span(&t, 1), opt, v).front();
}

// p = 2q-1: last ball factor lives on the sphere.
template <class S>
std::vector<McEstimate> eval_phi_bc_degenerate(int q, std::span<const SpectralParam> lambdas,
                                               std::span<const ChamberPoint> ts, const McOptions& opt) {
    const double p = 2 * q - 1;
    const auto exps = detail::phi_exponents<S>(q, p, lambdas);
    return detail::power_integral<S>(q, exps, ts, opt, Variant::g,
                                     [&](RngStream& rng) { return sample_mp_degenerate<S>(q, rng); });
}

inline std::vector<McEstimate> eval_phi_bc_degenerate(Field f, int q, std::span<const SpectralParam> lambdas,
                                                      std::span<const ChamberPoint> ts, const McOptions& opt) {
    return dispatch_field(f, [&]<class S>(std::type_identity<S>) {
        return eval_phi_bc_degenerate<S>(q, lambdas, ts, opt);
    });
}

inline McEstimate eval_phi_bc_degenerate(Field f, const SpectralParam& lambda, const ChamberPoint& t,
                                         const McOptions& opt) {
    return eval_phi_bc_degenerate(f, t.rank(), std::span(&lambda, 1), std::span(&t, 1), opt).front();
}

// ---------------------------------------------------------------- rank one, real field, quadrature

inline constexpr int kDefaultQuadratureNodes = 200;

inline GaussJacobiRule rank_one_rule(double p, int nodes = kDefaultQuadratureNodes) {
    if (nodes < 8) throw domain_error("quadrature needs at least 8 nodes");
    if (!(p > 1)) throw domain_error("rank-one quadrature requires p > 1");
    return GaussJacobiRule(nodes, 0.5 * (p - 3));
}

// int (cosh t + w sinh t)^{2e} dm_p(w) for an arbitrary complex exponent e.
inline cplx rank_one_power_integral(const GaussJacobiRule& rule, cplx e, double t) {
    if (t == 0.0) return 1.0;
    const double c = std::cosh(t), s = std::sinh(t);
    return rule.integrate([&](double w) { return std::exp(2.0 * e * std::log(c + w * s)); });
}

inline cplx eval_phi_bc_quadrature_q1(const GaussJacobiRule& rule, double p, cplx lambda, double t) {
    if (t < 0) throw domain_error("chamber point must be nonnegative");
    const double rho = rho_bc(p, 1, 1)[0];
    return rank_one_power_integral(rule, 0.5 * (cplx(0, 1) * lambda - rho), t);
}

inline cplx eval_phi_bc_quadrature_q1(double p, cplx lambda, double t, int nodes = kDefaultQuadratureNodes) {
    return eval_phi_bc_quadrature_q1(rank_one_rule(p, nodes), p, lambda, t);
}

// ---------------------------------------------------------------- Heckman-Opdam polynomials

inline bool in_p_plus(const Partition& mu) {
    for (int x : mu.parts())
        if (x % 2 != 0) return false;
    return true;
}

// P_mu(k_p; t) = c(mu + rho, k_p)^{-1} int Delta_{mu/2}(g_t(u, w)) dm_p du, mu in C_q with even parts.
template <class S>
McEstimate eval_ho_polynomial(int q, double p, const Partition& mu, const ChamberPoint& t, const McOptions& opt) {
    detail::check_p(p, q);
    if (mu.length() > q) throw domain_error("partition longer than the rank");
    if (!in_p_plus(mu)) throw domain_error("partition is not in P_+ (parts must be even)");
    constexpr int d = field_dim_v<S>;
    const auto k = multiplicity_p(p, d, q);
    const auto rho = rho_k(k, q);
    std::vector<cplx> shifted(q), e(q);
    for (int i = 0; i < q; ++i) {
        shifted[i] = mu[i] + rho[i];
        e[i] = 0.5 * mu[i];
    }
    const cplx c = c_function(shifted, k, q);
    if (c == cplx(0)) throw domain_error("c-function vanishes at mu + rho");
    std::vector<std::vector<cplx>> exps{e};
    auto r = detail::power_integral<S>(q, exps, std::span(&t, 1), opt, Variant::g,
                                       [&](RngStream& rng) { return sample_mp<S>(q, p, rng); })
                 .front();
    r.value /= c;
    r.std_error /= std::abs(c);
    return r;
}

inline McEstimate eval_ho_polynomial(Field f, int q, double p, const Partition& mu, const ChamberPoint& t,
                                     const McOptions& opt) {
    return dispatch_field(f, [&]<class S>(std::type_identity<S>) { return eval_ho_polynomial<S>(q, p, mu, t, opt); });
}

}  // namespace hypergeo
