#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "errors.hpp"
#include "hyper_bc.hpp"
#include "jack.hpp"
#include "montecarlo.hpp"
#include "partition.hpp"
#include "sampling.hpp"

namespace hypergeo {

struct BesselIndex {
    cplx mu;
    double alpha;  // 2/d

    static BesselIndex from_p(double p, int d) { return {cplx(0.5 * p * d, 0.0), 2.0 / d}; }
    // k(mu, d) = (mu - (q-1)d/2 - 1/2, d/2)
    std::pair<cplx, double> multiplicity(int q) const {
        const double d = 2.0 / alpha;
        return {mu - 0.5 * (q - 1) * d - 0.5, 0.5 * d};
    }
};

struct SeriesResult {
    cplx value{1.0, 0.0};
    int truncation_degree = 0;
    double tail_bound = 0.0;
    bool converged = true;
};

inline constexpr int kDefaultBesselDegree = 30;

// J_mu(xi, eta) = sum_m (-1)^|m| C_m(xi) C_m(eta) / ((mu)_m^alpha |m|! C_m(1)).
// Stops after three consecutive shells below rel_tol * |partial sum|.
inline SeriesResult bessel_series(const BesselIndex& idx, std::span<const double> xi, std::span<const double> eta,
                                  int max_degree = kDefaultBesselDegree, double rel_tol = 1e-16) {
    const int q = int(xi.size());
    if (q < 1 || int(eta.size()) != q) throw domain_error("bessel_series: arguments must have equal positive length");
    if (max_degree < 0) throw domain_error("bessel_series: negative degree");
    SeriesResult r;
    r.value = 1.0;
    bool xi_zero = true, eta_zero = true;
    for (int i = 0; i < q; ++i) {
        xi_zero = xi_zero && xi[i] == 0.0;
        eta_zero = eta_zero && eta[i] == 0.0;
    }
    if (xi_zero || eta_zero) return r;

    const auto table = jack_table(idx.alpha, q, max_degree);
    std::vector<double> shell_mag;
    int small_run = 0;
    double kfact = 1;
    for (int k = 1; k <= max_degree; ++k) {
        kfact *= k;
        const auto& sh = table->shell(k);
        const auto cx = table->eval_shell_C(k, xi);
        const auto ce = table->eval_shell_C(k, eta);
        cplx shell = 0;
        for (std::size_t a = 0; a < sh.parts.size(); ++a) {
            const cplx poch = gen_pochhammer(idx.mu, sh.parts[a], idx.alpha);
            if (std::abs(poch) == 0.0) throw domain_error("bessel_series: generalized Pochhammer symbol vanishes");
            shell += cx[a] * ce[a] / (poch * kfact * sh.c_at_one[a]);
        }
        if (k % 2) shell = -shell;
        r.value += shell;
        r.truncation_degree = k;
        shell_mag.push_back(std::abs(shell));
        small_run = std::abs(shell) <= rel_tol * std::abs(r.value) ? small_run + 1 : 0;
        if (small_run >= 3) break;
    }
    const std::size_t n = shell_mag.size();
    if (n >= 2 && shell_mag[n - 2] > 0) {
        const double ratio = shell_mag[n - 1] / shell_mag[n - 2];
        r.tail_bound = ratio < 1 ? shell_mag[n - 1] * ratio / (1 - ratio) : std::numeric_limits<double>::infinity();
    } else {
        r.tail_bound = n ? shell_mag.back() : 0.0;
    }
    r.converged = small_run >= 3 || r.tail_bound <= rel_tol * std::abs(r.value) * 16;
    return r;
}

// phi~_lambda^p(t) = J_{pd/2}(lambda^2/2, t^2/2)
inline SeriesResult bessel_phi_tilde_series(double p, int d, std::span<const double> lambda, const ChamberPoint& t,
                                            int max_degree = kDefaultBesselDegree) {
    const int q = t.rank();
    if (int(lambda.size()) != q) throw domain_error("lambda rank must equal q");
    std::vector<double> xi(q), eta(q);
    for (int i = 0; i < q; ++i) {
        xi[i] = 0.5 * lambda[i] * lambda[i];
        eta[i] = 0.5 * t[i] * t[i];
    }
    return bessel_series(BesselIndex::from_p(p, d), xi, eta, max_degree);
}

namespace detail {

// Re tr(w T u L) with T, L diagonal.
template <class S>
double re_trace_wtul(const Matrix<S>& w, std::span<const double> t, const Matrix<S>& u, std::span<const double> lam) {
    const int q = int(t.size());
    double s = 0;
    for (int i = 0; i < q; ++i) {
        S acc(0.0);
        for (int j = 0; j < q; ++j) acc += w(i, j) * u(j, i) * t[j];
        s += re(acc) * lam[i];
    }
    return s;
}

}  // namespace detail

// phi~ by Monte Carlo over m_p (or the degenerate sphere law at p = 2q-1) and Haar u.
// Result index: [lambda][t].
template <class S>
std::vector<McEstimate> bessel_phi_tilde_integral(int q, double p, std::span<const std::vector<double>> lambdas,
                                                  std::span<const ChamberPoint> ts, const McOptions& opt) {
    if (q < 1) throw domain_error("rank q must be positive");
    const bool degenerate = std::abs(p - (2 * q - 1)) < 1e-12;
    if (!degenerate && !(p > 2 * q - 1)) throw domain_error("integral mode needs p >= 2q-1");
    for (const auto& l : lambdas)
        if (int(l.size()) != q) throw domain_error("lambda rank must equal q");
    for (const auto& t : ts)
        if (t.rank() != q) throw domain_error("chamber point rank must equal q");

    const std::size_t nl = lambdas.size(), nt = ts.size();
    std::vector<McEstimate> out(nl * nt, unit_estimate(opt.seed));
    std::vector<std::pair<std::size_t, std::size_t>> live;
    for (std::size_t i = 0; i < nl; ++i) {
        bool lz = true;
        for (double x : lambdas[i]) lz = lz && x == 0.0;
        for (std::size_t j = 0; j < nt; ++j)
            if (!lz && !ts[j].is_zero()) live.emplace_back(i, j);
    }
    if (live.empty()) return out;

    auto body = [&](RngStream& rng, std::span<cplx> res) {
        const Matrix<S> u = q > 1 ? haar_unitary<S>(q, rng) : Matrix<S>::identity(1);
        const Matrix<S> w = degenerate ? sample_mp_degenerate<S>(q, rng) : sample_mp<S>(q, p, rng);
        for (std::size_t k = 0; k < live.size(); ++k) {
            const double x = detail::re_trace_wtul(w, ts[live[k].second].values(), u, lambdas[live[k].first]);
            res[k] = cplx(std::cos(x), -std::sin(x));
        }
    };
    McRun run = run_monte_carlo(live.size(), opt, body);
    for (std::size_t k = 0; k < live.size(); ++k) out[live[k].first * nt + live[k].second] = run.estimates[k];
    return out;
}

inline std::vector<McEstimate> bessel_phi_tilde_integral(Field f, int q, double p,
                                                         std::span<const std::vector<double>> lambdas,
                                                         std::span<const ChamberPoint> ts, const McOptions& opt) {
    return dispatch_field(f, [&]<class S>(std::type_identity<S>) {
        return bessel_phi_tilde_integral<S>(q, p, lambdas, ts, opt);
    });
}

}  // namespace hypergeo
