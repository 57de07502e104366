#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "bessel.hpp"
#include "hyper_bc.hpp"
#include "montecarlo.hpp"
#include "sampling.hpp"
#include "spherical_a.hpp"
#include "weyl.hpp"

namespace hypergeo {

struct LogLogFit {
    double slope = std::numeric_limits<double>::quiet_NaN();
    double intercept = std::numeric_limits<double>::quiet_NaN();
    int points = 0;
};

// Least squares of log y on log x over points with y > 0.
inline LogLogFit fit_loglog(std::span<const double> x, std::span<const double> y) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (y[i] > 0 && x[i] > 0) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        }
    LogLogFit f;
    f.points = int(lx.size());
    if (f.points < 2) return f;
    const double n = lx.size();
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    return f;
}

struct RateReport {
    std::vector<double> params;      // p values or n values
    std::vector<double> errors;      // sup over the t-grid
    std::vector<double> std_errors;  // stderr at the arg-sup (0 on deterministic paths)
    std::vector<double> normalized;  // error scaled by the theoretical rate and prefactor
    std::vector<std::vector<double>> per_t_errors;  // [param][t]
    double slope = std::numeric_limits<double>::quiet_NaN();
    double slope_halfwidth = 0;      // jackknife over shards (0 on deterministic paths)
    double scale = 0;                // t~ * ||lambda||_1 (or ||lambda||_1 for contraction)
    bool deterministic = false;
    bool bounded_regime = true;

    bool trivial() const {
        return std::all_of(errors.begin(), errors.end(), [](double e) { return e == 0.0; });
    }
    // max/min of the positive normalized constants.
    double normalized_ratio() const {
        double lo = std::numeric_limits<double>::infinity(), hi = 0;
        for (double v : normalized)
            if (v > 0) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        return hi > 0 ? hi / lo : 1.0;
    }
    double slope_upper() const { return slope + slope_halfwidth; }
};

inline double l1_norm(std::span<const cplx> v) {
    double s = 0;
    for (const auto& z : v) s += std::abs(z);
    return s;
}

namespace detail {

// Fills errors, slope and jackknife band from per-shard accumulators laid out [param][t].
inline void finish_mc_report(RateReport& rep, const McRun& run, std::size_t np, std::size_t nt) {
    auto sup_errors = [&](auto&& mean_of) {
        std::vector<double> e(np, 0.0);
        for (std::size_t a = 0; a < np; ++a)
            for (std::size_t j = 0; j < nt; ++j) e[a] = std::max(e[a], std::abs(mean_of(a * nt + j)));
        return e;
    };
    rep.errors.assign(np, 0.0);
    rep.std_errors.assign(np, 0.0);
    rep.per_t_errors.assign(np, std::vector<double>(nt, 0.0));
    for (std::size_t a = 0; a < np; ++a)
        for (std::size_t j = 0; j < nt; ++j) {
            const auto& est = run.estimates[a * nt + j];
            const double e = std::abs(est.value);
            rep.per_t_errors[a][j] = e;
            if (e >= rep.errors[a]) {
                rep.errors[a] = e;
                rep.std_errors[a] = est.std_error;
            }
        }
    rep.slope = fit_loglog(rep.params, rep.errors).slope;

    const std::size_t shards = run.shard_acc.size();
    if (shards < 2 || !std::isfinite(rep.slope)) return;
    std::vector<double> js;
    for (std::size_t leave = 0; leave < shards; ++leave) {
        const auto e = sup_errors([&](std::size_t k) {
            Accumulator acc;
            for (std::size_t s = 0; s < shards; ++s)
                if (s != leave) acc.merge(run.shard_acc[s][k]);
            return acc.mean();
        });
        const double sl = fit_loglog(rep.params, e).slope;
        if (std::isfinite(sl)) js.push_back(sl);
    }
    if (js.size() < 2) return;
    const double m = std::accumulate(js.begin(), js.end(), 0.0) / js.size();
    double v = 0;
    for (double s : js) v += (s - m) * (s - m);
    rep.slope_halfwidth = std::sqrt(v * (js.size() - 1) / js.size());
}

template <class S>
double re_trace_uwtul(const Matrix<S>& u, const Matrix<S>& w, std::span<const double> t, std::span<const double> lam) {
    // Re tr(u^* w^* T u L) = sum_r lam_r Re (u^* w^* T u)_rr
    const int q = int(t.size());
    Matrix<S> tu(q, q);
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j) tu(i, j) = u(i, j) * t[i];
    const Matrix<S> m = adjoint(u) * adjoint(w) * tu;
    double s = 0;
    for (int r = 0; r < q; ++r) s += lam[r] * re(m(r, r));
    return s;
}

}  // namespace detail

// ---------------------------------------------------------------- p -> infinity

// sup_t |phi^p_{lambda - i rho}(t) - psi_{lambda - i rho^A}(t)| over p.
// Both sides have integrand Delta_{i lambda/2}; the MC path pairs g~(u, w) with g~(u, 0) = u^* cosh^2 t u.
template <class S>
RateReport rate_p_experiment(int q, std::span<const cplx> lambda, std::span<const ChamberPoint> t_grid,
                             std::span<const double> p_list, const McOptions& opt) {
    constexpr int d = field_dim_v<S>;
    if (int(lambda.size()) != q) throw domain_error("lambda rank must equal q");
    for (const auto& t : t_grid)
        if (t.rank() != q) throw domain_error("chamber point rank must equal q");
    for (std::size_t i = 0; i < p_list.size(); ++i) {
        detail::check_p(p_list[i], q);
        if (i > 0 && !(p_list[i] > p_list[i - 1])) throw domain_error("p_list must be increasing");
    }
    RateReport rep;
    rep.params.assign(p_list.begin(), p_list.end());
    double tt = 0;
    for (const auto& t : t_grid) tt = std::max(tt, t.tilde());
    const double l1 = l1_norm(lambda);
    rep.scale = l1 * tt;

    // Im(lambda) - rho in co(W.rho) for every p.
    for (double p : p_list) {
        const auto rho = rho_bc(p, d, q);
        Point y(q);
        for (int i = 0; i < q; ++i) y[i] = lambda[i].imag() - rho[i];
        if (!hull_membership(OrbitPolytope({Family::B, q}, rho), y)) rep.bounded_regime = false;
    }
    // Exponential envelope used as normalizer outside the bounded regime: e^{max_w Im<w lambda, t>}.
    auto envelope = [&](const ChamberPoint& t) {
        if (rep.bounded_regime) return 1.0;
        Point im(q);
        for (int i = 0; i < q; ++i) im[i] = std::abs(lambda[i].imag());
        std::sort(im.begin(), im.end(), std::greater<>());
        double s = 0;
        for (int i = 0; i < q; ++i) s += im[i] * t[i];
        return std::exp(s);
    };

    std::vector<cplx> e(q);
    for (int i = 0; i < q; ++i) e[i] = 0.5 * cplx(0, 1) * lambda[i];
    const std::size_t np = p_list.size(), nt = t_grid.size();

    if constexpr (std::is_same_v<S, double>) {
        if (q == 1) {
            rep.deterministic = true;
            rep.errors.assign(np, 0.0);
            rep.std_errors.assign(np, 0.0);
            rep.per_t_errors.assign(np, std::vector<double>(nt, 0.0));
            for (std::size_t a = 0; a < np; ++a) {
                const auto rule = rank_one_rule(p_list[a]);
                for (std::size_t j = 0; j < nt; ++j) {
                    const double t = t_grid[j][0];
                    if (t == 0.0) continue;
                    const cplx phi = rank_one_power_integral(rule, e[0], t);
                    const cplx psi = std::exp(2.0 * e[0] * std::log(std::cosh(t)));
                    rep.per_t_errors[a][j] = std::abs(phi - psi);
                    rep.errors[a] = std::max(rep.errors[a], rep.per_t_errors[a][j]);
                }
            }
            rep.slope = fit_loglog(rep.params, rep.errors).slope;
        }
    }
    if (!rep.deterministic) {
        auto body = [&](RngStream& rng, std::span<cplx> res) {
            const Matrix<S> u = q > 1 ? haar_unitary<S>(q, rng) : Matrix<S>::identity(1);
            const CrnBallDraw<S> draw(q, rng);
            const Matrix<S> zero(q, q);
            std::vector<Matrix<S>> ws;
            ws.reserve(np);
            for (std::size_t a = 0; a < np; ++a) ws.push_back(draw.sample(p_list[a]));
            std::vector<double> lm(q), l0(q);
            for (std::size_t j = 0; j < nt; ++j) {
                if (t_grid[j].is_zero()) {
                    for (std::size_t a = 0; a < np; ++a) res[a * nt + j] = 0;
                    continue;
                }
                log_principal_minors(detail::build_g(t_grid[j].values(), u, zero, Variant::g_tilde), l0);
                const cplx base = power_from_log_minors(l0, e);
                for (std::size_t a = 0; a < np; ++a) {
                    log_principal_minors(detail::build_g(t_grid[j].values(), u, ws[a], Variant::g_tilde), lm);
                    res[a * nt + j] = power_from_log_minors(lm, e) - base;
                }
            }
        };
        const McRun run = run_monte_carlo(np * nt, opt, body);
        detail::finish_mc_report(rep, run, np, nt);
    }

    rep.normalized.assign(np, 0.0);
    for (std::size_t a = 0; a < np; ++a)
        for (std::size_t j = 0; j < nt; ++j) {
            const double tl = t_grid[j].tilde();
            if (tl == 0 || l1 == 0) continue;
            const double v = rep.per_t_errors[a][j] * std::sqrt(p_list[a]) / (l1 * tl * envelope(t_grid[j]));
            rep.normalized[a] = std::max(rep.normalized[a], v);
        }
    return rep;
}

inline RateReport rate_p_experiment(Field f, int q, std::span<const cplx> lambda, std::span<const ChamberPoint> t_grid,
                                    std::span<const double> p_list, const McOptions& opt) {
    return dispatch_field(f, [&]<class S>(std::type_identity<S>) {
        return rate_p_experiment<S>(q, lambda, t_grid, p_list, opt);
    });
}

// ---------------------------------------------------------------- Bessel contraction

// |phi^p_{n lambda - i rho}(t/n) - phi~^p_lambda(t)| over n.
template <class S>
RateReport contraction_experiment(int q, double p, std::span<const double> lambda, const ChamberPoint& t,
                                  std::span<const double> n_list, const McOptions& opt) {
    if (int(lambda.size()) != q || t.rank() != q) throw domain_error("rank mismatch");
    const bool degenerate = std::abs(p - (2 * q - 1)) < 1e-12;
    if (!degenerate && !(p > 2 * q - 1)) throw domain_error("contraction needs p >= 2q-1");
    for (double n : n_list)
        if (!(n >= 1)) throw domain_error("n_list entries must be >= 1");
    RateReport rep;
    rep.params.assign(n_list.begin(), n_list.end());
    double l1 = 0;
    for (double x : lambda) l1 += std::abs(x);
    rep.scale = l1;
    const std::size_t nn = n_list.size();
    const bool trivial = l1 == 0 || t.is_zero();

    if constexpr (std::is_same_v<S, double>) {
        if (q == 1 && !degenerate) {
            rep.deterministic = true;
            rep.errors.assign(nn, 0.0);
            rep.std_errors.assign(nn, 0.0);
            rep.per_t_errors.assign(nn, std::vector<double>(1, 0.0));
            if (!trivial) {
                const auto rule = rank_one_rule(p);
                const cplx tilde = rule.integrate([&](double w) { return std::exp(cplx(0, -lambda[0] * t[0] * w)); });
                for (std::size_t a = 0; a < nn; ++a) {
                    const double n = n_list[a];
                    const cplx phi = rank_one_power_integral(rule, 0.5 * cplx(0, n * lambda[0]), t[0] / n);
                    rep.errors[a] = rep.per_t_errors[a][0] = std::abs(phi - tilde);
                }
            }
            rep.slope = fit_loglog(rep.params, rep.errors).slope;
        }
    }
    if (!rep.deterministic) {
        if (trivial) {
            rep.errors.assign(nn, 0.0);
            rep.std_errors.assign(nn, 0.0);
            rep.per_t_errors.assign(nn, std::vector<double>(1, 0.0));
        } else {
            std::vector<std::vector<cplx>> exps(nn, std::vector<cplx>(q));
            for (std::size_t a = 0; a < nn; ++a)
                for (int i = 0; i < q; ++i) exps[a][i] = 0.5 * cplx(0, n_list[a] * lambda[i]);
            auto body = [&](RngStream& rng, std::span<cplx> res) {
                const Matrix<S> u = q > 1 ? haar_unitary<S>(q, rng) : Matrix<S>::identity(1);
                const Matrix<S> w = degenerate ? sample_mp_degenerate<S>(q, rng) : sample_mp<S>(q, p, rng);
                const double x = detail::re_trace_uwtul(u, w, t.values(), lambda);
                const cplx tilde(std::cos(x), std::sin(x));
                std::vector<double> lm(q);
                for (std::size_t a = 0; a < nn; ++a) {
                    const ChamberPoint tn = t.scaled(1.0 / n_list[a]);
                    log_principal_minors(detail::build_g(tn.values(), u, w, Variant::g), lm);
                    res[a] = power_from_log_minors(lm, exps[a]) - tilde;
                }
            };
            const McRun run = run_monte_carlo(nn, opt, body);
            detail::finish_mc_report(rep, run, nn, 1);
        }
    }
    rep.normalized.assign(nn, 0.0);
    if (l1 > 0)
        for (std::size_t a = 0; a < nn; ++a) rep.normalized[a] = rep.errors[a] * n_list[a] / l1;
    return rep;
}

inline RateReport contraction_experiment(Field f, int q, double p, std::span<const double> lambda,
                                         const ChamberPoint& t, std::span<const double> n_list, const McOptions& opt) {
    return dispatch_field(f, [&]<class S>(std::type_identity<S>) {
        return contraction_experiment<S>(q, p, lambda, t, n_list, opt);
    });
}

// ---------------------------------------------------------------- boundedness

struct BoundednessRow {
    std::vector<cplx> lambda;
    ChamberPoint t;
    McEstimate estimate;
    enum class Kind { in_hull, imaginary, out_of_hull } kind = Kind::in_hull;
    bool pass = true;
};

struct BoundednessReport {
    std::vector<BoundednessRow> rows;
    bool bounded_ok = true;     // |phi| <= 1 + 5 stderr for every in-hull lambda
    bool positive_ok = true;    // imaginary lambda: Re > 0 and |Im| <= 5 stderr
    bool unbounded_seen = true; // out-of-hull lambda exceeds 1 at the largest t
};

inline constexpr double kBoundSigma = 5.0;

template <class S>
BoundednessReport boundedness_sweep(int q, double p, int n_lambda, std::span<const ChamberPoint> t_grid,
                                    const McOptions& opt, std::uint64_t lambda_seed = 7) {
    constexpr int d = field_dim_v<S>;
    detail::check_p(p, q);
    const auto rho = rho_bc(p, d, q);
    const OrbitPolytope poly({Family::B, q}, rho);
    RngStream rng(lambda_seed, 0xb0b);

    // Kinds: rho vertex, -i rho (exponent 0), random in-hull, purely imaginary, one out-of-hull.
    std::vector<std::pair<std::vector<cplx>, BoundednessRow::Kind>> lams;
    {
        std::vector<cplx> v(q), z(q), o(q);
        for (int i = 0; i < q; ++i) {
            v[i] = cplx(0, rho[i]);
            z[i] = cplx(0, -rho[i]);
            o[i] = cplx(0, -1.5 * rho[i]);
        }
        lams.push_back({v, BoundednessRow::Kind::imaginary});
        lams.push_back({z, BoundednessRow::Kind::imaginary});
        for (int k = 0; k < n_lambda; ++k) {
            Point y(q);
            do {
                for (int i = 0; i < q; ++i) y[i] = rho[0] * (2 * rng.uniform() - 1);
            } while (!hull_membership(poly, y));
            std::vector<cplx> l(q);
            const bool imag = k % 5 == 0;
            for (int i = 0; i < q; ++i) l[i] = cplx(imag ? 0.0 : 6 * rng.uniform() - 3, y[i]);
            lams.push_back({l, imag ? BoundednessRow::Kind::imaginary : BoundednessRow::Kind::in_hull});
        }
        lams.push_back({o, BoundednessRow::Kind::out_of_hull});
    }
    std::vector<SpectralParam> sp;
    for (const auto& l : lams) sp.emplace_back(l.first);
    const auto est = eval_phi_bc<S>(q, p, sp, t_grid, opt);

    BoundednessReport rep;
    double out_max = 0;
    double out_max_err = 0;
    for (std::size_t i = 0; i < lams.size(); ++i)
        for (std::size_t j = 0; j < t_grid.size(); ++j) {
            BoundednessRow row{lams[i].first, t_grid[j], est[i * t_grid.size() + j], lams[i].second, true};
            const double mod = std::abs(row.estimate.value);
            const double se = row.estimate.std_error;
            switch (row.kind) {
                case BoundednessRow::Kind::in_hull:
                    row.pass = mod <= 1 + kBoundSigma * se + 1e-12;
                    rep.bounded_ok = rep.bounded_ok && row.pass;
                    break;
                case BoundednessRow::Kind::imaginary:
                    row.pass = mod <= 1 + kBoundSigma * se + 1e-12 && row.estimate.value.real() > 0 &&
                               std::abs(row.estimate.value.imag()) <= kBoundSigma * se + 1e-12;
                    rep.bounded_ok = rep.bounded_ok && mod <= 1 + kBoundSigma * se + 1e-12;
                    rep.positive_ok = rep.positive_ok && row.pass;
                    break;
                case BoundednessRow::Kind::out_of_hull:
                    if (mod > out_max) {
                        out_max = mod;
                        out_max_err = se;
                    }
                    break;
            }
            rep.rows.push_back(std::move(row));
        }
    rep.unbounded_seen = out_max > 1 + kBoundSigma * out_max_err;
    for (auto& r : rep.rows)
        if (r.kind == BoundednessRow::Kind::out_of_hull) r.pass = rep.unbounded_seen;
    return rep;
}

inline BoundednessReport boundedness_sweep(Field f, int q, double p, int n_lambda,
                                           std::span<const ChamberPoint> t_grid, const McOptions& opt,
                                           std::uint64_t lambda_seed = 7) {
    return dispatch_field(f, [&]<class S>(std::type_identity<S>) {
        return boundedness_sweep<S>(q, p, n_lambda, t_grid, opt, lambda_seed);
    });
}

// ---------------------------------------------------------------- moment decay

// R(p) = int sigma_1(w)^{2n} / Delta(I - w^* w)^{2n} dm_p(w)
//      = (kappa_{p'} / kappa_p) E_{p'}[sigma_1^{2n}],  p' = p - 4n/d.
template <class S>
RateReport moment_decay_experiment(int q, int n, std::span<const double> p_list, const McOptions& opt) {
    constexpr int d = field_dim_v<S>;
    if (n < 1) throw domain_error("moment exponent n must be positive");
    std::vector<double> pp(p_list.size());
    for (std::size_t a = 0; a < p_list.size(); ++a) {
        if (!(p_list[a] >= 2 * q)) throw domain_error("moment decay needs p >= 2q");
        pp[a] = p_list[a] - 4.0 * n / d;
        if (!(pp[a] > 2 * q - 1)) throw domain_error("p too small for the importance shift p - 4n/d > 2q-1");
    }
    RateReport rep;
    rep.params.assign(p_list.begin(), p_list.end());
    const std::size_t np = p_list.size();
    auto body = [&](RngStream& rng, std::span<cplx> res) {
        const CrnBallDraw<S> draw(q, rng);
        for (std::size_t a = 0; a < np; ++a) {
            const double s = sigma_max(draw.sample(pp[a]));
            res[a] = std::pow(s * s, n) * std::exp(log_kappa(pp[a], d, q) - log_kappa(p_list[a], d, q));
        }
    };
    const McRun run = run_monte_carlo(np, opt, body);
    rep.errors.resize(np);
    rep.std_errors.resize(np);
    rep.per_t_errors.assign(np, std::vector<double>(1));
    for (std::size_t a = 0; a < np; ++a) {
        rep.errors[a] = rep.per_t_errors[a][0] = run.estimates[a].value.real();
        rep.std_errors[a] = run.estimates[a].std_error;
    }
    rep.slope = fit_loglog(rep.params, rep.errors).slope;
    // jackknife band on the slope
    const std::size_t shards = run.shard_acc.size();
    std::vector<double> js;
    for (std::size_t leave = 0; leave < shards; ++leave) {
        std::vector<double> e(np);
        for (std::size_t a = 0; a < np; ++a) {
            Accumulator acc;
            for (std::size_t s = 0; s < shards; ++s)
                if (s != leave) acc.merge(run.shard_acc[s][a]);
            e[a] = acc.mean().real();
        }
        js.push_back(fit_loglog(rep.params, e).slope);
    }
    if (js.size() > 1) {
        const double m = std::accumulate(js.begin(), js.end(), 0.0) / js.size();
        double v = 0;
        for (double s : js) v += (s - m) * (s - m);
        rep.slope_halfwidth = std::sqrt(v * (js.size() - 1) / js.size());
    }
    rep.normalized.resize(np);
    for (std::size_t a = 0; a < np; ++a) rep.normalized[a] = rep.errors[a] * std::pow(p_list[a], n);
    return rep;
}

inline RateReport moment_decay_experiment(Field f, int q, int n, std::span<const double> p_list,
                                          const McOptions& opt) {
    return dispatch_field(f, [&]<class S>(std::type_identity<S>) {
        return moment_decay_experiment<S>(q, n, p_list, opt);
    });
}

// Closed form at q = 1: E[s^n (1-s)^{-2n}], s ~ Beta(d/2, d(p-1)/2).
inline double moment_decay_rank_one(double p, int d, int n) {
    const double a = 0.5 * d, b = 0.5 * d * (p - 1);
    if (!(b - 2 * n > 0)) throw domain_error("moment_decay_rank_one: p too small");
    return std::exp(std::lgamma(a + n) + std::lgamma(b - 2 * n) - std::lgamma(a + b - n) - std::lgamma(a) -
                    std::lgamma(b) + std::lgamma(a + b));
}

}  // namespace hypergeo
