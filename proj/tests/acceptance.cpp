// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.
// Every tolerance and sample size used below is pinned in the constants block.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>

#include "hypergeo/hypergeo.hpp"
#include "oracles.hpp"

using namespace hypergeo;

namespace {

// ---------------------------------------------------------------- pinned tolerances
constexpr double kMcConstTol = 1e-12;        // constant-integrand MC at t = 0
constexpr double kRankOneRelTol = 1e-6;      // quadrature vs Jacobi oracle
constexpr double kRateSlope = -0.45;         // p -> infinity, one-sided
constexpr double kContractionSlope = -0.8;   // n -> infinity, one-sided
constexpr double kNormalizedRatio = 10.0;    // max/min of normalized constants
constexpr double kJackRelTol = 1e-10;        // trace identity
constexpr double kBesselSigma = 4.0;         // series vs MC
constexpr double kBesselOracleTol = 1e-10;   // series vs 0F1 at q = 1
constexpr double kEps0A2 = 0.5, kEps0A2Tol = 0.02;
constexpr double kEps0B3Small = 0.05;
constexpr double kSingularTol = 1e-10;          // singular-value inequalities
constexpr double kMomentSlopeFactor = -0.9;  // slope <= -0.9 n
constexpr double kKappaSigma = 3.0;          // kappa and Beta-moment MC

constexpr std::uint64_t kRateSamples = 1000000;
constexpr std::uint64_t kBesselSamples = 1000000;
constexpr std::uint64_t kBoundSamples = 200000;
constexpr std::uint64_t kMomentSamples = 200000;
constexpr std::uint64_t kKappaSamples = 1000000;
constexpr int kSingularTriples = 10000;
constexpr std::uint64_t kSeed = 20240601;

McOptions opts(std::uint64_t n, std::uint64_t seed = kSeed) {
    McOptions o;
    o.samples = n;
    o.seed = seed;
    return o;
}

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (!pass) detail << "; ";
            else detail.str("");
            detail << "FAILED " << what;
            pass = false;
        }
    }
};

// ---------------------------------------------------------------- 1
void identity_normalization(Outcome& o) {
    RngStream rng(kSeed, 1);
    int checked = 0;
    for (int rep = 0; rep < 20; ++rep) {
        const Field f = Field(rep % 3);
        const int d = dim(f);
        const int q = 1 + int(rng.uniform() * 3);
        const double p = 2 * q - 1 + 0.25 + 6 * rng.uniform();
        std::vector<cplx> l(q);
        std::vector<double> lr(q);
        for (int i = 0; i < q; ++i) {
            l[i] = cplx(4 * rng.uniform() - 2, 2 * rng.uniform() - 1);
            lr[i] = l[i].real();
        }
        const std::vector<SpectralParam> ls{SpectralParam(l)};
        const std::vector<ChamberPoint> t0{ChamberPoint(std::vector<double>(q, 0.0))};
        const std::vector<std::vector<double>> lrs{lr};
        auto ok = [&](const McEstimate& e) { return std::abs(e.value - 1.0) <= kMcConstTol && e.std_error == 0.0; };
        const auto phi = eval_phi_bc(f, q, p, ls, t0, opts(1000));
        const auto psi = eval_psi(f, q, ls, t0, opts(1000));
        const auto bi = bessel_phi_tilde_integral(f, q, p, lrs, t0, opts(1000));
        const auto bs = bessel_phi_tilde_series(p, d, lr, t0[0]);
        o.require(ok(phi[0]), "phi at t=0");
        o.require(ok(psi[0]), "psi at t=0");
        o.require(ok(bi[0]), "Bessel integral at t=0");
        o.require(bs.value == cplx(1.0), "Bessel series at t=0");
        if (q == 1 && f == Field::real) o.require(eval_phi_bc_quadrature_q1(p, l[0], 0.0) == cplx(1.0), "quadrature at t=0");
        ++checked;
    }
    if (o.pass) o.detail << checked << " configurations, all exactly 1 with stderr 0";
}

// ---------------------------------------------------------------- 2
void rank_one_oracle(Outcome& o) {
    double worst = 0;
    int n = 0;
    for (double p : {2.0, 3.0, 5.0, 10.0}) {
        const auto rule = rank_one_rule(p);
        for (double l : {0.5, 1.0, 2.0, 4.0})
            for (cplx lam : {cplx(l, 0), cplx(l, 2), cplx(l, -2)})
                for (double t : {0.1, 0.5, 1.0, 2.0}) {
                    const cplx a = eval_phi_bc_quadrature_q1(rule, p, lam, t);
                    const cplx b = oracle::jacobi_function(0.5 * p - 1, -0.5, lam, t);
                    worst = std::max(worst, std::abs(a - b) / std::abs(b));
                    ++n;
                }
    }
    o.require(worst <= kRankOneRelTol, "relative error " + std::to_string(worst));
    if (o.pass) o.detail << n << " points, max relative error " << worst;
}

// ---------------------------------------------------------------- 3
void rate_p(Outcome& o) {
    const std::vector<double> ps{10, 20, 40, 80, 160, 320};
    std::vector<ChamberPoint> g1;
    for (int i = 0; i <= 20; ++i) g1.push_back(ChamberPoint{0.1 * i});
    const std::vector<cplx> l1{2.0};
    const auto r1 = rate_p_experiment(Field::real, 1, l1, g1, ps, opts(1));
    o.require(r1.deterministic, "q=1 sweep must use quadrature");
    o.require(r1.slope <= kRateSlope, "q=1 slope " + std::to_string(r1.slope));
    o.require(r1.normalized_ratio() < kNormalizedRatio, "q=1 normalized ratio " + std::to_string(r1.normalized_ratio()));

    std::vector<ChamberPoint> g2;
    for (int i = 0; i <= 4; ++i) g2.push_back(ChamberPoint{0.5 * i, 0.25 * i});
    const std::vector<cplx> l2{2.0, 1.0};
    const auto r2 = rate_p_experiment(Field::real, 2, l2, g2, ps, opts(kRateSamples));
    o.require(r2.slope_upper() <= kRateSlope, "q=2 slope " + std::to_string(r2.slope) + " + band " +
                                                  std::to_string(r2.slope_halfwidth));
    if (o.pass)
        o.detail << "q=1 slope " << r1.slope << " ratio " << r1.normalized_ratio() << "; q=2 slope " << r2.slope
                 << " +/- " << r2.slope_halfwidth << " ratio " << r2.normalized_ratio();
}

// ---------------------------------------------------------------- 4
void contraction(Outcome& o) {
    const std::vector<double> lam{1.0}, ns{2, 4, 8, 16, 32};
    const auto r = contraction_experiment(Field::real, 1, 3.0, lam, ChamberPoint{1.0}, ns, opts(1));
    o.require(r.deterministic, "sweep must use quadrature");
    o.require(r.slope <= kContractionSlope, "slope " + std::to_string(r.slope));
    o.require(r.normalized_ratio() < kNormalizedRatio, "n*error ratio " + std::to_string(r.normalized_ratio()));
    if (o.pass) o.detail << "slope " << r.slope << ", n*error max/min " << r.normalized_ratio();
}

// ---------------------------------------------------------------- 5
void jack_trace(Outcome& o) {
    RngStream rng(kSeed, 5);
    double worst = 0;
    for (double alpha : {0.5, 1.0, 2.0})
        for (int q = 1; q <= 4; ++q) {
            const auto tab = jack_table(alpha, q, 6);
            for (int rep = 0; rep < 50; ++rep) {
                std::vector<double> x(q);
                for (auto& v : x) v = 2 * rng.uniform();
                const double tr = std::accumulate(x.begin(), x.end(), 0.0);
                for (int k = 0; k <= 6; ++k) {
                    const auto vals = tab->eval_shell_C(k, x);
                    const double s = std::accumulate(vals.begin(), vals.end(), 0.0);
                    worst = std::max(worst, std::abs(s - std::pow(tr, k)) / std::pow(tr, k));
                }
            }
        }
    o.require(worst <= kJackRelTol, "relative error " + std::to_string(worst));
    if (o.pass) o.detail << "max relative error " << worst;
}

// ---------------------------------------------------------------- 6
void bessel_duality(Outcome& o) {
    const std::vector<double> grid{0.5, 1.0, 1.5, 2.0};
    std::vector<std::vector<double>> lams;
    std::vector<ChamberPoint> ts;
    for (double s : grid) {
        lams.push_back({s, 0.5 * s});
        ts.push_back(ChamberPoint{s, 0.5 * s});
    }
    double worst_sigma = 0;
    for (double p : {3.0, 4.0, 7.0}) {
        const auto mc = bessel_phi_tilde_integral(Field::real, 2, p, lams, ts, opts(kBesselSamples));
        for (std::size_t i = 0; i < lams.size(); ++i)
            for (std::size_t j = 0; j < ts.size(); ++j) {
                const auto s = bessel_phi_tilde_series(p, 1, lams[i], ts[j]);
                const auto& e = mc[i * ts.size() + j];
                o.require(s.converged, "series convergence");
                worst_sigma = std::max(worst_sigma, std::abs(s.value - e.value) / e.std_error);
            }
    }
    o.require(worst_sigma <= kBesselSigma, "series vs MC " + std::to_string(worst_sigma) + " sigma");
    double worst_oracle = 0;
    for (double p : {3.0, 4.0, 7.0})
        for (int d : {1, 2, 4})
            for (double l : grid)
                for (double t : grid) {
                    const std::vector<double> lam{l};
                    const auto s = bessel_phi_tilde_series(p, d, lam, ChamberPoint{t});
                    worst_oracle = std::max(worst_oracle, std::abs(s.value - oracle::hyp0f1_neg(0.5 * p * d, l * t)));
                }
    o.require(worst_oracle <= kBesselOracleTol, "q=1 series vs 0F1 " + std::to_string(worst_oracle));
    if (o.pass) o.detail << "max |series-MC|/stderr " << worst_sigma << ", q=1 0F1 error " << worst_oracle;
}

// ---------------------------------------------------------------- 7
void weyl_appendix(Outcome& o) {
    RngStream rng(kSeed, 7);
    int disagreements = 0, total = 0;
    for (Family fam : {Family::A, Family::B})
        for (int k = 0; k < 1000; ++k) {
            const RootSystemSpec spec{fam, 1 + k % 3};
            auto draw = [&] {
                Point x(spec.dim());
                for (auto& v : x) v = 2 * rng.uniform() - 1;
                if (fam == Family::A) {
                    const double m = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
                    for (auto& v : x) v -= m;
                }
                return x;
            };
            const Point rho = chamber_project(spec, draw()).point;
            const Point x = draw();
            disagreements += hull_membership(OrbitPolytope(spec, rho), x) != oracle::convex_combination(orbit(spec, rho), x);
            ++total;
        }
    o.require(disagreements == 0, std::to_string(disagreements) + " membership disagreements");

    const RootSystemSpec a2{Family::A, 2}, b2{Family::B, 2}, b3{Family::B, 3};
    const double ea = eps0_estimate(a2, chamber_rho_samples(a2, 50, rng));
    const double eb = eps0_estimate(b2, chamber_rho_samples(b2, 50, rng));
    o.require(std::abs(ea - kEps0A2) <= kEps0A2Tol, "eps0(A2) = " + std::to_string(ea));
    o.require(eb == 1.0, "eps0(B2) = " + std::to_string(eb));

    std::vector<Point> interior;
    for (int i = 0; i < 100; ++i) interior.push_back(sample_chamber_interior(b3, rng));
    o.require(scan_shifted_orbit(b3, interior, kEps0B3Small).pass, "B3 scan at eps = 0.05");
    const auto fail = scan_shifted_orbit(b3, interior, 1.0);
    o.require(!fail.pass, "B3 violation at eps = 1");
    if (o.pass)
        o.detail << total << " membership checks agree; eps0(A2) " << ea << ", eps0(B2) " << eb
                 << "; B3 passes at 0.05, fails at 1";
}

// ---------------------------------------------------------------- 8
void boundedness(Outcome& o) {
    std::vector<ChamberPoint> ts;
    for (double s : {0.5, 1.0, 2.0, 3.0}) ts.push_back(ChamberPoint{s, 0.5 * s});
    const auto r = boundedness_sweep(Field::real, 2, 6.0, 50, ts, opts(kBoundSamples));
    o.require(r.bounded_ok, "|phi| <= 1 + 5 stderr for in-hull lambda");
    o.require(r.positive_ok, "positivity for imaginary lambda");
    o.require(r.unbounded_seen, "out-of-hull lambda exceeds 1");
    double out_max = 0;
    for (const auto& row : r.rows)
        if (row.kind == BoundednessRow::Kind::out_of_hull) out_max = std::max(out_max, std::abs(row.estimate.value));
    if (o.pass) o.detail << r.rows.size() << " rows; out-of-hull max |phi| " << out_max;
}

// ---------------------------------------------------------------- 9
template <class S>
Matrix<S> gaussian_matrix(int q, RngStream& rng) {
    Matrix<S> m(q, q);
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j) m(i, j) = gaussian_scalar<S>(rng);
    return m;
}

template <class S>
int singular_violations(RngStream& rng) {
    int bad = 0;
    for (int rep = 0; rep < kSingularTriples; ++rep) {
        const int q = 1 + rep % 4;
        const auto a1 = gaussian_matrix<S>(q, rng), a2 = gaussian_matrix<S>(q, rng);
        const auto s1 = singular_values(a1), s2 = singular_values(a2);
        const auto ssum = singular_values(a1 + a2), sprod = singular_values(a1 * a2);
        for (int i = 0; i < q; ++i) {
            bad += std::abs(ssum[i] - s1[i]) > s2[0] + kSingularTol;
            bad += sprod[i] > s1[i] * s2[0] + kSingularTol;
        }
        // minor ratios of g~_t(u, w) against g~_t(u, 0)
        std::vector<double> t(q);
        for (auto& v : t) v = 3 * rng.uniform();
        std::sort(t.rbegin(), t.rend());
        const double p = 2 * q - 1 + 0.5 + 10 * rng.uniform();
        const auto w = sample_mp<S>(q, p, rng);
        const auto u = q > 1 ? haar_unitary<S>(q, rng) : Matrix<S>::identity(1);
        const auto gw = build_g(t, u, w, Variant::g_tilde), g0 = build_g(t, u, Matrix<S>(q, q), Variant::g_tilde);
        const double tt = std::min(t[0], 1.0), s = sigma_max(w);
        for (int r = 1; r <= q; ++r) {
            const double ratio = principal_minor(gw, r) / principal_minor(g0, r);
            const double lo = std::pow(1 - tt * s, 2 * r), hi = std::pow(1 + tt * s, 2 * r);
            bad += ratio < lo * (1 - kSingularTol) || ratio > hi * (1 + kSingularTol);
        }
    }
    return bad;
}

void singular_values_and_moments(Outcome& o) {
    RngStream rng(kSeed, 9);
    const int vr = singular_violations<double>(rng), vc = singular_violations<cplx>(rng),
              vh = singular_violations<Quaternion>(rng);
    o.require(vr + vc + vh == 0, "inequality violations R/C/H " + std::to_string(vr) + "/" + std::to_string(vc) + "/" +
                                     std::to_string(vh));
    const std::vector<double> ps{16, 32, 64, 128, 256};
    std::ostringstream sl;
    for (int n : {1, 2}) {
        const auto r = moment_decay_experiment(Field::real, 2, n, ps, opts(kMomentSamples));
        o.require(r.slope_upper() <= kMomentSlopeFactor * n, "moment slope n=" + std::to_string(n) + " " +
                                                                  std::to_string(r.slope_upper()));
        for (double e : r.errors) o.require(e >= 0, "R(p) >= 0");
        sl << " n=" << n << " slope " << r.slope << " +/- " << r.slope_halfwidth;
    }
    if (o.pass) o.detail << 3 * kSingularTriples << " triples, no violations;" << sl.str();
}

// ---------------------------------------------------------------- 10
template <class S>
McEstimate kappa_mc(int q, double p) {
    constexpr int d = field_dim_v<S>;
    const double ex = 0.5 * p * d - gamma_bc(d, q);
    const double vol = std::pow(2.0, d * q * q);
    return run_monte_carlo(1, opts(kKappaSamples), [&](RngStream& rng, std::span<cplx> out) {
               Matrix<S> w(q, q);
               for (int i = 0; i < q; ++i)
                   for (int j = 0; j < q; ++j) {
                       double v[4] = {0, 0, 0, 0};
                       for (int k = 0; k < d; ++k) v[k] = 2 * rng.uniform() - 1;
                       w(i, j) = from_components<S>(v);
                   }
               if (sigma_max(w) >= 1) {
                   out[0] = 0;
                   return;
               }
               out[0] = vol * std::pow(det_dieudonne(Matrix<S>::identity(q) - adjoint(w) * w), ex);
           })
        .estimates[0];
}

template <class S>
void beta_moments(Outcome& o, int q, double p, int& checks) {
    constexpr int d = field_dim_v<S>;
    const auto run = run_monte_carlo(q, opts(kKappaSamples / 4), [&](RngStream& rng, std::span<cplx> out) {
        const auto fs = sample_mp_factors<S>(q, p, rng);
        for (int j = 0; j < q; ++j) out[j] = fs[j].norm2();
    });
    for (int j = 1; j <= q; ++j) {
        const double a = 0.5 * d * q, b = 0.5 * d * (p - q - j + 1);
        const auto& e = run.estimates[j - 1];
        o.require(std::abs(e.value.real() - a / (a + b)) <= kKappaSigma * e.std_error, "Beta moment j=" + std::to_string(j));
        ++checks;
    }
}

void sampler_calibration(Outcome& o) {
    std::ostringstream dd;
    auto check = [&](McEstimate e, int q, int d, double p) {
        const double k = kappa(p, d, q);
        const double diff = std::abs(e.value.real() - k);
        // a constant integrand (exponent 0 at q = 1) has stderr 0 and must hit kappa to rounding
        o.require(diff <= kKappaSigma * e.std_error + 1e-12 * k,
                  "kappa(q=" + std::to_string(q) + ",d=" + std::to_string(d) + ",p=" + std::to_string(p) + ") off by " +
                      std::to_string(diff) + " with stderr " + std::to_string(e.std_error));
        dd << " (" << q << "," << d << "," << p << "): |diff| " << diff << " stderr " << e.std_error << ";";
    };
    check(kappa_mc<double>(1, 3), 1, 1, 3);
    check(kappa_mc<double>(2, 5), 2, 1, 5);
    check(kappa_mc<cplx>(2, 6), 2, 2, 6);
    int checks = 0;
    beta_moments<double>(o, 1, 3, checks);
    beta_moments<double>(o, 2, 5, checks);
    beta_moments<cplx>(o, 2, 6, checks);
    if (o.pass) o.detail << "kappa" << dd.str() << " " << checks << " Beta moments within 3 stderr";
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<void(Outcome&)> run;
    };
    const Criterion criteria[] = {
        {1, "identity normalization at t = 0", identity_normalization},
        {2, "rank-one Jacobi oracle equivalence", rank_one_oracle},
        {3, "p -> infinity rate", rate_p},
        {4, "Bessel contraction rate", contraction},
        {5, "Jack trace identity", jack_trace},
        {6, "Bessel series-integral duality", bessel_duality},
        {7, "Weyl group convexity", weyl_appendix},
        {8, "boundedness and positivity", boundedness},
        {9, "singular-value inequalities and moment decay", singular_values_and_moments},
        {10, "sampler calibration", sampler_calibration},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(o);
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] criterion %d: %s (%.1fs) %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs,
                    o.detail.str().c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("%d/10 criteria passed\n", 10 - failed);
    return failed ? 1 : 0;
}
