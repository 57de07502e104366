#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <tuple>
#include <vector>

#include "errors.hpp"
#include "partition.hpp"

namespace hypergeo {

// m_mu(x): sum over distinct rearrangements of mu (padded to x.size()).
inline double monomial_symmetric(const Partition& mu, std::span<const double> x) {
    const int q = int(x.size());
    if (mu.length() > q) return 0.0;
    std::vector<int> e(q, 0);
    for (int i = 0; i < mu.length(); ++i) e[i] = mu[i];
    std::sort(e.begin(), e.end());
    double s = 0;
    do {
        double term = 1;
        for (int i = 0; i < q; ++i)
            if (e[i]) term *= std::pow(x[i], e[i]);
        s += term;
    } while (std::next_permutation(e.begin(), e.end()));
    return s;
}

// Jack polynomials in q variables, index alpha, all weights up to max_degree.
// Monomial coefficients come from the dominance-order recurrence of the Laplace-Beltrami type
// eigenoperator; the C normalization is alpha^k k! / c'_kappa times the monic P.
class JackTable {
public:
    JackTable(double alpha, int q, int max_degree) : alpha_(alpha), q_(q) {
        if (!(alpha > 0)) throw domain_error("jack: alpha must be positive");
        if (q < 1) throw domain_error("jack: rank must be positive");
        if (max_degree < 0) throw domain_error("jack: negative degree");
        for (int k = 0; k <= max_degree; ++k) shells_.push_back(build_shell(k));
    }

    struct Shell {
        std::vector<Partition> parts;            // lex decreasing
        std::vector<std::vector<double>> coef;   // coef[a][b]: m_{parts[b]} in P_{parts[a]}
        std::vector<double> c_scale;             // C = c_scale * P
        std::vector<double> c_at_one;            // C(1,...,1)
    };

    double alpha() const noexcept { return alpha_; }
    int rank() const noexcept { return q_; }
    int max_degree() const noexcept { return int(shells_.size()) - 1; }
    const Shell& shell(int k) const {
        if (k < 0 || k > max_degree()) throw domain_error("jack: degree outside the table");
        return shells_[k];
    }

    // C_kappa(x) for every kappa of weight k, in shell order.
    std::vector<double> eval_shell_C(int k, std::span<const double> x) const {
        if (int(x.size()) != q_) throw domain_error("jack: argument length must equal the rank");
        const Shell& sh = shell(k);
        const std::size_t n = sh.parts.size();
        std::vector<double> m(n);
        for (std::size_t b = 0; b < n; ++b) m[b] = monomial_symmetric(sh.parts[b], x);
        std::vector<double> out(n, 0.0);
        for (std::size_t a = 0; a < n; ++a) {
            double s = 0;
            for (std::size_t b = a; b < n; ++b) s += sh.coef[a][b] * m[b];
            out[a] = sh.c_scale[a] * s;
        }
        return out;
    }

    double C(const Partition& kappa, std::span<const double> x) const {
        const int k = kappa.weight();
        const Shell& sh = shell(k);
        const auto it = std::find(sh.parts.begin(), sh.parts.end(), kappa);
        if (it == sh.parts.end()) return 0.0;  // longer than the rank: vanishes identically
        return eval_shell_C(k, x)[std::size_t(it - sh.parts.begin())];
    }

private:
    double rho_of(const Partition& k) const {
        double s = 0;
        for (int i = 0; i < k.length(); ++i) s += k[i] * (k[i] - 1 - (2.0 / alpha_) * i);
        return s;
    }

    // c'_kappa = prod over boxes (alpha (arm + 1) + leg)
    double c_prime(const Partition& k) const {
        const Partition kc = k.conjugate();
        double r = 1;
        for (int i = 0; i < k.length(); ++i)
            for (int j = 0; j < k[i]; ++j) {
                const int arm = k[i] - j - 1;
                const int leg = kc[j] - i - 1;
                r *= alpha_ * (arm + 1) + leg;
            }
        return r;
    }

    Shell build_shell(int k) const {
        Shell sh;
        sh.parts = partitions_of_weight(k, q_);
        const std::size_t n = sh.parts.size();
        std::map<Partition, std::size_t> index;
        for (std::size_t i = 0; i < n; ++i) index[sh.parts[i]] = i;
        std::vector<double> rho(n);
        for (std::size_t i = 0; i < n; ++i) rho[i] = rho_of(sh.parts[i]);

        sh.coef.assign(n, std::vector<double>(n, 0.0));
        for (std::size_t a = 0; a < n; ++a) {
            const Partition& kappa = sh.parts[a];
            sh.coef[a][a] = 1.0;
            for (std::size_t b = a + 1; b < n; ++b) {
                const Partition& mu = sh.parts[b];
                if (!dominates(kappa, mu)) continue;
                double s = 0;
                for (int j = 1; j < mu.length(); ++j)
                    for (int i = 0; i < j; ++i)
                        for (int t = 1; t <= mu[j]; ++t) {
                            Partition::parts_type lp = mu.parts();
                            lp[i] += t;
                            lp[j] -= t;
                            std::sort(lp.begin(), lp.end(), std::greater<>());
                            const Partition lam(lp);
                            const std::size_t c = index.at(lam);
                            if (c >= b) continue;  // only strictly higher partitions
                            s += (mu[i] - mu[j] + 2.0 * t) * sh.coef[a][c];
                        }
                sh.coef[a][b] = (2.0 / alpha_) * s / (rho[a] - rho[b]);
            }
        }

        double kfact = 1;
        for (int i = 2; i <= k; ++i) kfact *= i;
        const double ak = std::pow(alpha_, k);
        sh.c_scale.resize(n);
        for (std::size_t a = 0; a < n; ++a) sh.c_scale[a] = ak * kfact / c_prime(sh.parts[a]);

        const std::vector<double> ones(q_, 1.0);
        std::vector<double> m1(n);
        for (std::size_t b = 0; b < n; ++b) m1[b] = monomial_symmetric(sh.parts[b], ones);
        sh.c_at_one.resize(n);
        for (std::size_t a = 0; a < n; ++a) {
            double s = 0;
            for (std::size_t b = a; b < n; ++b) s += sh.coef[a][b] * m1[b];
            sh.c_at_one[a] = sh.c_scale[a] * s;
        }
        return sh;
    }

    double alpha_;
    int q_;
    std::vector<Shell> shells_;
};

// Shared read-only tables, built once per (alpha, q) and regrown when a higher degree is asked for.
inline std::shared_ptr<const JackTable> jack_table(double alpha, int q, int max_degree) {
    static std::mutex mu;
    static std::map<std::pair<double, int>, std::shared_ptr<const JackTable>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{alpha, q}];
    if (!slot || slot->max_degree() < max_degree) slot = std::make_shared<const JackTable>(alpha, q, max_degree);
    return slot;
}

inline double jack_C(const Partition& m, double alpha, std::span<const double> xi) {
    if (m.length() > int(xi.size())) throw domain_error("jack_C: partition longer than the argument");
    return jack_table(alpha, int(xi.size()), m.weight())->C(m, xi);
}

}  // namespace hypergeo
