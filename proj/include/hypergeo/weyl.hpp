#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "rng.hpp"

namespace hypergeo {

enum class Family { A, B };
enum class Ambient { effective, full };

// B_q acts on R^q by signed permutations; A_q acts on R^{q+1} by permutations.
struct RootSystemSpec {
    Family family = Family::B;
    int rank = 1;
    Ambient ambient = Ambient::effective;

    int dim() const noexcept { return family == Family::A ? rank + 1 : rank; }
};

inline constexpr double kWeylTol = 1e-9;

using Point = std::vector<double>;

// Weyl element: y_i = sign_i * x_{perm_i}.
struct WeylElement {
    std::vector<int> perm;
    std::vector<int> sign;

    Point apply(std::span<const double> x) const {
        Point y(perm.size());
        for (std::size_t i = 0; i < perm.size(); ++i) y[i] = sign[i] * x[perm[i]];
        return y;
    }
};

struct Projection {
    Point point;
    WeylElement witness;
};

inline void check_dim(const RootSystemSpec& spec, std::span<const double> x) {
    if (spec.rank < 1) throw domain_error("root system rank must be positive");
    if (int(x.size()) != spec.dim()) throw domain_error("point dimension does not match the root system");
}

// B: absolute values then descending sort. A: descending sort.
inline Projection chamber_project(const RootSystemSpec& spec, std::span<const double> x) {
    check_dim(spec, x);
    const int n = spec.dim();
    WeylElement w;
    w.perm.resize(n);
    std::iota(w.perm.begin(), w.perm.end(), 0);
    auto key = [&](int i) { return spec.family == Family::B ? std::abs(x[i]) : x[i]; };
    std::stable_sort(w.perm.begin(), w.perm.end(), [&](int a, int b) { return key(a) > key(b); });
    w.sign.assign(n, 1);
    if (spec.family == Family::B)
        for (int i = 0; i < n; ++i) w.sign[i] = x[w.perm[i]] < 0 ? -1 : 1;
    return {w.apply(x), w};
}

inline bool in_chamber(const RootSystemSpec& spec, std::span<const double> x, double tol = kWeylTol) {
    check_dim(spec, x);
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        if (x[i] - x[i + 1] < -tol) return false;
    if (spec.family == Family::B && x.back() < -tol) return false;
    return true;
}

// co(W.rho) for rho in the closed chamber.
class OrbitPolytope {
public:
    OrbitPolytope(RootSystemSpec spec, Point rho) : spec_(spec), rho_(std::move(rho)) {
        check_dim(spec_, rho_);
        if (!in_chamber(spec_, rho_)) throw domain_error("rho must lie in the closed Weyl chamber");
        if (spec_.family == Family::A && spec_.ambient == Ambient::effective) {
            const double s = std::accumulate(rho_.begin(), rho_.end(), 0.0);
            double scale = 1;
            for (double v : rho_) scale = std::max(scale, std::abs(v));
            if (std::abs(s) > kWeylTol * scale) throw domain_error("effective type A needs rho with zero coordinate sum");
        }
    }

    const RootSystemSpec& spec() const noexcept { return spec_; }
    const Point& rho() const noexcept { return rho_; }

private:
    RootSystemSpec spec_;
    Point rho_;
};

// Cone section: x+ in C_q and rho - x+ in the dual cone (partial-sum inequalities).
inline bool hull_membership(const OrbitPolytope& poly, std::span<const double> x, double tol = kWeylTol) {
    const auto& spec = poly.spec();
    const Point xp = chamber_project(spec, x).point;
    const Point& rho = poly.rho();
    double s = 0;
    for (int r = 0; r < spec.dim(); ++r) {
        s += rho[r] - xp[r];
        if (s < -tol) return false;
    }
    if (spec.family == Family::A && std::abs(s) > tol) return false;
    return true;
}

inline std::vector<Point> orbit(const RootSystemSpec& spec, std::span<const double> rho) {
    check_dim(spec, rho);
    if (spec.rank > 8) throw domain_error("orbit: rank above 8 is rejected");
    const int n = spec.dim();
    std::set<Point> pts;
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        if (spec.family == Family::A) {
            Point y(n);
            for (int i = 0; i < n; ++i) y[i] = rho[perm[i]];
            pts.insert(y);
        } else {
            for (unsigned mask = 0; mask < (1u << n); ++mask) {
                Point y(n);
                for (int i = 0; i < n; ++i) {
                    y[i] = rho[perm[i]] * ((mask >> i) & 1u ? -1.0 : 1.0);
                    if (y[i] == 0.0) y[i] = 0.0;  // fold -0
                }
                pts.insert(y);
            }
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return {pts.begin(), pts.end()};
}

namespace detail {

// Rows of the 2q halfspaces  a.x <= b  bounding K = co(W.rho) ∩ C_q.
// First q rows: chamber walls. Last q rows: shifted walls (partial sums).
struct Halfspaces {
    Eigen::MatrixXd a;
    Eigen::VectorXd b;
    bool has_equality = false;
    Eigen::RowVectorXd eq_a;
    double eq_b = 0;
};

inline Halfspaces k_halfspaces(const OrbitPolytope& poly) {
    const auto& spec = poly.spec();
    const int q = spec.rank, n = spec.dim();
    const Point& rho = poly.rho();
    Halfspaces h;
    h.a = Eigen::MatrixXd::Zero(2 * q, n);
    h.b = Eigen::VectorXd::Zero(2 * q);
    for (int i = 0; i < q; ++i) {
        if (spec.family == Family::B && i == q - 1) {
            h.a(i, i) = -1;  // x_q >= 0
        } else {
            h.a(i, i) = -1;  // x_{i+1} - x_i <= 0
            h.a(i, i + 1) = 1;
        }
    }
    double s = 0;
    for (int r = 0; r < q; ++r) {
        s += rho[r];
        for (int i = 0; i <= r; ++i) h.a(q + r, i) = 1;
        h.b(q + r) = s;
    }
    if (spec.family == Family::A) {
        h.has_equality = true;
        h.eq_a = Eigen::RowVectorXd::Ones(n);
        h.eq_b = std::accumulate(rho.begin(), rho.end(), 0.0);
    }
    return h;
}

}  // namespace detail

inline bool in_K(const OrbitPolytope& poly, std::span<const double> y, double tol = kWeylTol) {
    return in_chamber(poly.spec(), y, tol) && hull_membership(poly, y, tol);
}

// Vertices of K from all rank-sized subsets of the 2q bounding hyperplanes.
inline std::vector<Point> polytope_vertices_K(const OrbitPolytope& poly) {
    const auto& spec = poly.spec();
    if (spec.rank > 6) throw domain_error("polytope_vertices_K: rank above 6 is rejected");
    const int q = spec.rank, n = spec.dim();
    const auto h = detail::k_halfspaces(poly);
    std::vector<Point> verts;
    std::vector<int> choose(2 * q, 0);
    std::fill(choose.begin(), choose.begin() + q, 1);
    std::sort(choose.begin(), choose.end());
    do {
        Eigen::MatrixXd m(n, n);
        Eigen::VectorXd rhs(n);
        int row = 0;
        for (int i = 0; i < 2 * q; ++i)
            if (choose[i]) {
                m.row(row) = h.a.row(i);
                rhs(row++) = h.b(i);
            }
        if (h.has_equality) {
            m.row(row) = h.eq_a;
            rhs(row++) = h.eq_b;
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
        if (lu.rank() < n) continue;
        const Eigen::VectorXd x = lu.solve(rhs);
        Point p(x.data(), x.data() + n);
        for (auto& v : p)
            if (std::abs(v) < 1e-14) v = 0.0;
        if (!in_K(poly, p)) continue;
        const bool dup = std::any_of(verts.begin(), verts.end(), [&](const Point& v) {
            for (int i = 0; i < n; ++i)
                if (std::abs(v[i] - p[i]) > kWeylTol) return false;
            return true;
        });
        if (!dup) verts.push_back(std::move(p));
    } while (std::next_permutation(choose.begin(), choose.end()));
    return verts;
}

// (1+eps) y - eps rho in co(W.rho), for y in K.
inline bool shifted_orbit_check(const OrbitPolytope& poly, double eps, std::span<const double> y) {
    if (!in_K(poly, y)) throw domain_error("shifted_orbit_check: y must lie in K = co(W.rho) ∩ C_q");
    Point z(y.size());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = (1 + eps) * y[i] - eps * poly.rho()[i];
    return hull_membership(poly, z);
}

// (1+eps) y + eps rho in co(W.rho), for y in co(W.rho) ∩ (-C_q).
inline bool negative_chamber_check(const OrbitPolytope& poly, double eps, std::span<const double> y) {
    Point neg(y.begin(), y.end());
    for (auto& v : neg) v = -v;
    if (!in_chamber(poly.spec(), neg) || !hull_membership(poly, y))
        throw domain_error("negative_chamber_check: y must lie in co(W.rho) ∩ (-C_q)");
    Point z(y.size());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = (1 + eps) * y[i] + eps * poly.rho()[i];
    return hull_membership(poly, z);
}

inline bool product_membership(const OrbitPolytope& p1, const OrbitPolytope& p2, std::span<const double> a1,
                               std::span<const double> a2) {
    return hull_membership(p1, a1) && hull_membership(p2, a2);
}

// ---------------------------------------------------------------- chamber sampling and eps0

// Extreme rays of the chamber (fundamental-weight directions).
inline std::vector<Point> chamber_rays(const RootSystemSpec& spec) {
    const int q = spec.rank, n = spec.dim();
    std::vector<Point> rays;
    for (int r = 1; r <= q; ++r) {
        Point v(n, 0.0);
        for (int i = 0; i < r; ++i) v[i] = 1;
        if (spec.family == Family::A && spec.ambient == Ambient::effective)
            for (auto& x : v) x -= double(r) / n;
        rays.push_back(v);
    }
    if (spec.family == Family::A && spec.ambient == Ambient::full) {
        rays.push_back(Point(n, 1.0));
        rays.push_back(Point(n, -1.0));
    }
    return rays;
}

inline void normalize(Point& v) {
    double s = 0;
    for (double x : v) s += x * x;
    s = std::sqrt(s);
    if (s > 0)
        for (auto& x : v) x /= s;
}

// Unit-norm point in the open chamber: positive combination of the rays.
inline Point sample_chamber_interior(const RootSystemSpec& spec, RngStream& rng) {
    const auto rays = chamber_rays(spec);
    Point v(spec.dim(), 0.0);
    const int nr = spec.family == Family::A && spec.ambient == Ambient::full ? spec.rank : int(rays.size());
    for (int r = 0; r < nr; ++r) {
        const double c = -std::log(1.0 - rng.uniform()) + 1e-3;
        for (int i = 0; i < spec.dim(); ++i) v[i] += c * rays[r][i];
    }
    normalize(v);
    return v;
}

// Interior samples plus points within `offset` of every extreme ray.
inline std::vector<Point> chamber_rho_samples(const RootSystemSpec& spec, int n_random, RngStream& rng,
                                              double offset = 1e-6) {
    std::vector<Point> out;
    const auto rays = chamber_rays(spec);
    const int nr = spec.family == Family::A && spec.ambient == Ambient::full ? spec.rank : int(rays.size());
    for (int r = 0; r < nr; ++r) {
        Point base = rays[r];
        normalize(base);
        Point jitter = sample_chamber_interior(spec, rng);
        for (int i = 0; i < spec.dim(); ++i) base[i] += offset * jitter[i];
        normalize(base);
        out.push_back(base);
    }
    for (int i = 0; i < n_random; ++i) out.push_back(sample_chamber_interior(spec, rng));
    return out;
}

struct ShiftedOrbitScan {
    bool pass = true;
    double epsilon = 0;
    Point rho;      // first failing rho, if any
    Point witness;  // failing vertex
};

inline ShiftedOrbitScan scan_shifted_orbit(const RootSystemSpec& spec, std::span<const Point> rhos, double eps) {
    ShiftedOrbitScan s;
    s.epsilon = eps;
    for (const auto& rho : rhos) {
        const OrbitPolytope poly(spec, rho);
        for (const auto& y : polytope_vertices_K(poly))
            if (!shifted_orbit_check(poly, eps, y)) {
                s.pass = false;
                s.rho = rho;
                s.witness = y;
                return s;
            }
    }
    return s;
}

// Largest eps in [0, 1] passing the vertex scan over all sampled rho, by bisection.
inline double eps0_estimate(const RootSystemSpec& spec, std::span<const Point> rhos, double resolution = 1e-3) {
    if (spec.rank > 4) throw domain_error("eps0_estimate: rank above 4 is rejected");
    if (!(resolution > 0)) throw domain_error("eps0_estimate: resolution must be positive");
    // Vertices do not depend on eps, so enumerate once.
    std::vector<std::pair<OrbitPolytope, std::vector<Point>>> cases;
    for (const auto& rho : rhos) {
        OrbitPolytope poly(spec, rho);
        auto verts = polytope_vertices_K(poly);
        cases.emplace_back(std::move(poly), std::move(verts));
    }
    auto ok = [&](double eps) {
        for (const auto& [poly, verts] : cases)
            for (const auto& y : verts)
                if (!shifted_orbit_check(poly, eps, y)) return false;
        return true;
    };
    if (ok(1.0)) return 1.0;
    double lo = 0, hi = 1;
    while (hi - lo > resolution) {
        const double mid = 0.5 * (lo + hi);
        (ok(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace hypergeo
