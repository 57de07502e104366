#pragma once

#include <algorithm>
#include <compare>
#include <complex>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "errors.hpp"
#include "field.hpp"

namespace hypergeo {

// Weakly decreasing tuple of nonnegative integers; trailing zeros are dropped.
class Partition {
public:
    using parts_type = boost::container::small_vector<int, 8>;

    Partition() = default;
    Partition(std::initializer_list<int> p) : Partition(parts_type(p.begin(), p.end())) {}
    explicit Partition(parts_type p) : parts_(std::move(p)) {
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            if (parts_[i] < 0) throw domain_error("partition parts must be nonnegative");
            if (i > 0 && parts_[i] > parts_[i - 1]) throw domain_error("partition parts must be weakly decreasing");
        }
        while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
    }
    explicit Partition(const std::vector<int>& p) : Partition(parts_type(p.begin(), p.end())) {}

    int length() const noexcept { return int(parts_.size()); }
    int weight() const noexcept { return std::accumulate(parts_.begin(), parts_.end(), 0); }
    // Part i (0-based), zero past the end.
    int operator[](int i) const noexcept { return i < length() ? parts_[i] : 0; }
    const parts_type& parts() const noexcept { return parts_; }

    Partition conjugate() const {
        parts_type c(parts_.empty() ? 0 : parts_.front(), 0);
        for (int p : parts_)
            for (int j = 0; j < p; ++j) ++c[j];
        return Partition(std::move(c));
    }

    std::string str() const {
        std::string s = "(";
        for (int i = 0; i < length(); ++i) {
            if (i) s += ',';
            s += std::to_string(parts_[i]);
        }
        return s + ")";
    }

    friend bool operator==(const Partition& a, const Partition& b) { return a.parts_ == b.parts_; }
    // Lexicographic order on the padded parts.
    friend std::strong_ordering operator<=>(const Partition& a, const Partition& b) {
        const int n = std::max(a.length(), b.length());
        for (int i = 0; i < n; ++i)
            if (a[i] != b[i]) return a[i] <=> b[i];
        return std::strong_ordering::equal;
    }

private:
    parts_type parts_;
};

// a >= b in dominance order (equal weights assumed).
inline bool dominates(const Partition& a, const Partition& b) {
    int sa = 0, sb = 0;
    const int n = std::max(a.length(), b.length());
    for (int i = 0; i < n; ++i) {
        sa += a[i];
        sb += b[i];
        if (sa < sb) return false;
    }
    return true;
}

// All partitions of k with at most q parts, lexicographically decreasing.
inline std::vector<Partition> partitions_of_weight(int k, int q) {
    if (k < 0 || q < 0) throw domain_error("partitions_of_weight: negative argument");
    std::vector<Partition> out;
    Partition::parts_type cur;
    std::function<void(int, int)> rec = [&](int remaining, int maxpart) {
        if (remaining == 0) {
            out.emplace_back(cur);
            return;
        }
        if (int(cur.size()) == q) return;
        for (int p = std::min(remaining, maxpart); p >= 1; --p) {
            cur.push_back(p);
            rec(remaining - p, p);
            cur.pop_back();
        }
    };
    rec(k, k);
    return out;
}

// (x)_m^alpha = prod_j (x - (j-1)/alpha)_{m_j}.
inline cplx gen_pochhammer(cplx x, const Partition& m, double alpha) {
    if (!(alpha > 0)) throw domain_error("gen_pochhammer: alpha must be positive");
    cplx r = 1.0;
    for (int j = 0; j < m.length(); ++j) {
        const cplx base = x - double(j) / alpha;
        for (int i = 0; i < m[j]; ++i) r *= base + double(i);
    }
    return r;
}

}  // namespace hypergeo
