#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <thread>
#include <vector>

#include "errors.hpp"
#include "field.hpp"
#include "rng.hpp"

namespace hypergeo {

struct McEstimate {
    cplx value{1.0, 0.0};
    double std_error = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
};

// Running mean and summed squared deviation of a complex sample (Welford).
class Accumulator {
public:
    void add(cplx x) {
        ++n_;
        const cplx delta = x - mean_;
        mean_ += delta / double(n_);
        m2_ += std::real(std::conj(delta) * (x - mean_));
    }

    // Chan et al. pairwise merge.
    void merge(const Accumulator& o) {
        if (o.n_ == 0) return;
        if (n_ == 0) {
            *this = o;
            return;
        }
        const double na = double(n_), nb = double(o.n_), n = na + nb;
        const cplx delta = o.mean_ - mean_;
        mean_ += delta * (nb / n);
        m2_ += o.m2_ + std::norm(delta) * na * nb / n;
        n_ += o.n_;
    }

    std::uint64_t count() const noexcept { return n_; }
    cplx mean() const noexcept { return mean_; }
    // var(Re) + var(Im), unbiased.
    double variance() const noexcept { return n_ > 1 ? m2_ / double(n_ - 1) : 0.0; }
    double std_error() const noexcept { return n_ > 1 ? std::sqrt(variance() / double(n_)) : 0.0; }

private:
    std::uint64_t n_ = 0;
    cplx mean_{0.0, 0.0};
    double m2_ = 0.0;
};

// Fixed partition of the sample index space. Results depend on the plan, never on the worker count.
struct ShardPlan {
    int shards = 64;

    std::uint64_t begin(int s, std::uint64_t n) const { return n * std::uint64_t(s) / std::uint64_t(shards); }
    std::uint64_t end(int s, std::uint64_t n) const { return begin(s + 1, n); }
};

struct McOptions {
    std::uint64_t samples = 100000;
    std::uint64_t seed = 0x5eed;
    ShardPlan plan{};
    int workers = 1;
};

struct McRun {
    std::vector<McEstimate> estimates;
    // shard_acc[s][k]: shard s, output k. Used for jackknife bands.
    std::vector<std::vector<Accumulator>> shard_acc;
};

// body(rng, out) writes one draw of every output into out. Shard s owns stream id s.
template <class Body>
McRun run_monte_carlo(std::size_t outputs, const McOptions& opt, Body&& body) {
    if (opt.samples == 0) throw domain_error("monte carlo: samples must be positive");
    if (opt.plan.shards < 1) throw domain_error("monte carlo: shard count must be positive");
    const int shards = opt.plan.shards;
    McRun run;
    run.shard_acc.assign(shards, std::vector<Accumulator>(outputs));

    auto work = [&](int s) {
        RngStream rng(opt.seed, std::uint64_t(s));
        std::vector<cplx> buf(outputs);
        auto& acc = run.shard_acc[s];
        const auto b = opt.plan.begin(s, opt.samples), e = opt.plan.end(s, opt.samples);
        for (auto i = b; i < e; ++i) {
            body(rng, std::span<cplx>(buf));
            for (std::size_t k = 0; k < outputs; ++k) acc[k].add(buf[k]);
        }
    };

    const int workers = std::clamp(opt.workers, 1, shards);
    if (workers == 1) {
        for (int s = 0; s < shards; ++s) work(s);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (int s = w; s < shards; s += workers) work(s);
            });
        for (auto& th : pool) th.join();
    }

    run.estimates.resize(outputs);
    for (std::size_t k = 0; k < outputs; ++k) {
        Accumulator total;
        for (int s = 0; s < shards; ++s) total.merge(run.shard_acc[s][k]);
        run.estimates[k] = McEstimate{total.mean(), total.std_error(), total.count(), opt.seed};
    }
    return run;
}

// Exact unit estimate for a constant integrand.
inline McEstimate unit_estimate(std::uint64_t seed) { return McEstimate{cplx(1.0, 0.0), 0.0, 0, seed}; }

}  // namespace hypergeo
