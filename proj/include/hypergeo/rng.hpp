#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "field.hpp"

namespace hypergeo {

// Seedable stream; (seed, stream_id) fixes every draw.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), stream_(stream_id) {
        std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(stream_id),
                          std::uint32_t(stream_id >> 32), 0x68797067u};
        eng_.seed(seq);
    }

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_; }

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(eng_); }
    double normal() { return normal_(eng_); }

    double gamma(double shape) {
        return std::gamma_distribution<double>(shape, 1.0)(eng_);
    }
    // Beta(a, b) from two Gamma variates.
    double beta(double a, double b) {
        const double x = gamma(a);
        const double y = gamma(b);
        return x / (x + y);
    }

    std::mt19937_64& engine() noexcept { return eng_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 eng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

// Standard Gaussian in F with E|z|^2 = d (unit variance per real component).
template <class S> S gaussian_scalar(RngStream& rng);
template <> inline double gaussian_scalar<double>(RngStream& rng) { return rng.normal(); }
template <> inline cplx gaussian_scalar<cplx>(RngStream& rng) {
    const double x = rng.normal();
    return {x, rng.normal()};
}
template <> inline Quaternion gaussian_scalar<Quaternion>(RngStream& rng) {
    const double a = rng.normal(), b = rng.normal(), c = rng.normal();
    return {a, b, c, rng.normal()};
}

}  // namespace hypergeo
