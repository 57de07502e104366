#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "hyper_bc.hpp"

namespace hypergeo {

// rho^A_i = d(q+1-2i)/2, sums to zero.
inline std::vector<double> rho_a(int d, int q) {
    std::vector<double> r(q);
    for (int i = 1; i <= q; ++i) r[i - 1] = 0.5 * d * (q + 1 - 2 * i);
    return r;
}

// psi_lambda(t) = int Delta_{(i lambda - rho^A)/2}(u^* cosh^2 t u) du. Result index: [lambda][t].
// Same machinery as the BC evaluator with w = 0.
template <class S>
std::vector<McEstimate> eval_psi(int q, std::span<const SpectralParam> lambdas, std::span<const ChamberPoint> ts,
                                 const McOptions& opt) {
    const auto rho = rho_a(field_dim_v<S>, q);
    std::vector<std::vector<cplx>> exps;
    for (const auto& l : lambdas) exps.push_back(detail::phi_exponent(to_plain(l, rho), rho));
    detail::check_ranks(q, exps, ts);
    if (q == 1) {
        // (cosh t)^{i lambda}, no integral.
        std::vector<McEstimate> out;
        for (const auto& e : exps)
            for (const auto& t : ts) {
                McEstimate m = unit_estimate(opt.seed);
                if (!t.is_zero()) m.value = std::exp(2.0 * e[0] * std::log(std::cosh(t[0])));
                out.push_back(m);
            }
        return out;
    }
    const Matrix<S> zero(q, q);
    return detail::power_integral<S>(q, exps, ts, opt, Variant::g, [&](RngStream&) { return zero; });
}

inline std::vector<McEstimate> eval_psi(Field f, int q, std::span<const SpectralParam> lambdas,
                                        std::span<const ChamberPoint> ts, const McOptions& opt) {
    return dispatch_field(f, [&]<class S>(std::type_identity<S>) { return eval_psi<S>(q, lambdas, ts, opt); });
}

inline McEstimate eval_psi(Field f, const SpectralParam& lambda, const ChamberPoint& t, const McOptions& opt) {
    return eval_psi(f, t.rank(), std::span(&lambda, 1), std::span(&t, 1), opt).front();
}

// General path at q = 1 too, for cross-checking the closed form.
template <class S>
std::vector<McEstimate> eval_psi_mc(int q, std::span<const SpectralParam> lambdas, std::span<const ChamberPoint> ts,
                                    const McOptions& opt) {
    const auto rho = rho_a(field_dim_v<S>, q);
    std::vector<std::vector<cplx>> exps;
    for (const auto& l : lambdas) exps.push_back(detail::phi_exponent(to_plain(l, rho), rho));
    const Matrix<S> zero(q, q);
    return detail::power_integral<S>(q, exps, ts, opt, Variant::g, [&](RngStream&) { return zero; });
}

}  // namespace hypergeo
