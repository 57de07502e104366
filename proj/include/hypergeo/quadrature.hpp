#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "errors.hpp"

namespace hypergeo {

// Gauss rule on (-1, 1) for the weight (1 - x^2)^a, a > -1, weights normalized to sum 1.
// Golub-Welsch on the symmetric Jacobi matrix.
class GaussJacobiRule {
public:
    GaussJacobiRule(int n, double a) : a_(a) {
        if (n < 1) throw domain_error("gauss-jacobi: need at least one node");
        if (!(a > -1.0)) throw domain_error("gauss-jacobi: exponent must exceed -1");
        Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
        Eigen::VectorXd off(std::max(n - 1, 0));
        for (int k = 1; k < n; ++k) {
            const double b2 = k == 1 ? 1.0 / (3.0 + 2.0 * a)
                                     : double(k) * (k + 2.0 * a) / (4.0 * (k + a) * (k + a) - 1.0);
            off(k - 1) = std::sqrt(b2);
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
        nodes_.resize(n);
        weights_.resize(n);
        for (int i = 0; i < n; ++i) {
            nodes_[i] = es.eigenvalues()(i);
            const double v0 = es.eigenvectors()(0, i);
            weights_[i] = v0 * v0;
        }
    }

    int size() const noexcept { return int(nodes_.size()); }
    double exponent() const noexcept { return a_; }
    const std::vector<double>& nodes() const noexcept { return nodes_; }
    const std::vector<double>& weights() const noexcept { return weights_; }

    template <class F>
    auto integrate(F&& f) const {
        decltype(f(0.0)) s{};
        for (std::size_t i = 0; i < nodes_.size(); ++i) s += weights_[i] * f(nodes_[i]);
        return s;
    }

private:
    double a_;
    std::vector<double> nodes_, weights_;
};

}  // namespace hypergeo
