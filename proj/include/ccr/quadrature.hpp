#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace ccr {

double normal_pdf(double x);
double normal_cdf(double x);

/// Inverse of the standard normal CDF, accurate to a few ulp over (0, 1).
double normal_quantile(double p);

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Clenshaw-Curtis rule on [-1, 1] with J points (Chebyshev extrema), nodes
/// ascending.
QuadratureRule cc_nodes_weights(int J);

struct QuadratureConfig {
    int J = 40;
    double tol = 1e-12;

    void validate() const;
};

/// Tensor-product Clenshaw-Curtis grid over three independent standard
/// normal coordinates, each truncated to [Phi^-1(tol), Phi^-1(1 - tol)].
///
/// Values on the grid are laid out with the last coordinate fastest:
/// index (i * J + j) * J + k for nodes (n_i, n_j, n_k).
class TensorGrid {
public:
    explicit TensorGrid(QuadratureConfig cfg);

    int size() const { return J_; }
    std::size_t points() const { return static_cast<std::size_t>(J_) * J_ * J_; }
    double q_lo() const { return q_lo_; }
    double q_hi() const { return q_hi_; }
    const QuadratureConfig& config() const { return cfg_; }

    std::span<const double> nodes() const { return nodes_; }
    std::span<const double> weights() const { return weights_; }
    /// Quadrature weight times the standard normal density at the node.
    std::span<const double> effective_weights() const { return eff_; }

    template <class T>
    T integrate(std::span<const T> values) const;

private:
    QuadratureConfig cfg_;
    int J_;
    double q_lo_;
    double q_hi_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
    std::vector<double> eff_;
};

template <class T>
T TensorGrid::integrate(std::span<const T> values) const {
    if (values.size() != points())
        throw std::invalid_argument("tensor_integrate: value count does not match grid");
    const std::size_t J = static_cast<std::size_t>(J_);
    T total{};
    for (std::size_t i = 0; i < J; ++i) {
        T plane{};
        for (std::size_t j = 0; j < J; ++j) {
            const T* row = values.data() + (i * J + j) * J;
            T line{};
            for (std::size_t k = 0; k < J; ++k) line += eff_[k] * row[k];
            plane += eff_[j] * line;
        }
        total += eff_[i] * plane;
    }
    return total;
}

template <class T>
T tensor_integrate(const TensorGrid& grid, std::span<const T> values) {
    return grid.integrate(values);
}

}  // namespace ccr
