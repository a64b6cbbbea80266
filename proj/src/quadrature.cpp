#include "ccr/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace ccr {

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: p must lie in (0, 1)");

    // Acklam's rational approximation (relative error ~1e-9) polished by Halley steps.
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    // Work in the lower half so the tail probability keeps full precision.
    const bool upper = p > 0.5;
    const double q = upper ? 1.0 - p : p;

    double x;
    if (q < p_low) {
        double r = std::sqrt(-2.0 * std::log(q));
        x = (((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
            ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0);
    } else {
        double r = q - 0.5;
        double s = r * r;
        x = (((((a[0] * s + a[1]) * s + a[2]) * s + a[3]) * s + a[4]) * s + a[5]) * r /
            (((((b[0] * s + b[1]) * s + b[2]) * s + b[3]) * s + b[4]) * s + 1.0);
    }

    for (int it = 0; it < 2; ++it) {
        double e = normal_cdf(x) - q;
        double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
        x -= u / (1.0 + 0.5 * x * u);
    }
    if (q == 0.5) x = 0.0;
    return upper ? -x : x;
}

QuadratureRule cc_nodes_weights(int J) {
    if (J < 2) throw std::invalid_argument("cc_nodes_weights: need at least two points");
    const int n = J - 1;
    QuadratureRule rule;
    rule.nodes.resize(J);
    rule.weights.resize(J);

    for (int j = 0; j < J; ++j) {
        // sin form keeps the nodes exactly antisymmetric with an exact zero.
        rule.nodes[j] = std::sin(std::numbers::pi * (2 * j - n) / (2.0 * n));

        double s = 1.0;
        for (int k = 1; k <= n / 2; ++k) {
            double bk = (2 * k == n) ? 1.0 : 2.0;
            s -= bk / (4.0 * k * k - 1.0) * std::cos(2.0 * std::numbers::pi * k * j / n);
        }
        double cj = (j == 0 || j == n) ? 1.0 : 2.0;
        rule.weights[j] = cj / n * s;
    }
    // Mirror to remove rounding asymmetry in the cosine sums.
    for (int j = 0; j < J / 2; ++j) {
        double w = 0.5 * (rule.weights[j] + rule.weights[n - j]);
        rule.weights[j] = rule.weights[n - j] = w;
    }
    return rule;
}

void QuadratureConfig::validate() const {
    if (J < 3) throw std::invalid_argument("quadrature: J must be at least 3");
    if (!(tol > 0.0 && tol < 0.5)) throw std::invalid_argument("quadrature: TOL must lie in (0, 0.5)");
}

TensorGrid::TensorGrid(QuadratureConfig cfg) : cfg_(cfg), J_(cfg.J) {
    cfg_.validate();
    q_lo_ = normal_quantile(cfg_.tol);
    q_hi_ = -q_lo_;

    QuadratureRule rule = cc_nodes_weights(J_);
    const double half = 0.5 * (q_hi_ - q_lo_);
    nodes_.resize(J_);
    weights_.resize(J_);
    eff_.resize(J_);
    for (int j = 0; j < J_; ++j) {
        nodes_[j] = half * rule.nodes[j];
        weights_[j] = half * rule.weights[j];
        eff_[j] = weights_[j] * normal_pdf(nodes_[j]);
    }
}

}  // namespace ccr
