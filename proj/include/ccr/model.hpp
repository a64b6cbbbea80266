#pragma once

#include <array>
#include <vector>

namespace ccr {

enum class Currency { domestic, foreign };

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

/// Time-0 discount curve P^M(0,T).
///
/// Either a flat continuously-compounded rate or a table of (tenor, discount
/// factor) pairs interpolated log-linearly. Beyond the last tenor the last
/// zero rate is held flat.
class DiscountCurve {
public:
    static DiscountCurve flat(double rate);
    static DiscountCurve table(std::vector<double> tenors, std::vector<double> dfs);

    double discount(double T) const;
    double log_discount(double T) const;

    bool is_flat() const { return tenors_.empty(); }
    double flat_rate() const { return flat_rate_; }
    const std::vector<double>& tenors() const { return tenors_; }
    const std::vector<double>& dfs() const { return dfs_; }

private:
    DiscountCurve() = default;

    double flat_rate_ = 0.0;
    std::vector<double> tenors_;
    std::vector<double> dfs_;
};

/// Hull-White (shifted, G1++) short rates for two currencies plus a GBM FX rate.
struct ModelParams {
    double a_d = 0.01;
    double a_f = 0.05;
    double sigma_d = 0.007;
    double sigma_f = 0.012;
    double sigma_X = 0.02;
    double mu_X = 0.008;
    double rho_df = 0.25;
    double rho_dX = -0.15;
    double rho_fX = -0.15;
    double X0 = 105.0;
    DiscountCurve curve_d = DiscountCurve::flat(0.02);
    DiscountCurve curve_f = DiscountCurve::flat(0.05);

    // Initial values of the shifted short rates. Zero for a calibrated model;
    // only moved by shock-and-revalue sensitivities. Not part of the file format.
    double x_d0 = 0.0;
    double x_f0 = 0.0;

    /// USD/JPY setup used throughout the numerical experiments.
    static ModelParams reference();

    /// Brownian correlation matrix ordered (d, f, X).
    Mat3 brownian_correlation() const;

    /// Throws std::invalid_argument on any violated invariant.
    void validate() const;
};

/// Exact Gaussian law of the state [x_d(t), x_f(t), log X(t)] written as
/// mean + diag(scale) * chol * Z with Z i.i.d. standard normal.
struct StateDistribution {
    double t = 0.0;
    Vec3 mean{};
    Vec3 scale{};
    Mat3 corr{};
    Mat3 chol{};
    bool degenerate = false;

    /// Maps independent standard normals to the state vector.
    Vec3 state(const Vec3& z) const;
};

StateDistribution state_distribution(const ModelParams& params, double t);

/// Lower-triangular factor of a symmetric PSD matrix. Pivots that vanish
/// (rank-deficient input) leave a zero column.
Mat3 cholesky(const Mat3& m);

/// log A(t,T) and B(t,T) of P(t,T) = A exp(-B x).
struct ZcbCoefficients {
    double log_a = 0.0;
    double b = 0.0;

    double price(double x) const;
};

ZcbCoefficients zcb_coefficients(const ModelParams& params, Currency ccy, double t, double T);

double zcb_price(const ModelParams& params, Currency ccy, double t, double T, double x);

/// Conditional variance at t of the integral of x over [t, T].
double hw_integrated_variance(double a, double sigma, double t, double T);

}  // namespace ccr
