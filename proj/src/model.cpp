#include "ccr/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ccr {

DiscountCurve DiscountCurve::flat(double rate) {
    if (!std::isfinite(rate)) throw std::invalid_argument("flat rate must be finite");
    DiscountCurve c;
    c.flat_rate_ = rate;
    return c;
}

DiscountCurve DiscountCurve::table(std::vector<double> tenors, std::vector<double> dfs) {
    if (tenors.empty() || tenors.size() != dfs.size())
        throw std::invalid_argument("discount table needs matching non-empty tenors and dfs");
    for (std::size_t i = 0; i < tenors.size(); ++i) {
        if (!(tenors[i] > 0.0)) throw std::invalid_argument("discount table tenors must be > 0");
        if (i > 0 && !(tenors[i] > tenors[i - 1]))
            throw std::invalid_argument("discount table tenors must be strictly increasing");
        if (!(dfs[i] > 0.0) || !std::isfinite(dfs[i]))
            throw std::invalid_argument("discount factors must be positive");
    }
    DiscountCurve c;
    c.tenors_ = std::move(tenors);
    c.dfs_ = std::move(dfs);
    return c;
}

double DiscountCurve::discount(double T) const { return std::exp(log_discount(T)); }

double DiscountCurve::log_discount(double T) const {
    if (T <= 0.0) return 0.0;
    if (is_flat()) return -flat_rate_ * T;

    // Log-linear between knots, with an implicit (0, 1) knot in front.
    auto it = std::lower_bound(tenors_.begin(), tenors_.end(), T);
    if (it == tenors_.end()) return std::log(dfs_.back()) / tenors_.back() * T;
    std::size_t hi = static_cast<std::size_t>(it - tenors_.begin());
    double l1 = std::log(dfs_[hi]);
    if (*it == T) return l1;
    double t0 = hi == 0 ? 0.0 : tenors_[hi - 1];
    double l0 = hi == 0 ? 0.0 : std::log(dfs_[hi - 1]);
    double w = (T - t0) / (tenors_[hi] - t0);
    return l0 + w * (l1 - l0);
}

ModelParams ModelParams::reference() { return ModelParams{}; }

Mat3 ModelParams::brownian_correlation() const {
    return Mat3{{{1.0, rho_df, rho_dX}, {rho_df, 1.0, rho_fX}, {rho_dX, rho_fX, 1.0}}};
}

void ModelParams::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(std::string("model parameters: ") + what);
    };
    require(a_d > 0.0 && a_f > 0.0, "mean-reversion speeds must be positive");
    require(sigma_d > 0.0 && sigma_f > 0.0 && sigma_X > 0.0, "volatilities must be positive");
    require(X0 > 0.0, "X0 must be positive");
    require(std::isfinite(mu_X) && std::isfinite(x_d0) && std::isfinite(x_f0), "non-finite drift");
    for (double r : {rho_df, rho_dX, rho_fX})
        require(r >= -1.0 && r <= 1.0, "correlations must lie in [-1, 1]");

    // PSD iff every principal minor is non-negative.
    constexpr double eps = 1e-12;
    require(1.0 - rho_df * rho_df >= -eps && 1.0 - rho_dX * rho_dX >= -eps &&
                1.0 - rho_fX * rho_fX >= -eps,
            "correlation matrix is not positive semi-definite");
    double det = 1.0 + 2.0 * rho_df * rho_dX * rho_fX - rho_df * rho_df - rho_dX * rho_dX -
                 rho_fX * rho_fX;
    require(det >= -eps, "correlation matrix is not positive semi-definite");
}

Vec3 StateDistribution::state(const Vec3& z) const {
    Vec3 out = mean;
    for (int r = 0; r < 3; ++r) {
        double s = 0.0;
        for (int c = 0; c <= r; ++c) s += chol[r][c] * z[c];
        out[r] += scale[r] * s;
    }
    return out;
}

Mat3 cholesky(const Mat3& m) {
    Mat3 l{};
    for (int j = 0; j < 3; ++j) {
        double d = m[j][j];
        for (int k = 0; k < j; ++k) d -= l[j][k] * l[j][k];
        if (d <= 1e-14 * std::max(1.0, std::abs(m[j][j]))) {
            // Rank-deficient direction: column j stays zero.
            continue;
        }
        l[j][j] = std::sqrt(d);
        for (int i = j + 1; i < 3; ++i) {
            double s = m[i][j];
            for (int k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
            l[i][j] = s / l[j][j];
        }
    }
    return l;
}

namespace {

// (1 - e^{-k t}) / k, stable for small k t.
double decay_integral(double k, double t) { return -std::expm1(-k * t) / k; }

}  // namespace

StateDistribution state_distribution(const ModelParams& p, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("state_distribution: t must be >= 0");

    StateDistribution d;
    d.t = t;
    d.mean = {p.x_d0 * std::exp(-p.a_d * t), p.x_f0 * std::exp(-p.a_f * t),
              std::log(p.X0) + (p.mu_X - 0.5 * p.sigma_X * p.sigma_X) * t};

    double v_d = decay_integral(2.0 * p.a_d, t);
    double v_f = decay_integral(2.0 * p.a_f, t);
    d.scale = {p.sigma_d * std::sqrt(v_d), p.sigma_f * std::sqrt(v_f), p.sigma_X * std::sqrt(t)};

    d.corr = Mat3{{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}};
    d.degenerate = t == 0.0 || *std::min_element(d.scale.begin(), d.scale.end()) < 1e-14;
    if (d.degenerate) {
        d.chol = d.corr;
        return d;
    }

    double c_df = p.rho_df * decay_integral(p.a_d + p.a_f, t) / std::sqrt(v_d * v_f);
    double c_dX = p.rho_dX * decay_integral(p.a_d, t) / std::sqrt(v_d * t);
    double c_fX = p.rho_fX * decay_integral(p.a_f, t) / std::sqrt(v_f * t);
    d.corr[0][1] = d.corr[1][0] = c_df;
    d.corr[0][2] = d.corr[2][0] = c_dX;
    d.corr[1][2] = d.corr[2][1] = c_fX;
    d.chol = cholesky(d.corr);
    return d;
}

double hw_integrated_variance(double a, double sigma, double t, double T) {
    double tau = T - t;
    double e1 = decay_integral(a, tau);
    double e2 = decay_integral(2.0 * a, tau);
    return sigma * sigma / (a * a) * (tau - 2.0 * e1 + e2);
}

double ZcbCoefficients::price(double x) const { return std::exp(log_a - b * x); }

ZcbCoefficients zcb_coefficients(const ModelParams& p, Currency ccy, double t, double T) {
    if (!(t >= 0.0)) throw std::invalid_argument("zcb: t must be >= 0");
    if (T < t) throw std::invalid_argument("zcb: maturity before valuation time");

    const bool dom = ccy == Currency::domestic;
    const double a = dom ? p.a_d : p.a_f;
    const double sigma = dom ? p.sigma_d : p.sigma_f;
    const DiscountCurve& curve = dom ? p.curve_d : p.curve_f;

    ZcbCoefficients c;
    if (T == t) return c;
    c.b = decay_integral(a, T - t);
    c.log_a = curve.log_discount(T) - curve.log_discount(t) +
              0.5 * (hw_integrated_variance(a, sigma, t, T) - hw_integrated_variance(a, sigma, 0.0, T) +
                     hw_integrated_variance(a, sigma, 0.0, t));
    return c;
}

double zcb_price(const ModelParams& p, Currency ccy, double t, double T, double x) {
    return zcb_coefficients(p, ccy, t, T).price(x);
}

}  // namespace ccr
