#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ccr/model.hpp"

using namespace ccr;
using Catch::Approx;

namespace {

double gk(auto f, double lo, double hi) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, 1e-15);
}

// Var(int_t^T x ds | F_t) by quadrature of sigma^2 B(s,T)^2.
double integrated_variance_oracle(double a, double sigma, double t, double T) {
    return gk([&](double s) {
        double B = (1.0 - std::exp(-a * (T - s))) / a;
        return sigma * sigma * B * B;
    }, t, T);
}

}  // namespace

TEST_CASE("state scale at 7.4 years") {
    ModelParams p = ModelParams::reference();
    StateDistribution d = state_distribution(p, 7.4);
    CHECK(d.scale[0] == Approx(0.007 * std::sqrt((1.0 - std::exp(-0.148)) / 0.02)).epsilon(1e-14));
    CHECK(d.scale[1] == Approx(0.012 * std::sqrt((1.0 - std::exp(-2 * 0.05 * 7.4)) / 0.1)).epsilon(1e-14));
    CHECK(d.scale[2] == Approx(0.02 * std::sqrt(7.4)).epsilon(1e-14));
    CHECK(d.mean[2] == Approx(std::log(105.0) + (0.008 - 0.5 * 0.02 * 0.02) * 7.4).epsilon(1e-14));
    CHECK_FALSE(d.degenerate);
}

TEST_CASE("zero-time limit of the state law") {
    ModelParams p = ModelParams::reference();
    StateDistribution d0 = state_distribution(p, 0.0);
    CHECK(d0.degenerate);
    CHECK(d0.mean[2] == Approx(std::log(105.0)));
    StateDistribution d = state_distribution(p, 1e-12);
    for (double s : d.scale) CHECK(s < 1e-6);
    CHECK(d.mean[2] == Approx(std::log(105.0)).epsilon(1e-12));
    CHECK_THROWS_AS(state_distribution(p, -1.0), std::invalid_argument);
}

TEST_CASE("state covariances match the Ito isometry by quadrature") {
    ModelParams p = ModelParams::reference();
    for (double t : {0.5, 7.4, 14.8}) {
        StateDistribution d = state_distribution(p, t);
        const double a[3] = {p.a_d, p.a_f, 0.0};
        const double sig[3] = {p.sigma_d, p.sigma_f, p.sigma_X};
        Mat3 rho = p.brownian_correlation();
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double cov = rho[i][j] * sig[i] * sig[j] *
                             gk([&](double s) { return std::exp(-(a[i] + a[j]) * (t - s)); }, 0.0, t);
                double model = d.corr[i][j] * d.scale[i] * d.scale[j];
                CHECK(model == Approx(cov).epsilon(1e-12).margin(1e-18));
            }
    }
}

TEST_CASE("state correlation matches 1e7 exact samples") {
    ModelParams p = ModelParams::reference();
    StateDistribution d = state_distribution(p, 7.4);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> n01;
    const int N = 10'000'000;
    double s[3] = {}, ss[3][3] = {};
    for (int k = 0; k < N; ++k) {
        Vec3 x = d.state({n01(rng), n01(rng), n01(rng)});
        for (int i = 0; i < 3; ++i) {
            x[i] = (x[i] - d.mean[i]) / d.scale[i];
            s[i] += x[i];
        }
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) ss[i][j] += x[i] * x[j];
    }
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            double mi = s[i] / N, mj = s[j] / N;
            double c = (ss[i][j] / N - mi * mj) /
                       std::sqrt((ss[i][i] / N - mi * mi) * (ss[j][j] / N - mj * mj));
            double rho = d.corr[i][j];
            double se = (1.0 - rho * rho) / std::sqrt(static_cast<double>(N));
            CHECK(std::abs(c - rho) < 3.0 * se);
        }
}

TEST_CASE("cholesky reconstructs the correlation") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int tested = 0;
    while (tested < 500) {
        ModelParams p;
        p.rho_df = u(rng);
        p.rho_dX = u(rng);
        p.rho_fX = u(rng);
        try {
            p.validate();
        } catch (const std::invalid_argument&) {
            continue;
        }
        ++tested;
        StateDistribution d = state_distribution(p, 1.0 + 10.0 * (u(rng) + 1.0));
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double r = 0.0;
                for (int k = 0; k < 3; ++k) r += d.chol[i][k] * d.chol[j][k];
                CHECK(std::abs(r - d.corr[i][j]) < 1e-12);
                if (j > i) CHECK(d.chol[i][j] == 0.0);
            }
    }
}

TEST_CASE("cholesky of a singular correlation leaves a zero column") {
    Mat3 m{{{1.0, 1.0, 0.3}, {1.0, 1.0, 0.3}, {0.3, 0.3, 1.0}}};
    Mat3 l = cholesky(m);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double r = 0.0;
            for (int k = 0; k < 3; ++k) r += l[i][k] * l[j][k];
            CHECK(std::abs(r - m[i][j]) < 1e-12);
        }
    CHECK(l[1][1] == 0.0);
    CHECK(l[2][1] == 0.0);
}

TEST_CASE("parameter validation") {
    ModelParams p;
    p.a_d = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = ModelParams{};
    p.sigma_X = -0.1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = ModelParams{};
    p.rho_df = 1.2;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = ModelParams{};
    p.rho_df = 0.9;
    p.rho_dX = 0.9;
    p.rho_fX = -0.9;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = ModelParams{};
    p.X0 = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    CHECK_NOTHROW(ModelParams::reference().validate());
}

TEST_CASE("zero-coupon bond identities") {
    ModelParams p = ModelParams::reference();
    CHECK(zcb_price(p, Currency::domestic, 3.0, 3.0, 0.05) == 1.0);
    CHECK(zcb_price(p, Currency::domestic, 0.0, 5.0, 0.0) == Approx(std::exp(-0.10)).epsilon(1e-15));
    CHECK(zcb_price(p, Currency::domestic, 0.0, 5.0, 0.0) == Approx(0.904837).epsilon(1e-6));
    CHECK(zcb_price(p, Currency::foreign, 0.0, 5.0, 0.0) == Approx(std::exp(-0.25)).epsilon(1e-15));
    CHECK_THROWS_AS(zcb_price(p, Currency::domestic, 2.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("zero-coupon bond against a quadrature oracle for U") {
    ModelParams p = ModelParams::reference();
    const double t = 2.0, T = 7.0, x = 0.01;
    for (Currency c : {Currency::domestic, Currency::foreign}) {
        const bool dom = c == Currency::domestic;
        const double a = dom ? p.a_d : p.a_f;
        const double sigma = dom ? p.sigma_d : p.sigma_f;
        const DiscountCurve& curve = dom ? p.curve_d : p.curve_f;
        double U_tT = integrated_variance_oracle(a, sigma, t, T);
        double U_0T = integrated_variance_oracle(a, sigma, 0.0, T);
        double U_0t = integrated_variance_oracle(a, sigma, 0.0, t);
        double A = curve.discount(T) / curve.discount(t) * std::exp(0.5 * (U_tT - U_0T + U_0t));
        double B = (1.0 - std::exp(-a * (T - t))) / a;
        CHECK(zcb_price(p, c, t, T, x) == Approx(A * std::exp(-B * x)).epsilon(1e-13));
        CHECK(hw_integrated_variance(a, sigma, t, T) == Approx(U_tT).epsilon(1e-12));
    }
}

TEST_CASE("zero-coupon bond is decreasing in the short rate") {
    ModelParams p = ModelParams::reference();
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 1000; ++k) {
        double t = 10.0 * u(rng);
        double T = t + 1e-3 + 10.0 * u(rng);
        double x = -0.1 + 0.2 * u(rng);
        for (Currency c : {Currency::domestic, Currency::foreign})
            CHECK(zcb_price(p, c, t, T, x + 1e-3) < zcb_price(p, c, t, T, x));
    }
}

TEST_CASE("tabulated curve: interpolation and the t=0 identity") {
    ModelParams p = ModelParams::reference();
    p.curve_d = DiscountCurve::table({1.0, 2.0, 5.0, 10.0}, {0.98, 0.955, 0.89, 0.80});
    CHECK(p.curve_d.discount(0.0) == 1.0);
    CHECK(p.curve_d.discount(2.0) == Approx(0.955).epsilon(1e-15));
    CHECK(p.curve_d.discount(3.5) == Approx(std::sqrt(0.955 * 0.89)).epsilon(1e-14));
    CHECK(p.curve_d.discount(0.5) == Approx(std::sqrt(0.98)).epsilon(1e-14));
    // Flat zero rate beyond the last tenor.
    CHECK(p.curve_d.discount(20.0) == Approx(0.80 * 0.80).epsilon(1e-14));
    for (double T : {0.25, 1.0, 3.3, 7.0, 12.0})
        CHECK(zcb_price(p, Currency::domestic, 0.0, T, 0.0) == Approx(p.curve_d.discount(T)).epsilon(1e-15));
    CHECK_THROWS_AS(DiscountCurve::table({1.0, 0.5}, {0.99, 0.98}), std::invalid_argument);
    CHECK_THROWS_AS(DiscountCurve::table({1.0}, {-0.5}), std::invalid_argument);
}
