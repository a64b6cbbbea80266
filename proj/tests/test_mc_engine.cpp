#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "ccr/mc_engine.hpp"
#include "support/oracles.hpp"

using namespace ccr;
using Catch::Approx;

namespace {

Portfolio single_flow(Currency c, double T, double amount) {
    Portfolio pf;
    Trade tr;
    tr.id = "z";
    tr.netting_set = "NS1";
    tr.legs.push_back(Leg{c, {{T, amount}}, 0.0, {}});
    pf.trades.push_back(tr);
    return pf;
}

}  // namespace

TEST_CASE("config validation") {
    McConfig c;
    CHECK_NOTHROW(c.validate());
    c.n_sim = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = McConfig{};
    c.batch = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("normal draws have standard moments") {
    McConfig c;
    c.n_sim = 400'000;
    c.batch = 1000;
    auto z = draw_normals(c);
    REQUIRE(z.size() == 1'200'000);
    const double n = static_cast<double>(z.size());
    double s1 = 0.0, s2 = 0.0, s4 = 0.0, lag = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        s1 += z[i];
        s2 += z[i] * z[i];
        s4 += std::pow(z[i], 4);
        if (i > 0) lag += z[i] * z[i - 1];
    }
    CHECK(std::abs(s1 / n) < 3.0 / std::sqrt(n));
    CHECK(std::abs(s2 / n - 1.0) < 3.0 * std::sqrt(2.0 / n));
    CHECK(std::abs(s4 / n - 3.0) < 3.0 * std::sqrt(96.0 / n));
    CHECK(std::abs(lag / n) < 3.0 / std::sqrt(n));
}

TEST_CASE("sampled states match the state law") {
    ModelParams p = ModelParams::reference();
    const double t = 6.0;
    StateDistribution d = state_distribution(p, t);
    McConfig c;
    c.n_sim = 300'000;
    auto z = draw_normals(c);
    const double n = static_cast<double>(c.n_sim);
    double m[3] = {}, cov[3][3] = {};
    std::vector<Vec3> xs;
    xs.reserve(static_cast<std::size_t>(c.n_sim));
    for (std::int64_t k = 0; k < c.n_sim; ++k) {
        Vec3 x = d.state({z[3 * k], z[3 * k + 1], z[3 * k + 2]});
        xs.push_back(x);
        for (int i = 0; i < 3; ++i) m[i] += x[i] / n;
    }
    for (const Vec3& x : xs)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) cov[i][j] += (x[i] - m[i]) * (x[j] - m[j]) / n;
    for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(m[i] - d.mean[i]) < 3.0 * d.scale[i] / std::sqrt(n));
        for (int j = 0; j < 3; ++j) {
            const double target = d.corr[i][j] * d.scale[i] * d.scale[j];
            const double rho = d.corr[i][j];
            const double se = d.scale[i] * d.scale[j] * std::sqrt((1.0 + rho * rho) / n);
            CHECK(std::abs(cov[i][j] - target) < 3.0 * se);
        }
    }
}

TEST_CASE("zero-volatility paths are deterministic") {
    ModelParams p = ModelParams::reference();
    p.sigma_d = p.sigma_f = p.sigma_X = 1e-12;
    Portfolio pf = partition_counterparty(generate_portfolio(GeneratorSpec{30, 5}, ModelParams::reference()),
                                          PartitionMode::by_contract_type);
    const double t = 4.0;
    StateDistribution d = state_distribution(p, t);
    auto ref = oracle::naive_values(pf, p, t, d.mean);
    McConfig c;
    c.n_sim = 2000;
    ExposurePaths paths = simulate_exposures(pf, p, t, c);
    REQUIRE(paths.mtm.size() == ref.size());
    for (std::size_t s = 0; s < ref.size(); ++s)
        // Residual spread is of order sigma times notional times duration.
        for (double v : paths.mtm[s]) CHECK(v == Approx(ref[s]).margin(1e-6));
}

TEST_CASE("single zero-coupon bond follows the lognormal transform") {
    ModelParams p = ModelParams::reference();
    const double t = 5.0, T = 12.0;
    Portfolio pf = single_flow(Currency::domestic, T, 100.0);
    StateDistribution d = state_distribution(p, t);
    ZcbCoefficients zc = zcb_coefficients(p, Currency::domestic, t, T);
    const double m = d.mean[0], s = d.scale[0];
    McConfig c;
    c.n_sim = 400'000;
    auto v = simulate_exposures(pf, p, t, c).mtm[0];
    std::sort(v.begin(), v.end());
    const double n = static_cast<double>(v.size());
    // V = 100 exp(log_a - b x) <= y  iff  x >= (log_a - log(y/100)) / b.
    double sup = 0.0;
    for (int i = 1; i < 200; ++i) {
        double y = v[static_cast<std::size_t>(i * v.size() / 200)];
        double F = 1.0 - oracle::Phi(((zc.log_a - std::log(y / 100.0)) / zc.b - m) / s);
        double Fm = static_cast<double>(std::upper_bound(v.begin(), v.end(), y) - v.begin()) / n;
        sup = std::max(sup, std::abs(F - Fm));
    }
    CHECK(sup < std::sqrt(std::log(2.0 / 0.001) / (2.0 * n)));

    double mean = 0.0;
    for (double x : v) mean += x / n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double se = std::sqrt(ss / (n - 1.0) / n);
    const double exact = 100.0 * std::exp(zc.log_a - zc.b * m + 0.5 * zc.b * zc.b * s * s);
    CHECK(std::abs(mean - exact) < 3.0 * se);
}

TEST_CASE("estimator on constant and uniform samples") {
    std::vector<double> c(5000, 7.25);
    McResult r = estimate_metrics(c);
    CHECK(r.pfe_hat == 7.25);
    CHECK(r.ee_hat == Approx(7.25).epsilon(1e-14));
    CHECK(r.ee_se < 1e-12);
    CHECK(r.pfe_lo == 7.25);
    CHECK(r.pfe_hi == 7.25);

    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> x(1'000'000);
    for (double& v : x) v = u(rng);
    McResult q = estimate_metrics(x, 0.975, 0.99);
    CHECK(q.pfe_lo <= 0.975);
    CHECK(q.pfe_hi >= 0.975);
    CHECK(q.pfe_lo < q.pfe_hat);
    CHECK(q.pfe_hat < q.pfe_hi);
    // Band half-width of about 2.576 sqrt(a(1-a)/n).
    CHECK((q.pfe_hi - q.pfe_lo) / 2.0 == Approx(2.576 * std::sqrt(0.975 * 0.025 / 1e6)).epsilon(0.1));
    CHECK(std::abs(q.ee_hat - 0.5) < 3.0 * q.ee_se);
    CHECK(q.ee_se == Approx(std::sqrt(1.0 / 12.0 / 1e6)).epsilon(0.01));

    // Order statistic at ceil(alpha n).
    std::vector<double> small{5, 1, 4, 2, 3};
    CHECK(estimate_metrics(small, 0.5).pfe_hat == 3.0);
    CHECK(estimate_metrics(small, 0.41).pfe_hat == 3.0);
    CHECK(estimate_metrics(small, 0.39).pfe_hat == 2.0);
    CHECK_THROWS_AS(estimate_metrics(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("results depend on the seed only") {
    ModelParams p = ModelParams::reference();
    Portfolio pf = partition_counterparty(generate_portfolio(GeneratorSpec{25, 3}, p), PartitionMode::by_contract_type);
    McConfig c;
    c.n_sim = 20'000;
    c.batch = 777;
    ExposurePaths a = simulate_exposures(pf, p, 3.0, c);
    c.threads = 3;
    ExposurePaths b = simulate_exposures(pf, p, 3.0, c);
    CHECK(a.mtm == b.mtm);
    c.seed += 1;
    ExposurePaths d = simulate_exposures(pf, p, 3.0, c);
    CHECK(a.mtm != d.mtm);
    auto ce = a.counterparty_exposure();
    for (std::size_t k = 0; k < ce.size(); ++k) {
        double s = 0.0;
        for (std::size_t n = 0; n < a.mtm.size(); ++n) s += a.netting_exposure(n)[k];
        CHECK(ce[k] == Approx(s).epsilon(1e-15));
        if (k > 50) break;
    }
}

TEST_CASE("standard error halves when paths quadruple") {
    ModelParams p = ModelParams::reference();
    Portfolio pf = generate_portfolio(GeneratorSpec{40, 8}, p);
    McConfig c;
    c.n_sim = 100'000;
    double se1 = estimate_metrics(simulate_exposures(pf, p, 6.0, c).netting_exposure(0)).ee_se;
    c.n_sim = 400'000;
    double se4 = estimate_metrics(simulate_exposures(pf, p, 6.0, c).netting_exposure(0)).ee_se;
    CHECK(se1 / se4 == Approx(2.0).epsilon(0.2));
}

TEST_CASE("every leg is priced on every path") {
    ModelParams p = ModelParams::reference();
    Portfolio pf = generate_portfolio(GeneratorSpec{}, p);
    for (double t : {0.5, 7.4}) {
        std::uint64_t legs = 0;
        for (const Trade& tr : pf.trades)
            for (const Leg& l : tr.legs)
                if (!l.flows_at(t).empty()) ++legs;
        McConfig c;
        c.n_sim = 5000;
        PricingCounter k;
        simulate_exposures(pf, p, t, c, &k);
        CHECK(k.total() == legs * 5000);
    }
}

TEST_CASE("common random numbers give a small sensitivity error") {
    ModelParams p = ModelParams::reference();
    Portfolio pf = single_flow(Currency::domestic, 10.0, 100.0);
    McConfig c;
    c.n_sim = 50'000;
    auto r = mc_ee_sensitivities(pf, p, 4.0, c);
    // The bond is always in the money, so dEE/dx_d0 = dE[V]/dx_d0 exactly.
    ModelParams up = shocked(p, 1e-4, 0.0, 0.0);
    auto ev = [&](const ModelParams& q) {
        StateDistribution d = state_distribution(q, 4.0);
        ZcbCoefficients zc = zcb_coefficients(q, Currency::domestic, 4.0, 10.0);
        return 100.0 * std::exp(zc.log_a - zc.b * d.mean[0] + 0.5 * zc.b * zc.b * d.scale[0] * d.scale[0]);
    };
    const double exact = (ev(up) - ev(p)) / 1e-4;
    CHECK(std::abs(r.netting[0].value.dEE_dxd - exact) < 3.0 * r.netting[0].se.dEE_dxd);
    CHECK(r.netting[0].se.dEE_dxd < 1e-2 * std::abs(exact));
    CHECK(r.netting[0].value.dEE_dxf == 0.0);
    CHECK(r.netting[0].value.dEE_dX == 0.0);
    CHECK(r.counterparty.value.dEE_dxd == r.netting[0].value.dEE_dxd);
}
