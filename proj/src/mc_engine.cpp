#include "ccr/mc_engine.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <stdexcept>

#include "ccr/parallel.hpp"
#include "ccr/random.hpp"
#include "mc_kernel.hpp"

namespace ccr {

void McConfig::validate() const {
    if (n_sim < 1) throw std::invalid_argument("mc: n_sim must be >= 1");
    if (batch < 1) throw std::invalid_argument("mc: batch must be >= 1");
}

std::vector<double> ExposurePaths::netting_exposure(std::size_t set) const {
    std::vector<double> e(mtm.at(set));
    for (double& v : e) v = std::max(v, 0.0);
    return e;
}

std::vector<double> ExposurePaths::counterparty_exposure() const {
    std::vector<double> e(size(), 0.0);
    for (const auto& v : mtm)
        for (std::size_t p = 0; p < v.size(); ++p) e[p] += std::max(v[p], 0.0);
    return e;
}

namespace {

void fill_normals(std::uint64_t seed, std::int64_t batch_index, std::size_t count, double* z) {
    Xoshiro256 rng(seed, static_cast<std::uint64_t>(batch_index));
    std::size_t i = 0;
    for (; i + 1 < count; i += 2) rng.normal_pair(z[i], z[i + 1]);
    if (i < count) {
        double spare;
        rng.normal_pair(z[i], spare);
    }
}

std::int64_t batch_count(const McConfig& cfg) { return (cfg.n_sim + cfg.batch - 1) / cfg.batch; }

}  // namespace

std::vector<double> draw_normals(const McConfig& cfg) {
    cfg.validate();
    std::vector<double> z(static_cast<std::size_t>(cfg.n_sim) * 3);
    for (std::int64_t b = 0; b < batch_count(cfg); ++b) {
        std::int64_t first = b * cfg.batch;
        std::int64_t n = std::min(cfg.batch, cfg.n_sim - first);
        fill_normals(cfg.seed, b, static_cast<std::size_t>(n) * 3, z.data() + first * 3);
    }
    return z;
}

ExposurePaths simulate_exposures(const Portfolio& pf, const ModelParams& params, double t, const McConfig& cfg,
                                 PricingCounter* counter) {
    cfg.validate();
    params.validate();
    const StateDistribution dist = state_distribution(params, t);

    ExposurePaths out;
    out.netting_sets = pf.netting_sets();
    const std::size_t nsets = out.netting_sets.size();

    // Per-leg flow coefficients at t; every leg is revalued on every path.
    std::vector<detail::LegKernel> legs;
    std::uint64_t dom_legs = 0;
    std::uint64_t fgn_legs = 0;
    for (const Trade& tr : pf.trades) {
        const std::size_t set = static_cast<std::size_t>(
            std::find(out.netting_sets.begin(), out.netting_sets.end(), tr.netting_set) - out.netting_sets.begin());
        for (const Leg& leg : tr.legs) {
            auto flows = leg.flows_at(t);
            if (flows.empty()) continue;
            detail::LegKernel k;
            k.foreign = leg.currency == Currency::foreign;
            k.set = set;
            for (const CashFlow& cf : flows) {
                ZcbCoefficients c = zcb_coefficients(params, leg.currency, t, cf.time);
                k.log_a.push_back(c.log_a);
                k.b.push_back(c.b);
                k.amount.push_back(cf.amount);
            }
            (k.foreign ? fgn_legs : dom_legs) += 1;
            legs.push_back(std::move(k));
        }
    }

    const std::size_t n = static_cast<std::size_t>(cfg.n_sim);
    out.mtm.assign(nsets, std::vector<double>(n, 0.0));
    const std::int64_t nb = batch_count(cfg);

    parallel_for(static_cast<std::size_t>(nb), cfg.threads, [&](std::size_t b) {
        const std::size_t first = b * static_cast<std::size_t>(cfg.batch);
        const std::size_t m = std::min(static_cast<std::size_t>(cfg.batch), n - first);
        std::vector<double> z(m * 3);
        fill_normals(cfg.seed, static_cast<std::int64_t>(b), m * 3, z.data());

        std::vector<double> xd(m), xf(m), fx(m);
        for (std::size_t p = 0; p < m; ++p) {
            Vec3 s = dist.state({z[3 * p], z[3 * p + 1], z[3 * p + 2]});
            xd[p] = s[0];
            xf[p] = s[1];
            fx[p] = std::exp(s[2]);
        }
        std::vector<double> values(nsets * m, 0.0);
        std::vector<double> scratch;
        detail::revalue_batch(legs, xd, xf, fx, values.data(), scratch);
        for (std::size_t s = 0; s < nsets; ++s)
            std::copy_n(values.data() + s * m, m, out.mtm[s].data() + first);
    });

    if (counter) {
        counter->domestic += dom_legs * n;
        counter->foreign += fgn_legs * n;
    }
    return out;
}

McResult estimate_metrics(std::span<const double> exposures, double alpha, double confidence) {
    if (exposures.empty()) throw std::invalid_argument("estimate_metrics: no paths");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("estimate_metrics: alpha must lie in (0, 1)");
    if (!(confidence > 0.0 && confidence < 1.0))
        throw std::invalid_argument("estimate_metrics: confidence must lie in (0, 1)");

    const std::clock_t c0 = std::clock();
    const std::size_t n = exposures.size();
    const double nd = static_cast<double>(n);

    double mean = 0.0;
    for (double e : exposures) mean += e;
    mean /= nd;
    double ss = 0.0;
    for (double e : exposures) ss += (e - mean) * (e - mean);

    McResult r;
    r.ee_hat = mean;
    r.ee_se = n > 1 ? std::sqrt(ss / (nd - 1.0) / nd) : 0.0;

    // 1-based ranks; the count of paths below the alpha-quantile is
    // Binomial(n, alpha).
    const double z = -normal_quantile(0.5 * (1.0 - confidence));
    const double centre = nd * alpha;
    const double half = z * std::sqrt(nd * alpha * (1.0 - alpha));
    auto rank = [&](double r1) {
        return static_cast<std::size_t>(std::clamp(r1, 1.0, nd)) - 1;
    };
    const std::size_t k_pfe = rank(std::ceil(centre));
    const std::size_t k_lo = rank(std::floor(centre - half));
    const std::size_t k_hi = rank(std::ceil(centre + half));

    std::vector<double> sorted(exposures.begin(), exposures.end());
    auto order_stat = [&](std::size_t k) {
        std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k), sorted.end());
        return sorted[k];
    };
    r.pfe_hat = order_stat(k_pfe);
    r.pfe_lo = order_stat(k_lo);
    r.pfe_hi = order_stat(k_hi);
    r.cpu_seconds = static_cast<double>(std::clock() - c0) / CLOCKS_PER_SEC;
    return r;
}

namespace {

struct DiffStats {
    double mean = 0.0;
    double se = 0.0;
};

DiffStats difference_stats(const std::vector<double>& base, const std::vector<double>& up, double h) {
    const double n = static_cast<double>(base.size());
    double m = 0.0;
    for (std::size_t p = 0; p < base.size(); ++p) m += (up[p] - base[p]) / h;
    m /= n;
    double ss = 0.0;
    for (std::size_t p = 0; p < base.size(); ++p) {
        double d = (up[p] - base[p]) / h - m;
        ss += d * d;
    }
    return {m, base.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0};
}

}  // namespace

McSensitivityResult mc_ee_sensitivities(const Portfolio& pf, const ModelParams& params, double t,
                                        const McConfig& cfg, ShockSizes shocks) {
    const ExposurePaths base = simulate_exposures(pf, params, t, cfg);
    const ExposurePaths up_d = simulate_exposures(pf, shocked(params, shocks.rate, 0.0, 0.0), t, cfg);
    const ExposurePaths up_f = simulate_exposures(pf, shocked(params, 0.0, shocks.rate, 0.0), t, cfg);
    const ExposurePaths up_x = simulate_exposures(pf, shocked(params, 0.0, 0.0, shocks.fx_relative), t, cfg);
    const double dX = params.X0 * shocks.fx_relative;

    McSensitivityResult r;
    r.counterparty.value.netting_set = r.counterparty.se.netting_set = "counterparty";
    for (std::size_t s = 0; s < base.netting_sets.size(); ++s) {
        auto b = base.netting_exposure(s);
        DiffStats d = difference_stats(b, up_d.netting_exposure(s), shocks.rate);
        DiffStats f = difference_stats(b, up_f.netting_exposure(s), shocks.rate);
        DiffStats x = difference_stats(b, up_x.netting_exposure(s), dX);
        McSensitivity m;
        m.value = {base.netting_sets[s], d.mean, f.mean, x.mean};
        m.se = {base.netting_sets[s], d.se, f.se, x.se};
        r.netting.push_back(m);
    }
    auto cb = base.counterparty_exposure();
    DiffStats d = difference_stats(cb, up_d.counterparty_exposure(), shocks.rate);
    DiffStats f = difference_stats(cb, up_f.counterparty_exposure(), shocks.rate);
    DiffStats x = difference_stats(cb, up_x.counterparty_exposure(), dX);
    r.counterparty.value.dEE_dxd = d.mean;
    r.counterparty.value.dEE_dxf = f.mean;
    r.counterparty.value.dEE_dX = x.mean;
    r.counterparty.se.dEE_dxd = d.se;
    r.counterparty.se.dEE_dxf = f.se;
    r.counterparty.se.dEE_dX = x.se;
    return r;
}

}  // namespace ccr
