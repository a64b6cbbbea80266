#include "ccr/cos_engine.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>

namespace ccr {

CosSupport cos_support(double mu, double sigma, double L, bool floor_a_at_zero) {
    if (!(sigma > 0.0)) throw std::invalid_argument("cos_support: sigma must be positive");
    if (!(L > 0.0)) throw std::invalid_argument("cos_support: L must be positive");
    CosSupport s;
    s.mu = mu;
    s.sigma = sigma;
    s.L = L;
    s.a = floor_a_at_zero ? 0.0 : mu - L * sigma;
    s.b = mu + L * sigma;
    if (!(s.b > s.a)) throw std::invalid_argument("cos_support: empty support (b <= a)");
    return s;
}

Moments exposure_moments(std::span<const double> values, const TensorGrid& grid) {
    std::vector<double> ones(values.size(), 1.0);
    const double mass = grid.integrate<double>(ones);
    const double m1 = grid.integrate<double>(values) / mass;

    // Central second moment in a second pass: exact zero for a constant tensor.
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) sq[i] = (values[i] - m1) * (values[i] - m1);
    const double var = grid.integrate<double>(sq) / mass;

    Moments m;
    m.mean = m1;
    m.stddev = std::sqrt(std::max(var, 0.0));
    m.degenerate = m.stddev < 1e-14 * std::max(1.0, std::abs(m1));
    return m;
}

std::vector<std::complex<double>> characteristic_function(std::span<const double> values, const TensorGrid& grid,
                                                          std::span<const double> omegas) {
    if (values.size() != grid.points())
        throw std::invalid_argument("characteristic_function: value count does not match grid");
    const std::size_t J = static_cast<std::size_t>(grid.size());
    auto w = grid.effective_weights();
    std::vector<std::complex<double>> phi(omegas.size());
    for (std::size_t q = 0; q < omegas.size(); ++q) {
        double re = 0.0;
        double im = 0.0;
        for (std::size_t i = 0; i < J; ++i)
            for (std::size_t j = 0; j < J; ++j) {
                const double wij = w[i] * w[j];
                const double* v = values.data() + (i * J + j) * J;
                for (std::size_t k = 0; k < J; ++k) {
                    double th = omegas[q] * v[k];
                    re += wij * w[k] * std::cos(th);
                    im += wij * w[k] * std::sin(th);
                }
            }
        phi[q] = {re, im};
    }
    return phi;
}

std::vector<std::complex<double>> characteristic_function(std::span<const double> values, const TensorGrid& grid,
                                                          double step, int K) {
    if (values.size() != grid.points())
        throw std::invalid_argument("characteristic_function: value count does not match grid");
    if (K < 0) throw std::invalid_argument("characteristic_function: K must be >= 0");

    const std::size_t J = static_cast<std::size_t>(grid.size());
    const std::size_t nk = static_cast<std::size_t>(K) + 1;
    auto w = grid.effective_weights();
    std::vector<double> acc_re(nk, 0.0);
    std::vector<double> acc_im(nk, 0.0);

    for (std::size_t i = 0; i < J; ++i)
        for (std::size_t j = 0; j < J; ++j) {
            const double wij = w[i] * w[j];
            const double* v = values.data() + (i * J + j) * J;
            for (std::size_t k = 0; k < J; ++k) {
                const double wt = wij * w[k];
                const double th = step * v[k];
                const double c1 = std::cos(th);
                const double s1 = std::sin(th);
                double c = 1.0;
                double s = 0.0;
                for (std::size_t q = 0; q < nk; ++q) {
                    acc_re[q] += wt * c;
                    acc_im[q] += wt * s;
                    const double cn = c * c1 - s * s1;
                    s = s * c1 + c * s1;
                    c = cn;
                }
            }
        }

    std::vector<std::complex<double>> phi(nk);
    for (std::size_t q = 0; q < nk; ++q) phi[q] = {acc_re[q], acc_im[q]};
    return phi;
}

std::vector<double> cos_coefficients(std::span<const std::complex<double>> phi, const CosSupport& support) {
    const double width = support.width();
    if (!(width > 0.0) || !std::isfinite(width)) throw std::invalid_argument("cos_coefficients: bad support");
    std::vector<double> A(phi.size());
    for (std::size_t k = 0; k < phi.size(); ++k) {
        const double shift = -static_cast<double>(k) * support.a * std::numbers::pi / width;
        A[k] = 2.0 / width * (phi[k] * std::polar(1.0, shift)).real();
    }
    return A;
}

CosExpansion::CosExpansion(CosSupport support, std::vector<double> coeffs, ExposureTarget target,
                           std::optional<SpectralFilter> filter)
    : support_(support), coeffs_(std::move(coeffs)), target_(target), filter_(filter) {
    if (coeffs_.size() < 2) throw std::invalid_argument("CosExpansion: need K >= 1");
    if (!(support_.b > support_.a)) throw std::invalid_argument("CosExpansion: empty support");
    const int K = terms();
    weighted_.resize(coeffs_.size());
    for (int k = 0; k <= K; ++k) {
        double sig = filter_ ? (*filter_)(static_cast<double>(k) / K) : 1.0;
        weighted_[static_cast<std::size_t>(k)] = coeffs_[static_cast<std::size_t>(k)] * (k == 0 ? 1.0 : sig);
    }
}

double CosExpansion::partial_cdf(double e) const {
    const double a = support_.a;
    const double w = support_.width();
    e = std::clamp(e, a, support_.b);
    const double th = std::numbers::pi * (e - a) / w;
    const double c1 = std::cos(th);
    const double s1 = std::sin(th);
    double c = c1;
    double s = s1;
    double sum = 0.5 * weighted_[0] * (e - a);
    for (std::size_t k = 1; k < weighted_.size(); ++k) {
        sum += weighted_[k] * w / (static_cast<double>(k) * std::numbers::pi) * s;
        const double cn = c * c1 - s * s1;
        s = s * c1 + c * s1;
        c = cn;
    }
    return sum;
}

double CosExpansion::density(double e) const {
    const double a = support_.a;
    const double w = support_.width();
    if (e < a || e > support_.b) return 0.0;
    const double th = std::numbers::pi * (e - a) / w;
    const double c1 = std::cos(th);
    const double s1 = std::sin(th);
    double c = c1;
    double s = s1;
    double sum = 0.5 * weighted_[0];
    for (std::size_t k = 1; k < weighted_.size(); ++k) {
        sum += weighted_[k] * c;
        const double cn = c * c1 - s * s1;
        s = s * c1 + c * s1;
        c = cn;
    }
    return sum;
}

double cdf_netting(const CosExpansion& expansion, double e) {
    if (e <= 0.0) return 0.0;
    return std::clamp(expansion.partial_cdf(e), 0.0, 1.0);
}

double cdf_counterparty(const CosExpansion& expansion, double e) {
    if (e < 0.0) return 0.0;
    return std::clamp(expansion.partial_cdf(e), 0.0, 1.0);
}

PfeResult pfe(const CosExpansion& x, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("pfe: alpha must lie in (0, 1)");
    const CosSupport& sup = x.support();
    PfeResult r;

    // Exposure is floored at zero: the search never looks below it.
    double lo = std::max(sup.a, 0.0);
    double hi = sup.b;
    if (hi <= 0.0) {
        r.atom = true;
        return r;
    }
    auto g = [&](double e) { return x.partial_cdf(e) - alpha; };
    if (x.target() == ExposureTarget::netting_mtm && sup.a < 0.0 && g(lo) >= 0.0) {
        r.atom = true;
        return r;
    }

    // First crossing on a coarse scan, so oscillations of the partial sum
    // past the quantile cannot attract the root finder.
    const int n_scan = std::max(256, 8 * x.terms());
    double prev = lo;
    double g_prev = g(lo);
    bool found = false;
    for (int i = 1; i <= n_scan; ++i) {
        double e = lo + (hi - lo) * i / n_scan;
        double ge = g(e);
        if (ge >= 0.0) {
            lo = prev;
            hi = e;
            found = true;
            break;
        }
        prev = e;
        g_prev = ge;
    }
    if (!found) {
        r.value = sup.b;
        r.no_bracket = true;
        return r;
    }

    const double tol = 1e-10 * sup.width();
    double g_hi = g(hi);
    double e = g_hi - g_prev > 0.0 ? lo - g_prev * (hi - lo) / (g_hi - g_prev) : 0.5 * (lo + hi);
    for (int it = 0; it < 100; ++it) {
        r.iterations = it + 1;
        double ge = g(e);
        if (ge < 0.0)
            lo = e;
        else
            hi = e;
        double f = x.density(e);
        double next = 0.5 * (lo + hi);
        if (f > 0.0) {
            double newton = e - ge / f;
            if (newton > lo && newton < hi) next = newton;
        }
        double step = next - e;
        e = next;
        if (std::abs(step) <= tol || hi - lo <= tol) break;
    }
    // A bisection exit leaves e up to tol away from the root; one more
    // Newton step polishes it.
    if (double f = x.density(e); f > 0.0) {
        double polished = e - g(e) / f;
        if (std::abs(polished - e) <= std::max(hi - lo, tol)) e = polished;
    }
    r.value = e;
    return r;
}

double ee(const CosExpansion& x) {
    const CosSupport& sup = x.support();
    const double a = sup.a;
    const double w = sup.width();
    const double B = std::max(sup.b, 0.0);
    const double A = std::max(sup.a, 0.0);
    if (B <= A) return 0.0;

    const auto& c = x.coeffs();
    // Integral of e * (A_0 / 2) over [A, B].
    double sum = 0.25 * c[0] * (B * B - A * A);
    const double thB = std::numbers::pi * (B - a) / w;
    const double thA = std::numbers::pi * (A - a) / w;
    for (std::size_t k = 1; k < c.size(); ++k) {
        const double kk = static_cast<double>(k);
        const double h = w / (kk * std::numbers::pi);
        const double bracket = B * std::sin(kk * thB) - A * std::sin(kk * thA) +
                               h * (std::cos(kk * thB) - std::cos(kk * thA));
        sum += c[k] * h * bracket;
    }
    return std::max(sum, 0.0);
}

void CosSettings::validate() const {
    if (K < 1) throw std::invalid_argument("settings: K must be >= 1");
    if (J < 3 || J_mom < 3) throw std::invalid_argument("settings: J and J_mom must be >= 3");
    if (!(tol > 0.0 && tol < 0.5)) throw std::invalid_argument("settings: TOL must lie in (0, 0.5)");
    if (!(L > 0.0)) throw std::invalid_argument("settings: L must be positive");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("settings: alpha must lie in (0, 1)");
    if (filter_p < 2 || filter_p % 2 != 0) throw std::invalid_argument("settings: filter order must be even");
}

CosSettings CosSettings::reference() {
    CosSettings s;
    s.K = 150;
    s.J = 130;
    s.tol = 1e-12;
    return s;
}

ModelParams shocked(const ModelParams& p, double d_xd0, double d_xf0, double fx_relative) {
    ModelParams q = p;
    q.x_d0 += d_xd0;
    q.x_f0 += d_xf0;
    q.X0 *= 1.0 + fx_relative;
    return q;
}

CosEngine::CosEngine(ModelParams params, CosSettings settings)
    : params_(std::move(params)),
      settings_(settings),
      grid_(QuadratureConfig{settings.J, settings.tol}),
      moment_grid_(QuadratureConfig{settings.J_mom, settings.tol}) {
    params_.validate();
    settings_.validate();
}

struct CosEngine::NettingState {
    std::vector<std::string> sets;
    bool degenerate_date = false;
    std::vector<double> deterministic;        // values at the mean state when degenerate_date
    std::vector<Moments> moments;             // per set, from the moment grid
    GridValuation values;                     // main grid, empty when degenerate_date
    std::vector<double> moment_exposure;      // counterparty exposure on the moment grid
};

CosEngine::NettingState CosEngine::netting_state(const Portfolio& pf, double t, PricingCounter* counter) const {
    NettingState st;
    st.sets = pf.netting_sets();
    StateDistribution dist = state_distribution(params_, t);
    if (dist.degenerate) {
        st.degenerate_date = true;
        st.deterministic = portfolio_value_at(pf.trades, st.sets, params_, t, dist.mean);
        return st;
    }
    PricingCounter mom_calls;
    GridValuation mom = portfolio_value_grid(pf.trades, st.sets, params_, t, moment_grid_, dist, &mom_calls);
    if (counter) counter->moment_pass += mom_calls.total();
    st.moment_exposure.assign(moment_grid_.points(), 0.0);
    for (const auto& v : mom.values) {
        st.moments.push_back(exposure_moments(v, moment_grid_));
        for (std::size_t i = 0; i < v.size(); ++i) st.moment_exposure[i] += std::max(v[i], 0.0);
    }
    st.values = portfolio_value_grid(pf.trades, st.sets, params_, t, grid_, dist, counter);
    return st;
}

namespace {

CosExpansion expand(std::span<const double> values, const TensorGrid& grid, const CosSupport& support, int K,
                    ExposureTarget target, std::optional<SpectralFilter> filter) {
    // Shift by a so the phases stay small; the coefficients are unchanged.
    std::vector<double> shifted(values.begin(), values.end());
    for (double& v : shifted) v -= support.a;
    const double step = std::numbers::pi / support.width();
    auto phi = characteristic_function(shifted, grid, step, K);
    CosSupport origin = support;
    origin.a = 0.0;
    origin.b = support.width();
    return CosExpansion(support, cos_coefficients(phi, origin), target, filter);
}

}  // namespace

std::vector<std::optional<CosExpansion>> CosEngine::netting_expansions(const Portfolio& pf, double t,
                                                                       PricingCounter* counter) const {
    NettingState st = netting_state(pf, t, counter);
    std::vector<std::optional<CosExpansion>> out(st.sets.size());
    if (st.degenerate_date) return out;
    for (std::size_t n = 0; n < st.sets.size(); ++n) {
        if (st.moments[n].degenerate) continue;
        CosSupport sup = cos_support(st.moments[n].mean, st.moments[n].stddev, settings_.L, false);
        out[n] = expand(st.values.values[n], grid_, sup, settings_.K, ExposureTarget::netting_mtm, std::nullopt);
    }
    return out;
}

std::vector<NettingSetMetrics> CosEngine::netting_metrics(const Portfolio& pf, double t,
                                                          PricingCounter* counter) const {
    NettingState st = netting_state(pf, t, counter);
    std::vector<NettingSetMetrics> out(st.sets.size());
    for (std::size_t n = 0; n < st.sets.size(); ++n) {
        NettingSetMetrics& m = out[n];
        m.netting_set = st.sets[n];
        if (st.degenerate_date || st.moments[n].degenerate) {
            double v = st.degenerate_date ? st.deterministic[n] : st.moments[n].mean;
            m.degenerate = true;
            m.pfe = m.ee = std::max(v, 0.0);
            continue;
        }
        m.support = cos_support(st.moments[n].mean, st.moments[n].stddev, settings_.L, false);
        CosExpansion x =
            expand(st.values.values[n], grid_, m.support, settings_.K, ExposureTarget::netting_mtm, std::nullopt);
        PfeResult p = pfe(x, settings_.alpha);
        m.pfe = p.value;
        m.atom = p.atom;
        m.ee = ee(x);
    }
    return out;
}

std::optional<CosExpansion> CosEngine::counterparty_expansion(const Portfolio& pf, double t,
                                                              PricingCounter* counter) const {
    NettingState st = netting_state(pf, t, counter);
    if (st.degenerate_date) return std::nullopt;
    Moments mom = exposure_moments(st.moment_exposure, moment_grid_);
    if (mom.degenerate) return std::nullopt;
    std::vector<double> exposure(grid_.points(), 0.0);
    for (const auto& v : st.values.values)
        for (std::size_t i = 0; i < v.size(); ++i) exposure[i] += std::max(v[i], 0.0);
    CosSupport sup = cos_support(mom.mean, mom.stddev, settings_.L, true);
    return expand(exposure, grid_, sup, settings_.K, ExposureTarget::counterparty_exposure,
                  SpectralFilter{settings_.filter_p, settings_.filter_alpha});
}

CounterpartyMetrics CosEngine::counterparty_metrics(const Portfolio& pf, double t, PricingCounter* counter) const {
    NettingState st = netting_state(pf, t, counter);
    CounterpartyMetrics cm;
    cm.netting.resize(st.sets.size());

    std::vector<double> exposure;
    if (!st.degenerate_date) {
        exposure.assign(grid_.points(), 0.0);
        for (const auto& v : st.values.values)
            for (std::size_t i = 0; i < v.size(); ++i) exposure[i] += std::max(v[i], 0.0);
    }

    for (std::size_t n = 0; n < st.sets.size(); ++n) {
        NettingSetMetrics& m = cm.netting[n];
        m.netting_set = st.sets[n];
        if (st.degenerate_date || st.moments[n].degenerate) {
            double v = st.degenerate_date ? st.deterministic[n] : st.moments[n].mean;
            m.degenerate = true;
            m.pfe = m.ee = std::max(v, 0.0);
        } else {
            m.support = cos_support(st.moments[n].mean, st.moments[n].stddev, settings_.L, false);
            CosExpansion x =
                expand(st.values.values[n], grid_, m.support, settings_.K, ExposureTarget::netting_mtm, std::nullopt);
            PfeResult p = pfe(x, settings_.alpha);
            m.pfe = p.value;
            m.atom = p.atom;
            m.ee = ee(x);
        }
        cm.ee += m.ee;
    }

    if (st.degenerate_date) {
        cm.degenerate = true;
        for (double v : st.deterministic) cm.pfe += std::max(v, 0.0);
        return cm;
    }
    Moments mom = exposure_moments(st.moment_exposure, moment_grid_);
    if (mom.degenerate) {
        cm.degenerate = true;
        cm.pfe = mom.mean;
        return cm;
    }
    cm.support = cos_support(mom.mean, mom.stddev, settings_.L, true);
    CosExpansion x = expand(exposure, grid_, cm.support, settings_.K, ExposureTarget::counterparty_exposure,
                            SpectralFilter{settings_.filter_p, settings_.filter_alpha});
    PfeResult p = pfe(x, settings_.alpha);
    cm.pfe = p.value;
    cm.atom = p.atom;
    return cm;
}

std::vector<double> CosEngine::netting_ee(const Portfolio& pf, double t) const {
    std::vector<double> out;
    for (const NettingSetMetrics& m : netting_metrics(pf, t)) out.push_back(m.ee);
    return out;
}

SensitivityResult CosEngine::ee_sensitivities(const Portfolio& pf, double t, ShockSizes shocks) const {
    const std::vector<double> base = netting_ee(pf, t);
    auto revalue = [&](double dxd, double dxf, double fx) {
        return CosEngine(shocked(params_, dxd, dxf, fx), settings_).netting_ee(pf, t);
    };
    const std::vector<double> up_d = revalue(shocks.rate, 0.0, 0.0);
    const std::vector<double> up_f = revalue(0.0, shocks.rate, 0.0);
    const std::vector<double> up_x = revalue(0.0, 0.0, shocks.fx_relative);
    const double dX = params_.X0 * shocks.fx_relative;

    SensitivityResult r;
    r.counterparty.netting_set = "counterparty";
    auto sets = pf.netting_sets();
    for (std::size_t n = 0; n < sets.size(); ++n) {
        EeSensitivity s;
        s.netting_set = sets[n];
        s.dEE_dxd = (up_d[n] - base[n]) / shocks.rate;
        s.dEE_dxf = (up_f[n] - base[n]) / shocks.rate;
        s.dEE_dX = (up_x[n] - base[n]) / dX;
        r.counterparty.dEE_dxd += s.dEE_dxd;
        r.counterparty.dEE_dxf += s.dEE_dxf;
        r.counterparty.dEE_dX += s.dEE_dX;
        r.netting.push_back(s);
    }
    return r;
}

}  // namespace ccr
