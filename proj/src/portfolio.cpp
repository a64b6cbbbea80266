#include "ccr/portfolio.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ccr/random.hpp"

namespace ccr {

std::vector<std::string> Portfolio::netting_sets() const {
    std::vector<std::string> ids;
    for (const Trade& t : trades)
        if (std::find(ids.begin(), ids.end(), t.netting_set) == ids.end()) ids.push_back(t.netting_set);
    return ids;
}

std::map<std::string, std::vector<std::string>> Portfolio::netting_map() const {
    std::map<std::string, std::vector<std::string>> m;
    for (const Trade& t : trades) m[t.netting_set].push_back(t.id);
    return m;
}

double Portfolio::total_notional(double X0) const {
    double s = 0.0;
    for (const Trade& t : trades) s += t.reporting_notional(X0);
    return s;
}

double Portfolio::max_maturity() const {
    double m = 0.0;
    for (const Trade& t : trades) m = std::max(m, t.last_payment());
    return m;
}

void GeneratorSpec::validate() const {
    if (n_trades < 1) throw std::invalid_argument("generator: n_trades must be >= 1");
    if (!(min_maturity > 0.0 && max_maturity >= min_maturity))
        throw std::invalid_argument("generator: empty maturity range");
    if (!(min_notional > 0.0 && max_notional >= min_notional))
        throw std::invalid_argument("generator: empty notional range");
    if (!(foreign_probability >= 0.0 && foreign_probability <= 1.0))
        throw std::invalid_argument("generator: foreign_probability must lie in [0, 1]");
    double w = 0.0;
    for (double k : kind_weights) {
        if (!(k >= 0.0)) throw std::invalid_argument("generator: negative kind weight");
        w += k;
    }
    if (!(w > 0.0)) throw std::invalid_argument("generator: all kind weights are zero");
}

double par_rate(const DiscountCurve& curve, const std::vector<double>& schedule) {
    double annuity = 0.0;
    for (std::size_t i = 1; i < schedule.size(); ++i)
        annuity += (schedule[i] - schedule[i - 1]) * curve.discount(schedule[i]);
    return (curve.discount(schedule.front()) - curve.discount(schedule.back())) / annuity;
}

Portfolio generate_portfolio(const GeneratorSpec& spec, const ModelParams& params) {
    spec.validate();
    Xoshiro256 rng(spec.seed);

    const double wsum = std::accumulate(spec.kind_weights.begin(), spec.kind_weights.end(), 0.0);
    const long m_lo = std::max(1L, std::lround(std::ceil(spec.min_maturity * 12.0 - 1e-9)));
    const long m_hi = std::max(m_lo, std::lround(std::floor(spec.max_maturity * 12.0 + 1e-9)));
    constexpr Frequency freqs[] = {Frequency::annual, Frequency::semiannual, Frequency::quarterly};

    Portfolio pf;
    pf.trades.reserve(static_cast<std::size_t>(spec.n_trades));
    for (int n = 0; n < spec.n_trades; ++n) {
        // Fixed draw order per trade keeps files stable under spec tweaks.
        double u_kind = rng.uniform() * wsum;
        double u_ccy = rng.uniform();
        long months = m_lo + static_cast<long>(rng.below(static_cast<std::uint64_t>(m_hi - m_lo + 1)));
        Frequency freq = freqs[rng.below(3)];
        double size = rng.uniform(spec.min_notional, spec.max_notional);
        double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
        double jitter = rng.uniform(-1.0, 1.0);

        TradeKind kind = TradeKind::ccs;
        double acc = 0.0;
        for (int k = 0; k < 4; ++k) {
            acc += spec.kind_weights[static_cast<std::size_t>(k)];
            if (u_kind < acc) {
                kind = static_cast<TradeKind>(k);
                break;
            }
        }

        TradeTerms terms;
        terms.kind = kind;
        terms.frequency = freq;
        terms.maturity = static_cast<double>(months) / 12.0;
        terms.currency = u_ccy < spec.foreign_probability ? Currency::foreign : Currency::domestic;

        switch (kind) {
            case TradeKind::fra: {
                long period = std::min(months, std::lround(year_fraction(freq) * 12.0));
                terms.start = static_cast<double>(months - period) / 12.0;
                const DiscountCurve& c = terms.currency == Currency::domestic ? params.curve_d : params.curve_f;
                terms.fixed_rate = par_rate(c, {terms.start, terms.maturity}) + spec.rate_jitter * jitter;
                terms.notional = sign * size / (terms.currency == Currency::foreign ? params.X0 : 1.0);
                break;
            }
            case TradeKind::irs: {
                terms.start = 0.0;
                const DiscountCurve& c = terms.currency == Currency::domestic ? params.curve_d : params.curve_f;
                terms.fixed_rate = par_rate(c, payment_schedule(0.0, terms.maturity, freq)) + spec.rate_jitter * jitter;
                terms.notional = sign * size / (terms.currency == Currency::foreign ? params.X0 : 1.0);
                break;
            }
            case TradeKind::fx_forward: {
                double fwd = params.X0 * params.curve_f.discount(terms.maturity) / params.curve_d.discount(terms.maturity);
                terms.fx_rate = fwd * (1.0 + spec.fx_jitter * jitter);
                terms.notional = sign * size / params.X0;
                break;
            }
            case TradeKind::ccs: {
                terms.start = 0.0;
                auto sched = payment_schedule(0.0, terms.maturity, freq);
                terms.fixed_rate = par_rate(params.curve_d, sched) + spec.rate_jitter * jitter;
                terms.foreign_fixed_rate = par_rate(params.curve_f, sched);
                terms.fx_rate = params.X0;
                terms.notional = sign * size / params.X0;
                break;
            }
        }
        if (kind == TradeKind::fx_forward || kind == TradeKind::ccs) terms.currency = Currency::domestic;

        pf.trades.push_back(build_trade("T" + std::to_string(n + 1), terms, "NS1"));
    }
    return pf;
}

PartitionMode parse_partition_mode(std::string_view s) {
    if (s == "single_netting_set" || s == "single") return PartitionMode::single_netting_set;
    if (s == "by_contract_type") return PartitionMode::by_contract_type;
    throw std::invalid_argument("unknown partition mode '" + std::string(s) + "'");
}

Portfolio partition_counterparty(Portfolio portfolio, PartitionMode mode) {
    for (Trade& t : portfolio.trades)
        t.netting_set = mode == PartitionMode::single_netting_set ? std::string("NS1")
                                                                  : std::string(to_string(t.terms.kind));
    return portfolio;
}

}  // namespace ccr
