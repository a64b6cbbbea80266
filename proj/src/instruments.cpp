#include "ccr/instruments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ccr {

std::string_view to_string(TradeKind k) {
    switch (k) {
        case TradeKind::fra: return "FRA";
        case TradeKind::irs: return "IRS";
        case TradeKind::fx_forward: return "FXForward";
        case TradeKind::ccs: return "CCS";
    }
    return "?";
}

std::string_view to_string(Frequency f) {
    switch (f) {
        case Frequency::annual: return "annual";
        case Frequency::semiannual: return "semiannual";
        case Frequency::quarterly: return "quarterly";
    }
    return "?";
}

std::string_view to_string(Currency c) { return c == Currency::domestic ? "domestic" : "foreign"; }

TradeKind parse_trade_kind(std::string_view s) {
    if (s == "FRA") return TradeKind::fra;
    if (s == "IRS") return TradeKind::irs;
    if (s == "FXForward") return TradeKind::fx_forward;
    if (s == "CCS") return TradeKind::ccs;
    throw std::invalid_argument("unknown trade kind '" + std::string(s) + "'");
}

Frequency parse_frequency(std::string_view s) {
    if (s == "annual") return Frequency::annual;
    if (s == "semiannual") return Frequency::semiannual;
    if (s == "quarterly") return Frequency::quarterly;
    throw std::invalid_argument("unknown frequency '" + std::string(s) + "'");
}

Currency parse_currency(std::string_view s) {
    if (s == "domestic") return Currency::domestic;
    if (s == "foreign") return Currency::foreign;
    throw std::invalid_argument("unknown currency '" + std::string(s) + "'");
}

double year_fraction(Frequency f) {
    switch (f) {
        case Frequency::annual: return 1.0;
        case Frequency::semiannual: return 0.5;
        case Frequency::quarterly: return 0.25;
    }
    return 1.0;
}

namespace {

int months_per_period(Frequency f) {
    switch (f) {
        case Frequency::annual: return 12;
        case Frequency::semiannual: return 6;
        case Frequency::quarterly: return 3;
    }
    return 12;
}

bool on_month_lattice(double t, long& months) {
    double m = t * 12.0;
    months = std::lround(m);
    return std::abs(m - static_cast<double>(months)) < 1e-9;
}

}  // namespace

std::vector<double> payment_schedule(double start, double maturity, Frequency f) {
    if (!(start >= 0.0) || !(maturity > start))
        throw std::invalid_argument("invalid schedule: need maturity > start >= 0");

    std::vector<double> dates;
    long m_start = 0;
    long m_mat = 0;
    if (on_month_lattice(start, m_start) && on_month_lattice(maturity, m_mat)) {
        const long step = months_per_period(f);
        for (long m = m_mat; m > m_start; m -= step) dates.push_back(static_cast<double>(m) / 12.0);
        dates.push_back(static_cast<double>(m_start) / 12.0);
    } else {
        const double tau = year_fraction(f);
        for (int k = 0;; ++k) {
            double d = maturity - k * tau;
            if (d <= start + 1e-9) break;
            dates.push_back(d);
        }
        dates.push_back(start);
    }
    std::reverse(dates.begin(), dates.end());
    return dates;
}

std::vector<CashFlow> Leg::flows_at(double t) const {
    std::vector<CashFlow> out;
    out.reserve(flows.size() + 1);
    if (floating_notional != 0.0) {
        auto it = std::lower_bound(reset_dates.begin(), reset_dates.end(), t);
        if (it != reset_dates.end()) out.push_back({*it, floating_notional});
    }
    for (const CashFlow& cf : flows)
        if (cf.time >= t) out.push_back(cf);
    std::stable_sort(out.begin(), out.end(),
                     [](const CashFlow& x, const CashFlow& y) { return x.time < y.time; });
    return out;
}

double Leg::last_payment() const {
    double last = reset_dates.empty() ? 0.0 : reset_dates.back();
    for (const CashFlow& cf : flows) last = std::max(last, cf.time);
    return last;
}

double Trade::reporting_notional(double X0) const {
    const bool fx = terms.kind == TradeKind::fx_forward || terms.kind == TradeKind::ccs;
    const bool foreign = fx || terms.currency == Currency::foreign;
    return std::abs(terms.notional) * (foreign ? X0 : 1.0);
}

double Trade::last_payment() const {
    double last = 0.0;
    for (const Leg& l : legs) last = std::max(last, l.last_payment());
    return last;
}

namespace {

Leg fixed_coupons(Currency ccy, const std::vector<double>& sched, double notional, double rate) {
    Leg leg;
    leg.currency = ccy;
    for (std::size_t i = 1; i < sched.size(); ++i)
        leg.flows.push_back({sched[i], notional * rate * (sched[i] - sched[i - 1])});
    return leg;
}

}  // namespace

Trade build_trade(std::string id, const TradeTerms& terms, std::string netting_set) {
    if (!std::isfinite(terms.notional) || !std::isfinite(terms.fixed_rate) ||
        !std::isfinite(terms.foreign_fixed_rate) || !std::isfinite(terms.fx_rate))
        throw std::invalid_argument("trade " + id + ": non-finite terms");

    Trade trade;
    trade.id = std::move(id);
    trade.netting_set = std::move(netting_set);
    trade.terms = terms;
    const double N = terms.notional;

    switch (terms.kind) {
        case TradeKind::fra: {
            if (!(terms.start >= 0.0) || !(terms.maturity > terms.start))
                throw std::invalid_argument("trade " + trade.id + ": FRA needs maturity > start >= 0");
            // Float received over [T1, T2] is N at T1 less N at T2.
            Leg leg;
            leg.currency = terms.currency;
            leg.floating_notional = N;
            leg.reset_dates = {terms.start, terms.maturity};
            double tau = terms.maturity - terms.start;
            leg.flows.push_back({terms.maturity, -N * (1.0 + terms.fixed_rate * tau)});
            trade.legs.push_back(std::move(leg));
            break;
        }
        case TradeKind::irs: {
            auto sched = payment_schedule(terms.start, terms.maturity, terms.frequency);
            Leg flt;
            flt.currency = terms.currency;
            flt.floating_notional = N;
            flt.reset_dates = sched;
            flt.flows.push_back({sched.back(), -N});
            trade.legs.push_back(std::move(flt));
            trade.legs.push_back(fixed_coupons(terms.currency, sched, -N, terms.fixed_rate));
            break;
        }
        case TradeKind::fx_forward: {
            if (!(terms.maturity > 0.0))
                throw std::invalid_argument("trade " + trade.id + ": FX forward needs maturity > 0");
            Leg f;
            f.currency = Currency::foreign;
            f.flows.push_back({terms.maturity, N});
            Leg d;
            d.currency = Currency::domestic;
            d.flows.push_back({terms.maturity, -N * terms.fx_rate});
            trade.legs.push_back(std::move(d));
            trade.legs.push_back(std::move(f));
            break;
        }
        case TradeKind::ccs: {
            auto sched = payment_schedule(terms.start, terms.maturity, terms.frequency);
            const double Nd = N * terms.fx_rate;
            Leg d = fixed_coupons(Currency::domestic, sched, -Nd, terms.fixed_rate);
            d.flows.insert(d.flows.begin(), {sched.front(), Nd});
            d.flows.back().amount -= Nd;
            Leg f = fixed_coupons(Currency::foreign, sched, N, terms.foreign_fixed_rate);
            f.flows.insert(f.flows.begin(), {sched.front(), -N});
            f.flows.back().amount += N;
            trade.legs.push_back(std::move(d));
            trade.legs.push_back(std::move(f));
            break;
        }
    }
    return trade;
}

double value_leg(const Leg& leg, const ModelParams& params, double t, double x) {
    double v = 0.0;
    for (const CashFlow& cf : leg.flows_at(t))
        v += cf.amount * zcb_price(params, leg.currency, t, cf.time, x);
    return v;
}

double value_trade(const Trade& trade, const ModelParams& params, double t, const Vec3& state) {
    double dom = 0.0;
    double fgn = 0.0;
    for (const Leg& leg : trade.legs) {
        if (leg.currency == Currency::domestic)
            dom += value_leg(leg, params, t, state[0]);
        else
            fgn += value_leg(leg, params, t, state[1]);
    }
    return dom + std::exp(state[2]) * fgn;
}

namespace {

std::size_t netting_index(const std::vector<std::string>& sets, const std::string& id) {
    auto it = std::find(sets.begin(), sets.end(), id);
    if (it == sets.end()) throw std::invalid_argument("trade in unknown netting set '" + id + "'");
    return static_cast<std::size_t>(it - sets.begin());
}

// ZCB prices on a set of states, one row per distinct payment time.
class ZcbTable {
public:
    ZcbTable(const ModelParams& p, Currency ccy, double t, std::vector<double> times,
             std::span<const double> states)
        : times_(std::move(times)), width_(states.size()), prices_(times_.size() * width_) {
        for (std::size_t r = 0; r < times_.size(); ++r) {
            ZcbCoefficients c = zcb_coefficients(p, ccy, t, times_[r]);
            double* row = prices_.data() + r * width_;
            for (std::size_t s = 0; s < width_; ++s) row[s] = std::exp(c.log_a - c.b * states[s]);
        }
    }

    const double* row(double T) const {
        auto it = std::lower_bound(times_.begin(), times_.end(), T);
        return prices_.data() + static_cast<std::size_t>(it - times_.begin()) * width_;
    }

private:
    std::vector<double> times_;
    std::size_t width_;
    std::vector<double> prices_;
};

std::vector<double> distinct_times(std::span<const Trade> trades, Currency ccy, double t) {
    std::vector<double> times;
    for (const Trade& tr : trades)
        for (const Leg& leg : tr.legs)
            if (leg.currency == ccy)
                for (const CashFlow& cf : leg.flows_at(t)) times.push_back(cf.time);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    return times;
}

}  // namespace

GridValuation portfolio_value_grid(std::span<const Trade> trades,
                                   const std::vector<std::string>& netting_sets,
                                   const ModelParams& params, double t, const TensorGrid& grid,
                                   const StateDistribution& dist, PricingCounter* counter) {
    const std::size_t J = static_cast<std::size_t>(grid.size());
    auto n = grid.nodes();
    const Mat3& L = dist.chol;
    const Vec3& m = dist.mean;
    const Vec3& s = dist.scale;

    // x_d depends on the first normal coordinate only, x_f on the first two.
    std::vector<double> xd(J);
    std::vector<double> xf(J * J);
    for (std::size_t i = 0; i < J; ++i) {
        xd[i] = m[0] + s[0] * L[0][0] * n[i];
        for (std::size_t j = 0; j < J; ++j) xf[i * J + j] = m[1] + s[1] * (L[1][0] * n[i] + L[1][1] * n[j]);
    }

    ZcbTable dom_zcb(params, Currency::domestic, t, distinct_times(trades, Currency::domestic, t), xd);
    ZcbTable fgn_zcb(params, Currency::foreign, t, distinct_times(trades, Currency::foreign, t), xf);

    const std::size_t nsets = netting_sets.size();
    std::vector<std::vector<double>> dom(nsets, std::vector<double>(J, 0.0));
    std::vector<std::vector<double>> fgn(nsets, std::vector<double>(J * J, 0.0));
    std::vector<bool> has_foreign(nsets, false);

    std::uint64_t dom_calls = 0;
    std::uint64_t fgn_calls = 0;
    for (const Trade& tr : trades) {
        const std::size_t ns = netting_index(netting_sets, tr.netting_set);
        for (const Leg& leg : tr.legs) {
            auto flows = leg.flows_at(t);
            if (flows.empty()) continue;
            if (leg.currency == Currency::domestic) {
                double* acc = dom[ns].data();
                for (const CashFlow& cf : flows) {
                    const double* p = dom_zcb.row(cf.time);
                    for (std::size_t i = 0; i < J; ++i) acc[i] += cf.amount * p[i];
                }
                dom_calls += J;
            } else {
                double* acc = fgn[ns].data();
                for (const CashFlow& cf : flows) {
                    const double* p = fgn_zcb.row(cf.time);
                    for (std::size_t q = 0; q < J * J; ++q) acc[q] += cf.amount * p[q];
                }
                fgn_calls += J * J;
                has_foreign[ns] = true;
            }
        }
    }
    if (counter) {
        counter->domestic += dom_calls;
        counter->foreign += fgn_calls;
    }

    // Spot FX on the full grid, shared by every netting set.
    std::vector<double> fx(grid.points());
    for (std::size_t i = 0; i < J; ++i)
        for (std::size_t j = 0; j < J; ++j)
            for (std::size_t k = 0; k < J; ++k)
                fx[(i * J + j) * J + k] = std::exp(m[2] + s[2] * (L[2][0] * n[i] + L[2][1] * n[j] + L[2][2] * n[k]));

    GridValuation out;
    out.netting_sets = netting_sets;
    out.values.assign(nsets, std::vector<double>(grid.points()));
    for (std::size_t ns = 0; ns < nsets; ++ns) {
        double* v = out.values[ns].data();
        for (std::size_t i = 0; i < J; ++i)
            for (std::size_t j = 0; j < J; ++j) {
                const double d = dom[ns][i];
                const double f = fgn[ns][i * J + j];
                const std::size_t base = (i * J + j) * J;
                if (has_foreign[ns])
                    for (std::size_t k = 0; k < J; ++k) v[base + k] = d + fx[base + k] * f;
                else
                    for (std::size_t k = 0; k < J; ++k) v[base + k] = d;
            }
    }
    return out;
}

std::vector<double> portfolio_value_at(std::span<const Trade> trades,
                                       const std::vector<std::string>& netting_sets,
                                       const ModelParams& params, double t, const Vec3& state) {
    std::vector<double> v(netting_sets.size(), 0.0);
    for (const Trade& tr : trades) v[netting_index(netting_sets, tr.netting_set)] += value_trade(tr, params, t, state);
    return v;
}

}  // namespace ccr
