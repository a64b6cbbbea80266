#pragma once

#include <atomic>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ccr/model.hpp"
#include "ccr/quadrature.hpp"

namespace ccr {

enum class TradeKind { fra, irs, fx_forward, ccs };
enum class Frequency { annual, semiannual, quarterly };

std::string_view to_string(TradeKind k);
std::string_view to_string(Frequency f);
std::string_view to_string(Currency c);
TradeKind parse_trade_kind(std::string_view s);
Frequency parse_frequency(std::string_view s);
Currency parse_currency(std::string_view s);

double year_fraction(Frequency f);

struct CashFlow {
    double time = 0.0;
    double amount = 0.0;
};

/// Single-currency stream of deterministic cash flows.
///
/// A floating leg is carried as a principal `floating_notional` received at
/// the next reset date on or after t (the single-curve par identity), so the
/// set of live flows depends on the valuation time.
struct Leg {
    Currency currency = Currency::domestic;
    std::vector<CashFlow> flows;
    double floating_notional = 0.0;
    std::vector<double> reset_dates;

    /// Flows still to be paid at t (payment time >= t), in time order.
    std::vector<CashFlow> flows_at(double t) const;
    double last_payment() const;
};

/// Contract terms. Signs: a positive notional pays fixed (FRA, IRS), buys
/// foreign currency forward (FXForward) or receives the foreign leg (CCS).
/// Notionals of FXForward and CCS are in foreign units; FRA and IRS in the
/// trade currency.
struct TradeTerms {
    TradeKind kind = TradeKind::irs;
    Currency currency = Currency::domestic;
    double notional = 0.0;
    double fixed_rate = 0.0;
    double foreign_fixed_rate = 0.0;
    double fx_rate = 0.0;
    double start = 0.0;
    double maturity = 0.0;
    Frequency frequency = Frequency::annual;
};

struct Trade {
    std::string id;
    std::string netting_set;
    TradeTerms terms;
    std::vector<Leg> legs;

    /// Absolute notional in domestic units at t = 0.
    double reporting_notional(double X0) const;
    double last_payment() const;
};

/// Schedule from start to maturity with the stub at the front. Dates are
/// generated on a monthly lattice so that trades share payment times.
std::vector<double> payment_schedule(double start, double maturity, Frequency f);

Trade build_trade(std::string id, const TradeTerms& terms, std::string netting_set = "NS1");

/// Tally of leg-pricing calls; one call values one leg at one state.
/// The COS moment pass is kept apart in `moment_pass` and not in total().
struct PricingCounter {
    std::atomic<std::uint64_t> domestic{0};
    std::atomic<std::uint64_t> foreign{0};
    std::atomic<std::uint64_t> moment_pass{0};

    std::uint64_t total() const { return domestic.load() + foreign.load(); }
    void reset() {
        domestic = 0;
        foreign = 0;
        moment_pass = 0;
    }
};

double value_leg(const Leg& leg, const ModelParams& params, double t, double x);

/// Domestic MtM at state [x_d, x_f, log X].
double value_trade(const Trade& trade, const ModelParams& params, double t, const Vec3& state);

/// Values of a set of trades on the J^3 quadrature grid, one tensor per
/// netting set (index as in TensorGrid).
///
/// Domestic legs are priced on the J-point x_d axis and foreign legs on the
/// J^2 (x_d, x_f) plane; FX conversion happens on the summed foreign value.
struct GridValuation {
    std::vector<std::string> netting_sets;
    std::vector<std::vector<double>> values;
};

GridValuation portfolio_value_grid(std::span<const Trade> trades,
                                   const std::vector<std::string>& netting_sets,
                                   const ModelParams& params, double t, const TensorGrid& grid,
                                   const StateDistribution& dist, PricingCounter* counter = nullptr);

/// Deterministic netting-set values at the (degenerate) mean state.
std::vector<double> portfolio_value_at(std::span<const Trade> trades,
                                       const std::vector<std::string>& netting_sets,
                                       const ModelParams& params, double t, const Vec3& state);

}  // namespace ccr
