#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ccr/instruments.hpp"

namespace ccr {

struct Portfolio {
    std::vector<Trade> trades;

    /// Netting-set ids in order of first appearance.
    std::vector<std::string> netting_sets() const;
    std::map<std::string, std::vector<std::string>> netting_map() const;

    /// Sum of absolute trade notionals in domestic units at t = 0.
    double total_notional(double X0) const;
    /// Last payment date across all trades (T_max).
    double max_maturity() const;
};

/// Random book of linear IR/FX trades.
///
/// Maturities are whole months drawn uniformly from the maturity range;
/// IRS and CCS start spot, FRAs cover the last period before maturity.
/// Fixed rates are par at t = 0 plus a uniform jitter, FX strikes are the
/// forward times a uniform relative jitter. Notionals are drawn in domestic
/// units and converted at X0 for foreign-denominated trades; the sign
/// (direction) is a fair coin.
struct GeneratorSpec {
    int n_trades = 100;
    std::uint64_t seed = 42;
    std::array<double, 4> kind_weights{1.0, 1.0, 1.0, 1.0};  // FRA, IRS, FXForward, CCS
    double foreign_probability = 0.5;
    double min_maturity = 1.0;
    double max_maturity = 15.0;
    double min_notional = 500.0;
    double max_notional = 2500.0;
    double rate_jitter = 0.01;
    double fx_jitter = 0.01;

    void validate() const;
};

Portfolio generate_portfolio(const GeneratorSpec& spec, const ModelParams& params);

enum class PartitionMode { single_netting_set, by_contract_type };

PartitionMode parse_partition_mode(std::string_view s);

Portfolio partition_counterparty(Portfolio portfolio, PartitionMode mode);

/// Fixed rate that makes the fixed leg worth the float leg at t = 0.
double par_rate(const DiscountCurve& curve, const std::vector<double>& schedule);

}  // namespace ccr
