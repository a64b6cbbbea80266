#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ccr/cos_engine.hpp"
#include "ccr/instruments.hpp"
#include "ccr/model.hpp"
#include "ccr/portfolio.hpp"

namespace ccr {

struct McConfig {
    std::int64_t n_sim = 500'000;
    std::uint64_t seed = 20240607;
    std::int64_t batch = 2048;
    int threads = 1;

    void validate() const;
};

/// Per-path netting-set MtM values; exposures are their floors.
///
/// Paths are generated in fixed-size batches; batch b draws from the
/// xoshiro256** stream (seed, b), so results do not depend on `threads`.
struct ExposurePaths {
    std::vector<std::string> netting_sets;
    std::vector<std::vector<double>> mtm;  // [set][path]

    std::size_t size() const { return mtm.empty() ? 0 : mtm.front().size(); }
    std::vector<double> netting_exposure(std::size_t set) const;
    /// Sum over netting sets of floored values, path by path.
    std::vector<double> counterparty_exposure() const;
};

/// Exact draws of the time-t state followed by full revaluation of every
/// leg on every path.
ExposurePaths simulate_exposures(const Portfolio& pf, const ModelParams& params, double t, const McConfig& cfg,
                                 PricingCounter* counter = nullptr);

/// Raw standard-normal triples used for the paths of simulate_exposures,
/// row-major [path][3]. Exposed for sampler checks.
std::vector<double> draw_normals(const McConfig& cfg);

struct McResult {
    double pfe_hat = 0.0;
    double ee_hat = 0.0;
    double ee_se = 0.0;
    double pfe_lo = 0.0;  // order-statistic confidence band
    double pfe_hi = 0.0;
    double cpu_seconds = 0.0;
};

/// PFE as the ceil(alpha n)-th order statistic, EE as the sample mean with
/// its standard error, and a distribution-free band for the quantile from
/// binomial order-statistic ranks.
McResult estimate_metrics(std::span<const double> exposures, double alpha = 0.975, double confidence = 0.99);

struct McSensitivity {
    EeSensitivity value;
    EeSensitivity se;
};

struct McSensitivityResult {
    std::vector<McSensitivity> netting;
    McSensitivity counterparty;
};

/// Forward-difference EE sensitivities with common random numbers: base
/// and shocked runs share every normal draw.
McSensitivityResult mc_ee_sensitivities(const Portfolio& pf, const ModelParams& params, double t,
                                        const McConfig& cfg, ShockSizes shocks = {});

}  // namespace ccr
