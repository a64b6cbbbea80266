#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ccr/instruments.hpp"
#include "ccr/model.hpp"
#include "ccr/portfolio.hpp"
#include "ccr/quadrature.hpp"

namespace ccr {

/// Exponential filter sigma(eta) = exp(-alpha eta^p). The default alpha
/// damps the last retained term down to machine epsilon.
struct SpectralFilter {
    int p = 2;
    double alpha = -std::log(std::numeric_limits<double>::epsilon());

    double operator()(double eta) const { return std::exp(-alpha * std::pow(std::abs(eta), p)); }

    /// sigma == 1; recovers the plain partial sum.
    static SpectralFilter identity() { return SpectralFilter{2, 0.0}; }
};

/// Expansion interval [a, b] of the target distribution.
struct CosSupport {
    double a = 0.0;
    double b = 1.0;
    double L = 8.0;
    double mu = 0.0;
    double sigma = 0.0;

    double width() const { return b - a; }
};

/// [mu - L sigma, mu + L sigma]; the lower end moves to 0 for floored targets.
CosSupport cos_support(double mu, double sigma, double L = 8.0, bool floor_a_at_zero = false);

struct Moments {
    double mean = 0.0;
    double stddev = 0.0;
    bool degenerate = false;
};

/// First moment and standard deviation of a grid tensor under the
/// truncated Gaussian quadrature measure (renormalised by the grid mass).
Moments exposure_moments(std::span<const double> values, const TensorGrid& grid);

/// phi(omega) = E[exp(i omega V)] by tensor quadrature, arbitrary frequencies.
std::vector<std::complex<double>> characteristic_function(std::span<const double> values, const TensorGrid& grid,
                                                          std::span<const double> omegas);

/// Same for the equally spaced frequencies k * step, k = 0..K, using a
/// per-point phase rotation instead of K+1 sin/cos evaluations.
std::vector<std::complex<double>> characteristic_function(std::span<const double> values, const TensorGrid& grid,
                                                          double step, int K);

/// A_k = 2/(b-a) Re{phi(k pi/(b-a)) exp(-i k a pi/(b-a))}.
std::vector<double> cos_coefficients(std::span<const std::complex<double>> phi, const CosSupport& support);

enum class ExposureTarget { netting_mtm, counterparty_exposure };

/// Recovered law of a scalar target as a Fourier-cosine series on [a, b].
class CosExpansion {
public:
    CosExpansion(CosSupport support, std::vector<double> coeffs, ExposureTarget target,
                 std::optional<SpectralFilter> filter = std::nullopt);

    const CosSupport& support() const { return support_; }
    const std::vector<double>& coeffs() const { return coeffs_; }
    int terms() const { return static_cast<int>(coeffs_.size()) - 1; }
    ExposureTarget target() const { return target_; }
    const std::optional<SpectralFilter>& filter() const { return filter_; }

    /// Partial sum of the CDF series at e (clamped into [a, b]), not clamped
    /// to [0, 1].
    double partial_cdf(double e) const;
    /// Derivative of partial_cdf: the recovered density.
    double density(double e) const;

private:
    CosSupport support_;
    std::vector<double> coeffs_;
    std::vector<double> weighted_;  // A_k sigma(k/K)
    ExposureTarget target_;
    std::optional<SpectralFilter> filter_;
};

/// CDF of max(V, 0) from an expansion of the unfloored MtM V.
double cdf_netting(const CosExpansion& expansion, double e);

/// Filtered CDF of a counterparty exposure (sum of floored netting sets).
double cdf_counterparty(const CosExpansion& expansion, double e);

struct PfeResult {
    double value = 0.0;
    bool atom = false;       // alpha reached inside the probability mass at zero
    bool no_bracket = false; // CDF never reached alpha inside the support
    int iterations = 0;
};

/// Smallest e with F(e) >= alpha, by first-crossing scan plus safeguarded
/// Newton with bisection fallback.
PfeResult pfe(const CosExpansion& expansion, double alpha = 0.975);

/// E[max(V, 0)] from an expansion of V, integrated in closed form.
double ee(const CosExpansion& expansion);

struct CosSettings {
    int K = 32;
    int J = 40;
    int J_mom = 20;
    double tol = 1e-12;
    double L = 8.0;
    double alpha = 0.975;
    int filter_p = 2;
    double filter_alpha = -std::log(std::numeric_limits<double>::epsilon());

    void validate() const;
    /// K = 150, J = 130, TOL = 1e-12.
    static CosSettings reference();
};

struct NettingSetMetrics {
    std::string netting_set;
    double pfe = 0.0;
    double ee = 0.0;
    bool degenerate = false;
    bool atom = false;
    CosSupport support;
};

struct CounterpartyMetrics {
    double pfe = 0.0;
    double ee = 0.0;  // sum of netting-set EEs
    bool degenerate = false;
    bool atom = false;
    CosSupport support;
    std::vector<NettingSetMetrics> netting;
};

struct EeSensitivity {
    std::string netting_set;
    double dEE_dxd = 0.0;
    double dEE_dxf = 0.0;
    double dEE_dX = 0.0;
};

struct SensitivityResult {
    std::vector<EeSensitivity> netting;
    EeSensitivity counterparty;  // sum over netting sets
};

/// Shock sizes for shock-and-revalue: absolute on the initial short rates,
/// relative on X0.
struct ShockSizes {
    double rate = 1e-4;
    double fx_relative = 0.01;
};

/// Exposure metrics for a portfolio at one date.
///
/// Degenerate dates (t = 0 or a deterministic target) bypass the expansion
/// and return the floored deterministic value.
class CosEngine {
public:
    CosEngine(ModelParams params, CosSettings settings);

    const ModelParams& params() const { return params_; }
    const CosSettings& settings() const { return settings_; }
    const TensorGrid& grid() const { return grid_; }
    const TensorGrid& moment_grid() const { return moment_grid_; }

    std::vector<NettingSetMetrics> netting_metrics(const Portfolio& pf, double t,
                                                   PricingCounter* counter = nullptr) const;
    CounterpartyMetrics counterparty_metrics(const Portfolio& pf, double t,
                                             PricingCounter* counter = nullptr) const;

    /// Per-netting-set expansions of V (empty optional for degenerate sets).
    std::vector<std::optional<CosExpansion>> netting_expansions(const Portfolio& pf, double t,
                                                                PricingCounter* counter = nullptr) const;
    /// Filtered expansion of the counterparty exposure (nullopt if degenerate).
    std::optional<CosExpansion> counterparty_expansion(const Portfolio& pf, double t,
                                                       PricingCounter* counter = nullptr) const;

    /// EE per netting set, netting route.
    std::vector<double> netting_ee(const Portfolio& pf, double t) const;

    SensitivityResult ee_sensitivities(const Portfolio& pf, double t, ShockSizes shocks = {}) const;

private:
    struct NettingState;
    NettingState netting_state(const Portfolio& pf, double t, PricingCounter* counter) const;

    ModelParams params_;
    CosSettings settings_;
    TensorGrid grid_;
    TensorGrid moment_grid_;
};

/// Model with the initial risk factors shocked up by the given amounts.
ModelParams shocked(const ModelParams& p, double d_xd0, double d_xf0, double fx_relative);

}  // namespace ccr
