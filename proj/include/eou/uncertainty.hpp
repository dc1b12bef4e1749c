#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "eou/whittle.hpp"

namespace eou {

enum class SpectralEstimator { raw_periodogram, epanechnikov };

struct BootstrapConfig {
    int n_boot = 100;
    SpectralEstimator spectral_estimator = SpectralEstimator::raw_periodogram;
    double bandwidth = 0.07; // radians, used by the epanechnikov estimator
    std::uint64_t seed = 0;
    double ci_level = 0.95;
    bool parallel = true;
};

// Per elliptical parameter {alpha1, beta1, alpha2, beta2, sigma2}.
struct BootstrapResult {
    std::array<double, 5> se{};      // sample standard deviation of the draws
    std::array<double, 5> ci_lo{};   // percentile interval at ci_level
    std::array<double, 5> ci_hi{};
    std::vector<std::array<double, 5>> draws;
    int n_dropped = 0;
    bool failed = false; // more than 20% of replicates dropped
};

// Dahlhaus frequency-domain bootstrap: multiply a spectral estimate by
// iid unit-mean exponentials per Fourier frequency and refit with the
// marginal likelihood on the same bands. psi is held at the point estimate
// when mapping draws to {alpha2, beta2}.
BootstrapResult bootstrap(const SpectralData& sd, const FitResult& base_fit,
                          const FitSpec& spec, const BootstrapConfig& cfg);

struct McConfig {
    int n_reps = 200;
    EllipticalParams true_params;
    int n = 1759;
    double delta = 1.0;
    int substeps = 100;
    std::vector<FitSpec> fit_specs;
    std::uint64_t seed = 0;
    bool parallel = true;
};

struct McMethodResult {
    std::array<double, 5> bias_pct{}; // 100*mean(est-true)/true
    std::array<double, 5> rmse_pct{};
    std::array<double, 5> se_pct{};   // 100*std(est)/true
    std::vector<std::array<double, 5>> estimates; // converged replicates
    std::vector<double> psi_hats;
    std::vector<double> ecc_hats; // model-based sqrt(1-rho^4)
    int n_failed = 0;
};

struct McResult {
    std::vector<McMethodResult> per_spec;
};

McResult run_monte_carlo(const McConfig& cfg);

// Gaussian-kernel density (Silverman bandwidth) of percentage deviations.
std::vector<double> kernel_density(const std::vector<double>& samples,
                                   const std::vector<double>& grid);

} // namespace eou
