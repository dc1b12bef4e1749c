#pragma once

#include <array>
#include <optional>
#include <vector>

#include "eou/fourier.hpp"

namespace eou {

enum class Model { elliptical, circular, elliptical_fixed_beta };
enum class Likelihood { full, marginal };

struct OptimizerConfig {
    int max_iters = 2000;    // objective evaluations per start
    double tol_rel = 1e-10;  // convergence on objective spread
    int restarts = 3;        // perturbed restarts beyond the first start
    std::optional<GeometricParams> init; // unset: moment-style auto init
};

struct FitSpec {
    Model model = Model::elliptical;
    double fixed_beta = 0.0; // used by elliptical_fixed_beta
    Likelihood likelihood = Likelihood::marginal;
    std::vector<Band> bands; // empty: all frequencies
    int k_max = 10;
    bool mean_subtract = true; // drops omega = 0 from the sum
    OptimizerConfig optimizer;
};

struct FitResult {
    GeometricParams geo;
    EllipticalParams ell;
    double psi_hat = 0.0;
    double loglik = 0.0;
    bool converged = false;
    int n_freqs_used = 0;
    // alpha, beta, rho, psi, a2 — true when the optimum sits at (or
    // numerically against) a bound of its transformed coordinate.
    std::array<bool, 5> boundary_flags{};
};

// Whittle pseudo-likelihoods evaluated over spec.bands with aliased
// spectra. A non-positive spectral determinant yields -inf.
double loglik_full(const SpectralData& sd, const GeometricParams& g,
                   const FitSpec& spec);
double loglik_marginal(const SpectralData& sd, const GeometricParams& g,
                       const FitSpec& spec);

// Maximizes the selected objective by Nelder-Mead over transformed
// coordinates. For the marginal path psi is set by estimate_orientation at
// the fitted peak.
FitResult fit(const SpectralData& sd, const FitSpec& spec);

// Non-parametric orientation psi_hat = (arg J_Z(w_max) + arg J_Z(-w_max))/2,
// wrapped into [-pi/2, pi/2]. Both +/- w_max must be grid frequencies.
double estimate_orientation(const SpectralData& sd, double omega_max);

// Non-parametric eccentricity
//   2 sqrt(|J_Z(w)J_Z(-w)|) / (|J_Z(w)| + |J_Z(-w)|) at w = omega_max.
double estimate_eccentricity_np(const SpectralData& sd, double omega_max);

} // namespace eou
