#pragma once

#include <complex>
#include <vector>

#include "eou/params.hpp"

namespace eou {

// Fourier frequency grid (2*pi/(n*delta)) * (-ceil(n/2)+1, ..., floor(n/2)),
// strictly increasing, in radians per time unit.
struct FrequencyGrid {
    std::vector<double> omegas;
    double delta = 1.0;
    int n = 0;
};

FrequencyGrid fourier_grid(int n, double delta);

// Entries of the 2x2 spectral matrix at one frequency:
//   [ s_pos  r_val ; conj(r_val)  s_neg ].
struct SpectralValue {
    double s_pos = 0.0;
    double s_neg = 0.0;
    std::complex<double> r_val{0.0, 0.0};
};

// Complex-OU (rho = 1) power spectral density A^2 / (alpha^2 + (omega-beta)^2).
double psd_complex_ou(const GeometricParams& g, double omega);

// Elliptical-OU power spectral density
//   (A^2/4) [ (1/rho+rho)^2/(alpha^2+(omega-beta)^2)
//           + (1/rho-rho)^2/(alpha^2+(omega+beta)^2) ].
double psd(const GeometricParams& g, double omega);

// Complementary spectrum
//   (A^2/4)(1/rho^2-rho^2) [1/(alpha^2+(omega-beta)^2)
//                          + 1/(alpha^2+(omega+beta)^2)] e^{i 2 psi}.
std::complex<double> comp_spectrum(const GeometricParams& g, double omega);

// Truncated aliased sums over k in [-k_max, k_max] of the spectra at
// omega + 2 pi k / delta.
double aliased_psd(const GeometricParams& g, double omega, double delta,
                   int k_max);
std::complex<double> aliased_comp_spectrum(const GeometricParams& g,
                                           double omega, double delta,
                                           int k_max);

// Aliased 2x2 spectral matrix entries at +/- omega.
SpectralValue spectral_matrix(const GeometricParams& g, double omega,
                              double delta, int k_max);

// Closed-form autocovariance s_z(tau) = E{z(t) z*(t+tau)} and complementary
// autocovariance r_z(tau) = E{z(t) z(t+tau)}.
std::complex<double> autocovariance(const GeometricParams& g, double tau);
std::complex<double> comp_autocovariance(const GeometricParams& g, double tau);

// Independent spectral pipeline: complex-OU Cartesian spectra, rotation and
// stretch of the bivariate components, recombination into S_z(+/-omega) and
// R_z(omega). Used as an oracle against psd/comp_spectrum.
SpectralValue appendix_b_oracle(const GeometricParams& g, double omega);

} // namespace eou
