#pragma once

#include <complex>
#include <vector>

#include "eou/sampling.hpp"
#include "eou/spectral.hpp"

namespace eou {

struct Band {
    double lo = 0.0;
    double hi = 0.0; // inclusive interval [lo, hi], radians per time unit
};

// Scaled vector DFT of a series and its conjugate on the canonical Fourier
// grid: J(w) = sqrt(delta/n) * sum_{t=1..n} Z_t e^{-i w t delta}.
struct SpectralData {
    FrequencyGrid grid;
    std::vector<std::complex<double>> j_z;
    std::vector<std::complex<double>> j_zconj;
    std::vector<double> periodogram; // |j_z|^2
};

// mean_subtract removes the sample mean before transforming (used for
// fitting; raw spectra keep it).
SpectralData dft(const ComplexSeries& series, bool mean_subtract = false);

// Inverse of dft (without mean re-addition); reproduces the series.
ComplexSeries inverse_dft(const SpectralData& sd, double t0 = 0.0);

// Grid frequency in the band maximizing the periodogram; ties broken toward
// smaller |omega|, then toward negative omega.
double peak_frequency(const SpectralData& sd, const Band& band);

// Zeroes DFT coefficients outside the union of bands and inverse-transforms.
ComplexSeries boxcar_bandpass(const ComplexSeries& series,
                              const std::vector<Band>& bands);

// Epanechnikov-kernel smoothing of the periodogram; frequencies wrap
// circularly across +/- Nyquist.
std::vector<double> smooth_periodogram(const SpectralData& sd,
                                       double bandwidth);

// Indices of grid frequencies inside the union of bands.
std::vector<int> band_indices(const FrequencyGrid& grid,
                              const std::vector<Band>& bands);

} // namespace eou
