#include "eou/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <fftw3.h>

namespace eou {

namespace {

// Forward FFT, sum_{s=0..n-1} in[s] e^{-i 2 pi j s / n}.
std::vector<std::complex<double>> fft(
    const std::vector<std::complex<double>>& in, int sign) {
    int n = static_cast<int>(in.size());
    std::vector<std::complex<double>> out(n);
    fftw_plan plan = fftw_plan_dft_1d(
        n,
        reinterpret_cast<fftw_complex*>(
            const_cast<std::complex<double>*>(in.data())),
        reinterpret_cast<fftw_complex*>(out.data()), sign,
        FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    return out;
}

// Grid index -> signed Fourier index j such that omega_j = 2 pi j/(n delta).
int signed_index(const FrequencyGrid& grid, int i) {
    return -((grid.n + 1) / 2) + 1 + i;
}

} // namespace

SpectralData dft(const ComplexSeries& series, bool mean_subtract) {
    int n = static_cast<int>(series.values.size());
    if (n < 2) throw validation_error("dft: need at least 2 samples");

    std::vector<std::complex<double>> z = series.values;
    if (mean_subtract) {
        std::complex<double> mean{0.0, 0.0};
        for (const auto& v : z) mean += v;
        mean /= static_cast<double>(n);
        for (auto& v : z) v -= mean;
    }

    auto fz = fft(z, FFTW_FORWARD);
    std::vector<std::complex<double>> zc(n);
    for (int i = 0; i < n; ++i) zc[i] = std::conj(z[i]);
    auto fzc = fft(zc, FFTW_FORWARD);

    SpectralData sd;
    sd.grid = fourier_grid(n, series.delta);
    sd.j_z.resize(n);
    sd.j_zconj.resize(n);
    sd.periodogram.resize(n);
    double scale = std::sqrt(series.delta / n);
    for (int i = 0; i < n; ++i) {
        int j = signed_index(sd.grid, i);
        int m = ((j % n) + n) % n;
        // The paper's sum runs t = 1..n, which shifts the usual 0-based FFT
        // by one sample of phase.
        std::complex<double> phase = std::polar(1.0, -2.0 * M_PI * j / n);
        sd.j_z[i] = scale * phase * fz[m];
        sd.j_zconj[i] = scale * phase * fzc[m];
        sd.periodogram[i] = std::norm(sd.j_z[i]);
    }
    return sd;
}

ComplexSeries inverse_dft(const SpectralData& sd, double t0) {
    int n = sd.grid.n;
    std::vector<std::complex<double>> fz(n);
    double scale = std::sqrt(sd.grid.delta / n);
    for (int i = 0; i < n; ++i) {
        int j = signed_index(sd.grid, i);
        int m = ((j % n) + n) % n;
        std::complex<double> phase = std::polar(1.0, -2.0 * M_PI * j / n);
        fz[m] = sd.j_z[i] / (scale * phase);
    }
    auto z = fft(fz, FFTW_BACKWARD);
    ComplexSeries out;
    out.delta = sd.grid.delta;
    out.t0 = t0;
    out.values.resize(n);
    for (int i = 0; i < n; ++i) out.values[i] = z[i] / static_cast<double>(n);
    return out;
}

std::vector<int> band_indices(const FrequencyGrid& grid,
                              const std::vector<Band>& bands) {
    std::vector<int> idx;
    for (int i = 0; i < grid.n; ++i) {
        double w = grid.omegas[i];
        for (const auto& b : bands) {
            if (w >= b.lo && w <= b.hi) {
                idx.push_back(i);
                break;
            }
        }
    }
    return idx;
}

double peak_frequency(const SpectralData& sd, const Band& band) {
    auto idx = band_indices(sd.grid, {band});
    if (idx.empty())
        throw validation_error("peak_frequency: band contains no grid point");
    int best = idx[0];
    for (int i : idx) {
        double a = sd.periodogram[i], b = sd.periodogram[best];
        double wa = sd.grid.omegas[i], wb = sd.grid.omegas[best];
        if (a > b ||
            (a == b && (std::abs(wa) < std::abs(wb) ||
                        (std::abs(wa) == std::abs(wb) && wa < wb))))
            best = i;
    }
    return sd.grid.omegas[best];
}

ComplexSeries boxcar_bandpass(const ComplexSeries& series,
                              const std::vector<Band>& bands) {
    SpectralData sd = dft(series, /*mean_subtract=*/false);
    std::vector<char> keep(sd.grid.n, 0);
    for (int i : band_indices(sd.grid, bands)) keep[i] = 1;
    for (int i = 0; i < sd.grid.n; ++i)
        if (!keep[i]) sd.j_z[i] = {0.0, 0.0};
    return inverse_dft(sd, series.t0);
}

std::vector<double> smooth_periodogram(const SpectralData& sd,
                                       double bandwidth) {
    int n = sd.grid.n;
    double spacing = 2.0 * M_PI / (n * sd.grid.delta);
    int reach = static_cast<int>(std::floor(bandwidth / spacing));
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) {
        double num = 0.0, den = 0.0;
        for (int k = -reach; k <= reach; ++k) {
            double u = (k * spacing) / bandwidth;
            if (std::abs(u) > 1.0) continue;
            double w = 0.75 * (1.0 - u * u);
            int j = ((i + k) % n + n) % n; // wrap across +/- Nyquist
            num += w * sd.periodogram[j];
            den += w;
        }
        out[i] = den > 0.0 ? num / den : sd.periodogram[i];
    }
    return out;
}

} // namespace eou
