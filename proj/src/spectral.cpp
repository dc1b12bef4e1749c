#include "eou/spectral.hpp"

#include <cmath>
#include <tuple>

namespace eou {

FrequencyGrid fourier_grid(int n, double delta) {
    if (n < 1 || !(delta > 0.0))
        throw validation_error("fourier_grid: need n >= 1 and delta > 0");
    FrequencyGrid grid;
    grid.n = n;
    grid.delta = delta;
    grid.omegas.resize(n);
    double step = 2.0 * M_PI / (n * delta);
    int lo = -((n + 1) / 2) + 1; // -ceil(n/2)+1
    for (int i = 0; i < n; ++i) grid.omegas[i] = step * (lo + i);
    return grid;
}

double psd_complex_ou(const GeometricParams& g, double omega) {
    validate(g);
    if (g.rho != 1.0)
        throw validation_error("psd_complex_ou requires rho = 1");
    double dm = omega - g.beta;
    return g.a2 / (g.alpha * g.alpha + dm * dm);
}

double psd(const GeometricParams& g, double omega) {
    double a2 = g.alpha * g.alpha;
    double ir = 1.0 / g.rho;
    double cp = (ir + g.rho) * (ir + g.rho);
    double cm = (ir - g.rho) * (ir - g.rho);
    double dm = omega - g.beta;
    double dp = omega + g.beta;
    return 0.25 * g.a2 * (cp / (a2 + dm * dm) + cm / (a2 + dp * dp));
}

std::complex<double> comp_spectrum(const GeometricParams& g, double omega) {
    double a2 = g.alpha * g.alpha;
    double r2 = g.rho * g.rho;
    double coef = 0.25 * g.a2 * (1.0 / r2 - r2);
    double dm = omega - g.beta;
    double dp = omega + g.beta;
    double bracket = 1.0 / (a2 + dm * dm) + 1.0 / (a2 + dp * dp);
    return coef * bracket * std::polar(1.0, 2.0 * g.psi);
}

double aliased_psd(const GeometricParams& g, double omega, double delta,
                   int k_max) {
    if (k_max < 0) throw validation_error("k_max must be >= 0");
    double shift = 2.0 * M_PI / delta;
    double sum = 0.0;
    for (int k = -k_max; k <= k_max; ++k) sum += psd(g, omega + k * shift);
    return sum;
}

std::complex<double> aliased_comp_spectrum(const GeometricParams& g,
                                           double omega, double delta,
                                           int k_max) {
    if (k_max < 0) throw validation_error("k_max must be >= 0");
    double shift = 2.0 * M_PI / delta;
    std::complex<double> sum{0.0, 0.0};
    for (int k = -k_max; k <= k_max; ++k)
        sum += comp_spectrum(g, omega + k * shift);
    return sum;
}

SpectralValue spectral_matrix(const GeometricParams& g, double omega,
                              double delta, int k_max) {
    SpectralValue v;
    v.s_pos = aliased_psd(g, omega, delta, k_max);
    v.s_neg = aliased_psd(g, -omega, delta, k_max);
    v.r_val = aliased_comp_spectrum(g, omega, delta, k_max);
    // Cauchy-Schwarz across the aliased terms guarantees realizability for
    // any valid parameter set; a violation means an implementation bug.
    if (std::norm(v.r_val) > v.s_pos * v.s_neg * (1.0 + 1e-9))
        throw std::logic_error(
            "spectral_matrix: realizability |R|^2 <= S(w)S(-w) violated");
    return v;
}

std::complex<double> autocovariance(const GeometricParams& g, double tau) {
    double ir = 1.0 / g.rho;
    double cp = (ir + g.rho) * (ir + g.rho);
    double cm = (ir - g.rho) * (ir - g.rho);
    double damp = std::exp(-g.alpha * std::abs(tau));
    std::complex<double> spin = std::polar(1.0, g.beta * tau);
    return (g.a2 / (8.0 * g.alpha)) * damp * (cp * spin + cm * std::conj(spin));
}

std::complex<double> comp_autocovariance(const GeometricParams& g, double tau) {
    double r2 = g.rho * g.rho;
    double coef = g.a2 / (4.0 * g.alpha) * (1.0 / r2 - r2);
    return coef * std::polar(1.0, 2.0 * g.psi) *
           std::exp(-g.alpha * std::abs(tau)) * std::cos(g.beta * tau);
}

SpectralValue appendix_b_oracle(const GeometricParams& g, double omega) {
    using cd = std::complex<double>;
    auto lorentz = [&](double w) {
        double dm = w - g.beta;
        double dp = w + g.beta;
        double a2 = g.alpha * g.alpha;
        return std::pair<double, double>{1.0 / (a2 + dm * dm),
                                         1.0 / (a2 + dp * dp)};
    };

    // Cartesian spectra of the circular (tilde) process.
    auto eval = [&](double w) {
        auto [lm, lp] = lorentz(w);
        double sx = 0.25 * g.a2 * (lm + lp); // S_x~ = S_y~
        cd sxy = cd(0.0, 0.25 * g.a2 * (lm - lp));
        return std::pair<double, cd>{sx, sxy};
    };

    auto rot = [&](double w) {
        auto [sxt, sxyt] = eval(w);
        double syt = sxt;
        double c = std::cos(g.psi), s = std::sin(g.psi);
        double ir2 = 1.0 / (g.rho * g.rho), r2 = g.rho * g.rho;
        double sx = c * c * ir2 * sxt + r2 * s * s * syt -
                    c * s * 2.0 * sxyt.real();
        double sy = s * s * ir2 * sxt + r2 * c * c * syt +
                    c * s * 2.0 * sxyt.real();
        cd sxy = c * s * ir2 * sxt - r2 * c * s * syt + c * c * sxyt -
                 s * s * std::conj(sxyt);
        return std::make_tuple(sx, sy, sxy);
    };

    auto recombine = [&](double w) {
        auto [sx, sy, sxy] = rot(w);
        double sz = sx + sy + 2.0 * sxy.imag();
        cd rz = cd(sx - sy, 0.0) + 2.0 * cd(0.0, 1.0) * sxy.real();
        return std::pair<double, cd>{sz, rz};
    };

    SpectralValue v;
    auto [szp, rzp] = recombine(omega);
    auto [szn, rzn] = recombine(-omega);
    (void)rzn;
    v.s_pos = szp;
    v.s_neg = szn;
    v.r_val = rzp;
    return v;
}

} // namespace eou
