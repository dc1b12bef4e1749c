#include "eou/sampling.hpp"

#include <cmath>

namespace eou {

namespace {

// Lower-triangular Cholesky factor of the real covariance of B ~ CN(0,s2,r):
// Var(Re B) = (s2 + Re r)/2, Var(Im B) = (s2 - Re r)/2, Cov = Im(r)/2.
struct IncrementMap {
    double l11 = 0.0, l21 = 0.0, l22 = 0.0;
    IncrementMap(double sigma2, std::complex<double> r) {
        if (sigma2 < std::abs(r) * (1.0 - 1e-12))
            throw validation_error(
                "no valid complex normal: sigma2 must be >= |r|");
        double v11 = 0.5 * (sigma2 + r.real());
        double v22 = 0.5 * (sigma2 - r.real());
        double cov = 0.5 * r.imag();
        if (v11 > 0.0) {
            l11 = std::sqrt(v11);
            l21 = cov / l11;
            l22 = std::sqrt(std::max(0.0, v22 - l21 * l21));
        } else {
            l11 = l21 = 0.0;
            l22 = std::sqrt(std::max(0.0, v22));
        }
    }
    std::complex<double> apply(double xi1, double xi2) const {
        return {l11 * xi1, l21 * xi1 + l22 * xi2};
    }
};

double default_burn_in(double alpha1, double requested) {
    if (requested >= 0.0) return requested;
    return alpha1 > 0.0 ? 50.0 / alpha1 : 0.0;
}

} // namespace

std::complex<double> sample_increment(double sigma2, std::complex<double> r,
                                      double dt, const CounterRng& rng,
                                      std::uint64_t counter) {
    IncrementMap map(sigma2, r);
    auto [xi1, xi2] = rng.normal_pair(counter);
    return std::sqrt(dt) * map.apply(xi1, xi2);
}

ComplexSeries simulate(const EllipticalParams& p, const SimConfig& cfg) {
    validate(p, /*check_r=*/p.sigma2 > 0.0);
    if (cfg.n_out < 1 || cfg.substeps < 1 || !(cfg.delta_out > 0.0))
        throw validation_error("simulate: invalid SimConfig");

    double dt = cfg.delta_out / cfg.substeps;
    double burn = default_burn_in(p.alpha1, cfg.burn_in);
    auto n_burn = static_cast<std::uint64_t>(std::ceil(burn / dt - 1e-9));

    std::complex<double> z = cfg.z0 ? *cfg.z0
                                    : std::complex<double>{0.0, 0.0};
    std::complex<double> c1{-p.alpha1, p.beta1};
    std::complex<double> c2{-p.alpha2, p.beta2};
    IncrementMap map(p.sigma2, p.r);
    CounterRng rng(cfg.seed, 0);
    double sq = std::sqrt(dt);

    ComplexSeries out;
    out.delta = cfg.delta_out;
    out.t0 = 0.0;
    out.values.reserve(cfg.n_out);

    std::uint64_t total =
        n_burn + static_cast<std::uint64_t>(cfg.n_out) * cfg.substeps;
    std::uint64_t next_record = n_burn + cfg.substeps;
    for (std::uint64_t s = 1; s <= total; ++s) {
        auto [xi1, xi2] = rng.normal_pair(s - 1);
        z += dt * (c1 * z + c2 * std::conj(z)) + sq * map.apply(xi1, xi2);
        if (s == next_record) {
            out.values.push_back(z);
            next_record += cfg.substeps;
        }
    }
    return out;
}

ComplexSeries simulate_bivariate(const GeometricParams& g, const SimConfig& cfg) {
    validate(g);
    if (cfg.n_out < 1 || cfg.substeps < 1 || !(cfg.delta_out > 0.0))
        throw validation_error("simulate_bivariate: invalid SimConfig");

    double dt = cfg.delta_out / cfg.substeps;
    double burn = default_burn_in(g.alpha, cfg.burn_in);
    auto n_burn = static_cast<std::uint64_t>(std::ceil(burn / dt - 1e-9));

    // Tilde (circular) coordinates; the deformation is applied per output
    // sample. z0 is given in deformed coordinates and pulled back.
    double c = std::cos(g.psi), sn = std::sin(g.psi);
    double irho = 1.0 / g.rho;
    auto deform = [&](double xt, double yt) {
        return std::complex<double>{irho * xt * c - g.rho * yt * sn,
                                    irho * xt * sn + g.rho * yt * c};
    };
    double xt = 0.0, yt = 0.0;
    if (cfg.z0) {
        // inverse of QP: P^{-1} Q^T
        double x = cfg.z0->real(), y = cfg.z0->imag();
        xt = g.rho * (c * x + sn * y);
        yt = irho * (-sn * x + c * y);
    }

    double amp = std::sqrt(0.5 * g.a2 * dt);
    CounterRng rng(cfg.seed, 0);

    ComplexSeries out;
    out.delta = cfg.delta_out;
    out.t0 = 0.0;
    out.values.reserve(cfg.n_out);

    std::uint64_t total =
        n_burn + static_cast<std::uint64_t>(cfg.n_out) * cfg.substeps;
    std::uint64_t next_record = n_burn + cfg.substeps;
    for (std::uint64_t s = 1; s <= total; ++s) {
        auto [xi1, xi2] = rng.normal_pair(s - 1);
        double nx = xt + dt * (-g.alpha * xt - g.beta * yt) + amp * xi1;
        double ny = yt + dt * (g.beta * xt - g.alpha * yt) + amp * xi2;
        xt = nx;
        yt = ny;
        if (s == next_record) {
            out.values.push_back(deform(xt, yt));
            next_record += cfg.substeps;
        }
    }
    return out;
}

ComplexSeries simulate_exact(const GeometricParams& g, int n, double delta,
                             std::uint64_t seed) {
    validate(g);
    if (n < 1 || !(delta > 0.0))
        throw validation_error("simulate_exact: need n >= 1, delta > 0");

    CounterRng rng(seed, 0);
    double var0 = g.a2 / (2.0 * g.alpha); // stationary variance of tilde z
    double lam = std::exp(-g.alpha * delta);
    double var_step = var0 * (-std::expm1(-2.0 * g.alpha * delta));
    std::complex<double> phase =
        lam * std::polar(1.0, g.beta * delta);

    double c = std::cos(g.psi), sn = std::sin(g.psi);
    double irho = 1.0 / g.rho;
    auto deform = [&](std::complex<double> zt) {
        return std::complex<double>{
            irho * zt.real() * c - g.rho * zt.imag() * sn,
            irho * zt.real() * sn + g.rho * zt.imag() * c};
    };

    auto [x0, y0] = rng.normal_pair(0);
    std::complex<double> zt =
        std::sqrt(0.5 * var0) * std::complex<double>(x0, y0);

    ComplexSeries out;
    out.delta = delta;
    out.t0 = 0.0;
    out.values.reserve(n);
    out.values.push_back(deform(zt));
    double amp = std::sqrt(0.5 * var_step);
    for (int k = 1; k < n; ++k) {
        auto [xi1, xi2] = rng.normal_pair(k);
        zt = phase * zt + amp * std::complex<double>(xi1, xi2);
        out.values.push_back(deform(zt));
    }
    return out;
}

} // namespace eou
