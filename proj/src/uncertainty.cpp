#include "eou/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace eou {

namespace {

std::array<double, 5> to_array(const EllipticalParams& p) {
    return {p.alpha1, p.beta1, p.alpha2, p.beta2, p.sigma2};
}

double percentile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    double pos = q * (v.size() - 1);
    auto lo = static_cast<size_t>(std::floor(pos));
    auto hi = static_cast<size_t>(std::ceil(pos));
    double frac = pos - lo;
    return v[lo] * (1.0 - frac) + v[hi] * frac;
}

double sample_sd(const std::vector<double>& v) {
    double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / (v.size() - 1));
}

} // namespace

BootstrapResult bootstrap(const SpectralData& sd, const FitResult& base_fit,
                          const FitSpec& spec, const BootstrapConfig& cfg) {
    if (!base_fit.converged)
        throw validation_error("bootstrap: base fit did not converge");
    if (cfg.n_boot < 2)
        throw validation_error("bootstrap: n_boot must be >= 2");

    std::vector<double> shat =
        cfg.spectral_estimator == SpectralEstimator::epanechnikov
            ? smooth_periodogram(sd, cfg.bandwidth)
            : sd.periodogram;

    // Refits start at the point estimate; the bootstrapped landscape is a
    // perturbation of the base one.
    FitSpec boot_spec = spec;
    boot_spec.likelihood = Likelihood::marginal;
    boot_spec.optimizer.init = base_fit.geo;
    boot_spec.optimizer.restarts = 1;

    int n = sd.grid.n;
    std::vector<std::array<double, 5>> draws(cfg.n_boot);
    std::vector<char> ok(cfg.n_boot, 0);

    auto run_one = [&](int b) {
        CounterRng rng(cfg.seed, 0x0B00757A00ULL + b);
        SpectralData boot = sd;
        for (int i = 0; i < n; ++i) {
            double e = -std::log(rng.uniform(i)); // unit-mean exponential
            boot.periodogram[i] = shat[i] * e;
        }
        try {
            FitResult fr = fit(boot, boot_spec);
            if (!fr.converged) return;
            GeometricParams g = fr.geo;
            g.psi = base_fit.psi_hat; // psi is not re-estimable from a
                                      // phase-free replicate
            EllipticalParams ell =
                boot_spec.model == Model::circular
                    ? EllipticalParams{g.alpha, g.beta, 0.0, 0.0, g.a2, {}}
                    : to_elliptical(g);
            draws[b] = to_array(ell);
            ok[b] = 1;
        } catch (const validation_error&) {
        }
    };

    if (cfg.parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int b = 0; b < cfg.n_boot; ++b) run_one(b);
    } else {
        for (int b = 0; b < cfg.n_boot; ++b) run_one(b);
    }

    BootstrapResult res;
    for (int b = 0; b < cfg.n_boot; ++b)
        if (ok[b]) res.draws.push_back(draws[b]);
    res.n_dropped = cfg.n_boot - static_cast<int>(res.draws.size());
    res.failed = res.n_dropped > cfg.n_boot / 5;
    if (res.draws.size() < 2) {
        res.failed = true;
        return res;
    }

    double alpha = 1.0 - cfg.ci_level;
    for (int k = 0; k < 5; ++k) {
        std::vector<double> col(res.draws.size());
        for (size_t b = 0; b < res.draws.size(); ++b) col[b] = res.draws[b][k];
        res.se[k] = sample_sd(col);
        res.ci_lo[k] = percentile(col, alpha / 2);
        res.ci_hi[k] = percentile(col, 1.0 - alpha / 2);
    }
    return res;
}

McResult run_monte_carlo(const McConfig& cfg) {
    if (cfg.n_reps < 1) throw validation_error("mc: n_reps must be >= 1");
    validate(cfg.true_params, true);

    int n_specs = static_cast<int>(cfg.fit_specs.size());
    std::vector<std::vector<std::array<double, 5>>> est(
        n_specs, std::vector<std::array<double, 5>>(cfg.n_reps));
    std::vector<std::vector<double>> psis(n_specs,
                                          std::vector<double>(cfg.n_reps));
    std::vector<std::vector<double>> eccs(n_specs,
                                          std::vector<double>(cfg.n_reps));
    std::vector<std::vector<char>> ok(n_specs,
                                      std::vector<char>(cfg.n_reps, 0));

    auto run_one = [&](int rep) {
        SimConfig sim;
        sim.n_out = cfg.n;
        sim.delta_out = cfg.delta;
        sim.substeps = cfg.substeps;
        sim.seed = mix64(cfg.seed) + static_cast<std::uint64_t>(rep);
        ComplexSeries series = simulate(cfg.true_params, sim);
        SpectralData sd_sub = dft(series, /*mean_subtract=*/true);
        SpectralData sd_raw; // computed lazily if some spec wants it
        bool have_raw = false;
        for (int s = 0; s < n_specs; ++s) {
            const FitSpec& spec = cfg.fit_specs[s];
            const SpectralData* sd = &sd_sub;
            if (!spec.mean_subtract) {
                if (!have_raw) {
                    sd_raw = dft(series, false);
                    have_raw = true;
                }
                sd = &sd_raw;
            }
            try {
                FitResult fr = fit(*sd, spec);
                if (!fr.converged) continue;
                est[s][rep] = to_array(fr.ell);
                psis[s][rep] = fr.psi_hat;
                eccs[s][rep] =
                    std::sqrt(1.0 - std::pow(fr.geo.rho, 4.0));
                ok[s][rep] = 1;
            } catch (const validation_error&) {
            }
        }
    };

    if (cfg.parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int rep = 0; rep < cfg.n_reps; ++rep) run_one(rep);
    } else {
        for (int rep = 0; rep < cfg.n_reps; ++rep) run_one(rep);
    }

    auto truth = to_array(cfg.true_params);
    McResult out;
    out.per_spec.resize(n_specs);
    for (int s = 0; s < n_specs; ++s) {
        McMethodResult& m = out.per_spec[s];
        for (int rep = 0; rep < cfg.n_reps; ++rep) {
            if (!ok[s][rep]) {
                ++m.n_failed;
                continue;
            }
            m.estimates.push_back(est[s][rep]);
            m.psi_hats.push_back(psis[s][rep]);
            m.ecc_hats.push_back(eccs[s][rep]);
        }
        size_t nr = m.estimates.size();
        if (nr == 0) continue;
        for (int k = 0; k < 5; ++k) {
            double sum = 0.0, ss = 0.0;
            for (const auto& e : m.estimates) {
                double d = e[k] - truth[k];
                sum += d;
                ss += d * d;
            }
            double denom = std::abs(truth[k]);
            m.bias_pct[k] = 100.0 * (sum / nr) / truth[k];
            m.rmse_pct[k] = 100.0 * std::sqrt(ss / nr) / denom;
            if (nr > 1) {
                double mean = sum / nr;
                double var = 0.0;
                for (const auto& e : m.estimates) {
                    double d = e[k] - truth[k] - mean;
                    var += d * d;
                }
                m.se_pct[k] = 100.0 * std::sqrt(var / (nr - 1)) / denom;
            }
        }
    }
    return out;
}

std::vector<double> kernel_density(const std::vector<double>& samples,
                                   const std::vector<double>& grid) {
    if (samples.size() < 2)
        throw validation_error("kernel_density: need at least 2 samples");
    double sd = sample_sd(samples);
    if (!(sd > 0.0))
        throw validation_error("kernel_density: degenerate (zero-variance) samples");

    std::vector<double> sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    double q1 = percentile(sorted, 0.25);
    double q3 = percentile(sorted, 0.75);
    double iqr = q3 - q1;
    double a = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
    double bw = 0.9 * a * std::pow(static_cast<double>(samples.size()), -0.2);

    std::vector<double> out(grid.size(), 0.0);
    double norm = 1.0 / (samples.size() * bw * std::sqrt(2.0 * M_PI));
    for (size_t i = 0; i < grid.size(); ++i) {
        double acc = 0.0;
        for (double x : samples) {
            double u = (grid[i] - x) / bw;
            acc += std::exp(-0.5 * u * u);
        }
        out[i] = norm * acc;
    }
    return out;
}

} // namespace eou
