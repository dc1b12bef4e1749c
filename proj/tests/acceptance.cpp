// Acceptance suite. Each criterion is selectable by its number on the
// command line ("5_6" runs the shared Monte Carlo block) and prints one
// PASS/FAIL line per criterion.

#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstring>
#include <iostream>
#include <string>
#include <vector>

#include "eou/dataio.hpp"
#include "eou/uncertainty.hpp"

using namespace eou;
using cd = std::complex<double>;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::cout << "criterion " << criterion << ": "
              << (pass ? "PASS" : "FAIL");
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << std::endl;
    if (!pass) ++g_failures;
}

EllipticalParams fig1_left() {
    EllipticalParams p;
    p.alpha1 = 0.02;
    p.beta1 = 1.0;
    p.alpha2 = -0.5;
    p.beta2 = -0.3;
    p.sigma2 = 2.0;
    p.r = implied_r(p);
    return p;
}

EllipticalParams fig1_right() {
    EllipticalParams p;
    p.alpha1 = 0.002;
    p.beta1 = 0.5;
    p.alpha2 = 0.3;
    p.beta2 = 0.3;
    p.sigma2 = 0.15;
    p.r = implied_r(p);
    return p;
}

GeometricParams random_geo(const CounterRng& rng, std::uint64_t& c) {
    GeometricParams g;
    g.alpha = 0.001 + 2.0 * rng.uniform(c++);
    g.beta = (rng.uniform(c++) < 0.5 ? -1.0 : 1.0) *
             (0.05 + 3.0 * rng.uniform(c++));
    g.rho = 0.05 + 0.94 * rng.uniform(c++);
    g.psi = M_PI * (rng.uniform(c++) - 0.5);
    g.a2 = 0.01 + 10.0 * rng.uniform(c++);
    return g;
}

double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// ---- criterion 1: mapping round trip ---------------------------------------

void criterion_1() {
    CounterRng rng(0xC1, 0);
    std::uint64_t c = 0;
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        GeometricParams g = random_geo(rng, c);
        GeometricParams h = to_geometric(to_elliptical(g));
        worst = std::max(worst, rel_err(h.alpha, g.alpha));
        worst = std::max(worst, rel_err(h.beta, g.beta));
        worst = std::max(worst, rel_err(h.rho, g.rho));
        worst = std::max(worst, rel_err(h.a2, g.a2));
        double dpsi = std::remainder(h.psi - g.psi, M_PI);
        worst = std::max(worst, std::abs(dpsi));
    }
    double r_err =
        std::max(std::abs(implied_r(fig1_left()) - cd(0.6, 1.0)),
                 std::abs(implied_r(fig1_right()) - cd(-0.09, -0.09)));
    bool pass = worst <= 1e-10 && r_err <= 1e-12;
    report(1, pass,
           "max round-trip err " + std::to_string(worst) + ", r err " +
               std::to_string(r_err));
}

// ---- criterion 2: spectral oracle equivalence -------------------------------

void criterion_2() {
    CounterRng rng(0xC2, 0);
    std::uint64_t c = 0;
    double worst = 0.0;
    for (int set = 0; set < 100; ++set) {
        GeometricParams g = random_geo(rng, c);
        for (int k = 0; k < 4096; ++k) {
            double w = -10.0 + 20.0 * (k + 0.5) / 4096.0;
            SpectralValue sv = appendix_b_oracle(g, w);
            worst = std::max(worst, rel_err(psd(g, w), sv.s_pos));
            worst = std::max(worst,
                             std::abs(comp_spectrum(g, w) - sv.r_val) /
                                 (std::abs(sv.r_val) + 1e-300));
        }
    }
    // rho = 1 collapses to the circular density
    GeometricParams circ;
    circ.alpha = 0.02;
    circ.beta = 1.0;
    circ.rho = 1.0;
    circ.psi = 0.0;
    circ.a2 = 2.0;
    double circ_err = 0.0;
    for (int k = 0; k < 512; ++k) {
        double w = -6.0 + 12.0 * k / 511.0;
        circ_err = std::max(circ_err,
                            rel_err(psd(circ, w), psd_complex_ou(circ, w)));
    }
    bool pass = worst <= 1e-12 && circ_err == 0.0;
    report(2, pass,
           "max oracle err " + std::to_string(worst) + ", circular err " +
               std::to_string(circ_err));
}

// ---- criterion 3: autocovariance vs numerical inversion ---------------------

// Numerical inverse transform of the power spectrum. The 1/omega^2 tail is
// removed with a matched c/(1+omega^2) term whose transform is known, so a
// finite grid converges fast.
cd numeric_autocov(const GeometricParams& g, double tau) {
    double ir = 1.0 / g.rho;
    double cp = (ir + g.rho) * (ir + g.rho);
    double cm = (ir - g.rho) * (ir - g.rho);
    double c_tail = 0.25 * g.a2 * (cp + cm);

    const double w_max = 64.0;
    const double h = g.alpha / 200.0;
    const auto m = static_cast<long>(std::ceil(2.0 * w_max / h));
    cd acc(0.0, 0.0);
    for (long i = 0; i <= m; ++i) {
        double w = -w_max + 2.0 * w_max * i / m;
        double f = psd(g, w) - c_tail / (1.0 + w * w);
        double weight = (i == 0 || i == m) ? 0.5 : (i % 2 ? 2.0 : 1.0);
        // composite Simpson weights 1,4,2,...,4,1 scaled by h/3; the odd
        // pattern here is 0.5,2,1,2,...,0.5 of h*2/3 which is the same
        acc += weight * f * std::polar(1.0, w * tau);
    }
    acc *= (2.0 * w_max / m) * (2.0 / 3.0) / (2.0 * M_PI);
    // transform of c/(1+w^2) is pi * c * e^{-|tau|}
    acc += 0.5 * c_tail * std::exp(-std::abs(tau));
    return acc;
}

void criterion_3() {
    auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (const EllipticalParams& p : {fig1_left(), fig1_right()}) {
        GeometricParams g = to_geometric(p);
        for (double tau : {0.0, 1.0, 2.0, 5.0}) {
            cd closed = autocovariance(g, tau);
            cd numeric = numeric_autocov(g, tau);
            worst = std::max(worst,
                             std::abs(numeric - closed) / std::abs(closed));
        }
    }
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    bool pass = worst <= 1e-6 && secs < 5.0;
    report(3, pass,
           "max rel err " + std::to_string(worst) + ", " +
               std::to_string(secs) + " s");
}

// ---- criterion 4: simulated spectrum vs aliased density ---------------------

void criterion_4() {
    EllipticalParams p = fig1_left();
    GeometricParams g = to_geometric(p);
    const int n = 1024;
    const int reps = 500;

    std::vector<double> mean_pgram(n, 0.0);
    FrequencyGrid grid = fourier_grid(n, 1.0);
    for (int r = 0; r < reps; ++r) {
        SimConfig sim;
        sim.n_out = n;
        sim.delta_out = 1.0;
        // At the default 100 substeps the Euler scheme's weak-order-1 bias
        // in the damping (beta^2 dt / 2, about 25% of alpha here) dominates
        // the comparison; 1000 substeps puts it well below the tolerance.
        sim.substeps = 1000;
        sim.seed = 0xC4000 + r;
        ComplexSeries s = simulate(p, sim);
        SpectralData sd = dft(s);
        for (int i = 0; i < n; ++i) mean_pgram[i] += sd.periodogram[i] / reps;
    }

    // Region-aggregated periodogram-to-density ratios. Pointwise agreement
    // at the peak is not expected at this step size (the Euler scheme
    // under-damps slightly); the banded averages are the stable statistic.
    double in_sum = 0.0, out_sum = 0.0;
    int in_cnt = 0, out_cnt = 0;
    for (int i = 0; i < n; ++i) {
        double w = grid.omegas[i];
        if (w == 0.0) continue;
        double ratio = mean_pgram[i] / aliased_psd(g, w, 1.0, 10);
        bool in_band = std::abs(w - g.beta) < 0.3 || std::abs(w + g.beta) < 0.3;
        if (in_band) {
            in_sum += ratio;
            ++in_cnt;
        } else {
            out_sum += ratio;
            ++out_cnt;
        }
    }
    double in_dev = std::abs(in_sum / in_cnt - 1.0);
    double out_dev = std::abs(out_sum / out_cnt - 1.0);
    bool pass = in_dev < 0.05 && out_dev < 0.15;
    report(4, pass,
           "near-peak mean ratio dev " + std::to_string(in_dev) +
               ", elsewhere " + std::to_string(out_dev));
}

// ---- criteria 5 and 6: estimator bias/RMSE + orientation/eccentricity -------

void criterion_5_6() {
    McConfig cfg;
    cfg.true_params = fig1_left();
    cfg.n_reps = 200;
    cfg.n = 1759;
    cfg.delta = 1.0;
    cfg.seed = 0xC501;

    FitSpec full_band;  // marginal, all frequencies
    FitSpec narrow;
    narrow.bands = {{-0.897, -0.725}, {0.725, 0.897}};
    cfg.fit_specs = {full_band, narrow};

    McResult res = run_monte_carlo(cfg);
    const McMethodResult& fb = res.per_spec[0];
    const McMethodResult& nb = res.per_spec[1];

    const double env[5] = {35.0, 3.0, 8.0, 10.0, 12.0}; // a1 b1 a2 b2 s2
    bool pass5 = true;
    std::string detail;
    const char* names[5] = {"a1", "b1", "a2", "b2", "s2"};
    for (int k = 0; k < 5; ++k) {
        if (std::abs(fb.bias_pct[k]) > env[k] || fb.rmse_pct[k] > env[k])
            pass5 = false;
        detail += std::string(names[k]) + " bias " +
                  std::to_string(fb.bias_pct[k]) + " rmse " +
                  std::to_string(fb.rmse_pct[k]) + "; ";
    }
    double nb_s2_rmse = nb.rmse_pct[4];
    double nb_b1_rmse = nb.rmse_pct[1];
    if (!(nb_s2_rmse >= 15.0 && nb_s2_rmse <= 35.0 && nb_b1_rmse <= 3.0))
        pass5 = false;
    detail += "narrow s2 rmse " + std::to_string(nb_s2_rmse) + ", b1 rmse " +
              std::to_string(nb_b1_rmse);
    report(5, pass5, detail);

    double psi_mean = 0.0, ecc_mean = 0.0;
    for (double v : fb.psi_hats) psi_mean += v;
    for (double v : fb.ecc_hats) ecc_mean += v;
    psi_mean /= fb.psi_hats.size();
    ecc_mean /= fb.ecc_hats.size();
    bool pass6 = std::abs(psi_mean - 0.51519) < 0.05 &&
                 std::abs(ecc_mean - 0.85828) < 0.03;
    report(6, pass6,
           "mean psi " + std::to_string(psi_mean) + ", mean ecc " +
               std::to_string(ecc_mean));
}

// ---- criterion 7: bootstrap SE calibration against Monte Carlo --------------

void criterion_7() {
    EllipticalParams truth = fig1_left();
    const int n_series = 200;

    FitSpec spec; // marginal full-band
    std::vector<std::array<double, 5>> mc_est;
    std::array<std::array<double, 5>, 2> se_sum{};
    std::array<int, 2> se_count{};

    for (int s = 0; s < n_series; ++s) {
        SimConfig sim;
        sim.n_out = 1759;
        sim.delta_out = 1.0;
        sim.seed = mix64(0xC7) + static_cast<std::uint64_t>(s);
        ComplexSeries series = simulate(truth, sim);
        SpectralData sd = dft(series, true);
        FitResult fr = fit(sd, spec);
        if (!fr.converged) continue;
        mc_est.push_back({fr.ell.alpha1, fr.ell.beta1, fr.ell.alpha2,
                          fr.ell.beta2, fr.ell.sigma2});
        for (int e = 0; e < 2; ++e) {
            BootstrapConfig bc;
            bc.n_boot = 100;
            bc.seed = mix64(0xC7B007) + s;
            bc.spectral_estimator = e == 0
                                        ? SpectralEstimator::raw_periodogram
                                        : SpectralEstimator::epanechnikov;
            BootstrapResult br = bootstrap(sd, fr, spec, bc);
            if (br.failed) continue;
            for (int k = 0; k < 5; ++k) se_sum[e][k] += br.se[k];
            ++se_count[e];
        }
    }

    std::array<double, 5> mc_se{};
    size_t nr = mc_est.size();
    for (int k = 0; k < 5; ++k) {
        double mean = 0.0;
        for (const auto& e : mc_est) mean += e[k];
        mean /= nr;
        double var = 0.0;
        for (const auto& e : mc_est) var += (e[k] - mean) * (e[k] - mean);
        mc_se[k] = std::sqrt(var / (nr - 1));
    }

    // Bootstrap calibration against Monte Carlo for b1 a2 b2 s2. The raw
    // periodogram variant is conservative (roughly 2x for the peak-shape
    // parameters, because reweighting the periodogram compounds its own
    // sampling noise); the smoothed variant tracks the Monte Carlo SEs.
    bool pass = true;
    std::string detail;
    const double bound[2] = {2.5, 1.6};
    const char* tag[2] = {"pgram", "epan"};
    for (int e = 0; e < 2; ++e) {
        for (int k = 1; k < 5; ++k) {
            double boot = se_sum[e][k] / se_count[e];
            double factor =
                boot > mc_se[k] ? boot / mc_se[k] : mc_se[k] / boot;
            if (factor > bound[e]) pass = false;
            detail += std::string(tag[e]) + std::to_string(k) + "=" +
                      std::to_string(factor) + " ";
        }
    }
    int smaller = 0;
    for (int k = 0; k < 5; ++k)
        if (se_sum[1][k] / se_count[1] < se_sum[0][k] / se_count[0])
            ++smaller;
    if (smaller < 4) pass = false;
    detail += "epanechnikov smaller for " + std::to_string(smaller) + "/5";
    report(7, pass, detail);
}

// ---- criterion 8: proper case AR(1) mapping ----------------------------------

void criterion_8() {
    EllipticalParams p;
    p.alpha1 = 0.02;
    p.beta1 = 1.0;
    p.sigma2 = 2.0;
    ComplexAR1Params ar = proper_ar1_map(p, 1.0);
    cd lambda_true = ar.lambda * std::polar(1.0, ar.zeta);

    const int n = 1000000;
    ComplexSeries s = simulate_exact(to_geometric(p), n, 1.0, 0xC8);

    cd num(0, 0);
    double den = 0.0;
    for (int t = 0; t + 1 < n; ++t) {
        num += std::conj(s.values[t]) * s.values[t + 1];
        den += std::norm(s.values[t]);
    }
    cd lambda_hat = num / den;

    double resid = 0.0;
    for (int t = 0; t + 1 < n; ++t)
        resid += std::norm(s.values[t + 1] - lambda_hat * s.values[t]);
    double innov_var = resid / (n - 1);

    double se_lambda = std::sqrt(ar.sigma2_ar / den);
    double se_innov = ar.sigma2_ar / std::sqrt(static_cast<double>(n));

    double lam_dev = std::abs(lambda_hat - lambda_true);
    double innov_dev = std::abs(innov_var - ar.sigma2_ar);
    bool pass = lam_dev < 3.0 * se_lambda && innov_dev < 3.0 * se_innov;
    report(8, pass,
           "lag-1 dev " + std::to_string(lam_dev) + " vs 3se " +
               std::to_string(3.0 * se_lambda) + ", innovation dev " +
               std::to_string(innov_dev) + " vs 3se " +
               std::to_string(3.0 * se_innov));
}

// ---- criterion 9: polar-motion snapshot --------------------------------------

void criterion_9() {
    ComplexSeries s = read_series_csv(std::string(EOU_DATA_DIR) +
                                      "/polar_motion.csv");
    bool shape_ok = s.values.size() == 1759 && rel_err(s.delta, 0.1) < 1e-6;
    SpectralData sd = dft(s, true);

    FitSpec ch;
    ch.model = Model::circular;
    ch.bands = {{2.0 * M_PI * -0.97, 2.0 * M_PI * -0.70}};
    FitResult cf = fit(sd, ch);
    double a1 = cf.geo.alpha;
    double b1_cpy = cf.geo.beta / (2.0 * M_PI);
    double s2 = cf.geo.a2; // circular: sigma2 = a2

    FitSpec an;
    an.model = Model::elliptical_fixed_beta;
    an.fixed_beta = -2.0 * M_PI;
    an.bands = {{2.0 * M_PI * -1.03, 2.0 * M_PI * -0.97},
                {2.0 * M_PI * 0.97, 2.0 * M_PI * 1.03}};
    FitResult af = fit(sd, an);
    double ecc = std::sqrt(1.0 - std::pow(af.geo.rho, 4.0));

    double spacing = 2.0 * M_PI / (sd.grid.n * sd.grid.delta);
    double w_annual = std::round(2.0 * M_PI / spacing) * spacing;
    double ecc_np = estimate_eccentricity_np(sd, w_annual);

    bool pass = shape_ok && cf.converged && af.converged &&
                a1 > 0.0167 && a1 < 0.102 &&
                b1_cpy > -0.847 && b1_cpy < -0.835 &&
                s2 > 119.0 && s2 < 266.0 &&
                ecc > 0.639 && ecc < 0.915 &&
                std::abs(af.psi_hat - 0.125) < 0.03 &&
                std::abs(ecc_np - 0.530) < 0.03;
    report(9, pass,
           "a1 " + std::to_string(a1) + ", b1 " + std::to_string(b1_cpy) +
               " cpy, s2 " + std::to_string(s2) + ", ecc " +
               std::to_string(ecc) + ", psi " + std::to_string(af.psi_hat) +
               ", ecc_np " + std::to_string(ecc_np));
}

// ---- criterion 10: equivariance ----------------------------------------------

void criterion_10() {
    CounterRng rng(0xC10, 0);
    std::uint64_t c = 0;
    bool pass = true;
    std::string detail;
    for (int d = 0; d < 20 && pass; ++d) {
        GeometricParams g;
        g.alpha = 0.05 + 0.45 * rng.uniform(c++);
        g.beta = (rng.uniform(c++) < 0.5 ? -1.0 : 1.0) *
                 (0.5 + 2.0 * rng.uniform(c++));
        g.rho = 0.4 + 0.55 * rng.uniform(c++);
        g.psi = M_PI * (rng.uniform(c++) - 0.5);
        g.a2 = 0.5 + 4.5 * rng.uniform(c++);
        ComplexSeries s = simulate_exact(g, 1024, 1.0, 0xD0 + d);

        double scale = 0.5 + 3.0 * rng.uniform(c++);
        double phi = 2.0 * M_PI * (rng.uniform(c++) - 0.5);
        ComplexSeries t = s;
        for (cd& z : t.values) z *= scale * std::polar(1.0, phi);

        FitSpec spec;
        FitResult a = fit(dft(s, true), spec);
        FitResult b = fit(dft(t, true), spec);
        // A boundary optimum (e.g. rho pinned at 1) is reported as not
        // converged; equivariance must still hold, so only a disagreement
        // between the two runs is a failure.
        if (a.converged != b.converged) {
            pass = false;
            detail = "convergence flags differ on dataset " +
                     std::to_string(d);
            break;
        }

        double e1 = rel_err(b.geo.alpha, a.geo.alpha);
        double e2 = rel_err(b.geo.beta, a.geo.beta);
        double e3 = rel_err(b.geo.rho, a.geo.rho);
        double e4 = rel_err(b.geo.a2, scale * scale * a.geo.a2);
        double epsi =
            std::abs(std::remainder(b.psi_hat - a.psi_hat - phi, M_PI));
        if (e1 > 1e-6 || e2 > 1e-6 || e3 > 1e-6 || e4 > 1e-6 ||
            epsi > 1e-9) {
            pass = false;
            detail = "dataset " + std::to_string(d) + ": errs " +
                     std::to_string(e1) + " " + std::to_string(e2) + " " +
                     std::to_string(e3) + " " + std::to_string(e4) +
                     " psi " + std::to_string(epsi);
        }
    }
    report(10, pass, detail);
}

} // namespace

int main(int argc, char** argv) {
    std::string which = argc > 1 ? argv[1] : "all";
    auto want = [&](const char* id) { return which == "all" || which == id; };

    if (want("1")) criterion_1();
    if (want("2")) criterion_2();
    if (want("3")) criterion_3();
    if (want("4")) criterion_4();
    if (want("5_6")) criterion_5_6();
    if (want("7")) criterion_7();
    if (want("8")) criterion_8();
    if (want("9")) criterion_9();
    if (want("10")) criterion_10();
    return g_failures == 0 ? 0 : 1;
}
