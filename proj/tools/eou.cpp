// Command-line front end: simulation, spectra, fitting, bootstrap and
// Monte Carlo uncertainty, bandpass filtering, polar-motion ingestion, and
// canned experiment reproduction.
//
// Exit codes: 0 success, 2 usage error, 3 data/validation error,
// 4 non-convergence.

#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "eou/dataio.hpp"
#include "eou/uncertainty.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using json = nlohmann::json;
using namespace eou;
using cd = std::complex<double>;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNoConverge = 4;

// ---- frequency parsing ------------------------------------------------------

// A frequency flag carries an explicit unit suffix: "0.84cpy" (cycles per
// year, converted by 2*pi) or "5.2rad" (radians per time unit, as-is).
double parse_freq(const std::string& text) {
    size_t suffix = text.size();
    double scale;
    if (text.size() > 3 && text.compare(text.size() - 3, 3, "cpy") == 0) {
        suffix = text.size() - 3;
        scale = 2.0 * M_PI;
    } else if (text.size() > 3 && text.compare(text.size() - 3, 3, "rad") == 0) {
        suffix = text.size() - 3;
        scale = 1.0;
    } else {
        throw CLI::ValidationError(
            "frequency '" + text + "' needs a unit suffix: cpy or rad");
    }
    size_t used = 0;
    double v = std::stod(text.substr(0, suffix), &used);
    if (used != suffix)
        throw CLI::ValidationError("cannot parse frequency '" + text + "'");
    return v * scale;
}

// "lo:hiUNIT" or "lo:hiUNIT,lo:hiUNIT,..."; "+-lo:hiUNIT" mirrors the band
// into both spin directions.
std::vector<Band> parse_bands(const std::string& text) {
    std::vector<Band> bands;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        bool mirror = false;
        if (item.rfind("+-", 0) == 0) {
            mirror = true;
            item = item.substr(2);
        }
        size_t colon = item.find(':');
        if (colon == std::string::npos)
            throw CLI::ValidationError("band '" + item + "' must be lo:hiUNIT");
        // the unit suffix may appear on either bound or just the second
        std::string lo_s = item.substr(0, colon);
        std::string hi_s = item.substr(colon + 1);
        std::string unit;
        if (hi_s.size() > 3 &&
            (hi_s.compare(hi_s.size() - 3, 3, "cpy") == 0 ||
             hi_s.compare(hi_s.size() - 3, 3, "rad") == 0))
            unit = hi_s.substr(hi_s.size() - 3);
        if (unit.empty())
            throw CLI::ValidationError("band '" + item +
                                       "' needs a cpy or rad suffix");
        if (lo_s.size() <= 3 ||
            (lo_s.compare(lo_s.size() - 3, 3, "cpy") != 0 &&
             lo_s.compare(lo_s.size() - 3, 3, "rad") != 0))
            lo_s += unit;
        double lo = parse_freq(lo_s);
        double hi = parse_freq(hi_s);
        if (lo > hi) std::swap(lo, hi);
        bands.push_back({lo, hi});
        if (mirror) bands.push_back({-hi, -lo});
    }
    if (bands.empty())
        throw CLI::ValidationError("no bands given");
    return bands;
}

// ---- JSON plumbing ----------------------------------------------------------

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

EllipticalParams load_params(const std::string& path) {
    std::string text = read_file(path);
    json j = json::parse(text);
    if (j.contains("rho")) {
        GeometricParams g = geometric_from_json(text);
        EllipticalParams p = to_elliptical(g);
        p.r = implied_r(p);
        return p;
    }
    return elliptical_from_json(text);
}

json geo_json(const GeometricParams& g) {
    return json{{"alpha", g.alpha}, {"beta", g.beta},  {"rho", g.rho},
                {"psi", g.psi},     {"a2", g.a2}};
}

json ell_json(const EllipticalParams& p) {
    return json{{"alpha1", p.alpha1}, {"beta1", p.beta1},
                {"alpha2", p.alpha2}, {"beta2", p.beta2},
                {"sigma2", p.sigma2}, {"r_re", p.r.real()},
                {"r_im", p.r.imag()}};
}

json fit_json(const FitResult& fr) {
    json j;
    j["geometric"] = geo_json(fr.geo);
    j["elliptical"] = ell_json(fr.ell);
    j["psi_hat"] = fr.psi_hat;
    j["eccentricity"] = std::sqrt(1.0 - std::pow(fr.geo.rho, 4.0));
    j["loglik"] = fr.loglik;
    j["converged"] = fr.converged;
    j["n_freqs_used"] = fr.n_freqs_used;
    j["boundary_flags"] = fr.boundary_flags;
    return j;
}

void emit(const json& j, const std::string& path) {
    std::string text = j.dump(2) + "\n";
    if (path.empty() || path == "-")
        std::cout << text;
    else
        write_text(text, path);
}

// ---- shared fit-spec flags --------------------------------------------------

struct FitFlags {
    std::string model = "elliptical";
    std::string likelihood = "marginal";
    std::string bands;
    std::string fixed_beta;
    int k_max = 10;
    bool keep_mean = false;
    int restarts = 3;

    void attach(CLI::App* cmd) {
        cmd->add_option("--model", model,
                        "elliptical | circular | fixed-beta")
            ->check(CLI::IsMember({"elliptical", "circular", "fixed-beta"}));
        cmd->add_option("--likelihood", likelihood, "full | marginal")
            ->check(CLI::IsMember({"full", "marginal"}));
        cmd->add_option("--bands", bands,
                        "lo:hiUNIT[,lo:hiUNIT...]; prefix +- mirrors the "
                        "band; UNIT is cpy or rad; empty = all frequencies");
        cmd->add_option("--fixed-beta", fixed_beta,
                        "oscillation frequency with unit suffix, for "
                        "--model fixed-beta");
        cmd->add_option("--k-max", k_max,
                        "aliasing truncation (terms k in [-K,K])")
            ->check(CLI::NonNegativeNumber);
        cmd->add_flag("--keep-mean", keep_mean,
                      "skip mean subtraction (keeps the omega=0 ordinate)");
        cmd->add_option("--restarts", restarts,
                        "perturbed optimizer restarts")
            ->check(CLI::NonNegativeNumber);
    }

    FitSpec to_spec() const {
        FitSpec spec;
        if (model == "circular")
            spec.model = Model::circular;
        else if (model == "fixed-beta")
            spec.model = Model::elliptical_fixed_beta;
        spec.likelihood =
            likelihood == "full" ? Likelihood::full : Likelihood::marginal;
        if (!bands.empty()) spec.bands = parse_bands(bands);
        if (spec.model == Model::elliptical_fixed_beta) {
            if (fixed_beta.empty())
                throw CLI::ValidationError(
                    "--model fixed-beta requires --fixed-beta");
            spec.fixed_beta = parse_freq(fixed_beta);
        }
        spec.k_max = k_max;
        spec.mean_subtract = !keep_mean;
        spec.optimizer.restarts = restarts;
        return spec;
    }
};

// ---- subcommand bodies ------------------------------------------------------

int cmd_simulate(const std::string& params_path, int n, double delta,
                 int substeps, std::uint64_t seed, bool exact,
                 const std::string& output) {
    EllipticalParams p = load_params(params_path);
    ComplexSeries s;
    if (exact) {
        s = simulate_exact(to_geometric(p), n, delta, seed);
    } else {
        SimConfig cfg;
        cfg.n_out = n;
        cfg.delta_out = delta;
        cfg.substeps = substeps;
        cfg.seed = seed;
        s = simulate(p, cfg);
    }
    write_series_csv(s, output);
    return 0;
}

int cmd_spectrum(const std::string& params_path, const std::string& input,
                 int n, double delta, int k_max, bool smooth, double bandwidth,
                 const std::string& output) {
    std::ostringstream out;
    out << "omega,power,comp_re,comp_im\n";
    if (!input.empty()) {
        ComplexSeries s = read_series_csv(input);
        SpectralData sd = dft(s);
        std::vector<double> pw =
            smooth ? smooth_periodogram(sd, bandwidth) : sd.periodogram;
        for (int i = 0; i < sd.grid.n; ++i)
            out << format_double(sd.grid.omegas[i]) << ','
                << format_double(pw[i]) << ",0,0\n";
    } else {
        GeometricParams g = to_geometric(load_params(params_path));
        FrequencyGrid grid = fourier_grid(n, delta);
        for (double w : grid.omegas) {
            SpectralValue sv = spectral_matrix(g, w, delta, k_max);
            out << format_double(w) << ',' << format_double(sv.s_pos) << ','
                << format_double(sv.r_val.real()) << ','
                << format_double(sv.r_val.imag()) << '\n';
        }
    }
    write_text(out.str(), output);
    return 0;
}

int cmd_fit(const std::string& input, const FitFlags& flags,
            const std::string& output) {
    FitSpec spec = flags.to_spec();
    ComplexSeries s = read_series_csv(input);
    SpectralData sd = dft(s, spec.mean_subtract);
    FitResult fr = fit(sd, spec);
    emit(fit_json(fr), output);
    return fr.converged ? 0 : kExitNoConverge;
}

int cmd_bootstrap(const std::string& input, const FitFlags& flags, int n_boot,
                  const std::string& estimator, double bandwidth,
                  std::uint64_t seed, double ci, const std::string& output) {
    FitSpec spec = flags.to_spec();
    ComplexSeries s = read_series_csv(input);
    SpectralData sd = dft(s, spec.mean_subtract);
    FitResult fr = fit(sd, spec);
    if (!fr.converged) {
        std::cerr << "point estimate did not converge\n";
        return kExitNoConverge;
    }
    BootstrapConfig cfg;
    cfg.n_boot = n_boot;
    cfg.seed = seed;
    cfg.ci_level = ci;
    cfg.bandwidth = bandwidth;
    cfg.spectral_estimator = estimator == "epanechnikov"
                                 ? SpectralEstimator::epanechnikov
                                 : SpectralEstimator::raw_periodogram;
    BootstrapResult br = bootstrap(sd, fr, spec, cfg);

    json j;
    j["point"] = fit_json(fr);
    const char* names[5] = {"alpha1", "beta1", "alpha2", "beta2", "sigma2"};
    for (int k = 0; k < 5; ++k) {
        j["se"][names[k]] = br.se[k];
        j["ci_lo"][names[k]] = br.ci_lo[k];
        j["ci_hi"][names[k]] = br.ci_hi[k];
    }
    j["n_dropped"] = br.n_dropped;
    j["failed"] = br.failed;
    emit(j, output);
    return br.failed ? kExitNoConverge : 0;
}

json mc_method_json(const McMethodResult& m) {
    const char* names[5] = {"alpha1", "beta1", "alpha2", "beta2", "sigma2"};
    json j;
    for (int k = 0; k < 5; ++k) {
        j["bias_pct"][names[k]] = m.bias_pct[k];
        j["rmse_pct"][names[k]] = m.rmse_pct[k];
        j["se_pct"][names[k]] = m.se_pct[k];
    }
    j["n_failed"] = m.n_failed;
    j["n_used"] = m.estimates.size();
    return j;
}

void write_estimates_csv(const McMethodResult& m, const std::string& path) {
    std::ostringstream out;
    out << "rep,alpha1,beta1,alpha2,beta2,sigma2\n";
    for (size_t r = 0; r < m.estimates.size(); ++r) {
        out << r;
        for (int k = 0; k < 5; ++k)
            out << ',' << format_double(m.estimates[r][k]);
        out << '\n';
    }
    write_text(out.str(), path);
}

int cmd_mc(const std::string& params_path, const FitFlags& flags, int n_reps,
           int n, double delta, int substeps, std::uint64_t seed,
           const std::string& output, const std::string& estimates_csv) {
    McConfig cfg;
    cfg.true_params = load_params(params_path);
    cfg.n_reps = n_reps;
    cfg.n = n;
    cfg.delta = delta;
    cfg.substeps = substeps;
    cfg.seed = seed;
    cfg.fit_specs = {flags.to_spec()};
    McResult res = run_monte_carlo(cfg);
    emit(mc_method_json(res.per_spec[0]), output);
    if (!estimates_csv.empty())
        write_estimates_csv(res.per_spec[0], estimates_csv);
    return 0;
}

int cmd_filter(const std::string& input, const std::string& bands_text,
               const std::string& output) {
    ComplexSeries s = read_series_csv(input);
    ComplexSeries f = boxcar_bandpass(s, parse_bands(bands_text));
    write_series_csv(f, output);
    return 0;
}

int cmd_ingest(const std::string& input, const std::string& columns,
               const std::string& unit, const std::string& output) {
    EopFormat fmt;
    fmt.unit = unit == "arcsec" ? AngleUnit::arcsec : AngleUnit::mas;
    if (!columns.empty()) {
        std::stringstream ss(columns);
        std::string tok;
        std::vector<std::string> names;
        while (std::getline(ss, tok, ',')) names.push_back(tok);
        if (names.size() != 3)
            throw CLI::ValidationError("--columns needs three names");
        for (int pos = 0; pos < 3; ++pos) {
            if (names[pos] == "epoch")
                fmt.columns[0] = pos;
            else if (names[pos] == "x")
                fmt.columns[1] = pos;
            else if (names[pos] == "y")
                fmt.columns[2] = pos;
            else
                throw CLI::ValidationError("--columns names must be a "
                                           "permutation of epoch,x,y");
        }
    }
    std::ifstream in(input);
    if (!in) throw validation_error("cannot open " + input);
    ComplexSeries s = ingest_eop(in, fmt);
    write_series_csv(s, output);
    return 0;
}

// ---- reproduce --------------------------------------------------------------

EllipticalParams benchmark_params() {
    EllipticalParams p;
    p.alpha1 = 0.02;
    p.beta1 = 1.0;
    p.alpha2 = -0.5;
    p.beta2 = -0.3;
    p.sigma2 = 2.0;
    p.r = implied_r(p);
    return p;
}

std::vector<Band> narrowband() {
    return {{-0.897, -0.725}, {0.725, 0.897}};
}

SpectralData polar_dft(const std::string& data, bool mean_subtract) {
    ComplexSeries s = read_series_csv(data);
    return dft(s, mean_subtract);
}

FitSpec chandler_spec() {
    FitSpec spec;
    spec.model = Model::circular;
    spec.likelihood = Likelihood::marginal;
    spec.bands = {{2.0 * M_PI * -0.97, 2.0 * M_PI * -0.70}};
    return spec;
}

FitSpec annual_spec() {
    FitSpec spec;
    spec.model = Model::elliptical_fixed_beta;
    spec.fixed_beta = -2.0 * M_PI; // -1 cycle per year
    spec.likelihood = Likelihood::marginal;
    spec.bands = {{2.0 * M_PI * -1.03, 2.0 * M_PI * -0.97},
                  {2.0 * M_PI * 0.97, 2.0 * M_PI * 1.03}};
    return spec;
}

int reproduce_table2(bool desk, std::uint64_t seed, const std::string& outdir) {
    McConfig cfg;
    cfg.true_params = benchmark_params();
    cfg.n_reps = desk ? 200 : 1000;
    cfg.n = 1759;
    cfg.delta = 1.0;
    cfg.seed = seed;

    FitSpec full_band_full, full_band_marg, narrow_full, narrow_marg;
    full_band_full.likelihood = Likelihood::full;
    full_band_marg.likelihood = Likelihood::marginal;
    narrow_full.likelihood = Likelihood::full;
    narrow_full.bands = narrowband();
    narrow_marg.likelihood = Likelihood::marginal;
    narrow_marg.bands = narrowband();
    cfg.fit_specs = {full_band_full, full_band_marg, narrow_full, narrow_marg};

    McResult res = run_monte_carlo(cfg);
    const char* rows[4] = {"full_fullband", "marginal_fullband",
                           "full_narrowband", "marginal_narrowband"};
    std::ostringstream out;
    out << "method,param,bias_pct,rmse_pct\n";
    const char* names[5] = {"alpha1", "beta1", "alpha2", "beta2", "sigma2"};
    for (int s = 0; s < 4; ++s)
        for (int k = 0; k < 5; ++k)
            out << rows[s] << ',' << names[k] << ','
                << format_double(res.per_spec[s].bias_pct[k]) << ','
                << format_double(res.per_spec[s].rmse_pct[k]) << '\n';
    write_text(out.str(), outdir + "/table2.csv");

    // raw estimates of the marginal full-band row for density plots
    write_estimates_csv(res.per_spec[1], outdir + "/table2_estimates.csv");
    return 0;
}

int reproduce_table3(bool desk, std::uint64_t seed, const std::string& outdir) {
    int n_series = desk ? 200 : 1000;
    int n_boot = 100;
    EllipticalParams truth = benchmark_params();

    FitSpec spec; // marginal full-band
    std::vector<std::array<double, 5>> mc_est;
    std::array<std::array<double, 5>, 2> se_sum{}; // per estimator kind
    std::array<int, 2> se_count{};

    for (int s = 0; s < n_series; ++s) {
        SimConfig sim;
        sim.n_out = 1759;
        sim.delta_out = 1.0;
        sim.seed = mix64(seed) + static_cast<std::uint64_t>(s);
        ComplexSeries series = simulate(truth, sim);
        SpectralData sd = dft(series, true);
        FitResult fr = fit(sd, spec);
        if (!fr.converged) continue;
        mc_est.push_back({fr.ell.alpha1, fr.ell.beta1, fr.ell.alpha2,
                          fr.ell.beta2, fr.ell.sigma2});
        for (int e = 0; e < 2; ++e) {
            BootstrapConfig bc;
            bc.n_boot = n_boot;
            bc.seed = mix64(seed ^ 0xB007ULL) + s;
            bc.spectral_estimator = e == 0 ? SpectralEstimator::raw_periodogram
                                           : SpectralEstimator::epanechnikov;
            BootstrapResult br = bootstrap(sd, fr, spec, bc);
            if (br.failed) continue;
            for (int k = 0; k < 5; ++k) se_sum[e][k] += br.se[k];
            ++se_count[e];
        }
    }
    // Monte Carlo SE over the point estimates
    std::array<double, 5> mc_se{};
    auto truth_arr = std::array<double, 5>{truth.alpha1, truth.beta1,
                                           truth.alpha2, truth.beta2,
                                           truth.sigma2};
    size_t nr = mc_est.size();
    for (int k = 0; k < 5; ++k) {
        double mean = 0.0;
        for (const auto& e : mc_est) mean += e[k];
        mean /= nr;
        double var = 0.0;
        for (const auto& e : mc_est) var += (e[k] - mean) * (e[k] - mean);
        mc_se[k] = std::sqrt(var / (nr - 1));
    }

    std::ostringstream out;
    out << "method,alpha1,beta1,alpha2,beta2,sigma2\n";
    out << "monte_carlo";
    for (int k = 0; k < 5; ++k)
        out << ','
            << format_double(100.0 * mc_se[k] / std::abs(truth_arr[k]));
    out << '\n';
    const char* kinds[2] = {"periodogram", "epanechnikov"};
    for (int e = 0; e < 2; ++e) {
        out << kinds[e];
        for (int k = 0; k < 5; ++k)
            out << ','
                << format_double(100.0 * (se_sum[e][k] / se_count[e]) /
                                 std::abs(truth_arr[k]));
        out << '\n';
    }
    write_text(out.str(), outdir + "/table3.csv");
    return 0;
}

int reproduce_chandler(const std::string& data, const std::string& outdir) {
    SpectralData sd = polar_dft(data, true);
    FitResult fr = fit(sd, chandler_spec());
    json j;
    j["circular_negative_band"] = fit_json(fr);
    j["beta1_cpy"] = fr.geo.beta / (2.0 * M_PI);

    // diagnostic fit on the positive mirror band: a poor fit there is
    // evidence the wobble is close to circular
    FitSpec pos = chandler_spec();
    pos.bands = {{2.0 * M_PI * 0.70, 2.0 * M_PI * 0.97}};
    FitResult fp = fit(sd, pos);
    j["circular_positive_band"] = fit_json(fp);
    emit(j, outdir + "/chandler.json");
    return fr.converged ? 0 : kExitNoConverge;
}

int reproduce_annual(const std::string& data, std::uint64_t seed,
                     int n_boot, const std::string& outdir) {
    SpectralData sd = polar_dft(data, true);
    FitSpec spec = annual_spec();
    FitResult fr = fit(sd, spec);
    json j;
    j["elliptical_fixed_beta"] = fit_json(fr);
    // nearest grid frequency to one cycle per year
    double spacing = 2.0 * M_PI / (sd.grid.n * sd.grid.delta);
    double w_annual = std::round(2.0 * M_PI / spacing) * spacing;
    j["eccentricity_np"] = estimate_eccentricity_np(sd, w_annual);
    j["psi_hat"] = fr.psi_hat;

    if (n_boot >= 2) {
        BootstrapConfig bc;
        bc.n_boot = n_boot;
        bc.seed = seed;
        BootstrapResult br = bootstrap(sd, fr, spec, bc);
        const char* names[5] = {"alpha1", "beta1", "alpha2", "beta2",
                                "sigma2"};
        for (int k = 0; k < 5; ++k) {
            j["ci_lo"][names[k]] = br.ci_lo[k];
            j["ci_hi"][names[k]] = br.ci_hi[k];
        }
        j["bootstrap_failed"] = br.failed;
    }
    emit(j, outdir + "/annual.json");
    return fr.converged ? 0 : kExitNoConverge;
}

int reproduce_table4(const std::string& data, std::uint64_t seed, bool desk,
                     const std::string& outdir) {
    SpectralData sd = polar_dft(data, true);
    int n_boot = desk ? 1000 : 10000;
    json j;

    struct Entry {
        const char* name;
        FitSpec spec;
    } entries[2] = {{"chandler_circular", chandler_spec()},
                    {"annual_elliptical", annual_spec()}};
    int rc = 0;
    for (const Entry& e : entries) {
        FitResult fr = fit(sd, e.spec);
        json row = fit_json(fr);
        if (!fr.converged) rc = kExitNoConverge;
        BootstrapConfig bc;
        bc.n_boot = n_boot;
        bc.seed = seed;
        BootstrapResult br = bootstrap(sd, fr, e.spec, bc);
        const char* names[5] = {"alpha1", "beta1", "alpha2", "beta2",
                                "sigma2"};
        for (int k = 0; k < 5; ++k) {
            row["ci_lo"][names[k]] = br.ci_lo[k];
            row["ci_hi"][names[k]] = br.ci_hi[k];
        }
        j[e.name] = row;
    }
    emit(j, outdir + "/table4.json");
    return rc;
}

int reproduce_fig1(const std::string& outdir) {
    EllipticalParams sets[2] = {benchmark_params(), {}};
    sets[1].alpha1 = 0.002;
    sets[1].beta1 = 0.5;
    sets[1].alpha2 = 0.3;
    sets[1].beta2 = 0.3;
    sets[1].sigma2 = 0.15;
    sets[1].r = implied_r(sets[1]);

    for (int i = 0; i < 2; ++i) {
        GeometricParams g = to_geometric(sets[i]);
        SimConfig sim;
        sim.n_out = 1000;
        sim.delta_out = 1.0;
        sim.seed = 100 + i;
        ComplexSeries s = simulate(sets[i], sim);
        std::string tag = i == 0 ? "left" : "right";
        write_series_csv(s, outdir + "/fig1_" + tag + "_series.csv");

        SpectralData sd = dft(s);
        std::ostringstream out;
        out << "omega,periodogram,psd,aliased_psd\n";
        for (int k = 0; k < sd.grid.n; ++k) {
            double w = sd.grid.omegas[k];
            out << format_double(w) << ',' << format_double(sd.periodogram[k])
                << ',' << format_double(psd(g, w)) << ','
                << format_double(aliased_psd(g, w, 1.0, 10)) << '\n';
        }
        write_text(out.str(), outdir + "/fig1_" + tag + "_spectra.csv");
    }
    return 0;
}

int reproduce_fig3(bool desk, std::uint64_t seed, const std::string& outdir) {
    McConfig cfg;
    cfg.true_params = benchmark_params();
    cfg.n_reps = desk ? 200 : 1000;
    cfg.n = 1759;
    cfg.seed = seed;
    cfg.fit_specs.resize(1); // marginal full-band
    McResult res = run_monte_carlo(cfg);
    const McMethodResult& m = res.per_spec[0];

    std::vector<double> grid;
    for (int i = 0; i <= 400; ++i) grid.push_back(-50.0 + 0.25 * i);
    auto truth = std::array<double, 5>{0.02, 1.0, -0.5, -0.3, 2.0};
    const char* names[5] = {"alpha1", "beta1", "alpha2", "beta2", "sigma2"};
    std::ostringstream out;
    out << "deviation_pct";
    for (const char* n : names) out << ',' << n;
    out << '\n';
    std::array<std::vector<double>, 5> dens;
    for (int k = 0; k < 5; ++k) {
        std::vector<double> dev;
        for (const auto& e : m.estimates)
            dev.push_back(100.0 * (e[k] - truth[k]) / truth[k]);
        dens[k] = kernel_density(dev, grid);
    }
    for (size_t i = 0; i < grid.size(); ++i) {
        out << format_double(grid[i]);
        for (int k = 0; k < 5; ++k) out << ',' << format_double(dens[k][i]);
        out << '\n';
    }
    write_text(out.str(), outdir + "/fig3_densities.csv");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
#ifdef _OPENMP
    if (const char* env = std::getenv("EOU_THREADS")) {
        int t = std::atoi(env);
        if (t > 0) omp_set_num_threads(t);
    }
#endif

    CLI::App app{"elliptical Ornstein-Uhlenbeck toolbox"};
    app.require_subcommand(1);

    // simulate
    std::string params_path, output = "-", input;
    int n = 1000, substeps = 100;
    double delta = 1.0;
    std::uint64_t seed = 0;
    bool exact = false;
    auto* sim = app.add_subcommand("simulate", "simulate a trajectory");
    sim->add_option("--params", params_path, "parameter JSON file")
        ->required();
    sim->add_option("--n", n, "output samples")->required();
    sim->add_option("--delta", delta, "sampling interval");
    sim->add_option("--substeps", substeps, "Euler steps per sample");
    sim->add_option("--seed", seed, "RNG seed");
    sim->add_flag("--exact", exact,
                  "use the exact transition sampler instead of Euler");
    sim->add_option("--output", output, "output CSV path")->required();

    // spectrum
    int k_max = 10;
    bool smooth = false;
    double bandwidth = 0.07;
    auto* spec_cmd = app.add_subcommand(
        "spectrum", "theoretical spectra (from --params) or a periodogram "
                    "(from --input)");
    spec_cmd->add_option("--params", params_path, "parameter JSON file");
    spec_cmd->add_option("--input", input, "series CSV for a periodogram");
    spec_cmd->add_option("--n", n, "grid size");
    spec_cmd->add_option("--delta", delta, "sampling interval");
    spec_cmd->add_option("--k-max", k_max, "aliasing truncation");
    spec_cmd->add_flag("--smooth", smooth, "Epanechnikov-smooth the "
                                           "periodogram");
    spec_cmd->add_option("--bandwidth", bandwidth,
                         "smoothing bandwidth (radians)");
    spec_cmd->add_option("--output", output, "output CSV path")->required();

    // fit
    FitFlags fit_flags;
    auto* fit_cmd = app.add_subcommand("fit", "Whittle fit of a series");
    fit_cmd->add_option("--input", input, "series CSV")->required();
    fit_flags.attach(fit_cmd);
    fit_cmd->add_option("--output", output, "output JSON path ('-' = stdout)");

    // bootstrap
    FitFlags boot_flags;
    int n_boot = 100;
    std::string estimator = "periodogram";
    double ci = 0.95;
    auto* boot_cmd =
        app.add_subcommand("bootstrap", "frequency-domain bootstrap CIs");
    boot_cmd->add_option("--input", input, "series CSV")->required();
    boot_flags.attach(boot_cmd);
    boot_cmd->add_option("--n-boot", n_boot, "bootstrap replicates");
    boot_cmd->add_option("--estimator", estimator,
                         "periodogram | epanechnikov")
        ->check(CLI::IsMember({"periodogram", "epanechnikov"}));
    boot_cmd->add_option("--bandwidth", bandwidth,
                         "smoothing bandwidth (radians)");
    boot_cmd->add_option("--seed", seed, "RNG seed");
    boot_cmd->add_option("--ci", ci, "confidence level");
    boot_cmd->add_option("--output", output, "output JSON path");

    // mc
    FitFlags mc_flags;
    int n_reps = 200;
    std::string estimates_csv;
    auto* mc_cmd =
        app.add_subcommand("mc", "Monte Carlo bias/RMSE of the estimator");
    mc_cmd->add_option("--params", params_path, "true parameter JSON file")
        ->required();
    mc_flags.attach(mc_cmd);
    mc_cmd->add_option("--n-reps", n_reps, "replicates");
    mc_cmd->add_option("--n", n, "samples per replicate");
    mc_cmd->add_option("--delta", delta, "sampling interval");
    mc_cmd->add_option("--substeps", substeps, "Euler steps per sample");
    mc_cmd->add_option("--seed", seed, "RNG seed");
    mc_cmd->add_option("--output", output, "output JSON path");
    mc_cmd->add_option("--estimates-csv", estimates_csv,
                       "raw estimate matrix CSV");

    // filter
    std::string bands_text;
    auto* filt_cmd =
        app.add_subcommand("filter", "boxcar bandpass for visualization");
    filt_cmd->add_option("--input", input, "series CSV")->required();
    filt_cmd->add_option("--bands", bands_text, "bands to keep")->required();
    filt_cmd->add_option("--output", output, "output CSV path")->required();

    // ingest
    std::string columns, unit = "mas";
    auto* ing_cmd =
        app.add_subcommand("ingest", "parse polar-motion records to CSV");
    ing_cmd->add_option("--input", input, "raw delimited text")->required();
    ing_cmd->add_option("--columns", columns,
                        "comma list naming the columns, e.g. epoch,x,y");
    ing_cmd->add_option("--unit", unit, "arcsec | mas")
        ->check(CLI::IsMember({"arcsec", "mas"}));
    ing_cmd->add_option("--output", output, "output CSV path")->required();

    // reproduce
    std::string target, scale = "desk", data = "data/polar_motion.csv",
                outdir = ".";
    auto* rep_cmd =
        app.add_subcommand("reproduce", "rerun a canned experiment");
    rep_cmd->add_option("--target", target,
                        "table2 | table3 | table4 | fig1_spectra | "
                        "fig3_densities | chandler | annual")
        ->required()
        ->check(CLI::IsMember({"table2", "table3", "table4", "fig1_spectra",
                               "fig3_densities", "chandler", "annual"}));
    rep_cmd->add_option("--scale", scale, "paper | desk")
        ->check(CLI::IsMember({"paper", "desk"}));
    rep_cmd->add_option("--data", data, "polar-motion snapshot CSV");
    rep_cmd->add_option("--seed", seed, "RNG seed");
    rep_cmd->add_option("--n-boot", n_boot,
                        "bootstrap replicates for annual CIs");
    rep_cmd->add_option("--outdir", outdir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitUsage;
    }

    try {
        if (sim->parsed())
            return cmd_simulate(params_path, n, delta, substeps, seed, exact,
                                output);
        if (spec_cmd->parsed()) {
            if (input.empty() == params_path.empty()) {
                std::cerr << "spectrum: give exactly one of --params and "
                             "--input\n";
                return kExitUsage;
            }
            return cmd_spectrum(params_path, input, n, delta, k_max, smooth,
                                bandwidth, output);
        }
        if (fit_cmd->parsed()) return cmd_fit(input, fit_flags, output);
        if (boot_cmd->parsed())
            return cmd_bootstrap(input, boot_flags, n_boot, estimator,
                                 bandwidth, seed, ci, output);
        if (mc_cmd->parsed())
            return cmd_mc(params_path, mc_flags, n_reps, n, delta, substeps,
                          seed, output, estimates_csv);
        if (filt_cmd->parsed()) return cmd_filter(input, bands_text, output);
        if (ing_cmd->parsed())
            return cmd_ingest(input, columns, unit, output);
        if (rep_cmd->parsed()) {
            bool desk = scale == "desk";
            std::error_code ec;
            std::filesystem::create_directories(outdir, ec);
            if (ec) {
                std::cerr << "cannot create output directory " << outdir
                          << ": " << ec.message() << '\n';
                return kExitData;
            }
            if (target == "table2")
                return reproduce_table2(desk, seed, outdir);
            if (target == "table3")
                return reproduce_table3(desk, seed, outdir);
            if (target == "table4")
                return reproduce_table4(data, seed, desk, outdir);
            if (target == "fig1_spectra") return reproduce_fig1(outdir);
            if (target == "fig3_densities")
                return reproduce_fig3(desk, seed, outdir);
            if (target == "chandler")
                return reproduce_chandler(data, outdir);
            if (target == "annual")
                return reproduce_annual(data, seed, n_boot, outdir);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << '\n';
        return kExitUsage;
    } catch (const validation_error& e) {
        std::cerr << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}
