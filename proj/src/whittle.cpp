#include "eou/whittle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "eou/rng.hpp"

namespace eou {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double wrap_psi(double psi) {
    double w = std::remainder(psi, M_PI);
    if (w == -M_PI / 2) w = M_PI / 2;
    return w;
}

double logistic(double u) { return 1.0 / (1.0 + std::exp(-u)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

std::vector<int> selected_indices(const SpectralData& sd, const FitSpec& spec) {
    std::vector<int> idx;
    if (spec.bands.empty()) {
        idx.resize(sd.grid.n);
        for (int i = 0; i < sd.grid.n; ++i) idx[i] = i;
    } else {
        idx = band_indices(sd.grid, spec.bands);
    }
    if (spec.mean_subtract) {
        std::erase_if(idx, [&](int i) { return sd.grid.omegas[i] == 0.0; });
    }
    return idx;
}

// Aliased power spectrum, with the two Lorentzian coefficients hoisted out
// of the frequency loop.
struct AliasedPsd {
    double a2c, cp, cm, beta, shift;
    int k_max;
    AliasedPsd(const GeometricParams& g, double delta, int k_max_)
        : a2c(0.25 * g.a2), beta(g.beta), shift(2.0 * M_PI / delta),
          k_max(k_max_) {
        double ir = 1.0 / g.rho;
        cp = (ir + g.rho) * (ir + g.rho);
        cm = (ir - g.rho) * (ir - g.rho);
        alpha2 = g.alpha * g.alpha;
    }
    double alpha2;
    double operator()(double w) const {
        double sum = 0.0;
        for (int k = -k_max; k <= k_max; ++k) {
            double wk = w + k * shift;
            double dm = wk - beta;
            double dp = wk + beta;
            sum += cp / (alpha2 + dm * dm) + cm / (alpha2 + dp * dp);
        }
        return a2c * sum;
    }
    // Real magnitude of the aliased complementary spectrum (the e^{i 2 psi}
    // phase is attached by the caller).
    double comp_mag(double w) const {
        double sum = 0.0;
        for (int k = -k_max; k <= k_max; ++k) {
            double wk = w + k * shift;
            double dm = wk - beta;
            double dp = wk + beta;
            sum += 1.0 / (alpha2 + dm * dm) + 1.0 / (alpha2 + dp * dp);
        }
        return sum;
    }
};

double loglik_full_impl(const SpectralData& sd, const GeometricParams& g,
                        const FitSpec& spec, const std::vector<int>& idx) {
    AliasedPsd s(g, sd.grid.delta, spec.k_max);
    double r2 = g.rho * g.rho;
    double comp_coef = 0.25 * g.a2 * (1.0 / r2 - r2);
    std::complex<double> phase = std::polar(1.0, 2.0 * g.psi);
    double total = 0.0;
    for (int i : idx) {
        double w = sd.grid.omegas[i];
        double a = s(w);
        double b = s(-w);
        std::complex<double> r = comp_coef * s.comp_mag(w) * phase;
        double det = a * b - std::norm(r);
        if (!(det > 0.0) || !(a > 0.0)) return -kInf;
        const auto& j1 = sd.j_z[i];
        const auto& j2 = sd.j_zconj[i];
        double quad = (b * std::norm(j1) + a * std::norm(j2) -
                       2.0 * std::real(r * std::conj(j1) * j2)) /
                      det;
        total += -0.5 * (std::log(det) + quad);
    }
    return total;
}

double loglik_marginal_impl(const SpectralData& sd, const GeometricParams& g,
                            const FitSpec& spec, const std::vector<int>& idx) {
    AliasedPsd s(g, sd.grid.delta, spec.k_max);
    double total = 0.0;
    for (int i : idx) {
        double sw = s(sd.grid.omegas[i]);
        if (!(sw > 0.0)) return -kInf;
        total += -(std::log(sw) + sd.periodogram[i] / sw);
    }
    return total;
}

// ---- optimizer coordinates -------------------------------------------------

struct Coords {
    bool has_beta;
    bool has_rho;
    bool has_psi;
    double fixed_beta; // used when !has_beta
    int dim() const { return 2 + has_beta + has_rho + has_psi; }

    std::vector<double> pack(const GeometricParams& g) const {
        std::vector<double> x;
        x.push_back(std::log(g.alpha));
        if (has_beta) x.push_back(g.beta);
        if (has_rho) x.push_back(logit(std::clamp(g.rho, 1e-4, 1.0 - 1e-9)));
        if (has_psi) x.push_back(g.psi);
        x.push_back(std::log(g.a2));
        return x;
    }

    GeometricParams unpack(const std::vector<double>& x) const {
        GeometricParams g;
        int k = 0;
        g.alpha = std::exp(x[k++]);
        g.beta = has_beta ? x[k++] : fixed_beta;
        g.rho = has_rho ? logistic(x[k++]) : 1.0;
        g.psi = has_psi ? wrap_psi(x[k++]) : 0.0;
        g.a2 = std::exp(x[k++]);
        return g;
    }
};

Coords make_coords(const FitSpec& spec) {
    Coords c{};
    c.has_beta = spec.model != Model::elliptical_fixed_beta;
    c.has_rho = spec.model != Model::circular;
    c.has_psi =
        spec.likelihood == Likelihood::full && spec.model != Model::circular;
    c.fixed_beta = spec.fixed_beta;
    return c;
}

// ---- Nelder-Mead -----------------------------------------------------------

struct NmResult {
    std::vector<double> x;
    double f = kInf;
    bool converged = false;
};

NmResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                     const std::vector<double>& x0,
                     const std::vector<double>& step, int max_evals,
                     double tol_rel) {
    int d = static_cast<int>(x0.size());
    std::vector<std::vector<double>> pts(d + 1, x0);
    std::vector<double> fv(d + 1);
    for (int i = 0; i < d; ++i) pts[i + 1][i] += step[i];
    int evals = 0;
    for (int i = 0; i <= d; ++i) fv[i] = (++evals, f(pts[i]));

    auto order = [&]() {
        std::vector<int> p(d + 1);
        for (int i = 0; i <= d; ++i) p[i] = i;
        std::sort(p.begin(), p.end(), [&](int a, int b) { return fv[a] < fv[b]; });
        std::vector<std::vector<double>> np(d + 1);
        std::vector<double> nf(d + 1);
        for (int i = 0; i <= d; ++i) {
            np[i] = pts[p[i]];
            nf[i] = fv[p[i]];
        }
        pts.swap(np);
        fv.swap(nf);
    };

    NmResult res;
    while (evals < max_evals) {
        order();
        double spread = std::abs(fv[d] - fv[0]);
        double diam = 0.0;
        for (int i = 1; i <= d; ++i)
            for (int k = 0; k < d; ++k)
                diam = std::max(diam, std::abs(pts[i][k] - pts[0][k]));
        if (spread <= tol_rel * (std::abs(fv[0]) + 1e-12) && diam < 1e-8) {
            res.converged = true;
            break;
        }

        std::vector<double> centroid(d, 0.0);
        for (int i = 0; i < d; ++i)
            for (int k = 0; k < d; ++k) centroid[k] += pts[i][k] / d;

        auto blend = [&](double coef) {
            std::vector<double> x(d);
            for (int k = 0; k < d; ++k)
                x[k] = centroid[k] + coef * (pts[d][k] - centroid[k]);
            return x;
        };

        auto xr = blend(-1.0);
        double fr = (++evals, f(xr));
        if (fr < fv[0]) {
            auto xe = blend(-2.0);
            double fe = (++evals, f(xe));
            if (fe < fr) {
                pts[d] = xe;
                fv[d] = fe;
            } else {
                pts[d] = xr;
                fv[d] = fr;
            }
        } else if (fr < fv[d - 1]) {
            pts[d] = xr;
            fv[d] = fr;
        } else {
            bool outside = fr < fv[d];
            auto xc = blend(outside ? -0.5 : 0.5);
            double fc = (++evals, f(xc));
            if (fc < std::min(fr, fv[d])) {
                pts[d] = xc;
                fv[d] = fc;
            } else {
                for (int i = 1; i <= d; ++i) {
                    for (int k = 0; k < d; ++k)
                        pts[i][k] = 0.5 * (pts[i][k] + pts[0][k]);
                    fv[i] = (++evals, f(pts[i]));
                }
            }
        }
    }
    order();
    res.x = pts[0];
    res.f = fv[0];
    return res;
}

// ---- auto initialization ---------------------------------------------------

GeometricParams auto_init(const SpectralData& sd, const FitSpec& spec,
                          const std::vector<int>& idx) {
    double spacing = 2.0 * M_PI / (sd.grid.n * sd.grid.delta);

    int pk = idx[0];
    for (int i : idx)
        if (sd.periodogram[i] > sd.periodogram[pk]) pk = i;
    double w1 = sd.grid.omegas[pk];
    double i1 = sd.periodogram[pk];

    // Strongest ordinate of the opposite spin direction, if the bands
    // include one.
    int pk2 = -1;
    for (int i : idx) {
        double w = sd.grid.omegas[i];
        if ((w1 >= 0.0 && w < 0.0) || (w1 < 0.0 && w > 0.0)) {
            if (pk2 < 0 || sd.periodogram[i] > sd.periodogram[pk2]) pk2 = i;
        }
    }

    GeometricParams g;
    if (spec.model == Model::circular) {
        g.beta = w1;
        g.rho = 1.0;
    } else {
        double i2 = pk2 >= 0 ? sd.periodogram[pk2] : 0.0;
        g.beta = spec.model == Model::elliptical_fixed_beta ? spec.fixed_beta
                                                            : w1;
        double ratio = i1 > 0.0 && i2 > 0.0 ? i2 / i1 : 0.25;
        g.rho = std::clamp(std::pow(ratio, 0.25), 0.05, 0.99);
    }

    // Half-width at half-maximum around the dominant peak, floored at one
    // grid spacing.
    double hwhm = spacing;
    for (int off = 1;; ++off) {
        int lo = pk - off, hi = pk + off;
        bool in_lo = lo >= 0 && std::binary_search(idx.begin(), idx.end(), lo);
        bool in_hi =
            hi < sd.grid.n && std::binary_search(idx.begin(), idx.end(), hi);
        if (!in_lo && !in_hi) break;
        double best = 0.0;
        if (in_lo) best = std::max(best, sd.periodogram[lo]);
        if (in_hi) best = std::max(best, sd.periodogram[hi]);
        if (best < 0.5 * i1) {
            hwhm = off * spacing;
            break;
        }
        if (off > sd.grid.n) break;
    }
    g.alpha = std::max(hwhm, spacing);

    double cp = 1.0 / g.rho + g.rho;
    g.a2 = std::max(4.0 * i1 * g.alpha * g.alpha / (cp * cp), 1e-12);
    g.psi = 0.0;
    return g;
}

int grid_index_of(const FrequencyGrid& grid, double omega) {
    double spacing = 2.0 * M_PI / (grid.n * grid.delta);
    int lo = -((grid.n + 1) / 2) + 1;
    int j = static_cast<int>(std::lround(omega / spacing));
    int i = j - lo;
    if (i < 0 || i >= grid.n ||
        std::abs(grid.omegas[i] - omega) > 1e-6 * spacing)
        return -1;
    return i;
}

} // namespace

double loglik_full(const SpectralData& sd, const GeometricParams& g,
                   const FitSpec& spec) {
    validate(g);
    return loglik_full_impl(sd, g, spec, selected_indices(sd, spec));
}

double loglik_marginal(const SpectralData& sd, const GeometricParams& g,
                       const FitSpec& spec) {
    return loglik_marginal_impl(sd, g, spec, selected_indices(sd, spec));
}

double estimate_orientation(const SpectralData& sd, double omega_max) {
    int ip = grid_index_of(sd.grid, std::abs(omega_max));
    int in = grid_index_of(sd.grid, -std::abs(omega_max));
    if (ip < 0 || in < 0)
        throw validation_error(
            "estimate_orientation: +/- omega_max not on the Fourier grid");
    const auto& jp = sd.j_z[ip];
    const auto& jn = sd.j_z[in];
    if (std::abs(jp) == 0.0 || std::abs(jn) == 0.0)
        throw validation_error(
            "estimate_orientation: zero transform value, phase undefined");
    return wrap_psi(0.5 * (std::arg(jp) + std::arg(jn)));
}

double estimate_eccentricity_np(const SpectralData& sd, double omega_max) {
    int ip = grid_index_of(sd.grid, std::abs(omega_max));
    int in = grid_index_of(sd.grid, -std::abs(omega_max));
    if (ip < 0 || in < 0)
        throw validation_error(
            "estimate_eccentricity_np: +/- omega_max not on the grid");
    double m1 = std::abs(sd.j_z[ip]);
    double m2 = std::abs(sd.j_z[in]);
    if (m1 + m2 == 0.0)
        throw validation_error(
            "estimate_eccentricity_np: both transform magnitudes are zero");
    return 2.0 * std::sqrt(m1 * m2) / (m1 + m2);
}

FitResult fit(const SpectralData& sd, const FitSpec& spec) {
    auto idx = selected_indices(sd, spec);
    if (idx.empty())
        throw validation_error("fit: bands contain no Fourier frequency");

    // Optimize against a unit-mean-periodogram copy of the data so the
    // search is indifferent to the overall scale of the series (the scale
    // enters the objective only as an additive constant, which would
    // otherwise distort the relative convergence test). The fitted a2 is
    // mapped back to the original units afterwards.
    double scale = 0.0;
    for (int i : idx) scale += sd.periodogram[i];
    scale = scale > 0.0 ? scale / static_cast<double>(idx.size()) : 1.0;
    SpectralData nsd = sd;
    double root_scale = std::sqrt(scale);
    for (auto& v : nsd.j_z) v /= root_scale;
    for (auto& v : nsd.j_zconj) v /= root_scale;
    for (auto& v : nsd.periodogram) v /= scale;

    Coords coords = make_coords(spec);
    auto objective = [&](const std::vector<double>& x) {
        GeometricParams g = coords.unpack(x);
        if (!std::isfinite(g.alpha) || !std::isfinite(g.a2) || g.alpha <= 0.0 ||
            g.a2 <= 0.0 || g.beta == 0.0)
            return kInf;
        double ll = spec.likelihood == Likelihood::full
                        ? loglik_full_impl(nsd, g, spec, idx)
                        : loglik_marginal_impl(nsd, g, spec, idx);
        return std::isfinite(ll) ? -ll : kInf;
    };

    GeometricParams g0 =
        spec.optimizer.init ? *spec.optimizer.init : auto_init(nsd, spec, idx);
    if (spec.optimizer.init) g0.a2 /= scale;
    double spacing = 2.0 * M_PI / (sd.grid.n * sd.grid.delta);

    auto make_step = [&]() {
        std::vector<double> step;
        step.push_back(0.5); // log alpha
        if (coords.has_beta) step.push_back(2.0 * spacing);
        if (coords.has_rho) step.push_back(0.5);
        if (coords.has_psi) step.push_back(0.3);
        step.push_back(0.5); // log a2
        return step;
    };

    NmResult best;
    CounterRng pert(0xE0DECAFEULL, 0); // deterministic restart offsets
    std::vector<double> x0 = coords.pack(g0);
    for (int r = 0; r <= std::max(0, spec.optimizer.restarts); ++r) {
        std::vector<double> start = r == 0 ? x0 : best.x;
        if (r > 0) {
            for (size_t k = 0; k < start.size(); ++k) {
                double u = pert.uniform(r * 64 + k);
                start[k] += (u - 0.5) * (k == 1 && coords.has_beta
                                             ? 4.0 * spacing
                                             : 1.0);
            }
        }
        NmResult res = nelder_mead(objective, start, make_step(),
                                   spec.optimizer.max_iters,
                                   spec.optimizer.tol_rel);
        if (res.f < best.f || best.x.empty()) {
            bool conv = res.converged || best.converged;
            best = res;
            best.converged = conv;
        }
    }

    FitResult out;
    out.geo = coords.unpack(best.x);
    out.geo.a2 *= scale;
    out.loglik = std::isfinite(best.f)
                     ? (spec.likelihood == Likelihood::full
                            ? loglik_full_impl(sd, out.geo, spec, idx)
                            : loglik_marginal_impl(sd, out.geo, spec, idx))
                     : -kInf;
    out.converged = best.converged && std::isfinite(best.f);
    out.n_freqs_used = static_cast<int>(idx.size());

    // Boundary diagnostics on the transformed coordinates.
    if (coords.has_rho) {
        double u = best.x[1 + (coords.has_beta ? 1 : 0)];
        out.boundary_flags[2] = std::abs(u) > 13.0; // rho within ~2e-6 of 0/1
    }
    out.boundary_flags[0] = out.geo.alpha < 1e-9 * spacing ||
                            out.geo.alpha > 1e9 / (sd.grid.n * sd.grid.delta);
    if (out.boundary_flags[0] || out.boundary_flags[2]) out.converged = false;

    if (spec.likelihood == Likelihood::full && coords.has_psi) {
        out.psi_hat = out.geo.psi;
    } else if (spec.model == Model::circular) {
        out.psi_hat = 0.0;
    } else {
        // Marginal path: psi from the non-parametric phase estimator at the
        // grid frequency nearest the fitted peak.
        double target = std::abs(out.geo.beta);
        double wmax = std::round(target / spacing) * spacing;
        out.psi_hat = 0.0;
        for (int tries = 0; tries < 3; ++tries) {
            try {
                out.psi_hat = estimate_orientation(sd, wmax);
                break;
            } catch (const validation_error&) {
                wmax -= spacing; // step off Nyquist / grid edge
            }
        }
        out.geo.psi = out.psi_hat;
    }

    out.ell = spec.model == Model::circular
                  ? EllipticalParams{out.geo.alpha, out.geo.beta, 0.0, 0.0,
                                     out.geo.a2, {0.0, 0.0}}
                  : to_elliptical(out.geo);
    return out;
}

} // namespace eou
