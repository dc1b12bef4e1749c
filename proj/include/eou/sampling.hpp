#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "eou/params.hpp"
#include "eou/rng.hpp"

namespace eou {

// Regularly sampled complex trajectory.
struct ComplexSeries {
    std::vector<std::complex<double>> values;
    double delta = 1.0;
    double t0 = 0.0;
};

struct SimConfig {
    int n_out = 0;            // output samples
    double delta_out = 1.0;   // output sampling interval
    int substeps = 100;       // internal Euler steps per output sample
    double burn_in = -1.0;    // time discarded before recording; <0 means
                              // the default 50/alpha1
    std::uint64_t seed = 0;
    std::optional<std::complex<double>> z0; // unset: 0 when burn_in > 0
};

// One scaled complex-normal increment sqrt(dt)*B with B ~ CN(0, sigma2, r),
// drawn from the given stream at the given counter.
std::complex<double> sample_increment(double sigma2, std::complex<double> r,
                                      double dt, const CounterRng& rng,
                                      std::uint64_t counter);

// Euler-Maruyama path of the elliptical OU SDE; deterministic given
// (params, cfg) including the seed.
ComplexSeries simulate(const EllipticalParams& p, const SimConfig& cfg);

// Simulates the circular bivariate OU by Euler-Maruyama and applies the
// rotation-stretch deformation to each output sample. Statistically
// equivalent to simulate(to_elliptical(g), cfg).
ComplexSeries simulate_bivariate(const GeometricParams& g, const SimConfig& cfg);

// Exact sampler: the underlying circular OU admits an exact discrete-time
// transition (the AR(1) recursion), so the deformed process can be sampled
// without discretization error. Starts from a stationary draw.
ComplexSeries simulate_exact(const GeometricParams& g, int n, double delta,
                             std::uint64_t seed);

} // namespace eou
