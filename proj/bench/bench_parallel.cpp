// Compares the OpenMP replicate-parallel bootstrap and Monte Carlo loops
// against their serial reference paths, checking that both produce identical
// results before reporting timings.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>

#include <omp.h>

#include "eou/uncertainty.hpp"

using namespace eou;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

EllipticalParams demo_params() {
    EllipticalParams p;
    p.alpha1 = 0.02;
    p.beta1 = 1.0;
    p.alpha2 = -0.5;
    p.beta2 = -0.3;
    p.sigma2 = 2.0;
    p.r = implied_r(p);
    return p;
}

} // namespace

int main(int argc, char** argv) {
    int n_boot = argc > 1 ? std::atoi(argv[1]) : 100;
    int n_reps = argc > 2 ? std::atoi(argv[2]) : 20;
    std::cout << "threads: " << omp_get_max_threads() << "\n";

    EllipticalParams truth = demo_params();
    SimConfig sim;
    sim.n_out = 1759;
    sim.delta_out = 1.0;
    sim.seed = 7;
    ComplexSeries series = simulate(truth, sim);
    SpectralData sd = dft(series, true);
    FitSpec spec;
    FitResult base = fit(sd, spec);
    if (!base.converged) {
        std::cerr << "base fit did not converge\n";
        return 1;
    }

    BootstrapConfig bc;
    bc.n_boot = n_boot;
    bc.seed = 11;

    bc.parallel = false;
    auto t0 = std::chrono::steady_clock::now();
    BootstrapResult serial = bootstrap(sd, base, spec, bc);
    double t_serial = seconds_since(t0);

    bc.parallel = true;
    t0 = std::chrono::steady_clock::now();
    BootstrapResult parallel = bootstrap(sd, base, spec, bc);
    double t_parallel = seconds_since(t0);

    bool same = serial.draws == parallel.draws;
    std::cout << "bootstrap (" << n_boot << " replicates): serial "
              << t_serial << " s, parallel " << t_parallel << " s, speedup "
              << t_serial / t_parallel << "x, results "
              << (same ? "identical" : "DIFFER") << "\n";

    McConfig mc;
    mc.true_params = truth;
    mc.n_reps = n_reps;
    mc.n = 1759;
    mc.seed = 13;
    mc.fit_specs = {spec};

    mc.parallel = false;
    t0 = std::chrono::steady_clock::now();
    McResult mser = run_monte_carlo(mc);
    double m_serial = seconds_since(t0);

    mc.parallel = true;
    t0 = std::chrono::steady_clock::now();
    McResult mpar = run_monte_carlo(mc);
    double m_parallel = seconds_since(t0);

    bool msame = mser.per_spec[0].estimates == mpar.per_spec[0].estimates;
    std::cout << "monte carlo (" << n_reps << " replicates): serial "
              << m_serial << " s, parallel " << m_parallel << " s, speedup "
              << m_serial / m_parallel << "x, results "
              << (msame ? "identical" : "DIFFER") << "\n";

    return same && msame ? 0 : 1;
}
