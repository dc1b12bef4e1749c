#include "doctest.h"

#include <cmath>
#include <complex>

#include "eou/params.hpp"
#include "eou/rng.hpp"

using namespace eou;
using cd = std::complex<double>;

namespace {

// The two example parameter sets used throughout the tests.
EllipticalParams example_a() {
    EllipticalParams p;
    p.alpha1 = 0.02;
    p.beta1 = 1.0;
    p.alpha2 = -0.5;
    p.beta2 = -0.3;
    p.sigma2 = 2.0;
    p.r = implied_r(p);
    return p;
}

EllipticalParams example_b() {
    EllipticalParams p;
    p.alpha1 = 0.002;
    p.beta1 = 0.5;
    p.alpha2 = 0.3;
    p.beta2 = 0.3;
    p.sigma2 = 0.15;
    p.r = implied_r(p);
    return p;
}

} // namespace

TEST_CASE("validate accepts the example sets and rejects broken ones") {
    validate(example_a(), true);
    validate(example_b(), true);

    EllipticalParams p = example_a();
    p.alpha1 = 0.0;
    CHECK_THROWS_AS(validate(p), validation_error);

    p = example_a();
    p.alpha2 = 2.0; // beta1^2 < alpha2^2 + beta2^2
    CHECK_THROWS_AS(validate(p), validation_error);

    p = example_a();
    p.r = cd(0.0, 0.0); // inconsistent with the implied value
    CHECK_THROWS_AS(validate(p, true), validation_error);
}

TEST_CASE("implied pseudo-variance matches the published example values") {
    cd ra = implied_r(example_a());
    CHECK(std::abs(ra - cd(0.6, 1.0)) < 1e-12);
    cd rb = implied_r(example_b());
    CHECK(std::abs(rb - cd(-0.09, -0.09)) < 1e-12);
}

TEST_CASE("to_geometric reproduces frozen reference values") {
    GeometricParams g = to_geometric(example_a());
    CHECK(g.alpha == doctest::Approx(0.02).epsilon(1e-14));
    CHECK(g.beta == doctest::Approx(0.812403840463596).epsilon(1e-13));
    CHECK(g.rho == doctest::Approx(0.716361882869304).epsilon(1e-13));
    CHECK(g.psi == doctest::Approx(0.515188413262156).epsilon(1e-13));
    CHECK(g.a2 == doctest::Approx(1.62480768092719).epsilon(1e-13));

    GeometricParams h = to_geometric(example_b());
    CHECK(h.alpha == doctest::Approx(0.002).epsilon(1e-14));
    CHECK(h.beta == doctest::Approx(0.264575131106459).epsilon(1e-13));
    CHECK(h.rho == doctest::Approx(0.53502795587856).epsilon(1e-13));
    CHECK(h.psi == doctest::Approx(-1.17809724509617).epsilon(1e-13));
    CHECK(h.a2 == doctest::Approx(0.0793725393319377).epsilon(1e-13));
}

TEST_CASE("to_elliptical inverts to_geometric on the examples") {
    for (const EllipticalParams& p : {example_a(), example_b()}) {
        EllipticalParams q = to_elliptical(to_geometric(p));
        CHECK(q.alpha1 == doctest::Approx(p.alpha1).epsilon(1e-12));
        CHECK(q.beta1 == doctest::Approx(p.beta1).epsilon(1e-12));
        CHECK(q.alpha2 == doctest::Approx(p.alpha2).epsilon(1e-12));
        CHECK(q.beta2 == doctest::Approx(p.beta2).epsilon(1e-12));
        CHECK(q.sigma2 == doctest::Approx(p.sigma2).epsilon(1e-12));
        CHECK(std::abs(q.r - p.r) < 1e-12 * std::abs(p.r));
    }
}

TEST_CASE("round trip over random geometric parameters") {
    CounterRng rng(1234, 0);
    std::uint64_t c = 0;
    for (int i = 0; i < 2000; ++i) {
        GeometricParams g;
        g.alpha = 0.001 + 2.0 * rng.uniform(c++);
        g.beta = (rng.uniform(c++) < 0.5 ? -1.0 : 1.0) *
                 (0.05 + 3.0 * rng.uniform(c++));
        g.rho = 0.05 + 0.94 * rng.uniform(c++);
        g.psi = M_PI * (rng.uniform(c++) - 0.5);
        g.a2 = 0.01 + 10.0 * rng.uniform(c++);
        GeometricParams h = to_geometric(to_elliptical(g));
        CHECK(h.alpha == doctest::Approx(g.alpha).epsilon(1e-10));
        CHECK(h.beta == doctest::Approx(g.beta).epsilon(1e-10));
        CHECK(h.rho == doctest::Approx(g.rho).epsilon(1e-10));
        CHECK(h.a2 == doctest::Approx(g.a2).epsilon(1e-10));
        // psi is identified modulo pi; compare wrapped difference
        double d = std::remainder(h.psi - g.psi, M_PI);
        CHECK(std::abs(d) < 1e-10);
    }
}

TEST_CASE("eccentricity agrees between the two closed forms") {
    EllipticalParams p = example_a();
    double e = eccentricity(p);
    CHECK(e == doctest::Approx(0.858284387220845).epsilon(1e-13));
    double rho = to_geometric(p).rho;
    CHECK(e == doctest::Approx(std::sqrt(1.0 - std::pow(rho, 4)))
                   .epsilon(1e-12));

    CHECK(eccentricity(example_b()) ==
          doctest::Approx(0.958153497335433).epsilon(1e-13));
}

TEST_CASE("proper AR(1) map at delta = 1") {
    EllipticalParams p;
    p.alpha1 = 0.02;
    p.beta1 = 1.0;
    p.sigma2 = 2.0;
    ComplexAR1Params ar = proper_ar1_map(p, 1.0);
    CHECK(ar.lambda == doctest::Approx(0.980198673306755).epsilon(1e-13));
    CHECK(ar.zeta == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(ar.sigma2_ar == doctest::Approx(1.96052804238384).epsilon(1e-13));

    // alpha1 -> 0 limit: lambda -> 1 and sigma2_ar -> sigma2 * delta
    p.alpha1 = 0.0;
    ComplexAR1Params rw = proper_ar1_map(p, 0.5);
    CHECK(rw.lambda == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(rw.sigma2_ar == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("JSON round trip preserves doubles exactly") {
    EllipticalParams p = example_a();
    EllipticalParams q = elliptical_from_json(to_json(p));
    CHECK(q.alpha1 == p.alpha1);
    CHECK(q.beta1 == p.beta1);
    CHECK(q.alpha2 == p.alpha2);
    CHECK(q.beta2 == p.beta2);
    CHECK(q.sigma2 == p.sigma2);
    CHECK(q.r == p.r);

    GeometricParams g = to_geometric(p);
    GeometricParams h = geometric_from_json(to_json(g));
    CHECK(h.alpha == g.alpha);
    CHECK(h.beta == g.beta);
    CHECK(h.rho == g.rho);
    CHECK(h.psi == g.psi);
    CHECK(h.a2 == g.a2);
}

TEST_CASE("JSON without r fills the implied value") {
    EllipticalParams q = elliptical_from_json(
        R"({"alpha1":0.02,"beta1":1.0,"alpha2":-0.5,"beta2":-0.3,"sigma2":2.0})");
    CHECK(std::abs(q.r - cd(0.6, 1.0)) < 1e-12);
}
