#include "eou/params.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

namespace eou {

namespace {
double sgn(double x) { return x < 0.0 ? -1.0 : 1.0; }
} // namespace

void validate(const EllipticalParams& p, bool check_r) {
    if (!(p.alpha1 > 0.0))
        throw validation_error("stationarity violated: alpha1 must be > 0");
    if (p.beta1 == 0.0)
        throw validation_error("invalid ellipse: beta1 must be nonzero");
    double q2 = p.alpha2 * p.alpha2 + p.beta2 * p.beta2;
    double b2 = p.beta1 * p.beta1;
    if (b2 - q2 < 1e-12 * b2)
        throw validation_error(
            "invalid ellipse: beta1^2 must exceed alpha2^2 + beta2^2");
    if (!(p.sigma2 >= 0.0) || !std::isfinite(p.sigma2))
        throw validation_error("sigma2 must be a finite non-negative scalar");
    if (check_r) {
        std::complex<double> want = implied_r(p);
        double scale = std::max(std::abs(want), p.sigma2);
        if (std::abs(p.r - want) > 1e-10 * scale)
            throw validation_error(
                "pseudo-variance r inconsistent with -(sigma2/beta1)(beta2 + i alpha2)");
        if (std::abs(p.r) > p.sigma2 * (1.0 + 1e-12))
            throw validation_error("improper increment: sigma2 must be >= |r|");
    }
}

void validate(const GeometricParams& g) {
    if (!(g.alpha > 0.0))
        throw validation_error("stationarity violated: alpha must be > 0");
    if (!(g.rho > 0.0) || g.rho > 1.0)
        throw validation_error("rho must lie in (0, 1]");
    if (g.psi < -M_PI / 2 || g.psi > M_PI / 2)
        throw validation_error("psi must lie in [-pi/2, pi/2]");
    if (!(g.a2 > 0.0))
        throw validation_error("a2 must be > 0");
    if (g.beta == 0.0)
        throw validation_error("beta must be nonzero");
}

std::complex<double> implied_r(const EllipticalParams& p) {
    return -(p.sigma2 / p.beta1) * std::complex<double>(p.beta2, p.alpha2);
}

GeometricParams to_geometric(const EllipticalParams& p) {
    validate(p);
    double q = std::hypot(p.alpha2, p.beta2);
    double ab = std::abs(p.beta1);
    double root = std::sqrt(p.beta1 * p.beta1 - q * q);

    GeometricParams g;
    g.alpha = p.alpha1;
    g.beta = sgn(p.beta1) * root;
    g.rho = std::pow((ab - q) / (ab + q), 0.25);
    double s = sgn(-p.beta1);
    g.psi = 0.5 * s * std::atan2(p.alpha2, s * p.beta2);
    if (g.psi == -M_PI / 2) g.psi = M_PI / 2; // orientation is pi-periodic
    g.a2 = p.sigma2 * root / ab;
    return g;
}

EllipticalParams to_elliptical(const GeometricParams& g) {
    validate(g);
    double r2 = g.rho * g.rho;
    double plus = r2 + 1.0 / r2;
    double minus = r2 - 1.0 / r2;

    EllipticalParams p;
    p.alpha1 = g.alpha;
    p.beta1 = 0.5 * g.beta * plus;
    p.alpha2 = 0.5 * g.beta * minus * std::sin(2.0 * g.psi);
    p.beta2 = 0.5 * g.beta * minus * std::cos(2.0 * g.psi);
    p.sigma2 = 0.5 * g.a2 * plus;
    p.r = implied_r(p);
    return p;
}

double eccentricity(const EllipticalParams& p) {
    validate(p);
    double q = std::hypot(p.alpha2, p.beta2);
    return std::sqrt(2.0 * q / (std::abs(p.beta1) + q));
}

ComplexAR1Params proper_ar1_map(const EllipticalParams& p, double delta) {
    if (p.alpha2 != 0.0 || p.beta2 != 0.0 || std::abs(p.r) != 0.0)
        throw validation_error(
            "OU<->AR(1) mapping is only available for the proper case "
            "(alpha2 = beta2 = r = 0); the general widely-linear mapping "
            "has no closed form");
    if (p.alpha1 < 0.0)
        throw validation_error("alpha1 must be >= 0");
    if (!(delta > 0.0))
        throw validation_error("delta must be > 0");

    ComplexAR1Params a;
    a.lambda = std::exp(-p.alpha1 * delta);
    a.zeta = p.beta1;
    a.sigma2_ar = p.alpha1 > 0.0
                      ? p.sigma2 * (-std::expm1(-2.0 * p.alpha1 * delta)) /
                            (2.0 * p.alpha1)
                      : p.sigma2 * delta;
    return a;
}

std::string to_json(const EllipticalParams& p) {
    nlohmann::json j{{"alpha1", p.alpha1}, {"beta1", p.beta1},
                     {"alpha2", p.alpha2}, {"beta2", p.beta2},
                     {"sigma2", p.sigma2}, {"r_re", p.r.real()},
                     {"r_im", p.r.imag()}};
    return j.dump(2);
}

std::string to_json(const GeometricParams& g) {
    nlohmann::json j{{"alpha", g.alpha}, {"beta", g.beta}, {"rho", g.rho},
                     {"psi", g.psi}, {"a2", g.a2}};
    return j.dump(2);
}

EllipticalParams elliptical_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    EllipticalParams p;
    p.alpha1 = j.at("alpha1").get<double>();
    p.beta1 = j.at("beta1").get<double>();
    p.alpha2 = j.at("alpha2").get<double>();
    p.beta2 = j.at("beta2").get<double>();
    p.sigma2 = j.at("sigma2").get<double>();
    if (j.contains("r_re") || j.contains("r_im"))
        p.r = {j.value("r_re", 0.0), j.value("r_im", 0.0)};
    else
        p.r = implied_r(p); // redundant parameter; fill from the others
    return p;
}

GeometricParams geometric_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    GeometricParams g;
    g.alpha = j.at("alpha").get<double>();
    g.beta = j.at("beta").get<double>();
    g.rho = j.at("rho").get<double>();
    g.psi = j.at("psi").get<double>();
    g.a2 = j.at("a2").get<double>();
    return g;
}

} // namespace eou
