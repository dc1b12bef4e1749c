#pragma once

#include <complex>
#include <string>

namespace eou {

// Thrown when a parameter set violates a model constraint. The message names
// the violated constraint.
class validation_error : public std::invalid_argument {
public:
    explicit validation_error(const std::string& what)
        : std::invalid_argument(what) {}
};

// Coefficients of the complex SDE
//   dz = (-alpha1 + i beta1) z dt + (-alpha2 + i beta2) z* dt + dW,
// with dW having variance sigma2 dt and pseudo-variance r dt.
struct EllipticalParams {
    double alpha1 = 0.0;
    double beta1 = 0.0;
    double alpha2 = 0.0;
    double beta2 = 0.0;
    double sigma2 = 0.0;
    std::complex<double> r{0.0, 0.0};
};

// Parameters of the deformed bivariate construction: damping alpha,
// oscillation frequency beta (radians per time unit), stretch rho in (0,1],
// orientation psi in [-pi/2, pi/2], noise amplitude a2 = A^2.
struct GeometricParams {
    double alpha = 0.0;
    double beta = 0.0;
    double rho = 1.0;
    double psi = 0.0;
    double a2 = 0.0;
};

// Discrete-time complex AR(1) parameters for the proper case:
//   Z_t = lambda e^{i zeta Delta} Z_{t-1} + eps_t,  Var(eps) = sigma2_ar.
// zeta is stored per unit time; the per-step rotation is zeta * Delta.
struct ComplexAR1Params {
    double lambda = 0.0;
    double zeta = 0.0;
    double sigma2_ar = 0.0;
};

// Validation. Throws validation_error naming the violated constraint.
// check_r additionally enforces consistency of the redundant pseudo-variance
// r = -(sigma2/beta1)(beta2 + i alpha2) to relative tolerance 1e-10, and
// propriety of increments sigma2 >= |r|.
void validate(const EllipticalParams& p, bool check_r = false);
void validate(const GeometricParams& g);

GeometricParams to_geometric(const EllipticalParams& p);
EllipticalParams to_elliptical(const GeometricParams& g);

// The implied redundant pseudo-variance -(sigma2/beta1)(beta2 + i alpha2).
std::complex<double> implied_r(const EllipticalParams& p);

// Eccentricity sqrt(2 q / (|beta1| + q)) with q = sqrt(alpha2^2 + beta2^2);
// equals sqrt(1 - rho^4).
double eccentricity(const EllipticalParams& p);

// Proper-case (alpha2 = beta2 = r = 0) mapping to the sampled AR(1) at
// interval delta. alpha1 = 0 is accepted as the random-walk limit.
ComplexAR1Params proper_ar1_map(const EllipticalParams& p, double delta);

// JSON (de)serialization; lowercase field names, r split as r_re/r_im.
std::string to_json(const EllipticalParams& p);
std::string to_json(const GeometricParams& g);
EllipticalParams elliptical_from_json(const std::string& text);
GeometricParams geometric_from_json(const std::string& text);

} // namespace eou
