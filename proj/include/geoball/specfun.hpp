#pragma once

#include <functional>
#include <vector>

namespace geoball {

// Bessel functions of real order nu >= 0 and real argument. Power series in
// extended precision for moderate x, Hankel asymptotics beyond.
double bessel_j(double nu, double x);
double bessel_y(double nu, double x);
double bessel_j_prime(double nu, double x);
double bessel_y_prime(double nu, double x);

// Half-integer orders only: closed trigonometric forms via the spherical
// Bessel recurrences. Used to cross-check the generic evaluators.
double bessel_j_half(double nu, double x);
double bessel_y_half(double nu, double x);

// First positive zero j_{nu,1}.
double first_bessel_zero(double nu);

double gamma_fn(double x);

enum class EndpointGrading { none, left, right, both };

struct QuadratureSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    int max_depth = 40;
    EndpointGrading endpoint_grading = EndpointGrading::none;
    // Smallest geometric cell next to a graded endpoint, relative to b - a.
    double grading_cutoff = 1e-14;
};

struct QuadResult {
    double value = 0;
    double abs_error = 0;
    long evaluations = 0;
    bool converged = true;
};

// Adaptive 15-point Gauss-Legendre with interval bisection. Throws
// NumericalError when the depth limit is hit before the tolerance is met.
double integrate(const std::function<double(double)>& g, double a, double b,
                 const QuadratureSpec& spec = {});
QuadResult integrate_report(const std::function<double(double)>& g, double a, double b,
                            const QuadratureSpec& spec = {});

// n-point Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

} // namespace geoball
