#pragma once

#include "geoball/manifold.hpp"

#include <vector>

namespace geoball {

// lambda(r) = j^2/r^2 - S(p)/6 + (alpha1 S(p)^2 + alpha2 S''(p)) r^2 + O(r^4)
// with Bessel order nu = n/2 - 1 throughout.
struct SmallRadiusExpansion {
    int n = 0;
    double j = 0;
    double c0 = 0;     // sqrt(2) / |J'_nu(j)|
    double I1 = 0;     // int_0^1 xi^3 J^2(j xi)
    double I2 = 0;     // int_0^1 xi^3 J^3(j xi) Y(j xi)
    double I3 = 0;     // int_0^1 xi^4 J^3(j xi) Y'(j xi)
    double alpha1 = 0;
    double alpha2 = 0;
    double norm_check = 0; // c0^2 int_0^1 xi J^2(j xi), should be 1
};

// Computed once per dimension and cached.
const SmallRadiusExpansion& compute_expansion(int n);

// r^2 coefficient written through f'''(0) and f^(5)(0).
double lambda_tilde_2(const SmallRadiusExpansion& e, double f3, double f5);

double evaluate(const SmallRadiusExpansion& e, const Manifold& man, double r);
double evaluate_fderiv_form(const Manifold& man, double r);

struct OrderFit {
    double slope = 0;           // NaN when fewer than two residuals clear the noise floor
    std::vector<double> radii;
    std::vector<double> lambda_num;
    std::vector<double> residuals;
    std::vector<bool> below_noise;
    int used = 0;
};

// Least-squares slope of log|lambda_num - evaluate| against log r.
OrderFit remainder_order_fit(const Manifold& man, const std::vector<double>& radii, double tol = 1e-15);

// Slope of log|y| against log x by least squares.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace geoball
