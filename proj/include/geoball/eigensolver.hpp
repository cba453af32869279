#pragma once

#include "geoball/manifold.hpp"

#include <vector>

namespace geoball {

enum class Normalization { pole_one, weighted_unit };

struct EigenResult {
    double lambda = 0;
    std::vector<double> grid;
    std::vector<double> psi;
    std::vector<double> dpsi;
    Normalization normalization = Normalization::pole_one;
    // |psi(r)| / max |psi| of the accepted shot
    double residual = 0;
    int shots = 0;
};

struct EigenOptions {
    double tol = 1e-10;
    int grid_points = 2000;
    Normalization normalization = Normalization::pole_one;
    bool want_eigenfunction = true;
};

// Largest admissible radius on a compact manifold is R - radius_margin.
inline constexpr double radius_margin = 1e-6;

// First Dirichlet eigenvalue of -(f^{n-1} psi')' = lambda f^{n-1} psi on (0, r)
// with psi'(0) = psi(r) = 0, by Pruefer-phase shooting in extended precision.
EigenResult first_eigenvalue(const Manifold& man, double r, const EigenOptions& opt);
EigenResult first_eigenvalue(const Manifold& man, double r, double tol = 1e-10);
double first_eigenvalue_value(const Manifold& man, double r, double tol = 1e-10);

// Graded sample grid on [0, r], clustered at both ends.
std::vector<double> graded_grid(double r, int points);

// Composite fourth-order quadrature of sampled values on a nonuniform grid.
double grid_integral(const std::vector<double>& grid, const std::vector<double>& values);
// Fourth-order derivative of sampled values on a nonuniform grid.
std::vector<double> grid_derivative(const std::vector<double>& grid, const std::vector<double>& values);

// int f^{n-1} u'^2 / int f^{n-1} u^2 for a trial function sampled on grid,
// grid.back() == r and u(r) == 0.
double rayleigh_quotient(const Manifold& man, double r, const std::vector<double>& grid,
                         const std::vector<double>& u);

// Weighted norms on (0, r): X0 is the f^{n-1}-weighted L2 norm, X adds the
// derivative.
double norm_X0(const Manifold& man, const std::vector<double>& grid, const std::vector<double>& u);
double norm_X(const Manifold& man, const std::vector<double>& grid, const std::vector<double>& u);

// Smallest eigenvalue of the self-adjoint three-point finite-volume
// discretization on a graded mesh with m cells, by inverse iteration.
double fd_matrix_oracle(const Manifold& man, double r, int m);
// Richardson extrapolation of the m and 2m discretizations.
double fd_matrix_oracle_extrapolated(const Manifold& man, double r, int m);

} // namespace geoball
