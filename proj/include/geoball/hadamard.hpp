#pragma once

#include "geoball/manifold.hpp"

namespace geoball {

// g = f'/f, h = g' + (n-1) g^2 / 2, H = t h' + 2h.
struct GeometricKernels {
    double g;
    double h;
    double H;
};

GeometricKernels geometric_kernels(const Manifold& man, double t);
// Rejects t < 1e-8; use kernel_H_pole_limit there.
double kernel_H(const Manifold& man, double t);
// lim_{t -> 0+} H(t) = 2 n f'''(0) / 3
double kernel_H_pole_limit(const Manifold& man);

enum class ConstantCurvature { hyperbolic, sphere };

// Closed forms for curvature +-1:
//   H = (n-1) ctg^2 - (2 + (n-3) t ctg) / sn^2, ctg = coth | cot, sn = sinh | sin.
double kernel_H_closed(ConstantCurvature space, int n, double t);

struct DerivativeIdentity {
    double lhs;      // r lambda'(r) + 2 lambda(r)
    double rhs;      // (n-1)/2 <H>_psi
    double lambda;
    double residual; // |lhs - rhs| / |rhs|, or / lambda when rhs vanishes
};

// Weighted mean of H against f^{n-1} psi^2 for the ground state of the ball of radius r.
double kernel_H_mean(const Manifold& man, double r, double tol = 1e-12);

DerivativeIdentity derivative_identity(const Manifold& man, double r, double tol = 1e-13);
double derivative_identity_residual(const Manifold& man, double r);

// Right side of the integrated identity
//   r^2 lambda(r) = lim_{s->r0} s^2 lambda(s) + (n-1)/2 int_{r0}^r t <H>_t dt,
// with <H>_t taken for the eigenfunction of the ball of radius t at every
// Gauss-Legendre node. Returns the reconstructed lambda(r).
double integrated_identity_eval(const Manifold& man, double r, double r0 = 0.0, int quad_points = 64,
                                bool parallel = true);

struct EigenBounds {
    double lower;
    double upper;
};

EigenBounds bounds_constant_curvature(ConstantCurvature space, int n, double r);

} // namespace geoball
