#include "geoball/hadamard.hpp"

#include "geoball/eigensolver.hpp"
#include "geoball/errors.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace geoball {

namespace {

constexpr double pole_cutoff = 1e-3;

} // namespace

GeometricKernels geometric_kernels(const Manifold& man, double t)
{
    if (!(t > 0) || !(t < man.warp.R())) throw DomainError("kernels: t outside (0, R)");
    Jet6 F = man.warp.jet(t);
    Jet6 G = differentiate(F) / F;
    Jet6 h = differentiate(G) + G * G * (0.5 * (man.n - 1));
    Jet6 hp = differentiate(h);
    return {G.c[0], h.c[0], t * hp.c[0] + 2.0 * h.c[0]};
}

double kernel_H(const Manifold& man, double t)
{
    if (t < 1e-8) throw DomainError("kernel_H: t < 1e-8, use the pole limit");
    return geometric_kernels(man, t).H;
}

double kernel_H_pole_limit(const Manifold& man)
{
    return 2.0 * man.n * man.warp.jet(0.0).derivative(3) / 3.0;
}

double kernel_H_closed(ConstantCurvature space, int n, double t)
{
    double sn = space == ConstantCurvature::hyperbolic ? std::sinh(t) : std::sin(t);
    double ctg = space == ConstantCurvature::hyperbolic ? std::cosh(t) / sn : std::cos(t) / sn;
    return (n - 1) * ctg * ctg - (2.0 + (n - 3) * t * ctg) / (sn * sn);
}

double kernel_H_mean(const Manifold& man, double r, double tol)
{
    EigenResult er = first_eigenvalue(man, r, tol);
    double H0 = kernel_H_pole_limit(man);
    std::vector<double> num(er.grid.size()), den(er.grid.size());
    for (std::size_t i = 0; i < er.grid.size(); ++i) {
        double t = er.grid[i];
        double f = 0, fp = 0;
        man.warp.eval(t, f, fp);
        double w = std::pow(f, man.n - 1) * er.psi[i] * er.psi[i];
        double H = t < pole_cutoff ? H0 : kernel_H(man, t);
        num[i] = H * w;
        den[i] = w;
    }
    return grid_integral(er.grid, num) / grid_integral(er.grid, den);
}

DerivativeIdentity derivative_identity(const Manifold& man, double r, double tol)
{
    double h = 1e-3 * r;
    double lp2 = first_eigenvalue_value(man, r + 2 * h, tol);
    double lp1 = first_eigenvalue_value(man, r + h, tol);
    double lm1 = first_eigenvalue_value(man, r - h, tol);
    double lm2 = first_eigenvalue_value(man, r - 2 * h, tol);
    double lam = first_eigenvalue_value(man, r, tol);
    double dl = (-lp2 + 8 * lp1 - 8 * lm1 + lm2) / (12 * h);
    DerivativeIdentity out;
    out.lambda = lam;
    out.lhs = r * dl + 2 * lam;
    out.rhs = 0.5 * (man.n - 1) * kernel_H_mean(man, r, tol);
    double denom = std::abs(out.rhs) > 1e-8 * lam ? std::abs(out.rhs) : lam;
    out.residual = std::abs(out.lhs - out.rhs) / denom;
    return out;
}

double derivative_identity_residual(const Manifold& man, double r) { return derivative_identity(man, r).residual; }

double integrated_identity_eval(const Manifold& man, double r, double r0, int quad_points, bool parallel)
{
    if (!(r0 >= 0) || !(r0 < r)) throw DomainError("integrated identity: need 0 <= r0 < r");
    if (quad_points < 2) throw DomainError("integrated identity: need at least 2 nodes");
    std::vector<double> x, w;
    gauss_legendre(quad_points, x, w);
    double c = 0.5 * (r + r0), hw = 0.5 * (r - r0);
    double H0 = kernel_H_pole_limit(man);
    std::vector<double> terms(quad_points);

#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int i = 0; i < quad_points; ++i) {
        double t = c + hw * x[i];
        double mean = t < pole_cutoff ? H0 : kernel_H_mean(man, t, 1e-12);
        terms[i] = hw * w[i] * t * mean;
    }

    double integral = 0;
    for (double v : terms) integral += v;
    double start;
    if (r0 == 0) {
        double j = first_bessel_zero(0.5 * man.n - 1.0);
        start = j * j;
    } else {
        start = r0 * r0 * first_eigenvalue_value(man, r0, 1e-13);
    }
    return (start + 0.5 * (man.n - 1) * integral) / (r * r);
}

EigenBounds bounds_constant_curvature(ConstantCurvature space, int n, double r)
{
    if (n < 2) throw DomainError("bounds: dimension must be at least 2");
    if (!(r > 0)) throw DomainError("bounds: radius must be positive");
    bool hyp = space == ConstantCurvature::hyperbolic;
    if (!hyp && !(r < std::numbers::pi)) throw DomainError("bounds: sphere radius must be below pi");
    double sgn = hyp ? 1.0 : -1.0;
    double sn = hyp ? std::sinh(r) : std::sin(r);
    double j = first_bessel_zero(0.5 * n - 1.0);
    double base = j * j / (r * r);
    if (n == 2) return {base + 0.25 * (1 / (r * r) - 1 / (sn * sn) + sgn), base + sgn / 3.0};
    if (n == 3) return {base + sgn, base + sgn};
    double lower = base + sgn * n * (n - 1) / 6.0;
    double upper = base + sgn * (n - 1) * (n - 1) / 4.0 + (n - 1) * (n - 3) / 4.0 * (1 / (sn * sn) - 1 / (r * r));
    return {lower, upper};
}

} // namespace geoball
