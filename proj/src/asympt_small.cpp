#include "geoball/asympt_small.hpp"

#include "geoball/eigensolver.hpp"
#include "geoball/errors.hpp"
#include "geoball/sweep.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <shared_mutex>

namespace geoball {

namespace {

SmallRadiusExpansion build(int n)
{
    SmallRadiusExpansion e;
    e.n = n;
    double nu = 0.5 * n - 1.0;
    e.j = first_bessel_zero(nu);
    double j = e.j;
    e.c0 = std::sqrt(2.0) / std::abs(bessel_j_prime(nu, j));
    double c2 = e.c0 * e.c0;

    QuadratureSpec spec;
    spec.rel_tol = 1e-11;
    spec.abs_tol = 1e-15;
    QuadratureSpec sing = spec;
    if (n == 2) {
        sing.endpoint_grading = EndpointGrading::left;
        sing.grading_cutoff = 1e-10;
    }
    e.I1 = integrate([&](double x) { double J = bessel_j(nu, j * x); return x * x * x * J * J; }, 0, 1, spec);
    e.I2 = integrate(
        [&](double x) {
            if (x == 0) return 0.0;
            double J = bessel_j(nu, j * x);
            return x * x * x * J * J * J * bessel_y(nu, j * x);
        },
        0, 1, sing);
    e.I3 = integrate(
        [&](double x) {
            if (x == 0) return 0.0;
            double J = bessel_j(nu, j * x);
            return x * x * x * x * J * J * J * bessel_y_prime(nu, j * x);
        },
        0, 1, sing);
    e.norm_check = c2 * integrate([&](double x) { double J = bessel_j(nu, j * x); return x * J * J; }, 0, 1, spec);

    double pi = std::numbers::pi;
    e.alpha1 = c2 / (270.0 * n * n * (n - 1)) * (5 * pi * (n - 1) * (e.I2 + j * e.I3) - 3.0 * (n + 2) * e.I1);
    e.alpha2 = -c2 * e.I1 / 10.0;
    return e;
}

std::shared_mutex cache_mutex;
std::map<int, std::unique_ptr<SmallRadiusExpansion>> cache;

} // namespace

const SmallRadiusExpansion& compute_expansion(int n)
{
    if (n < 2) throw DomainError("compute_expansion: dimension must be at least 2");
    {
        std::shared_lock lock(cache_mutex);
        auto it = cache.find(n);
        if (it != cache.end()) return *it->second;
    }
    auto fresh = std::make_unique<SmallRadiusExpansion>(build(n));
    std::unique_lock lock(cache_mutex);
    auto& slot = cache[n];
    if (!slot) slot = std::move(fresh);
    return *slot;
}

double lambda_tilde_2(const SmallRadiusExpansion& e, double f3, double f5)
{
    double n = e.n;
    double c2 = e.c0 * e.c0;
    return (n - 1) * (n + 2) * (3 * f5 - 5 * f3 * f3) * c2 * e.I1 / 180.0 +
           std::numbers::pi * (n - 1) * (n - 1) * f3 * f3 * c2 * (e.I2 + e.j * e.I3) / 54.0;
}

double evaluate(const SmallRadiusExpansion& e, const Manifold& man, double r)
{
    if (man.n != e.n) throw DomainError("evaluate: expansion dimension does not match the manifold");
    auto pc = scalar_curvature_pole(man);
    return e.j * e.j / (r * r) - pc.S / 6.0 + (e.alpha1 * pc.S * pc.S + e.alpha2 * pc.Spp) * r * r;
}

double evaluate_fderiv_form(const Manifold& man, double r)
{
    const auto& e = compute_expansion(man.n);
    Jet6 j0 = man.warp.jet(0.0);
    double f3 = j0.derivative(3), f5 = j0.derivative(5);
    return e.j * e.j / (r * r) + man.n * (man.n - 1) * f3 / 6.0 + r * r * lambda_tilde_2(e, f3, f5);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    std::size_t m = x.size();
    if (m < 2 || y.size() != m) return std::numeric_limits<double>::quiet_NaN();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        double lx = std::log(std::abs(x[i])), ly = std::log(std::abs(y[i]));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

OrderFit remainder_order_fit(const Manifold& man, const std::vector<double>& radii, double tol)
{
    if (radii.size() < 5) throw DomainError("remainder_order_fit: need at least 5 radii");
    for (double r : radii)
        if (!(r > 0 && r <= 0.5)) throw DomainError("remainder_order_fit: radii must lie in (0, 0.5]");
    const auto& e = compute_expansion(man.n);
    OrderFit fit;
    fit.radii = radii;
    fit.lambda_num = eigen_sweep(man, radii, tol);
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        double ex = evaluate(e, man, radii[i]);
        double res = fit.lambda_num[i] - ex;
        fit.residuals.push_back(res);
        // the extended-precision shot beats tol; the floor is double rounding
        double floor = 20.0 * std::max(0.01 * tol, std::numeric_limits<double>::epsilon());
        bool noise = std::abs(res) <= floor * std::abs(fit.lambda_num[i]);
        fit.below_noise.push_back(noise);
        if (!noise) {
            xs.push_back(radii[i]);
            ys.push_back(res);
        }
    }
    fit.used = int(xs.size());
    fit.slope = loglog_slope(xs, ys);
    return fit;
}

} // namespace geoball
