#include "geoball/acceptance.hpp"

#include "geoball/asympt_large.hpp"
#include "geoball/asympt_small.hpp"
#include "geoball/eigensolver.hpp"
#include "geoball/errors.hpp"
#include "geoball/expr.hpp"
#include "geoball/hadamard.hpp"
#include "geoball/specfun.hpp"
#include "geoball/sweep.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

namespace geoball {

namespace {

using std::numbers::pi;

CriterionResult timed(int id, double budget, const std::function<bool(std::string&)>& body)
{
    auto t0 = std::chrono::steady_clock::now();
    CriterionResult res;
    res.id = id;
    try {
        res.pass = body(res.detail);
    } catch (const std::exception& e) {
        res.detail = std::string("exception: ") + e.what();
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (budget > 0 && res.seconds > budget) {
        res.pass = false;
        res.detail += fmt::format("; over the {} s budget", budget);
    }
    return res;
}

Manifold space(char k, int n) { return builtin_space(std::string(1, k) + std::to_string(n)); }

} // namespace

CriterionResult run_criterion(int id)
{
    switch (id) {
    case 1:
        return timed(1, 5, [](std::string& d) {
            double worst = 0;
            for (double r : {0.5, 1.0, 2.0}) {
                double l = first_eigenvalue_value(space('h', 3), r, 1e-13);
                worst = std::max(worst, std::abs(l - (pi * pi / (r * r) + 1)) / l);
            }
            for (double r : {0.5, 1.0, 2.5}) {
                double l = first_eigenvalue_value(space('s', 3), r, 1e-13);
                worst = std::max(worst, std::abs(l - (pi * pi / (r * r) - 1)) / l);
            }
            d = fmt::format("max relative error {:.3e} (tol 1e-8)", worst);
            return worst <= 1e-8;
        });
    case 2:
        return timed(2, 30, [](std::string& d) {
            int bad = 0;
            double r = 0.8;
            for (auto sp : {ConstantCurvature::hyperbolic, ConstantCurvature::sphere})
                for (int n : {2, 4, 5, 6}) {
                    double l = first_eigenvalue_value(space(sp == ConstantCurvature::sphere ? 's' : 'h', n), r, 1e-12);
                    auto b = bounds_constant_curvature(sp, n, r);
                    if (!(b.lower <= l && l <= b.upper + 1e-8)) ++bad;
                }
            d = fmt::format("{} of 12 cases outside [lower, upper + 1e-8] at r = {}", bad, r);
            return bad == 0;
        });
    case 3:
        return timed(3, 0, [](std::string& d) {
            double worst = 0;
            for (char k : {'s', 'h'})
                for (int n = 2; n <= 5; ++n) {
                    auto man = space(k, n);
                    double j = first_bessel_zero(n / 2.0 - 1);
                    double S = scalar_curvature_pole(man).S;
                    double l = first_eigenvalue_value(man, 0.05, 1e-13);
                    worst = std::max(worst, std::abs(l - j * j / 0.0025 + S / 6) / (0.02 * (1 + std::abs(S))));
                }
            d = fmt::format("max deviation / 0.02(1+|S|) = {:.3e} (want <= 1)", worst);
            return worst <= 1;
        });
    case 4:
        return timed(4, 60, [](std::string& d) {
            std::vector<double> radii;
            for (int k = 0; k <= 4; ++k) radii.push_back(0.4 * std::pow(0.5, k));
            double a = remainder_order_fit(space('s', 2), radii).slope;
            double b = remainder_order_fit(space('s', 4), radii).slope;
            d = fmt::format("slopes S2 {:.4f}, S4 {:.4f} (want [3.5, 4.5])", a, b);
            return a >= 3.5 && a <= 4.5 && b >= 3.5 && b <= 4.5;
        });
    case 5:
        return timed(5, 0, [](std::string& d) {
            auto& e = compute_expansion(3);
            // truncated sinh gives a pole with S'' != 0
            Manifold m(3, WarpingFunction::custom(Expr::parse("(+ t (scale 0.16666666666666666 (pow t 3)))")));
            double Spp = scalar_curvature_pole(m).Spp;
            double ref = (1 / (2 * pi * pi) - 1.0 / 3) * Spp / 10;
            double err = std::abs(e.alpha2 * Spp - ref);
            d = fmt::format("|alpha1| = {:.2e}, alpha2 S'' error {:.2e}", std::abs(e.alpha1), err);
            return std::abs(e.alpha1) <= 1e-10 && err <= 1e-8;
        });
    case 6:
        return timed(6, 60, [](std::string& d) {
            auto man = space('s', 2);
            double delta = 1e-3, r = pi - delta;
            double l = fd_matrix_oracle(man, r, 16000);
            auto c = compute_constants(man);
            auto e = expansion_terms(c, man, r, ExpansionVariant::literal);
            auto ec = expansion_terms(c, man, r, ExpansionVariant::corrected);
            double L = std::abs(std::log(delta));
            double dev = std::abs(e.value - l);
            double tol = 3 / L * std::abs(e.terms[0]);
            d = fmt::format("lambda ln(R-r) = {:.5f} (limit {:.5f}); |literal - lambda| = {:.3e} vs {:.3e}; "
                            "corrected {:.3e}",
                            l * std::log(delta), c.V_R / c.B1[1], dev, tol, std::abs(ec.value - l));
            return dev <= tol;
        });
    case 7:
        return timed(7, 0, [](std::string& d) {
            auto man = space('s', 3);
            std::vector<double> amu;
            std::vector<std::vector<double>> err(3);
            std::vector<double> radii;
            for (int k = 3; k <= 7; ++k) radii.push_back(pi - std::pow(2.0, -k));
            auto lam = eigen_sweep(man, radii, 1e-14);
            for (size_t i = 0; i < radii.size(); ++i) {
                auto s = lambda_series(man, radii[i], 3);
                amu.push_back(std::abs(s.mu));
                double sum = 0;
                for (int m = 0; m < 3; ++m) {
                    sum += s.terms[m];
                    err[m].push_back(std::abs(lam[i] - sum));
                }
            }
            bool ok = true;
            std::string parts;
            for (int m = 0; m < 3; ++m) {
                double p = loglog_slope(amu, err[m]);
                ok = ok && std::abs(p - (m + 2)) <= 0.5;
                parts += fmt::format("{}m={}: {:.3f} (want {})", m ? ", " : "", m + 1, p, m + 2);
            }
            d = "fitted orders " + parts;
            return ok;
        });
    case 8:
        return timed(8, 0, [](std::string& d) {
            std::vector<double> delta;
            for (int k = 3; k <= 7; ++k) delta.push_back(std::pow(2.0, -k));
            auto r4 = log_term_detector(space('s', 4), delta);
            auto r3 = log_term_detector(space('s', 3), delta);
            d = fmt::format("S4 p = {:.4f} (want [3.7, 4.3]); S3 log regressor improvement {:.2e} (want < 0.05)", r4.p,
                            r3.log_improvement);
            return r4.p >= 3.7 && r4.p <= 4.3 && r3.log_improvement < 0.05;
        });
    case 9:
        return timed(9, 0, [](std::string& d) {
            double worst = 0;
            for (const char* c : {"h2", "h3", "s2", "s3", "h4", "s4"})
                worst = std::max(worst, derivative_identity_residual(builtin_space(c), 1.0));
            double wi = 0;
            for (const char* c : {"s2", "h3"}) {
                auto man = builtin_space(c);
                double l = first_eigenvalue_value(man, 1.0, 1e-13);
                wi = std::max(wi, std::abs(integrated_identity_eval(man, 1.0) / l - 1));
            }
            d = fmt::format("max derivative residual {:.2e} (tol 1e-3); integrated rel err {:.2e} (tol 1e-4)", worst, wi);
            return worst <= 1e-3 && wi <= 1e-4;
        });
    case 10:
        return timed(10, 0, [](std::string& d) {
            double worst = 0;
            for (int n = 2; n <= 5; ++n)
                for (char k : {'e', 's', 'h'}) {
                    auto man = space(k, n);
                    double r = 0.6 + 0.3 * n;
                    double a = first_eigenvalue_value(man, r, 1e-12);
                    double b = fd_matrix_oracle_extrapolated(man, r, 2000);
                    worst = std::max(worst, std::abs(a - b) / a);
                }
            d = fmt::format("max relative difference {:.2e} over 12 cases (tol 1e-6)", worst);
            return worst <= 1e-6;
        });
    default:
        throw DomainError(fmt::format("criterion must lie in 1..{}", criterion_count));
    }
}

} // namespace geoball
