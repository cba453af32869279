#include "geoball/eigensolver.hpp"
#include "geoball/errors.hpp"
#include "geoball/hadamard.hpp"
#include "geoball/specfun.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

using namespace geoball;
using std::numbers::pi;

TEST_CASE("kernel H on constant curvature")
{
    CHECK(kernel_H(builtin_space("h3"), 1.3) == doctest::Approx(2).epsilon(1e-10));
    CHECK(kernel_H(builtin_space("s3"), 0.4) == doctest::Approx(-2).epsilon(1e-10));
    CHECK(std::abs(kernel_H(builtin_space("h2"), 30.0) - 1) <= 1e-3);
    CHECK(kernel_H(builtin_space("e4"), 0.7) == doctest::Approx(0).scale(1));
    CHECK_THROWS_AS(kernel_H(builtin_space("h3"), 1e-9), DomainError);

    for (int n = 2; n <= 6; ++n)
        for (double t : {0.3, 1.1, 2.4}) {
            CHECK(kernel_H(builtin_space("h" + std::to_string(n)), t) ==
                  doctest::Approx(kernel_H_closed(ConstantCurvature::hyperbolic, n, t)).epsilon(1e-9));
            CHECK(kernel_H(builtin_space("s" + std::to_string(n)), t) ==
                  doctest::Approx(kernel_H_closed(ConstantCurvature::sphere, n, t)).epsilon(1e-9));
        }
}

TEST_CASE("H near the pole")
{
    for (int n = 2; n <= 5; ++n) {
        auto h = builtin_space("h" + std::to_string(n));
        auto s = builtin_space("s" + std::to_string(n));
        CHECK(kernel_H_pole_limit(h) == doctest::Approx(2.0 * n / 3));
        CHECK(kernel_H_pole_limit(s) == doctest::Approx(-2.0 * n / 3));
        CHECK(std::abs(kernel_H(h, 1e-5) - 2.0 * n / 3) <= 1e-3);
        CHECK(std::abs(kernel_H(s, 1e-5) + 2.0 * n / 3) <= 1e-3);
    }
}

TEST_CASE("monotonicity of H")
{
    auto pattern = [](const char* k, int n, double tmax) {
        auto man = builtin_space(std::string(k) + std::to_string(n));
        int sign = 0;
        bool consistent = true;
        double prev = kernel_H(man, tmax / 201);
        for (int i = 2; i <= 200; ++i) {
            double cur = kernel_H(man, tmax * i / 201);
            int s = std::abs(cur - prev) < 1e-9 * (1 + std::abs(cur)) ? 0 : (cur > prev ? 1 : -1);
            if (sign == 0) sign = s;
            else if (s != 0 && s != sign) consistent = false;
            prev = cur;
        }
        return consistent ? sign : 99;
    };
    CHECK(pattern("h", 2, 10) == -1);
    CHECK(pattern("h", 3, 10) == 0);
    CHECK(pattern("h", 4, 10) == 1);
    CHECK(pattern("h", 6, 10) == 1);
    CHECK(pattern("s", 2, pi - 0.1) == -1);
    CHECK(pattern("s", 3, pi - 0.1) == 0);
    CHECK(pattern("s", 4, pi - 0.1) == 1);
}

TEST_CASE("derivative identity")
{
    auto h3 = derivative_identity(builtin_space("h3"), 1.0);
    CHECK(h3.lhs == doctest::Approx(2).epsilon(1e-6));
    CHECK(h3.rhs == doctest::Approx(2).epsilon(1e-10));
    auto e2 = derivative_identity(builtin_space("e2"), 1.0);
    CHECK(std::abs(e2.lhs) <= 1e-6);
    CHECK(std::abs(e2.rhs) <= 1e-12);
    CHECK(derivative_identity_residual(builtin_space("s2"), 1.0) <= 1e-4);
    for (const char* c : {"h2", "h3", "s2", "s3", "h4", "s4"})
        CHECK(derivative_identity_residual(builtin_space(c), 1.2) <= 1e-3);
}

TEST_CASE("integrated identity")
{
    CHECK(integrated_identity_eval(builtin_space("h3"), 1.5) ==
          doctest::Approx(pi * pi / 2.25 + 1).epsilon(1e-6));
    double j = first_bessel_zero(1);
    CHECK(integrated_identity_eval(builtin_space("e4"), 1.0) == doctest::Approx(j * j).epsilon(1e-8));
    auto s2 = builtin_space("s2");
    double l = first_eigenvalue_value(s2, 1.0, 1e-12);
    CHECK(std::abs(integrated_identity_eval(s2, 1.0) / l - 1) <= 1e-4);
    CHECK(std::abs(integrated_identity_eval(s2, 1.0, 0.5) / l - 1) <= 1e-4);
    CHECK(integrated_identity_eval(s2, 1.0, 0.0, 32, false) == integrated_identity_eval(s2, 1.0, 0.0, 32, true));
}

TEST_CASE("closed-form bounds")
{
    double j0 = first_bessel_zero(0), j1 = first_bessel_zero(1);
    auto b = bounds_constant_curvature(ConstantCurvature::hyperbolic, 3, 2.0);
    CHECK(b.lower == doctest::Approx(pi * pi / 4 + 1));
    CHECK(b.upper == doctest::Approx(pi * pi / 4 + 1));
    b = bounds_constant_curvature(ConstantCurvature::hyperbolic, 2, 1.0);
    double sh = std::sinh(1.0);
    CHECK(b.lower == doctest::Approx(j0 * j0 + 0.25 * (1 - 1 / (sh * sh) + 1)));
    CHECK(b.upper == doctest::Approx(j0 * j0 + 1.0 / 3));
    b = bounds_constant_curvature(ConstantCurvature::sphere, 4, 1.0);
    double sn = std::sin(1.0);
    CHECK(b.lower == doctest::Approx(j1 * j1 - 2));
    CHECK(b.upper == doctest::Approx(j1 * j1 - 9.0 / 4 + 0.75 * (1 / (sn * sn) - 1)));
    CHECK_THROWS_AS(bounds_constant_curvature(ConstantCurvature::sphere, 3, 3.5), DomainError);
    CHECK_THROWS_AS(bounds_constant_curvature(ConstantCurvature::hyperbolic, 3, -1), DomainError);
}

TEST_CASE("bounds enclose the eigenvalue")
{
    for (int n : {2, 4, 5, 6})
        for (double r : {0.3, 0.8, 1.5})
            for (auto sp : {ConstantCurvature::hyperbolic, ConstantCurvature::sphere}) {
                auto man = builtin_space((sp == ConstantCurvature::sphere ? "s" : "h") + std::to_string(n));
                double l = first_eigenvalue_value(man, r, 1e-12);
                auto b = bounds_constant_curvature(sp, n, r);
                CHECK(b.lower <= l);
                CHECK(l <= b.upper + 1e-8);
            }
    for (double r : {0.5, 1.0, 2.0})
        CHECK(first_eigenvalue_value(builtin_space("h3"), r, 1e-12) ==
              doctest::Approx(pi * pi / (r * r) + 1).epsilon(1e-8));
    for (double r : {0.5, 1.0, 2.5})
        CHECK(first_eigenvalue_value(builtin_space("s3"), r, 1e-12) ==
              doctest::Approx(pi * pi / (r * r) - 1).epsilon(1e-8));
}

TEST_CASE("bounds are sharp for small r and at hyperbolic infinity")
{
    double l = first_eigenvalue_value(builtin_space("h2"), 0.05, 1e-12);
    auto b = bounds_constant_curvature(ConstantCurvature::hyperbolic, 2, 0.05);
    CHECK(b.upper - l <= 0.05);
    CHECK(l - b.lower <= 0.05);
    for (int n : {4, 6}) {
        double j = first_bessel_zero(n / 2.0 - 1);
        auto u = bounds_constant_curvature(ConstantCurvature::hyperbolic, n, 20.0);
        CHECK(std::abs(u.upper - j * j / 400 - (n - 1) * (n - 1) / 4.0) <= 0.05);
        CHECK(u.upper - (n - 1) * (n - 1) / 4.0 <= 0.07);
    }
    auto u4 = bounds_constant_curvature(ConstantCurvature::hyperbolic, 4, 20.0);
    CHECK(u4.upper - 9.0 / 4 <= 0.05);
}
