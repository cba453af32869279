#include "geoball/errors.hpp"
#include "geoball/specfun.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace geoball;
using std::numbers::pi;

TEST_CASE("Bessel J values")
{
    CHECK(bessel_j(0, 0) == 1.0);
    CHECK(std::abs(bessel_j(0.5, pi)) < 1e-15);
    CHECK(bessel_j(1, 1) == doctest::Approx(0.44005058574493355).epsilon(1e-15));
    CHECK(bessel_j(0, 25) == doctest::Approx(0.096266783275958).epsilon(1e-12));
}

TEST_CASE("Bessel Y values")
{
    CHECK(std::abs(bessel_y(0.5, pi / 2)) < 1e-15);
    CHECK(bessel_y(0, 1e-8) < -10);
    CHECK(bessel_y(0, 1) == doctest::Approx(0.08825696421567697).epsilon(1e-14));
    CHECK(bessel_y(1, 2.5) == doctest::Approx(0.14591813796678577).epsilon(1e-14));
}

TEST_CASE("derivatives")
{
    double j0 = first_bessel_zero(0);
    CHECK(bessel_j_prime(0, j0) == doctest::Approx(-0.5191474972894669).epsilon(1e-13));
    CHECK(bessel_j_prime(0.5, pi) == doctest::Approx(-std::sqrt(2 / (pi * pi))).epsilon(1e-14));
}

TEST_CASE("Wronskian")
{
    for (double nu : {0.0, 0.5, 1.0, 1.5, 2.0})
        for (double x : {0.5, 1.0, 2.0, 5.0, 10.0}) {
            double w = bessel_j(nu, x) * bessel_y_prime(nu, x) - bessel_j_prime(nu, x) * bessel_y(nu, x);
            CHECK(std::abs(w - 2 / (pi * x)) <= 1e-9 * 2 / (pi * x));
        }
}

TEST_CASE("first zeros")
{
    CHECK(first_bessel_zero(0.5) == doctest::Approx(pi).epsilon(1e-15));
    CHECK(first_bessel_zero(0) == doctest::Approx(2.404825557695773).epsilon(1e-15));
    CHECK(first_bessel_zero(1) == doctest::Approx(3.831705970207512).epsilon(1e-15));
    for (double nu : {0.0, 0.5, 1.0, 1.5, 2.0, 2.5}) CHECK(std::abs(bessel_j(nu, first_bessel_zero(nu))) <= 1e-11);
}

TEST_CASE("half-integer closed forms match the generic evaluators")
{
    for (double nu : {0.5, 1.5, 2.5, 3.5})
        for (double x : {0.3, 1.0, 4.0, 9.0}) {
            CHECK(std::abs(bessel_j_half(nu, x) - bessel_j(nu, x)) <= 1e-10 * std::abs(bessel_j(nu, x)));
            CHECK(std::abs(bessel_y_half(nu, x) - bessel_y(nu, x)) <= 1e-10 * std::abs(bessel_y(nu, x)));
        }
}

TEST_CASE("quadrature")
{
    CHECK(integrate([](double x) { return x * x; }, 0, 1) == doctest::Approx(1.0 / 3).epsilon(1e-14));
    CHECK(integrate([](double x) { return std::sin(x); }, 0, pi) == doctest::Approx(2).epsilon(1e-14));
    QuadratureSpec q;
    q.endpoint_grading = EndpointGrading::left;
    CHECK(integrate([](double x) { return std::log(1 / x); }, 0, 1, q) == doctest::Approx(1).epsilon(1e-10));

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    auto g = [](double x) { return std::exp(-x) * std::cos(3 * x); };
    for (int i = 0; i < 10; ++i) {
        double c = 2 * u(rng);
        double whole = integrate(g, 0, 2), parts = integrate(g, 0, c) + integrate(g, c, 2);
        CHECK(std::abs(whole - parts) <= 2 * QuadratureSpec{}.abs_tol);
    }

    QuadratureSpec tight;
    tight.rel_tol = 1e-15;
    tight.abs_tol = 1e-300;
    tight.max_depth = 3;
    CHECK_THROWS_AS(integrate([](double x) { return 1 / std::sqrt(x); }, 0, 1, tight), NumericalError);
    auto rep = integrate_report([](double x) { return x; }, 0, 1);
    CHECK(rep.converged);
    CHECK(rep.evaluations > 0);
}

TEST_CASE("Gauss-Legendre rule")
{
    std::vector<double> x, w;
    gauss_legendre(20, x, w);
    double s = 0, m = 0;
    for (int i = 0; i < 20; ++i) {
        s += w[i];
        m += w[i] * std::pow(x[i], 38);
    }
    CHECK(s == doctest::Approx(2).epsilon(1e-15));
    CHECK(m == doctest::Approx(2.0 / 39).epsilon(1e-13));
    CHECK(gamma_fn(5) == doctest::Approx(24).epsilon(1e-15));
}
