#include "geoball/asympt_large.hpp"
#include "geoball/eigensolver.hpp"
#include "geoball/errors.hpp"
#include "geoball/specfun.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

using namespace geoball;
using std::numbers::pi;

TEST_CASE("gauge function")
{
    CHECK(mu(3, 1.0, 0.9) == doctest::Approx(0.1));
    CHECK(mu(2, 1.0, 1.0 - std::exp(-1.0)) == doctest::Approx(-1));
    CHECK(mu(4, 1.0, 0.9) == doctest::Approx(-0.02));
    CHECK_THROWS_AS(mu(3, 1.0, 1.0), DomainError);
}

TEST_CASE("panel grid quadrature")
{
    auto s3 = builtin_space("s3");
    auto g = full_grid(s3);
    std::vector<double> v(g.size());
    for (int i = 0; i < g.size(); ++i) v[i] = std::sin(g.t()[i]);
    CHECK(g.total(v) == doctest::Approx(2).epsilon(1e-13));
    auto c = g.cumulative(v);
    auto rc = g.reverse_cumulative(v);
    for (int i = 0; i < g.size(); i += 37) {
        CHECK(c[i] == doctest::Approx(1 - std::cos(g.t()[i])).epsilon(1e-12));
        CHECK(c[i] + rc[i] == doctest::Approx(2).epsilon(1e-13));
        CHECK(g.t()[i] + g.d()[i] == doctest::Approx(pi).epsilon(1e-15));
    }
    CHECK(total_volume(s3) == doctest::Approx(2 * pi * pi).epsilon(1e-13));
    CHECK(total_volume(builtin_space("s2")) == doctest::Approx(4 * pi).epsilon(1e-13));
    CHECK_THROWS_AS(full_grid(builtin_space("h3")), DomainError);
    CHECK_THROWS_AS(ball_grid(s3, pi), DomainError);
}

TEST_CASE("solution operator")
{
    auto e2 = builtin_space("e2");
    auto g = ball_grid(e2, 1.0);
    auto vs = volume_samples(e2, g);
    std::vector<double> zero(g.size(), 0.0), rhs(g.size());
    for (double u : solution_operator(g, vs, zero)) CHECK(u == 0.0);
    for (int i = 0; i < g.size(); ++i) rhs[i] = 1 - 2 * g.t()[i] * g.t()[i];
    CHECK(neumann_defect(g, vs, rhs) <= 1e-14);
    auto u = solution_operator(g, vs, rhs);
    for (int i = 0; i < g.size(); ++i) {
        double t = g.t()[i];
        CHECK(u[i] == doctest::Approx((1 - t * t) * (1 - t * t) / 8).scale(1).epsilon(1e-13));
    }
    std::vector<double> one(g.size(), 1.0);
    CHECK_THROWS_AS(solution_operator(g, vs, one), DomainError);

    // oracle: nested adaptive quadrature of the same representation
    auto s3 = builtin_space("s3");
    double r = 2.5;
    auto g3 = ball_grid(s3, r);
    auto v3 = volume_samples(s3, g3);
    auto wt = [](double t) { return 4 * pi * std::sin(t) * std::sin(t); };
    auto raw = [](double t) { return std::cos(1.7 * t) + 0.3 * t; };
    QuadratureSpec q;
    q.rel_tol = 1e-13;
    q.abs_tol = 1e-15;
    double mean = integrate([&](double t) { return wt(t) * raw(t); }, 0, r, q) / volume(s3, r);
    std::vector<double> h(g3.size());
    for (int i = 0; i < g3.size(); ++i) h[i] = raw(g3.t()[i]) - mean;
    auto w = solution_operator(g3, v3, h);
    auto E = [&](double s) { return integrate([&](double t) { return wt(t) * (raw(t) - mean); }, 0, s, q); };
    for (int i = 3; i < g3.size(); i += g3.size() / 7) {
        double ref = integrate([&](double s) { return s < 1e-12 ? 0.0 : E(s) / wt(s); }, g3.t()[i], r, q);
        CHECK(w[i] == doctest::Approx(ref).scale(1).epsilon(1e-10));
    }
}

TEST_CASE("first-family constants")
{
    auto c2 = compute_constants(builtin_space("s2"));
    CHECK(c2.A == doctest::Approx(-1));
    CHECK(c2.V_R == doctest::Approx(4 * pi).epsilon(1e-13));
    CHECK(c2.B1[1] == doctest::Approx(-8 * pi).epsilon(1e-12));
    CHECK(c2.V_R / c2.B1[1] == doctest::Approx(-0.5).epsilon(1e-12));
    auto c3 = compute_constants(builtin_space("s3"));
    CHECK(c3.B1[1] == doctest::Approx(pi * pi * pi).epsilon(1e-12));
    CHECK(std::isnan(c3.B2[0]));
    CHECK(std::isfinite(c3.B2[4]));
    CHECK_THROWS_AS(compute_constants(builtin_space("h3")), DomainError);
}

TEST_CASE("endpoint readings")
{
    // f = sin: f'''(R) = 1, f'''(0) = -1, A = -1
    auto t = compute_constants(builtin_space("s3"), EndpointReading::taylor);
    auto z = compute_constants(builtin_space("s3"), EndpointReading::at_zero);
    auto r = compute_constants(builtin_space("s3"), EndpointReading::at_R);
    CHECK(t.f3R == doctest::Approx(1));
    CHECK(t.A2 == doctest::Approx(2.0 * 1 / (6 * -1.0)));
    CHECK(z.A2 == doctest::Approx(-r.A2));
}

TEST_CASE("regularized integrands stay bounded")
{
    for (const char* s : {"s2", "s3", "s4", "s5"}) {
        auto c = compute_constants(builtin_space(s));
        for (const auto& ch : c.checks) {
            if (ch.name.find("(literal)") != std::string::npos) continue;
            INFO(s << " " << ch.name);
            CHECK(ch.bounded);
            CHECK(ch.d.size() == 5);
        }
    }
}

TEST_CASE("mu series against the eigensolver")
{
    auto s2 = builtin_space("s2");
    double r = pi - 0.05;
    auto ser = lambda_series(s2, r, 3);
    double sum = ser.terms[0] + ser.terms[1] + ser.terms[2];
    double l = first_eigenvalue_value(s2, r, 1e-13);
    CHECK(std::abs(sum - l) <= 2 * std::pow(std::abs(ser.mu), 4));
    CHECK(ser.psi0_at_0 == doctest::Approx(1).epsilon(1e-8));
    CHECK(ser.terms[1] == doctest::Approx(lambda2_closed(s2, r)).epsilon(1e-10));
    CHECK(!ser.extrapolated);
    CHECK(lambda_series(s2, 1.0).extrapolated);

    auto s3 = builtin_space("s3");
    auto c3 = compute_constants(s3);
    auto a = lambda_series(s3, pi - 0.1, 1);
    CHECK(a.terms[0] == doctest::Approx(-c3.V_R / c3.B1[1] * -0.1).epsilon(0.05));
    CHECK(std::abs(lambda_series(s3, pi - 1e-5, 1).terms[0]) <= 1e-4);
    CHECK_THROWS_AS(lambda_series(s3, 2.0, 4), DomainError);
}

TEST_CASE("leading term is positive")
{
    for (const char* s : {"s2", "s3", "s4", "s5"}) {
        auto man = builtin_space(s);
        for (double x : {0.55, 0.7, 0.85, 0.95, 0.99, 0.999}) CHECK(lambda_series(man, x * pi, 1).terms[0] > 0);
    }
}

TEST_CASE("test-function bound dominates")
{
    for (const char* s : {"s2", "s3", "s4"}) {
        auto man = builtin_space(s);
        for (double d : {0.3, 0.1, 0.01}) {
            double l = first_eigenvalue_value(man, pi - d, 1e-13);
            CHECK(upper_bound_compact(man, pi - d) >= l - 1e-9);
        }
    }
    CHECK(upper_bound_compact(builtin_space("s3"), pi - 1e-5) <= 1e-4);
}

TEST_CASE("expansion leading terms")
{
    auto s2 = builtin_space("s2");
    auto c2 = compute_constants(s2);
    auto e = expansion_terms(c2, s2, pi - 0.01);
    CHECK(e.terms[0] == doctest::Approx(-0.5 / std::log(0.01)).epsilon(1e-10));
    CHECK(e.terms[0] == doctest::Approx(0.1086).epsilon(1e-3));
    auto s3 = builtin_space("s3");
    auto c3 = compute_constants(s3);
    CHECK(expansion_terms(c3, s3, pi - 0.1).terms[0] == doctest::Approx(0.2 / pi).epsilon(1e-10));
    for (const char* s : {"s2", "s3", "s4", "s5"}) {
        auto man = builtin_space(s);
        auto c = compute_constants(man);
        double v = expansion_evaluate(c, man, pi - 1e-6);
        CHECK(v > 0);
        CHECK(v < 0.1);
    }
    CHECK(expansion_terms(c3, s3, 1.0).extrapolated);
}

TEST_CASE("expansions track the eigenvalue")
{
    for (const char* s : {"s2", "s3"}) {
        auto man = builtin_space(s);
        auto c = compute_constants(man);
        double r = pi - 0.05;
        double l = first_eigenvalue_value(man, r, 1e-13);
        auto ser = lambda_series(man, r, 3);
        double sum = ser.terms[0] + ser.terms[1] + ser.terms[2];
        auto e = expansion_terms(c, man, r);
        double last = std::abs(e.terms.back());
        CHECK(std::abs(e.value - sum) <= 10 * last);
        CHECK(std::abs(e.value - l) <= 10 * last);
    }
}

TEST_CASE("G expansion for the 3-sphere")
{
    auto s3 = builtin_space("s3");
    auto c = compute_constants(s3);
    std::vector<double> ratio;
    for (double d : {0.1, 0.05, 0.025, 0.0125}) {
        double G = lambda_series(s3, pi - d, 1).G;
        double model = -c.B1[1] / -d + c.B2[4] + c.B1[2] * -d;
        ratio.push_back((G - model) / (d * d));
    }
    for (size_t i = 1; i < ratio.size(); ++i) CHECK(std::abs(ratio[i] / ratio[0] - 1) <= 0.1);
}

TEST_CASE("logarithmic terms")
{
    std::vector<double> delta;
    for (int k = 3; k <= 7; ++k) delta.push_back(std::pow(0.5, k));
    auto r4 = log_term_detector(builtin_space("s4"), delta);
    CHECK(r4.p >= 3.7);
    CHECK(r4.p <= 4.3);
    CHECK(r4.coefficient.back() == doctest::Approx(r4.expected_coefficient).epsilon(0.05));
    auto r3 = log_term_detector(builtin_space("s3"), delta);
    CHECK(r3.log_improvement < 0.05);
    CHECK(r3.expected_coefficient == 0);
    auto r2 = log_term_detector(builtin_space("s2"), {1e-3, 1e-4, 1e-5, 1e-6});
    CHECK(std::abs(r2.coefficient.back() + 0.5) <= 0.05);
    CHECK_THROWS_AS(log_term_detector(builtin_space("s4"), {0.1, 0.05}), DomainError);
}
