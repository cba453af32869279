#include "geoball/eigensolver.hpp"
#include "geoball/sweep.hpp"

#include <doctest.h>

#include <stdexcept>

using namespace geoball;

TEST_CASE("parallel sweeps match the serial reference exactly")
{
    auto man = builtin_space("s3");
    std::vector<double> radii;
    for (int i = 1; i <= 12; ++i) radii.push_back(0.2 * i);
    auto a = eigen_sweep(man, radii, 1e-12);
    auto b = eigen_sweep_serial(man, radii, 1e-12);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);

    auto fa = fd_sweep(man, {0.5, 1.0, 2.0}, 400);
    auto fb = fd_sweep_serial(man, {0.5, 1.0, 2.0}, 400);
    for (size_t i = 0; i < fa.size(); ++i) CHECK(fa[i] == fb[i]);
}

TEST_CASE("thread limit and exceptions")
{
    set_thread_limit(2);
    CHECK(thread_limit() == 2);
    set_thread_limit(0);
    CHECK(thread_limit() >= 1);
    auto out = parallel_map<int>(100, [](int i) { return i * i; });
    CHECK(out[99] == 9801);
    CHECK_THROWS_AS(parallel_map<int>(10,
                                      [](int i) {
                                          if (i == 3) throw std::runtime_error("x");
                                          return i;
                                      }),
                    std::runtime_error);
}
