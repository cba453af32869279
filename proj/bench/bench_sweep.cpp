#include "geoball/eigensolver.hpp"
#include "geoball/hadamard.hpp"
#include "geoball/sweep.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace geoball;

namespace {

std::vector<double> radii(int count)
{
    std::vector<double> r;
    for (int i = 1; i <= count; ++i) r.push_back(3.0 * i / (count + 1));
    return r;
}

void BM_eigen_sweep_serial(benchmark::State& st)
{
    auto man = builtin_space("s3");
    auto r = radii(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(eigen_sweep_serial(man, r, 1e-12));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_eigen_sweep_parallel(benchmark::State& st)
{
    auto man = builtin_space("s3");
    auto r = radii(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(eigen_sweep(man, r, 1e-12));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_fd_sweep_serial(benchmark::State& st)
{
    auto man = builtin_space("h4");
    auto r = radii(8);
    for (auto _ : st) benchmark::DoNotOptimize(fd_sweep_serial(man, r, static_cast<int>(st.range(0))));
}

void BM_fd_sweep_parallel(benchmark::State& st)
{
    auto man = builtin_space("h4");
    auto r = radii(8);
    for (auto _ : st) benchmark::DoNotOptimize(fd_sweep(man, r, static_cast<int>(st.range(0))));
}

void BM_integrated_identity(benchmark::State& st)
{
    auto man = builtin_space("s2");
    bool par = st.range(0) != 0;
    for (auto _ : st) benchmark::DoNotOptimize(integrated_identity_eval(man, 1.0, 0.0, 64, par));
}

} // namespace

BENCHMARK(BM_eigen_sweep_serial)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_eigen_sweep_parallel)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_fd_sweep_serial)->Arg(2000)->Arg(16000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_fd_sweep_parallel)->Arg(2000)->Arg(16000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_integrated_identity)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
