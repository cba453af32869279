#include "geoball/sweep.hpp"

#include "geoball/eigensolver.hpp"

#include <omp.h>

namespace geoball {

namespace {
int g_limit = 0;
}

void set_thread_limit(int threads)
{
    g_limit = threads > 0 ? threads : 0;
    if (g_limit > 0) omp_set_num_threads(g_limit);
}

int thread_limit() { return g_limit > 0 ? g_limit : omp_get_max_threads(); }

std::vector<double> eigen_sweep(const Manifold& man, const std::vector<double>& radii, double tol)
{
    return parallel_map<double>(int(radii.size()),
                                [&](int i) { return first_eigenvalue_value(man, radii[i], tol); });
}

std::vector<double> eigen_sweep_serial(const Manifold& man, const std::vector<double>& radii, double tol)
{
    return serial_map<double>(int(radii.size()), [&](int i) { return first_eigenvalue_value(man, radii[i], tol); });
}

std::vector<double> fd_sweep(const Manifold& man, const std::vector<double>& radii, int m)
{
    return parallel_map<double>(int(radii.size()), [&](int i) { return fd_matrix_oracle(man, radii[i], m); });
}

std::vector<double> fd_sweep_serial(const Manifold& man, const std::vector<double>& radii, int m)
{
    return serial_map<double>(int(radii.size()), [&](int i) { return fd_matrix_oracle(man, radii[i], m); });
}

} // namespace geoball
