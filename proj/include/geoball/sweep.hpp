#pragma once

#include "geoball/manifold.hpp"

#include <exception>
#include <functional>
#include <vector>

namespace geoball {

// Thread cap for all OpenMP kernels; 0 leaves the runtime default.
void set_thread_limit(int threads);
int thread_limit();

// out[i] = fn(i) for i in [0, count), evaluated concurrently. Each slot is
// written by exactly one iteration, so the result does not depend on the
// schedule. The first exception (by index) is rethrown after the loop.
template <class T>
std::vector<T> parallel_map(int count, const std::function<T(int)>& fn)
{
    std::vector<T> out(count);
    std::vector<std::exception_ptr> errs(count);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < count; ++i) {
        try {
            out[i] = fn(i);
        } catch (...) {
            errs[i] = std::current_exception();
        }
    }
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    return out;
}

template <class T>
std::vector<T> serial_map(int count, const std::function<T(int)>& fn)
{
    std::vector<T> out(count);
    for (int i = 0; i < count; ++i) out[i] = fn(i);
    return out;
}

// First eigenvalue at every radius: OpenMP kernel and its serial reference.
std::vector<double> eigen_sweep(const Manifold& man, const std::vector<double>& radii, double tol);
std::vector<double> eigen_sweep_serial(const Manifold& man, const std::vector<double>& radii, double tol);

// Finite-volume oracle at every radius.
std::vector<double> fd_sweep(const Manifold& man, const std::vector<double>& radii, int m);
std::vector<double> fd_sweep_serial(const Manifold& man, const std::vector<double>& radii, int m);

} // namespace geoball
