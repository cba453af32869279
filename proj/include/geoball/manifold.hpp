#pragma once

#include "geoball/expr.hpp"
#include "geoball/jet.hpp"
#include "geoball/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace geoball {

using Jet6 = Jet<double, 6>;

enum class WarpKind { euclidean, sphere, hyperbolic, custom };

class WarpingFunction {
public:
    static WarpingFunction euclidean();
    static WarpingFunction sphere(double kappa = 1.0);
    static WarpingFunction hyperbolic(double kappa = 1.0);
    // R = +inf for a non-compact manifold. With tolerant set, failed pole or
    // endpoint checks are reported on stderr instead of thrown.
    static WarpingFunction custom(ExprPtr expr, double R = std::numeric_limits<double>::infinity(),
                                  bool tolerant = false);

    WarpKind kind() const { return kind_; }
    double kappa() const { return kappa_; }
    double R() const { return R_; }
    bool compact() const { return compact_; }
    // f'(R); only meaningful when compact.
    double A() const { return A_; }
    const ExprPtr& expr() const { return expr_; }
    std::string describe() const;

    // Taylor jet of f about t, order 6.
    Jet6 jet(double t) const;
    // Taylor jet of f about R - d, built from d so that points close to R keep
    // their relative accuracy.
    Jet6 jet_from_end(double d) const;
    // Same, any order; the large-radius constants use order 12 at R.
    template <int N>
    Jet<double, N> jet_end(double d) const;

    // f(t) and f'(t) in any floating type; the eigensolver runs in long double.
    template <class T>
    void eval(T t, T& f, T& fp) const;
    // f(R - d).
    double f_from_end(double d) const;

private:
    WarpingFunction(WarpKind k, double kappa, double R, ExprPtr e)
        : kind_(k), kappa_(kappa), R_(R), expr_(std::move(e))
    {}
    void validate(bool tolerant);

    WarpKind kind_;
    double kappa_;
    double R_;
    ExprPtr expr_;
    bool compact_ = false;
    double A_ = 0;
};

template <class T>
void WarpingFunction::eval(T t, T& f, T& fp) const
{
    using std::cos;
    using std::cosh;
    using std::sin;
    using std::sinh;
    T k = T(kappa_);
    switch (kind_) {
    case WarpKind::euclidean:
        f = t;
        fp = T(1);
        return;
    case WarpKind::sphere:
        f = sin(k * t) / k;
        fp = cos(k * t);
        return;
    case WarpKind::hyperbolic:
        f = sinh(k * t) / k;
        fp = cosh(k * t);
        return;
    case WarpKind::custom: {
        auto j = expr_->jet<T, 1>(t);
        f = j.c[0];
        fp = j.c[1];
        return;
    }
    }
}

template <int N>
Jet<double, N> WarpingFunction::jet_end(double d) const
{
    if (!std::isfinite(R_)) throw std::invalid_argument("jet_end on a manifold without finite R");
    if (kind_ == WarpKind::sphere) {
        Jet<double, N> s, c;
        sincos_linear(kappa_ * d, -kappa_, s, c);
        return s * (1.0 / kappa_);
    }
    return expr_->jet<double, N>(R_ - d);
}

struct Manifold {
    int n;
    WarpingFunction warp;

    Manifold(int dim, WarpingFunction w);
    std::string describe() const;
};

// Builtin shorthands e{n}, s{n}, h{n} (curvature 1).
Manifold builtin_space(const std::string& code);
// JSON text: {"dimension": n, "warp": {"kind": ..., "kappa": k | "expr": "..."}, "R": x | "inf"}.
Manifold parse_manifold_json(const std::string& text);
Manifold load_manifold_file(const std::string& path);

double unit_sphere_volume(int m);
double volume(const Manifold& man, double r);
double boundary_area(const Manifold& man, double r);
double scalar_curvature(const Manifold& man, double t);

struct PoleCurvature {
    double S;
    double Spp;
};
PoleCurvature scalar_curvature_pole(const Manifold& man);

} // namespace geoball
