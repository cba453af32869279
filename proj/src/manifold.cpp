#include "geoball/manifold.hpp"

#include "geoball/errors.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace geoball {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

void check(bool ok, bool tolerant, const std::string& what)
{
    if (ok) return;
    if (!tolerant) throw DomainError("warping function: " + what);
    std::fprintf(stderr, "warning: warping function: %s\n", what.c_str());
}

} // namespace

WarpingFunction WarpingFunction::euclidean()
{
    WarpingFunction w(WarpKind::euclidean, 1.0, inf, nullptr);
    w.validate(false);
    return w;
}

WarpingFunction WarpingFunction::sphere(double kappa)
{
    if (!(kappa > 0)) throw DomainError("sphere curvature must be positive");
    WarpingFunction w(WarpKind::sphere, kappa, std::numbers::pi / kappa, nullptr);
    w.validate(false);
    return w;
}

WarpingFunction WarpingFunction::hyperbolic(double kappa)
{
    if (!(kappa > 0)) throw DomainError("hyperbolic curvature must be positive");
    WarpingFunction w(WarpKind::hyperbolic, kappa, inf, nullptr);
    w.validate(false);
    return w;
}

WarpingFunction WarpingFunction::custom(ExprPtr expr, double R, bool tolerant)
{
    if (!expr) throw DomainError("custom warping needs an expression");
    if (!(R > 0)) throw DomainError("domain end R must be positive");
    WarpingFunction w(WarpKind::custom, 1.0, R, std::move(expr));
    w.validate(tolerant);
    return w;
}

void WarpingFunction::validate(bool tolerant)
{
    Jet6 j0 = jet(0.0);
    check(std::abs(j0.c[0]) <= 1e-12, tolerant, "f(0) != 0");
    check(std::abs(j0.c[1] - 1.0) <= 1e-12, tolerant, "f'(0) != 1");
    check(std::abs(j0.derivative(2)) <= 1e-12, tolerant, "f''(0) != 0");
    check(std::abs(j0.derivative(4)) <= 1e-10, tolerant, "f''''(0) != 0");

    double span = std::isfinite(R_) ? R_ : 10.0;
    for (int i = 1; i < 200; ++i) {
        double t = span * i / 200.0;
        double f = 0, fp = 0;
        eval(t, f, fp);
        if (!(f > 0)) {
            check(false, tolerant, "f must be positive on (0, R), fails at t = " + std::to_string(t));
            break;
        }
    }

    if (std::isfinite(R_)) {
        Jet6 jr = jet_from_end(0.0);
        if (std::abs(jr.c[0]) <= 1e-10) {
            A_ = jr.c[1];
            check(A_ < 0, tolerant, "compact end needs f'(R) < 0");
            check(std::abs(jr.derivative(2)) <= 1e-8, tolerant, "compact end needs f''(R) = 0");
            compact_ = A_ < 0;
        }
    }
}

Jet6 WarpingFunction::jet(double t) const
{
    Jet6 s, c;
    switch (kind_) {
    case WarpKind::euclidean:
        return Jet6::variable(t);
    case WarpKind::sphere:
        sincos_linear(kappa_ * t, kappa_, s, c);
        return s * (1.0 / kappa_);
    case WarpKind::hyperbolic:
        sinhcosh_linear(kappa_ * t, kappa_, s, c);
        return s * (1.0 / kappa_);
    case WarpKind::custom:
        return expr_->jet<double, 6>(t);
    }
    return s;
}

Jet6 WarpingFunction::jet_from_end(double d) const
{
    if (!std::isfinite(R_)) throw DomainError("jet_from_end on a manifold without finite R");
    if (kind_ == WarpKind::sphere) {
        // sin(kappa (R - d + h)) = sin(kappa d - kappa h)
        Jet6 s, c;
        sincos_linear(kappa_ * d, -kappa_, s, c);
        return s * (1.0 / kappa_);
    }
    return jet(R_ - d);
}

double WarpingFunction::f_from_end(double d) const
{
    if (kind_ == WarpKind::sphere) return std::sin(kappa_ * d) / kappa_;
    double f = 0, fp = 0;
    eval(R_ - d, f, fp);
    return f;
}

std::string WarpingFunction::describe() const
{
    std::ostringstream os;
    os.precision(17);
    switch (kind_) {
    case WarpKind::euclidean: os << "euclidean"; break;
    case WarpKind::sphere: os << "sphere(kappa=" << kappa_ << ")"; break;
    case WarpKind::hyperbolic: os << "hyperbolic(kappa=" << kappa_ << ")"; break;
    case WarpKind::custom: os << "custom" << expr_->str() << " R=" << R_; break;
    }
    return os.str();
}

Manifold::Manifold(int dim, WarpingFunction w) : n(dim), warp(std::move(w))
{
    if (n < 2) throw DomainError("dimension must be at least 2");
}

std::string Manifold::describe() const { return "n=" + std::to_string(n) + " " + warp.describe(); }

Manifold builtin_space(const std::string& code)
{
    if (code.size() < 2) throw DomainError("space shorthand must look like s3, h2 or e4");
    int n = 0;
    try {
        std::size_t used = 0;
        n = std::stoi(code.substr(1), &used);
        if (used != code.size() - 1) throw DomainError("bad dimension in '" + code + "'");
    } catch (const std::logic_error&) {
        throw DomainError("bad dimension in '" + code + "'");
    }
    switch (code[0]) {
    case 'e': return Manifold(n, WarpingFunction::euclidean());
    case 's': return Manifold(n, WarpingFunction::sphere());
    case 'h': return Manifold(n, WarpingFunction::hyperbolic());
    default: throw DomainError("unknown space '" + code + "', expected e{n}, s{n} or h{n}");
    }
}

Manifold parse_manifold_json(const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("manifold file: ") + e.what());
    }
    try {
        int n = j.at("dimension").get<int>();
        const auto& w = j.at("warp");
        std::string kind = w.at("kind").get<std::string>();
        bool tolerant = j.value("tolerant", false);
        double R = inf;
        if (j.contains("R")) {
            const auto& r = j["R"];
            if (r.is_string()) {
                if (r.get<std::string>() != "inf") throw DomainError("R must be a number or \"inf\"");
            } else {
                R = r.get<double>();
            }
        }
        double kappa = w.value("kappa", 1.0);
        if (kind == "euclidean") return Manifold(n, WarpingFunction::euclidean());
        if (kind == "hyperbolic") return Manifold(n, WarpingFunction::hyperbolic(kappa));
        if (kind == "sphere") {
            auto wf = WarpingFunction::sphere(kappa);
            if (std::isfinite(R) && std::abs(R - wf.R()) > 1e-12 * wf.R())
                throw DomainError("sphere R must equal pi/kappa");
            return Manifold(n, wf);
        }
        if (kind == "custom")
            return Manifold(n, WarpingFunction::custom(Expr::parse(w.at("expr").get<std::string>()), R, tolerant));
        throw DomainError("unknown warp kind '" + kind + "'");
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("manifold file: ") + e.what());
    }
}

Manifold load_manifold_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open manifold file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_manifold_json(ss.str());
}

double unit_sphere_volume(int m)
{
    if (m < 1) throw DomainError("unit_sphere_volume needs m >= 1");
    double k = 0.5 * (m + 1);
    return 2.0 * std::pow(std::numbers::pi, k) / gamma_fn(k);
}

double volume(const Manifold& man, double r)
{
    if (!(r > 0) || r > man.warp.R()) throw DomainError("volume: radius outside (0, R]");
    int p = man.n - 1;
    QuadratureSpec spec;
    spec.rel_tol = 1e-12;
    spec.abs_tol = 1e-300;
    double I = integrate(
        [&](double t) {
            double f = 0, fp = 0;
            man.warp.eval(t, f, fp);
            return std::pow(f, p);
        },
        0.0, r, spec);
    return unit_sphere_volume(man.n - 1) * I;
}

double boundary_area(const Manifold& man, double r)
{
    if (!(r > 0) || r > man.warp.R()) throw DomainError("boundary_area: radius outside (0, R]");
    double f = 0, fp = 0;
    if (std::isfinite(man.warp.R()) && r == man.warp.R())
        f = 0;
    else
        man.warp.eval(r, f, fp);
    return unit_sphere_volume(man.n - 1) * std::pow(f, man.n - 1);
}

double scalar_curvature(const Manifold& man, double t)
{
    if (!(t > 0) || !(t < man.warp.R()))
        throw DomainError("scalar_curvature: t outside (0, R); use scalar_curvature_pole at t = 0");
    Jet6 j = man.warp.jet(t);
    double f = j.c[0], f1 = j.c[1], f2 = j.derivative(2);
    double n = man.n;
    return -2.0 * (n - 1) * f2 / f + (n - 1) * (n - 2) * (1.0 - f1 * f1) / (f * f);
}

PoleCurvature scalar_curvature_pole(const Manifold& man)
{
    Jet6 j = man.warp.jet(0.0);
    double f3 = j.derivative(3), f5 = j.derivative(5);
    double n = man.n;
    // S'(p) is proportional to f''''(0), which construction already checked.
    return {-n * (n - 1) * f3, (n + 2) * (n - 1) / 6.0 * (f3 * f3 - f5)};
}

} // namespace geoball
