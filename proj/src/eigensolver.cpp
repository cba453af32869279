#include "geoball/eigensolver.hpp"

#include "geoball/errors.hpp"

#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace geoball {

namespace odeint = boost::numeric::odeint;

namespace {

using ld = long double;
using State = std::array<ld, 2>;
constexpr ld pi_l = 3.141592653589793238462643383279502884L;

void check_radius(const Manifold& man, double r)
{
    if (!(r > 0)) throw DomainError("radius must be positive");
    double R = man.warp.R();
    if (std::isfinite(R) && !(r <= R - radius_margin))
        throw DomainError("radius must satisfy r <= R - 1e-6; the limit r -> R belongs to the large-radius expansion");
}

// Pruefer variables psi = rho sin(theta), psi' = k rho cos(theta), k^2 = lambda:
//   theta' = k + (n-1) g sin(theta) cos(theta),  (ln rho)' = -(n-1) g cos^2(theta),
// with g = f'/f.
struct Pruefer {
    const WarpingFunction& warp;
    ld nm1;
    ld k;

    void operator()(const State& y, State& dy, ld t) const
    {
        ld f = 0, fp = 0;
        warp.eval(t, f, fp);
        ld g = fp / f;
        ld s = std::sin(y[0]), c = std::cos(y[0]);
        dy[0] = k + nm1 * g * s * c;
        dy[1] = -nm1 * g * c * c;
    }
};

struct Launch {
    ld delta;
    ld psi;
    ld dpsi;
};

// psi = 1 + a t^2 + b t^4 with a = -lambda/(2n), b = lambda (lambda + 2(n-1)f'''(0)/3) / (8n(n+2))
Launch series_launch(int n, ld f3, ld lambda, ld delta)
{
    ld a = -lambda / (2 * n);
    ld b = lambda * (lambda + 2 * (n - 1) * f3 / 3) / (8 * ld(n) * (n + 2));
    ld d2 = delta * delta;
    return {delta, 1 + a * d2 + b * d2 * d2, 2 * a * delta + 4 * b * d2 * delta};
}

class Shooter {
public:
    Shooter(const Manifold& man, double r, double tol)
        : man_(man), r_(r), f3_(man.warp.jet(0.0).derivative(3)),
          delta_(std::min(1e-4, r * 1e-3)), step_tol_(std::clamp(tol * 1e-3, 1e-19, 1e-9))
    {}

    State initial(ld lambda) const
    {
        Launch L = series_launch(man_.n, f3_, lambda, delta_);
        ld k = std::sqrt(lambda);
        return {std::atan2(k * L.psi, L.dpsi), std::log(std::hypot(L.psi, L.dpsi / k))};
    }

    ld phase(ld lambda)
    {
        ++shots;
        State y = initial(lambda);
        std::vector<ld> times{delta_, ld(r_)};
        run(lambda, y, times, [](const State&, ld) {});
        return y[0];
    }

    template <class Obs>
    void run(ld lambda, State& y, const std::vector<ld>& times, Obs obs)
    {
        Pruefer sys{man_.warp, ld(man_.n - 1), std::sqrt(lambda)};
        auto stepper = odeint::make_controlled(step_tol_, step_tol_, odeint::runge_kutta_dopri5<State, ld>());
        ld dt0 = std::min<ld>(delta_, 0.01L / sys.k);
        try {
            odeint::integrate_times(stepper, sys, y, times.begin(), times.end(), dt0, obs,
                                    odeint::max_step_checker(20000000));
        } catch (const std::exception& e) {
            throw NumericalError(std::string("eigensolver: integration failed: ") + e.what());
        }
    }

    ld delta() const { return delta_; }
    ld f3() const { return f3_; }

    int shots = 0;

private:
    const Manifold& man_;
    double r_;
    ld f3_;
    ld delta_;
    ld step_tol_;
};

double bracket_and_solve(Shooter& sh, const Manifold& man, double r, double tol)
{
    double j = first_bessel_zero(0.5 * man.n - 1.0);
    double base = j * j / (r * r);
    double S = std::abs(scalar_curvature_pole(man).S);
    ld lo = 0.5L * base, hi = 2.0L * (base + S);
    auto F = [&](ld lam) { return sh.phase(lam) - pi_l; };

    ld Flo = F(lo);
    for (int i = 0; Flo > 0; ++i) {
        if (i > 200) throw NumericalError("eigensolver: lower bracket not found");
        hi = lo;
        lo *= 0.5L;
        Flo = F(lo);
    }
    ld Fhi = F(hi);
    for (int i = 0; Fhi < 0; ++i) {
        if (i > 200) throw NumericalError("eigensolver: upper bracket not found");
        lo = hi;
        Flo = Fhi;
        hi *= 2;
        Fhi = F(hi);
    }
    // phase past 2 pi means a second zero: shrink toward lo until the bracket
    // holds the ground state only
    for (int i = 0; Fhi >= pi_l; ++i) {
        if (i > 200) throw NumericalError("eigensolver: could not isolate the ground state");
        hi = 0.5L * (lo + hi);
        Fhi = F(hi);
        if (Fhi < 0) {
            lo = hi;
            Flo = Fhi;
            hi *= 2;
            Fhi = F(hi);
        }
    }

    int bits = std::clamp(int(-std::log2(std::max(tol * 1e-2, 1e-19))), 8, 62);
    boost::uintmax_t iters = 300;
    auto res = boost::math::tools::toms748_solve(F, lo, hi, Flo, Fhi, boost::math::tools::eps_tolerance<ld>(bits),
                                                 iters);
    ld lam = 0.5L * (res.first + res.second);
    if (lam <= 0) throw NumericalError("eigensolver: nonpositive eigenvalue");
    return double(lam);
}

} // namespace

std::vector<double> graded_grid(double r, int points)
{
    if (points < 3) throw DomainError("grid needs at least 3 points");
    std::vector<double> g(points);
    for (int i = 0; i < points; ++i) {
        double s = double(i) / (points - 1);
        g[i] = 0.5 * r * (1.0 - std::cos(std::numbers::pi * s));
    }
    g.front() = 0.0;
    g.back() = r;
    return g;
}

double first_eigenvalue_value(const Manifold& man, double r, double tol)
{
    EigenOptions o;
    o.tol = tol;
    o.want_eigenfunction = false;
    return first_eigenvalue(man, r, o).lambda;
}

EigenResult first_eigenvalue(const Manifold& man, double r, double tol)
{
    EigenOptions o;
    o.tol = tol;
    return first_eigenvalue(man, r, o);
}

EigenResult first_eigenvalue(const Manifold& man, double r, const EigenOptions& opt)
{
    check_radius(man, r);
    if (!(opt.tol > 0)) throw DomainError("tolerance must be positive");
    Shooter sh(man, r, opt.tol);
    EigenResult out;
    out.normalization = opt.normalization;
    out.lambda = bracket_and_solve(sh, man, r, opt.tol);
    ld lam = out.lambda;
    ld k = std::sqrt(lam);

    if (!opt.want_eigenfunction) {
        ld th = sh.phase(lam);
        out.residual = double(std::abs(std::sin(th)));
        out.shots = sh.shots;
        return out;
    }

    out.grid = graded_grid(r, opt.grid_points);
    const auto& grid = out.grid;
    std::size_t N = grid.size();
    out.psi.assign(N, 0.0);
    out.dpsi.assign(N, 0.0);

    std::vector<ld> times{sh.delta()};
    std::size_t first = 0;
    for (std::size_t i = 0; i < N; ++i) {
        if (grid[i] <= double(sh.delta())) {
            Launch L = series_launch(man.n, sh.f3(), lam, grid[i]);
            out.psi[i] = double(L.psi);
            out.dpsi[i] = double(L.dpsi);
            first = i + 1;
        } else {
            times.push_back(grid[i]);
        }
    }
    State y = sh.initial(lam);
    std::size_t idx = first;
    bool skip_launch = true;
    sh.run(lam, y, times, [&](const State& s, ld) {
        if (skip_launch) {
            skip_launch = false;
            return;
        }
        ld rho = std::exp(s[1]);
        out.psi[idx] = double(rho * std::sin(s[0]));
        out.dpsi[idx] = double(k * rho * std::cos(s[0]));
        ++idx;
    });
    out.shots = sh.shots + 1;

    double peak = 0;
    for (double v : out.psi) peak = std::max(peak, std::abs(v));
    out.residual = std::abs(out.psi.back()) / peak;
    for (std::size_t i = 0; i + 1 < N; ++i)
        if (!(out.psi[i] > 0)) throw NumericalError("eigensolver: eigenfunction changes sign in the interior");

    if (opt.normalization == Normalization::weighted_unit) {
        double s = 1.0 / norm_X0(man, out.grid, out.psi);
        for (auto& v : out.psi) v *= s;
        for (auto& v : out.dpsi) v *= s;
    }
    return out;
}

double grid_integral(const std::vector<double>& x, const std::vector<double>& v)
{
    std::size_t N = x.size();
    if (N != v.size() || N < 4) throw DomainError("grid_integral: need matching arrays of at least 4 points");
    // exact integral of the local cubic interpolant via two-point Gauss
    const double g = 0.5 / std::sqrt(3.0);
    double total = 0;
    for (std::size_t i = 0; i + 1 < N; ++i) {
        std::size_t s = i == 0 ? 0 : std::min(i - 1, N - 4);
        double a = x[i], b = x[i + 1];
        double m = 0.5 * (a + b), h = b - a;
        for (double z : {m - g * h, m + g * h}) {
            double val = 0;
            for (std::size_t p = s; p < s + 4; ++p) {
                double L = 1;
                for (std::size_t q = s; q < s + 4; ++q)
                    if (q != p) L *= (z - x[q]) / (x[p] - x[q]);
                val += L * v[p];
            }
            total += 0.5 * h * val;
        }
    }
    return total;
}

std::vector<double> grid_derivative(const std::vector<double>& x, const std::vector<double>& v)
{
    std::size_t N = x.size();
    if (N != v.size() || N < 5) throw DomainError("grid_derivative: need matching arrays of at least 5 points");
    std::vector<double> d(N);
    for (std::size_t i = 0; i < N; ++i) {
        std::size_t s = i < 2 ? 0 : std::min(i - 2, N - 5);
        double z = x[i];
        double acc = 0;
        // derivative of the Lagrange basis polynomial at z
        for (std::size_t p = s; p < s + 5; ++p) {
            double dl = 0;
            for (std::size_t q = s; q < s + 5; ++q) {
                if (q == p) continue;
                double term = 1.0 / (x[p] - x[q]);
                for (std::size_t o = s; o < s + 5; ++o)
                    if (o != p && o != q) term *= (z - x[o]) / (x[p] - x[o]);
                dl += term;
            }
            acc += dl * v[p];
        }
        d[i] = acc;
    }
    return d;
}

namespace {

std::vector<double> weight_on(const Manifold& man, const std::vector<double>& grid)
{
    std::vector<double> w(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double f = 0, fp = 0;
        man.warp.eval(grid[i], f, fp);
        w[i] = std::pow(f, man.n - 1);
    }
    return w;
}

} // namespace

double rayleigh_quotient(const Manifold& man, double r, const std::vector<double>& grid, const std::vector<double>& u)
{
    if (grid.empty() || std::abs(grid.back() - r) > 1e-12 * r) throw DomainError("rayleigh_quotient: grid must end at r");
    double peak = 0;
    for (double v : u) peak = std::max(peak, std::abs(v));
    if (peak == 0) throw DomainError("rayleigh_quotient: trial function is identically zero");
    if (std::abs(u.back()) > 1e-8 * peak) throw DomainError("rayleigh_quotient: trial function must vanish at r");
    auto w = weight_on(man, grid);
    auto du = grid_derivative(grid, u);
    std::vector<double> num(grid.size()), den(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        num[i] = w[i] * du[i] * du[i];
        den[i] = w[i] * u[i] * u[i];
    }
    double D = grid_integral(grid, den);
    if (!(D > 0)) throw DomainError("rayleigh_quotient: zero denominator");
    return grid_integral(grid, num) / D;
}

double norm_X0(const Manifold& man, const std::vector<double>& grid, const std::vector<double>& u)
{
    auto w = weight_on(man, grid);
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = w[i] * u[i] * u[i];
    return std::sqrt(std::max(0.0, grid_integral(grid, v)));
}

double norm_X(const Manifold& man, const std::vector<double>& grid, const std::vector<double>& u)
{
    auto w = weight_on(man, grid);
    auto du = grid_derivative(grid, u);
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = w[i] * (du[i] * du[i] + u[i] * u[i]);
    return std::sqrt(std::max(0.0, grid_integral(grid, v)));
}

double fd_matrix_oracle(const Manifold& man, double r, int m)
{
    check_radius(man, r);
    if (m < 100) throw DomainError("fd_matrix_oracle: need m >= 100");
    const double a = 0.9;
    const int p = man.n - 1;
    auto weight = [&](double t) {
        double f = 0, fp = 0;
        man.warp.eval(t, f, fp);
        return std::pow(f, p);
    };
    std::vector<double> t(m + 1);
    for (int i = 0; i <= m; ++i) {
        double s = double(i) / m;
        t[i] = r * (s - a * std::sin(2 * std::numbers::pi * s) / (2 * std::numbers::pi));
    }
    t[0] = 0;
    t[m] = r;

    // flux coefficients on cells, masses on dual cells
    std::vector<double> kf(m), mass(m, 0.0);
    for (int i = 0; i < m; ++i) kf[i] = weight(0.5 * (t[i] + t[i + 1])) / (t[i + 1] - t[i]);
    const double gx = 0.5 * std::sqrt(3.0 / 5.0);
    auto cell_mass = [&](double lo, double hi) {
        double c = 0.5 * (lo + hi), h = hi - lo;
        return h * (5.0 * weight(c - 2 * gx * 0.5 * h) + 8.0 * weight(c) + 5.0 * weight(c + 2 * gx * 0.5 * h)) / 18.0;
    };
    for (int i = 0; i < m; ++i) {
        double lo = i == 0 ? 0.0 : 0.5 * (t[i - 1] + t[i]);
        double hi = 0.5 * (t[i] + t[i + 1]);
        mass[i] = cell_mass(lo, hi);
    }

    // A = tridiag(-kf[i-1], kf[i-1] + kf[i], -kf[i]) on unknowns 0..m-1
    std::vector<double> diag(m), off(m - 1);
    for (int i = 0; i < m; ++i) diag[i] = kf[i] + (i > 0 ? kf[i - 1] : 0.0);
    for (int i = 0; i + 1 < m; ++i) off[i] = -kf[i];

    // Thomas factorization, reused every iteration
    std::vector<double> cp(m), dp(m);
    dp[0] = diag[0];
    for (int i = 1; i < m; ++i) {
        cp[i] = off[i - 1] / dp[i - 1];
        dp[i] = diag[i] - cp[i] * off[i - 1];
    }
    auto solve = [&](std::vector<double>& b) {
        for (int i = 1; i < m; ++i) b[i] -= cp[i] * b[i - 1];
        b[m - 1] /= dp[m - 1];
        for (int i = m - 2; i >= 0; --i) b[i] = (b[i] - off[i] * b[i + 1]) / dp[i];
    };

    std::vector<double> x(m, 1.0), y(m);
    double lam = 0, prev = 0;
    for (int it = 0; it < 1000; ++it) {
        for (int i = 0; i < m; ++i) y[i] = mass[i] * x[i];
        solve(y);
        // Rayleigh quotient of y: y'Ay / y'My = y'Mx / y'My
        double num = 0, den = 0, nrm = 0;
        for (int i = 0; i < m; ++i) {
            num += y[i] * mass[i] * x[i];
            den += y[i] * mass[i] * y[i];
            nrm = std::max(nrm, std::abs(y[i]));
        }
        lam = num / den;
        for (int i = 0; i < m; ++i) x[i] = y[i] / nrm;
        if (it > 3 && std::abs(lam - prev) <= 1e-15 * lam) break;
        prev = lam;
    }
    return lam;
}

double fd_matrix_oracle_extrapolated(const Manifold& man, double r, int m)
{
    double l1 = fd_matrix_oracle(man, r, m);
    double l2 = fd_matrix_oracle(man, r, 2 * m);
    return (4.0 * l2 - l1) / 3.0;
}

} // namespace geoball
