#include "geoball/specfun.hpp"

#include "geoball/errors.hpp"

#include <cmath>
#include <numbers>
#include <algorithm>
#include <queue>

namespace geoball {

namespace {

using ld = long double;
constexpr ld pi_l = 3.141592653589793238462643383279502884L;
constexpr double series_limit = 17.0;

bool is_integer(double nu) { return nu == std::floor(nu); }
bool is_half_integer(double nu) { return !is_integer(nu) && is_integer(nu - 0.5); }

// sum_k (-1)^k (x/2)^{2k+nu} / (k! Gamma(k+nu+1)); nu may be negative non-integer.
ld j_series(ld nu, ld x)
{
    ld half = x / 2;
    ld term = std::pow(half, nu) / std::tgamma(nu + 1);
    ld sum = term;
    ld q = -half * half;
    for (int k = 1; k < 200; ++k) {
        term *= q / (ld(k) * (ld(k) + nu));
        sum += term;
        if (std::abs(term) < 1e-21L * std::abs(sum)) break;
    }
    return sum;
}

// Hankel asymptotic amplitudes P, Q; stops at the smallest term.
void hankel_pq(ld nu, ld x, ld& P, ld& Q)
{
    ld mu = 4 * nu * nu;
    P = 1;
    Q = 0;
    ld a = 1;
    ld prev = 1e300L;
    for (int k = 1; k < 120; ++k) {
        ld m = 2 * k - 1;
        a *= (mu - m * m) / (ld(k) * 8 * x);
        if (std::abs(a) > prev) break;
        prev = std::abs(a);
        int r = k % 4;
        if (r == 1) Q += a;
        else if (r == 2) P -= a;
        else if (r == 3) Q -= a;
        else P += a;
        if (std::abs(a) < 1e-20L) break;
    }
}

void hankel_jy(double nu, double x, double* J, double* Y)
{
    ld P = 0, Q = 0;
    hankel_pq(nu, x, P, Q);
    ld chi = ld(x) - (ld(nu) / 2 + 0.25L) * pi_l;
    ld amp = std::sqrt(2 / (pi_l * ld(x)));
    ld c = std::cos(chi), s = std::sin(chi);
    if (J) *J = double(amp * (P * c - Q * s));
    if (Y) *Y = double(amp * (P * s + Q * c));
}

ld y_integer_series(int m, ld x)
{
    constexpr ld euler = 0.577215664901532860606512090082402431L;
    ld half = x / 2;
    ld J = j_series(m, x);
    ld s1 = 0;
    if (m > 0) {
        ld fac_top = 1;
        for (int i = 2; i <= m - 1; ++i) fac_top *= i;
        ld fac_k = 1;
        for (int k = 0; k < m; ++k) {
            if (k > 0) {
                fac_k *= k;
                fac_top /= (m - k);
            }
            s1 += fac_top / fac_k * std::pow(half, ld(2 * k - m));
        }
    }
    // digamma(k+1) + digamma(m+k+1), updated through harmonic numbers
    ld Hk = 0, Hmk = 0;
    for (int i = 1; i <= m; ++i) Hmk += 1.0L / i;
    ld mfact = 1;
    for (int i = 2; i <= m; ++i) mfact *= i;
    ld term = std::pow(half, ld(m)) / mfact;
    ld s2 = 0;
    ld q = -half * half;
    for (int k = 0; k < 200; ++k) {
        if (k > 0) {
            term *= q / (ld(k) * ld(m + k));
            Hk += 1.0L / k;
            Hmk += 1.0L / (m + k);
        }
        ld add = term * (Hk + Hmk - 2 * euler);
        s2 += add;
        if (k > 4 && std::abs(add) < 1e-22L * (std::abs(s2) + 1e-300L)) break;
    }
    return (2 / pi_l) * J * std::log(half) - s1 / pi_l - s2 / pi_l;
}

} // namespace

double bessel_j(double nu, double x)
{
    if (nu < 0) throw DomainError("bessel_j: order must be nonnegative");
    if (x < 0) throw DomainError("bessel_j: argument must be nonnegative");
    if (x == 0) return nu == 0 ? 1.0 : 0.0;
    if (x <= series_limit) return double(j_series(nu, x));
    double J = 0;
    hankel_jy(nu, x, &J, nullptr);
    return J;
}

double bessel_y(double nu, double x)
{
    if (nu < 0) throw DomainError("bessel_y: order must be nonnegative");
    if (!(x > 0)) throw DomainError("bessel_y: argument must be positive");
    if (x > series_limit) {
        double Y = 0;
        hankel_jy(nu, x, nullptr, &Y);
        return Y;
    }
    if (is_integer(nu)) return double(y_integer_series(int(nu), x));
    if (is_half_integer(nu)) return bessel_y_half(nu, x);
    ld c = std::cos(pi_l * nu), s = std::sin(pi_l * nu);
    return double((j_series(nu, x) * c - j_series(-ld(nu), x)) / s);
}

double bessel_j_prime(double nu, double x)
{
    if (x == 0) {
        if (nu == 1) return 0.5;
        if (nu == 0 || nu > 1) return 0.0;
        return std::numeric_limits<double>::infinity();
    }
    return (nu / x) * bessel_j(nu, x) - bessel_j(nu + 1, x);
}

double bessel_y_prime(double nu, double x)
{
    if (!(x > 0)) throw DomainError("bessel_y_prime: argument must be positive");
    return (nu / x) * bessel_y(nu, x) - bessel_y(nu + 1, x);
}

double bessel_j_half(double nu, double x)
{
    if (!is_half_integer(nu) || nu < 0) throw DomainError("bessel_j_half: order must be l + 1/2");
    if (x == 0) return 0.0;
    int l = int(nu - 0.5);
    ld X = x;
    ld j0 = std::sin(X) / X;
    if (l == 0) return double(std::sqrt(2 * X / pi_l) * j0);
    ld j1 = std::sin(X) / (X * X) - std::cos(X) / X;
    for (int k = 1; k < l; ++k) {
        ld j2 = (2 * k + 1) / X * j1 - j0;
        j0 = j1;
        j1 = j2;
    }
    return double(std::sqrt(2 * X / pi_l) * j1);
}

double bessel_y_half(double nu, double x)
{
    if (!is_half_integer(nu) || nu < 0) throw DomainError("bessel_y_half: order must be l + 1/2");
    if (!(x > 0)) throw DomainError("bessel_y_half: argument must be positive");
    int l = int(nu - 0.5);
    ld X = x;
    ld y0 = -std::cos(X) / X;
    if (l == 0) return double(std::sqrt(2 * X / pi_l) * y0);
    ld y1 = -std::cos(X) / (X * X) - std::sin(X) / X;
    for (int k = 1; k < l; ++k) {
        ld y2 = (2 * k + 1) / X * y1 - y0;
        y0 = y1;
        y1 = y2;
    }
    return double(std::sqrt(2 * X / pi_l) * y1);
}

double first_bessel_zero(double nu)
{
    if (nu < 0) throw DomainError("first_bessel_zero: order must be nonnegative");
    double a = std::max(nu, 1e-3);
    double fa = bessel_j(nu, a);
    double b = a;
    double fb = fa;
    bool found = false;
    for (int i = 0; i < 1000; ++i) {
        b = a + 0.1;
        fb = bessel_j(nu, b);
        if ((fa > 0) != (fb > 0)) {
            found = true;
            break;
        }
        a = b;
        fa = fb;
    }
    if (!found) throw NumericalError("first_bessel_zero: no sign change found");
    for (int it = 0; it < 200 && b - a > 1e-15 * b; ++it) {
        double m = 0.5 * (a + b);
        double fm = bessel_j(nu, m);
        if ((fm > 0) == (fa > 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    double x = 0.5 * (a + b);
    for (int it = 0; it < 2; ++it) x -= bessel_j(nu, x) / bessel_j_prime(nu, x);
    return x;
}

double gamma_fn(double x) { return std::tgamma(x); }

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w)
{
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        ld z = std::cos(pi_l * (i + 0.75L) / (n + 0.5L));
        ld dp = 0;
        for (int it = 0; it < 100; ++it) {
            ld p0 = 1, p1 = z;
            for (int k = 2; k <= n; ++k) {
                ld p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) {
                p1 = z;
                p0 = 1;
            }
            dp = n * (z * p1 - p0) / (z * z - 1);
            ld dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-19L) break;
        }
        {
            ld p0 = 1, p1 = z;
            for (int k = 2; k <= n; ++k) {
                ld p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1);
        }
        double wi = double(2 / ((1 - z * z) * dp * dp));
        x[i] = -double(z);
        x[n - 1 - i] = double(z);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if (n % 2 == 1) x[n / 2] = 0.0;
}

namespace {

struct Cell {
    double a, b;
    double value, error;
    int depth;
    long id;
};

struct CellOrder {
    bool operator()(const Cell& l, const Cell& r) const
    {
        if (l.error != r.error) return l.error < r.error;
        return l.id > r.id;
    }
};

struct GL15 {
    std::vector<double> x, w;
    GL15() { gauss_legendre(15, x, w); }
};

double gl15(const std::function<double(double)>& g, double a, double b, long& evals)
{
    static const GL15 rule;
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0;
    for (int i = 0; i < 15; ++i) s += rule.w[i] * g(c + h * rule.x[i]);
    evals += 15;
    return s * h;
}

Cell make_cell(const std::function<double(double)>& g, double a, double b, int depth, long id, long& evals)
{
    double whole = gl15(g, a, b, evals);
    double m = 0.5 * (a + b);
    double l = gl15(g, a, m, evals), r = gl15(g, m, b, evals);
    return {a, b, l + r, std::abs(whole - (l + r)), depth, id};
}

} // namespace

QuadResult integrate_report(const std::function<double(double)>& g, double a, double b,
                            const QuadratureSpec& spec)
{
    if (!(a < b)) throw DomainError("integrate: need a < b");
    if (!(spec.rel_tol > 0) || !(spec.abs_tol > 0) || spec.max_depth < 1)
        throw DomainError("integrate: invalid quadrature spec");

    std::vector<double> breaks{a};
    // interior breakpoints of a geometric mesh toward one end of [lo, hi], ascending
    auto graded = [&](double lo, double hi, bool toward_lo) {
        std::vector<double> pts;
        double len = hi - lo;
        for (double frac = 0.5; frac * len > spec.grading_cutoff * (b - a); frac *= 0.5)
            pts.push_back(toward_lo ? lo + frac * len : hi - frac * len);
        if (toward_lo) std::reverse(pts.begin(), pts.end());
        for (double p : pts)
            if (p > breaks.back()) breaks.push_back(p);
    };
    switch (spec.endpoint_grading) {
    case EndpointGrading::none: break;
    case EndpointGrading::left: graded(a, b, true); break;
    case EndpointGrading::right: graded(a, b, false); break;
    case EndpointGrading::both: {
        double m = 0.5 * (a + b);
        graded(a, m, true);
        breaks.push_back(m);
        graded(m, b, false);
        break;
    }
    }
    breaks.push_back(b);

    QuadResult out;
    std::priority_queue<Cell, std::vector<Cell>, CellOrder> heap;
    long id = 0;
    double total = 0, err = 0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (!(breaks[i] < breaks[i + 1])) continue;
        Cell c = make_cell(g, breaks[i], breaks[i + 1], 0, id++, out.evaluations);
        total += c.value;
        err += c.error;
        heap.push(c);
    }
    const long max_cells = 200000;
    while (err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total)) && !heap.empty()) {
        Cell c = heap.top();
        if (c.depth >= spec.max_depth || id > max_cells) {
            out.converged = false;
            break;
        }
        heap.pop();
        double m = 0.5 * (c.a + c.b);
        Cell l = make_cell(g, c.a, m, c.depth + 1, id++, out.evaluations);
        Cell r = make_cell(g, m, c.b, c.depth + 1, id++, out.evaluations);
        total += l.value + r.value - c.value;
        err += l.error + r.error - c.error;
        heap.push(l);
        heap.push(r);
    }
    // re-sum in a fixed order so the result does not depend on heap history
    std::vector<Cell> cells;
    while (!heap.empty()) {
        cells.push_back(heap.top());
        heap.pop();
    }
    std::sort(cells.begin(), cells.end(), [](const Cell& l, const Cell& r) { return l.a < r.a; });
    total = 0;
    err = 0;
    for (const auto& c : cells) {
        total += c.value;
        err += c.error;
    }
    out.value = total;
    out.abs_error = err;
    return out;
}

double integrate(const std::function<double(double)>& g, double a, double b, const QuadratureSpec& spec)
{
    QuadResult r = integrate_report(g, a, b, spec);
    if (!r.converged)
        throw NumericalError("integrate: depth limit reached with error " + std::to_string(r.abs_error));
    return r.value;
}

} // namespace geoball
