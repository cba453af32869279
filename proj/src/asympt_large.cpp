#include "geoball/asympt_large.hpp"

#include "geoball/asympt_small.hpp"
#include "geoball/errors.hpp"
#include "geoball/sweep.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace geoball {

namespace {

constexpr int P = PanelGrid::P;
constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();

// Gauss nodes on [-1, 1] with the spectral integration matrices
// S[k][j] = int_{-1}^{x_k} l_j and Sr[k][j] = int_{x_k}^{1} l_j.
struct PanelRule {
    std::vector<double> x, w;
    std::array<std::array<double, P>, P> S{}, Sr{};

    PanelRule()
    {
        gauss_legendre(P, x, w);
        auto lagrange = [&](int j, double y) {
            double v = 1;
            for (int m = 0; m < P; ++m)
                if (m != j) v *= (y - x[m]) / (x[j] - x[m]);
            return v;
        };
        for (int k = 0; k < P; ++k) {
            double lo = -1, hi = x[k];
            double c1 = 0.5 * (lo + hi), h1 = 0.5 * (hi - lo);
            double c2 = 0.5 * (hi + 1), h2 = 0.5 * (1 - hi);
            for (int j = 0; j < P; ++j) {
                double s = 0, sr = 0;
                for (int q = 0; q < P; ++q) {
                    s += w[q] * lagrange(j, c1 + h1 * x[q]);
                    sr += w[q] * lagrange(j, c2 + h2 * x[q]);
                }
                S[k][j] = h1 * s;
                Sr[k][j] = h2 * sr;
            }
        }
    }
};

const PanelRule& rule()
{
    static const PanelRule r;
    return r;
}

void require_compact(const Manifold& man)
{
    if (!man.warp.compact()) throw DomainError("large-radius asymptotics need a compact manifold");
}

double omega(int n) { return unit_sphere_volume(n - 1); }

// f at a node, from the end when the node was laid out from the end
double f_at(const Manifold& man, double t, double d, bool from_end)
{
    if (from_end) return man.warp.f_from_end(d);
    double f = 0, fp = 0;
    man.warp.eval(t, f, fp);
    return f;
}

// omega int_0^d f^{n-1}(R - s) ds
double tail_volume(const Manifold& man, double d)
{
    const auto& pr = rule();
    double s = 0, h = 0.5 * d;
    for (int q = 0; q < P; ++q) s += pr.w[q] * std::pow(man.warp.f_from_end(h + h * pr.x[q]), man.n - 1);
    return omega(man.n) * h * s;
}

// add [a, b] to bps split so that no piece is wider than wmax
void split_append(std::vector<double>& bps, double b, double wmax)
{
    double a = bps.back();
    int m = std::max(1, int(std::ceil(std::abs(b - a) / wmax)));
    for (int i = 1; i < m; ++i) bps.push_back(a + (b - a) * i / m);
    bps.push_back(b);
}

std::vector<PanelGrid::Panel> panels_from(const std::vector<double>& bps, bool from_end)
{
    std::vector<PanelGrid::Panel> out;
    for (size_t i = 0; i + 1 < bps.size(); ++i) out.push_back({bps[i], bps[i + 1], from_end});
    return out;
}

double horner(const double* c, int m, double u)
{
    double s = 0;
    for (int k = m - 1; k >= 0; --k) s = s * u + c[k];
    return s;
}

// f(R + u) = A u phi(u); p holds the coefficients of phi^{1-n}.
struct EndSeries {
    static constexpr int M = 12;
    double phi[M] = {};
    double p[M] = {};

    EndSeries(const Manifold& man)
    {
        auto J = man.warp.jet_end<M>(0.0);
        double A = J.c[1];
        Jet<double, M - 1> ph;
        for (int k = 0; k < M; ++k) ph.c[k] = J.c[k + 1] / A;
        auto pw = pow(ph, 1 - man.n);
        for (int k = 0; k < M; ++k) {
            phi[k] = ph.c[k];
            p[k] = pw.c[k];
        }
    }
    double P_of(double u) const { return horner(p, M, u); }
    // phi^{1-n} - 1
    double P_minus_one(double u) const { return u * horner(p + 1, M - 1, u); }
};

constexpr double series_switch = 0.05;

} // namespace

double mu(int n, double R, double r)
{
    if (!(r > 0 && r < R)) throw DomainError("mu needs 0 < r < R");
    if (n == 2) return 1.0 / std::log(R - r);
    return (2.0 - n) * std::pow(r - R, n - 2);
}

PanelGrid::PanelGrid(std::vector<Panel> panels, double R) : panels_(std::move(panels))
{
    const auto& pr = rule();
    for (const auto& pn : panels_) {
        double h = 0.5 * std::abs(pn.b - pn.a);
        double c = 0.5 * (pn.a + pn.b);
        h_.push_back(h);
        for (int k = 0; k < P; ++k) {
            if (pn.from_end) {
                // a > b in d; t increases as d decreases
                double d = c - h * pr.x[k];
                d_.push_back(d);
                t_.push_back(R - d);
            } else {
                double t = c + h * pr.x[k];
                t_.push_back(t);
                d_.push_back(R - t);
            }
            w_.push_back(h * pr.w[k]);
        }
    }
}

double PanelGrid::total(const std::vector<double>& g) const
{
    double s = 0;
    for (int i = 0; i < size(); ++i) s += w_[i] * g[i];
    return s;
}

std::vector<double> PanelGrid::cumulative(const std::vector<double>& g) const
{
    const auto& pr = rule();
    std::vector<double> out(g.size());
    double off = 0;
    for (size_t p = 0; p < panels_.size(); ++p) {
        const double* gp = g.data() + p * P;
        for (int k = 0; k < P; ++k) {
            double s = 0;
            for (int j = 0; j < P; ++j) s += pr.S[k][j] * gp[j];
            out[p * P + k] = off + h_[p] * s;
        }
        double tot = 0;
        for (int j = 0; j < P; ++j) tot += pr.w[j] * gp[j];
        off += h_[p] * tot;
    }
    return out;
}

std::vector<double> PanelGrid::reverse_cumulative(const std::vector<double>& g) const
{
    const auto& pr = rule();
    std::vector<double> out(g.size());
    double off = 0;
    for (size_t p = panels_.size(); p-- > 0;) {
        const double* gp = g.data() + p * P;
        for (int k = 0; k < P; ++k) {
            double s = 0;
            for (int j = 0; j < P; ++j) s += pr.Sr[k][j] * gp[j];
            out[p * P + k] = off + h_[p] * s;
        }
        double tot = 0;
        for (int j = 0; j < P; ++j) tot += pr.w[j] * gp[j];
        off += h_[p] * tot;
    }
    return out;
}

PanelGrid ball_grid(const Manifold& man, double r)
{
    double R = man.warp.R();
    if (!(r > 0 && r < R)) throw DomainError("ball_grid needs 0 < r < R");
    double wmax = std::isfinite(R) ? 0.08 * R : 0.25 * std::max(1.0, r);
    double tmax = (std::isfinite(R) && r > 0.5 * R) ? 0.5 * R : r;

    std::vector<double> left;
    for (double s = 0.5 * tmax; s > 1e-3 * tmax; s *= 0.5) left.push_back(s);
    std::vector<double> bps{0.0};
    for (auto it = left.rbegin(); it != left.rend(); ++it) split_append(bps, *it, wmax);
    split_append(bps, tmax, wmax);
    auto panels = panels_from(bps, false);

    if (tmax < r) {
        // from-end panels in d = (R - r) + s, s = r - t graded toward s = 0
        double delta = R - r;
        double smax = r - tmax;
        std::vector<double> ss{smax};
        for (double s = 0.5 * smax; s > 0.25 * delta; s *= 0.5) ss.push_back(s);
        ss.push_back(0.0);
        std::vector<double> ds{delta + ss[0]};
        for (size_t i = 1; i < ss.size(); ++i) split_append(ds, delta + ss[i], wmax);
        auto tail = panels_from(ds, true);
        panels.insert(panels.end(), tail.begin(), tail.end());
    }
    return PanelGrid(std::move(panels), R);
}

PanelGrid full_grid(const Manifold& man, double d_min)
{
    require_compact(man);
    double R = man.warp.R();
    double wmax = 0.08 * R;
    std::vector<double> bps{0.0};
    split_append(bps, 0.5 * R, wmax);
    auto panels = panels_from(bps, false);
    std::vector<double> ds{0.5 * R};
    for (double d = 0.25 * R; d > d_min; d *= 0.5) split_append(ds, d, wmax);
    ds.push_back(0.0);
    auto tail = panels_from(ds, true);
    panels.insert(panels.end(), tail.begin(), tail.end());
    return PanelGrid(std::move(panels), R);
}

double total_volume(const Manifold& man)
{
    require_compact(man);
    double half = 0.5 * man.warp.R();
    QuadratureSpec q;
    q.rel_tol = 1e-14;
    q.abs_tol = 1e-300;
    double left = integrate(
        [&](double t) {
            double f = 0, fp = 0;
            man.warp.eval(t, f, fp);
            return std::pow(f, man.n - 1);
        },
        0.0, half, q);
    return omega(man.n) * left + tail_volume(man, half);
}

VolumeSamples volume_samples(const Manifold& man, const PanelGrid& g)
{
    VolumeSamples vs;
    int N = g.size();
    vs.Vp.resize(N);
    vs.V.resize(N);
    vs.T.resize(N);
    double R = man.warp.R();
    double w = omega(man.n);
    bool compact = man.warp.compact();
    vs.V_R = compact ? total_volume(man) : nan_v;
    for (int i = 0; i < N; ++i) {
        bool fe = compact && g.t()[i] > 0.5 * R;
        vs.Vp[i] = w * std::pow(f_at(man, g.t()[i], g.d()[i], fe), man.n - 1);
    }
    auto cum = g.cumulative(vs.Vp);
    for (int i = 0; i < N; ++i) {
        if (compact && g.t()[i] > 0.5 * R) {
            vs.T[i] = tail_volume(man, g.d()[i]);
            vs.V[i] = vs.V_R - vs.T[i];
        } else {
            vs.V[i] = cum[i];
            vs.T[i] = vs.V_R - cum[i];
        }
    }
    return vs;
}

namespace {

std::vector<double> apply_L(const PanelGrid& g, const VolumeSamples& vs, const std::vector<double>& rhs)
{
    int N = g.size();
    std::vector<double> e(N);
    for (int i = 0; i < N; ++i) e[i] = vs.Vp[i] * rhs[i];
    auto E = g.cumulative(e);
    for (int i = 0; i < N; ++i) e[i] = E[i] / vs.Vp[i];
    return g.reverse_cumulative(e);
}

} // namespace

std::vector<double> solution_operator(const PanelGrid& g, const VolumeSamples& vs,
                                      const std::vector<double>& rhs)
{
    if (neumann_defect(g, vs, rhs) > 1e-8) throw DomainError("solution operator: right side is not mean-zero");
    return apply_L(g, vs, rhs);
}

double neumann_defect(const PanelGrid& g, const VolumeSamples& vs, const std::vector<double>& rhs)
{
    double s = 0, a = 0;
    for (int i = 0; i < g.size(); ++i) {
        s += g.w()[i] * vs.Vp[i] * rhs[i];
        a += g.w()[i] * vs.Vp[i] * std::abs(rhs[i]);
    }
    return a > 0 ? std::abs(s) / a : 0.0;
}

namespace {

// Shared ball-grid fields for the series, the closed forms and the bound.
struct BallFields {
    PanelGrid g;
    VolumeSamples vs;
    std::vector<double> W, K, D;
    double G = 0, Kr = 0, Vr = 0, Dr = 0;

    BallFields(const Manifold& man, double r) : g(ball_grid(man, r)), vs(volume_samples(man, g))
    {
        int N = g.size();
        W.resize(N);
        std::vector<double> TW(N), VW(N);
        for (int i = 0; i < N; ++i) {
            W[i] = vs.V[i] / vs.Vp[i];
            TW[i] = vs.T[i] * W[i];
            VW[i] = vs.V[i] * W[i];
        }
        K = g.cumulative(W);
        auto cTW = g.cumulative(TW);
        D.resize(N);
        // D(t) = int_0^t (V(t) - V(s)) W(s) ds with V(t) - V(s) = T(s) - T(t)
        for (int i = 0; i < N; ++i) D[i] = cTW[i] - vs.T[i] * K[i];
        G = g.total(VW);
        Kr = g.total(W);
        double R = man.warp.R();
        double Tr = (r > 0.5 * R) ? tail_volume(man, R - r) : vs.V_R - g.total(vs.Vp);
        Vr = vs.V_R - Tr;
        Dr = g.total(TW) - Tr * Kr;
    }
};

} // namespace

MuSeries lambda_series(const Manifold& man, double r, int order, SeriesForm form)
{
    require_compact(man);
    if (order < 1 || order > 3) throw DomainError("series order must be 1, 2 or 3");
    double R = man.warp.R();
    BallFields bf(man, r);
    const auto& g = bf.g;
    int N = g.size();

    MuSeries out;
    out.form = form;
    out.mu = mu(man.n, R, r);
    out.G = bf.G;
    double m = out.mu;
    double l0 = 1.0 / (m * bf.Kr);
    auto rW = g.reverse_cumulative(bf.W);
    std::vector<double> psi0(N);
    for (int i = 0; i < N; ++i) psi0[i] = l0 * m * rW[i];
    out.psi0_at_0 = psi0.front();
    out.psi0_at_r = psi0.back();
    out.extrapolated = r <= 0.5 * R;

    if (form == SeriesForm::literal) {
        double t1 = bf.Vr / bf.G;
        out.terms.push_back(t1);
        if (order >= 2) {
            std::vector<double> y(N);
            for (int i = 0; i < N; ++i) y[i] = -bf.W[i] * bf.D[i];
            out.terms.push_back(t1 * t1 / bf.G * g.total(y));
        }
        if (order >= 3) {
            std::vector<double> X(N), TX(N), y(N);
            for (int i = 0; i < N; ++i) {
                X[i] = -bf.D[i] / bf.vs.Vp[i];
                TX[i] = bf.vs.T[i] * X[i];
            }
            auto cX = g.cumulative(X), cTX = g.cumulative(TX);
            // int_0^t (V(s) - V(t)) X(s) ds = T(t) cX - cTX
            for (int i = 0; i < N; ++i) y[i] = bf.W[i] * (bf.vs.T[i] * cX[i] - cTX[i]);
            out.terms.push_back(-t1 * t1 * t1 / bf.G * g.total(y));
        }
        return out;
    }

    double c0 = 0;
    for (int i = 0; i < N; ++i) c0 += g.w()[i] * bf.vs.Vp[i] * psi0[i];

    std::vector<std::vector<double>> psi{psi0};
    std::vector<double> lam{l0};
    for (int j = 1; j <= order; ++j) {
        std::vector<double> known(N, j == 1 ? -l0 : 0.0);
        for (int k = 1; k < j; ++k)
            for (int i = 0; i < N; ++i) known[i] += lam[k] * psi[j - k][i];
        double s = 0;
        for (int i = 0; i < N; ++i) s += g.w()[i] * bf.vs.Vp[i] * known[i];
        double lj = -s / c0;
        std::vector<double> rhs(N);
        for (int i = 0; i < N; ++i) rhs[i] = lj * psi0[i] + known[i];
        // mean-zero by construction of lambda_j
        psi.push_back(apply_L(g, bf.vs, rhs));
        lam.push_back(lj);
        out.terms.push_back(std::pow(m, j) * lj);
    }
    return out;
}

double lambda2_closed(const Manifold& man, double r)
{
    require_compact(man);
    BallFields bf(man, r);
    std::vector<double> y(bf.g.size());
    for (int i = 0; i < bf.g.size(); ++i) y[i] = bf.W[i] * bf.D[i];
    double G = bf.G;
    return bf.Vr * bf.Vr / (G * G * G) * bf.g.total(y) - bf.Vr * bf.Dr / (G * G);
}

double upper_bound_compact(const Manifold& man, double r)
{
    require_compact(man);
    BallFields bf(man, r);
    int N = bf.g.size();
    std::vector<double> VW(N), y(N);
    for (int i = 0; i < N; ++i) VW[i] = bf.vs.V[i] * bf.W[i];
    auto Gc = bf.g.cumulative(VW);
    for (int i = 0; i < N; ++i) y[i] = Gc[i] * Gc[i] / VW[i];
    double l1 = bf.Vr / bf.G;
    return l1 / (1.0 + l1 / bf.G * bf.g.total(y));
}

namespace {

double power_int(double u, int e) { return std::pow(u, e); }

struct Subtraction {
    double c;
    int e;
};

// V^2/V' minus the listed powers of u = t - R, accurate up to the far pole.
std::vector<double> regular_v2vp(const Manifold& man, const PanelGrid& g, const VolumeSamples& vs,
                                 const EndSeries& es, double B1, const std::vector<Subtraction>& sub)
{
    int n = man.n;
    int N = g.size();
    std::vector<double> out(N);
    double s[EndSeries::M] = {};
    for (const auto& sb : sub) {
        int k = sb.e + n - 1;
        if (k >= 0 && k < EndSeries::M) s[k] += sb.c / B1;
    }
    for (int i = 0; i < N; ++i) {
        double d = g.d()[i], u = -d;
        if (d >= series_switch) {
            double v = vs.V[i] * vs.V[i] / vs.Vp[i];
            for (const auto& sb : sub) v -= sb.c * power_int(u, sb.e);
            out[i] = v;
        } else {
            double c[EndSeries::M];
            for (int k = 0; k < EndSeries::M; ++k) c[k] = es.p[k] - s[k];
            double tau = vs.T[i] / vs.V_R;
            double br = horner(c, EndSeries::M, u) + es.P_of(u) * (tau * tau - 2 * tau);
            out[i] = B1 * power_int(u, 1 - n) * br;
        }
    }
    return out;
}

// nodes closest to d = 10^-k, k = 2..6
std::vector<int> probe_nodes(const PanelGrid& g, double R)
{
    std::vector<int> idx;
    for (int k = 2; k <= 6; ++k) {
        double target = std::log(std::pow(10.0, -k));
        int best = -1;
        double bd = 1e300;
        for (int i = 0; i < g.size(); ++i) {
            if (g.d()[i] <= 0 || g.d()[i] > 0.5 * R) continue;
            double e = std::abs(std::log(g.d()[i]) - target);
            if (e < bd) {
                bd = e;
                best = i;
            }
        }
        idx.push_back(best);
    }
    return idx;
}

BoundednessCheck probe(const std::string& name, const PanelGrid& g, const std::vector<int>& idx,
                       const std::vector<double>& h)
{
    BoundednessCheck bc;
    bc.name = name;
    double ref = 1.0;
    for (size_t k = 0; k < idx.size(); ++k) {
        bc.d.push_back(g.d()[idx[k]]);
        bc.value.push_back(h[idx[k]]);
        if (k == 0) ref += std::abs(h[idx[k]]);
    }
    for (double v : bc.value)
        if (!std::isfinite(v) || std::abs(v) > 1e3 * ref) bc.bounded = false;
    return bc;
}

} // namespace

LargeRadiusConstants compute_constants(const Manifold& man, EndpointReading reading)
{
    require_compact(man);
    LargeRadiusConstants c;
    int n = man.n;
    c.n = n;
    c.R = man.warp.R();
    c.A = man.warp.A();
    c.reading = reading;
    double R = c.R, A = c.A;
    double w = omega(n);
    double An = std::pow(A, n - 1);

    auto jR = man.warp.jet_end<6>(0.0);
    auto j0 = man.warp.jet(0.0);
    c.f3R = jR.derivative(3);
    c.f5R = jR.derivative(5);
    double f3_0 = j0.derivative(3), f5_0 = j0.derivative(5);
    switch (reading) {
    case EndpointReading::at_zero:
        c.A2 = (n - 1) * f3_0 / (6 * An);
        c.A4 = (n - 1) * (f5_0 / 120 + (n - 2) * f3_0 * f3_0 / 12);
        break;
    case EndpointReading::at_R:
        c.A2 = (n - 1) * c.f3R / (6 * An);
        c.A4 = (n - 1) * (c.f5R / 120 + (n - 2) * c.f3R * c.f3R / 12);
        break;
    case EndpointReading::taylor:
        c.A2 = (n - 1) * c.f3R / (6 * A);
        c.A4 = (n - 1) * (c.f5R / (120 * A) + (n - 2) * c.f3R * c.f3R / (72 * A * A));
        break;
    }

    auto g = full_grid(man);
    auto vs = volume_samples(man, g);
    double V = vs.V_R;
    c.V_R = V;

    double B1 = V * V / (w * An);
    c.B1[1] = B1;
    c.B1[2] = -c.A2 * B1;
    c.B1[3] = (c.A2 * c.A2 - c.A4) * B1;
    c.B1[4] = -2 * V / (An * n);
    c.B1[5] = 2 * c.A2 * V / An * (1.0 / n - An / (n + 2));
    c.B1[6] = w / (An * n * n);
    for (auto& b : c.B2) b = nan_v;

    int N = g.size();
    EndSeries es(man);
    std::vector<double> W(N), TW(N);
    for (int i = 0; i < N; ++i) {
        W[i] = vs.V[i] / vs.Vp[i];
        TW[i] = vs.T[i] * W[i];
    }
    auto K = g.cumulative(W);
    auto cTW = g.cumulative(TW);
    auto rTW = g.reverse_cumulative(TW);
    std::vector<double> D(N), DmDR(N);
    for (int i = 0; i < N; ++i) {
        D[i] = cTW[i] - vs.T[i] * K[i];
        DmDR[i] = -rTW[i] - vs.T[i] * K[i];
    }
    c.D_R = g.total(TW);
    double J = -c.D_R;
    auto idx = probe_nodes(g, R);

    // W D - cw u^{1-n} with cw the pole strength
    double cw = V * c.D_R / (w * An);
    std::vector<double> wd(N), tdv(N);
    for (int i = 0; i < N; ++i) {
        double d = g.d()[i], u = -d;
        tdv[i] = vs.T[i] * D[i] / vs.Vp[i];
        if (d >= series_switch) {
            wd[i] = W[i] * D[i] - cw * power_int(u, 1 - n);
        } else {
            double ph = es.P_of(u);
            wd[i] = V / (w * An) * power_int(u, 1 - n) * (DmDR[i] * ph + c.D_R * es.P_minus_one(u)) - tdv[i];
        }
    }

    auto add_v2vp = [&](const std::string& name, std::vector<Subtraction> sub) {
        auto h = regular_v2vp(man, g, vs, es, B1, sub);
        c.checks.push_back(probe(name, g, idx, h));
        if (!c.checks.back().bounded)
            c.diagnostics.push_back(name + ": subtracted integrand is not bounded near R; the literal "
                                           "singular terms do not match V^2/V' for this reading");
        return g.total(h);
    };

    if (n == 5) {
        double I = add_v2vp("B0", {{c.B1[1], -4}, {c.B1[2], -2}});
        c.B2[0] = I - c.B1[1] / (3 * R * R * R) - c.B1[2] / R;
        double w4 = unit_sphere_volume(4);
        c.B2[1] = 9 * V * V * V / (w4 * B1 * B1 * B1 * std::pow(A, 4)) * g.total(vs.T);
    } else if (n == 4) {
        double I = add_v2vp("B2", {{c.B1[1], -3}, {c.B1[2], -1}});
        c.B2[2] = I + c.B1[1] / (2 * R * R) - c.B1[2] * std::log(R);
        c.B2[3] = J;
    } else if (n == 3) {
        double w2 = unit_sphere_volume(2);
        double I = add_v2vp("B4", {{c.B1[1], -2}});
        double B4 = I - B1 / R;
        c.B2[4] = B4;
        double B8 = V / (w2 * A * A) * J;
        c.B2[8] = B8;
        c.B2[6] = -B8 * V * V / (B1 * B1 * B1);
        c.B2[5] = (w2 * A * A * B1 * B1 * B1 - 3 * V * c.B1[2] * B1 - 3 * V * B4 * B4) / (3 * B1 * B1 * B1);
        c.diagnostics.push_back("B5: the undefined symbol B_{-2} is read as B_{3,1}");

        // in the literal form the B8 term sits inside the factor V/V'
        std::vector<double> lit(N);
        for (int i = 0; i < N; ++i) lit[i] = W[i] * (-D[i] - B8 * power_int(-g.d()[i], -2));
        c.checks.push_back(probe("B9 (literal)", g, idx, lit));
        std::vector<double> rd(N);
        for (int i = 0; i < N; ++i) rd[i] = -wd[i];
        c.checks.push_back(probe("B9", g, idx, rd));
        double Iwd = g.total(wd);
        c.B2[9] = -Iwd + B8 / R;
        c.diagnostics.push_back("B9: B8 (t-R)^{-2} subtracted outside the factor V/V'; the literal "
                                "end correction +B8/R has the opposite sign to the finite part");
        c.B2[7] = -2 * V * V * B4 * B8 / std::pow(B1, 4) - (c.B2[9] / B1 + B4 * B8 / (B1 * B1)) * V * V / (B1 * B1);
        c.B2[10] = V * V * V / (w2 * B1 * B1 * B1 * A * A) * g.total(tdv);
        c.q = Iwd - cw / R;
    } else if (n == 2) {
        double I = add_v2vp("B11", {{c.B1[1], -1}});
        c.B2[11] = -B1 * std::log(R) + I;
        double B12 = -V / (omega(2) * A) * J;
        c.B2[12] = B12;
        c.checks.push_back(probe("B13", g, idx, wd));
        double Iwd = g.total(wd);
        c.B2[13] = -B12 * std::log(R) + Iwd;
        c.diagnostics.push_back("B13: the literal inner integral int_0^t (V(s)-V(t))/V'(s) ds diverges at s = 0 "
                                "and its pole at R is not B12; used int_0^t (V(t)-V(s)) V(s)/V'(s) ds, "
                                "whose pole is B12");
        c.B2[14] = std::pow(V, 4) / (unit_sphere_volume(2) * A * A * std::pow(B1, 4)) * g.total(tdv);
        c.diagnostics.push_back("B14: prefactor uses omega_2 literally");
        c.q = c.B2[13];
    }
    return c;
}

ExpansionTerms expansion_terms(const LargeRadiusConstants& c, const Manifold& man, double r,
                               ExpansionVariant v)
{
    int n = c.n;
    double R = c.R;
    if (!(r > 0 && r < R)) throw DomainError("expansion needs 0 < r < R");
    double x = r - R, delta = R - r;
    double V = c.V_R, B1 = c.B1[1], B2 = c.B1[2], B3 = c.B1[3];
    bool corr = v == ExpansionVariant::corrected;
    ExpansionTerms e;
    auto& t = e.terms;
    if (n >= 7) {
        double Vr = V - tail_volume(man, delta);
        double lead = Vr * (2 - n) / B1 * std::pow(x, n - 2);
        double a = B2 * (2 - n) / (B1 * (4 - n));
        double b = a * a - B3 * (2 - n) / (B1 * (6 - n));
        t = {lead, -lead * a * x * x, lead * b * std::pow(x, 4)};
    } else if (n == 6) {
        double lead = -4 * V / B1 * std::pow(x, 4);
        double lg = lead * 4 * B3 / B1 * std::pow(x, 4) * std::log(delta);
        double q = 2 * B2 / B1;
        t = {lead, -lead * q * x * x, lg + lead * q * q * std::pow(x, 4)};
        e.log_term = lg;
    } else if (n == 5) {
        double t6 = -9 * V * c.B2[0] / (B1 * B1);
        if (!corr) t6 += c.B2[1];
        t = {-3 * V / B1 * std::pow(x, 3), 9 * V * B2 / (B1 * B1) * std::pow(x, 5), t6 * std::pow(x, 6)};
    } else if (n == 4) {
        double lg = -4 * V * B2 / (B1 * B1) * std::pow(x, 4) * std::log(delta);
        double c4 = -4 * V * c.B2[2] / (B1 * B1);
        if (!corr) c4 += c.B2[3];
        t = {-2 * V / B1 * x * x, lg + c4 * std::pow(x, 4)};
        e.log_term = lg;
    } else if (n == 3) {
        double B4 = c.B2[4];
        if (corr) {
            double c3 = V * (B4 * B4 + B2 * B1) / std::pow(B1, 3) + V * (V * c.q - c.D_R * B4) / std::pow(B1, 3);
            t = {-V / B1 * x, -V * B4 / (B1 * B1) * x * x, -c3 * std::pow(x, 3)};
        } else {
            t = {-V / B1 * x, (c.B2[6] - V * B4 / (B1 * B1)) * x * x,
                 (c.B2[5] + c.B2[7] + c.B2[10]) * std::pow(x, 3)};
        }
    } else {
        double L = std::log(delta);
        double B11 = c.B2[11], B12 = c.B2[12], B13 = c.B2[13], B14 = c.B2[14];
        double B1c = B1 * B1 * B1;
        if (corr) {
            double c3 = V * B11 * B11 / B1c + V * (V * c.q - c.D_R * B11) / B1c;
            t = {V / B1 / L, -B11 * V / (B1 * B1) / (L * L), c3 / (L * L * L)};
        } else {
            double c2 = B12 * V * V / B1c - B11 * V / (B1 * B1);
            double c3 = B13 * V * V / B1c + B11 * B11 * V / B1c - 2 * B12 * B12 * std::pow(V, 4) / std::pow(B1, 6) -
                        B11 * B12 * V * V / std::pow(B1, 4) + B14;
            t = {V / B1 / L, c2 / (L * L), c3 / (L * L * L)};
        }
    }
    for (double s : t) e.value += s;
    e.extrapolated = r <= 0.5 * R;
    return e;
}

double expansion_evaluate(const LargeRadiusConstants& c, const Manifold& man, double r, ExpansionVariant v)
{
    return expansion_terms(c, man, r, v).value;
}

namespace {

// least-squares residual norm of y against the columns of X, columns scaled
double ls_residual(const Eigen::MatrixXd& X, const Eigen::VectorXd& y)
{
    Eigen::MatrixXd Xs = X;
    for (int j = 0; j < X.cols(); ++j) {
        double s = X.col(j).norm();
        if (s > 0) Xs.col(j) /= s;
    }
    Eigen::VectorXd beta = Xs.colPivHouseholderQr().solve(y);
    return (y - Xs * beta).norm();
}

} // namespace

LogTermReport log_term_detector(const Manifold& man, const std::vector<double>& delta, ExpansionVariant v,
                                double tol)
{
    require_compact(man);
    if (delta.size() < 3) throw DomainError("log-term fit needs at least three radii");
    LogTermReport rep;
    int n = man.n;
    rep.n = n;
    rep.delta = delta;
    double R = man.warp.R();
    std::vector<double> radii;
    for (double d : delta) radii.push_back(R - d);
    rep.lambda_num = eigen_sweep(man, radii, tol);
    auto c = compute_constants(man);
    for (size_t k = 0; k < delta.size(); ++k) {
        auto e = expansion_terms(c, man, radii[k], v);
        rep.residual.push_back(rep.lambda_num[k] - (e.value - e.log_term));
    }

    double V = c.V_R, B1 = c.B1[1];
    if (n == 4) rep.expected_coefficient = -4 * V * c.B1[2] / (B1 * B1);
    if (n == 6) rep.expected_coefficient = -16 * V * c.B1[3] / (B1 * B1);
    if (n == 2) rep.expected_coefficient = V / B1;

    std::vector<double> ax, ay;
    for (size_t k = 0; k < delta.size(); ++k) {
        ax.push_back(delta[k]);
        ay.push_back(rep.residual[k] / std::log(delta[k]));
    }
    rep.p = loglog_slope(ax, ay);
    for (size_t k = 0; k < delta.size(); ++k) {
        double ck = n == 2 ? rep.lambda_num[k] * std::log(delta[k])
                           : rep.residual[k] / (std::pow(delta[k], rep.p) * std::log(delta[k]));
        rep.coefficient.push_back(ck);
    }
    auto [mn, mx] = std::minmax_element(rep.coefficient.begin(), rep.coefficient.end());
    double mean = 0;
    for (double ck : rep.coefficient) mean += ck / rep.coefficient.size();
    rep.coefficient_spread = std::abs(*mx - *mn) / std::abs(mean);

    int q = 0;
    if (n == 3) q = 4;
    else if (n == 4) q = 4;
    else if (n == 5) q = 7;
    else if (n == 6) q = 8;
    rep.omitted_order = q;
    if (q > 0) {
        int m = int(delta.size());
        Eigen::MatrixXd Xa(m, 2), Xb(m, 3);
        Eigen::VectorXd y(m);
        for (int k = 0; k < m; ++k) {
            double d = delta[k];
            Xa(k, 0) = Xb(k, 0) = std::pow(d, q);
            Xa(k, 1) = Xb(k, 1) = std::pow(d, q + 1);
            Xb(k, 2) = std::pow(d, q) * std::log(d);
            y(k) = rep.residual[k];
        }
        double ra = ls_residual(Xa, y), rb = ls_residual(Xb, y);
        rep.log_improvement = (ra - rb) / y.norm();
    }
    return rep;
}

} // namespace geoball
