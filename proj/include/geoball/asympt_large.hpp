#pragma once

#include "geoball/manifold.hpp"

#include <string>
#include <vector>

namespace geoball {

// Perturbation parameter 1/ln(R - r) in dimension 2, (R - r)^{n-2} otherwise.
double mu(int n, double R, double r);

// Composite Gauss-Legendre grid with P nodes per panel. Each node carries its
// coordinate t and its distance d = R - t to the far pole; nodes on panels laid
// out from the end have d exact rather than rounded through t.
class PanelGrid {
public:
    static constexpr int P = 20;

    struct Panel {
        double a, b;        // in t when from_end is false, in d otherwise (a > b)
        bool from_end;
    };

    PanelGrid(std::vector<Panel> panels, double R);

    int size() const { return static_cast<int>(t_.size()); }
    const std::vector<double>& t() const { return t_; }
    const std::vector<double>& d() const { return d_; }
    const std::vector<double>& w() const { return w_; }

    double total(const std::vector<double>& g) const;
    // int from the left end to each node
    std::vector<double> cumulative(const std::vector<double>& g) const;
    // int from each node to the right end
    std::vector<double> reverse_cumulative(const std::vector<double>& g) const;

private:
    std::vector<Panel> panels_;
    std::vector<double> t_, d_, w_, h_;
};

// [0, r] graded toward both ends; needs r < R when R is finite.
PanelGrid ball_grid(const Manifold& man, double r);
// [0, R] with panels halving toward R down to d_min.
PanelGrid full_grid(const Manifold& man, double d_min = 1e-8);

// Volume data sampled on a grid: V' = omega f^{n-1}, V, and the tail
// T = V_R - V, which for nodes past R/2 is integrated from the end.
struct VolumeSamples {
    std::vector<double> Vp, V, T;
    double V_R = 0;
};
VolumeSamples volume_samples(const Manifold& man, const PanelGrid& g);
double total_volume(const Manifold& man);

// u = L[g] solves -(V' u')' = V' g on (0, r) with u'(0) = u(r) = 0.
// Solvability of the Neumann problem with zero mean is checked by
// neumann_defect, the relative size of int V' g when g is expected to
// integrate to zero. solution_operator throws DomainError when the defect
// exceeds 1e-8.
std::vector<double> solution_operator(const PanelGrid& g, const VolumeSamples& vs,
                                      const std::vector<double>& rhs);
double neumann_defect(const PanelGrid& g, const VolumeSamples& vs, const std::vector<double>& rhs);

enum class SeriesForm { recursion, literal };

struct MuSeries {
    double mu = 0;
    std::vector<double> terms; // mu^j lambda_j, j = 1..order
    double G = 0;              // int_0^r V^2/V'
    double psi0_at_r = 0;
    double psi0_at_0 = 0;
    SeriesForm form = SeriesForm::recursion;
    bool extrapolated = false; // r <= R/2, outside the asymptotic regime
};

// Terms of lambda(r) = sum mu^j lambda_j. The recursion builds psi_j with the
// solution operator; the literal form evaluates the closed integrals for
// orders 2 and 3 as written.
MuSeries lambda_series(const Manifold& man, double r, int order = 3,
                       SeriesForm form = SeriesForm::recursion);

// Closed form of the second term from the recursion:
// (V^2/G^3) int_0^r W D - V D(r)/G^2, W = V/V', D(t) = int_0^t (V(t) - V(s)) W(s) ds.
double lambda2_closed(const Manifold& man, double r);

// lambda <= mu lambda_1 / (1 + mu lambda_1 G^{-1} int_0^r G^2/G')
double upper_bound_compact(const Manifold& man, double r);

// Which f-derivative ratio at R feeds A_2 and A_4.
enum class EndpointReading { at_zero, at_R, taylor };

struct BoundednessCheck {
    std::string name;
    std::vector<double> d;
    std::vector<double> value;
    bool bounded = true;
};

struct LargeRadiusConstants {
    int n = 0;
    double R = 0;
    double A = 0;
    double V_R = 0;
    double A2 = 0, A4 = 0;
    EndpointReading reading = EndpointReading::taylor;
    double f3R = 0, f5R = 0;
    double B1[7] = {};   // B1[k] = B_{n,k}, k = 1..6
    double B2[15] = {};  // B2[k] = B_k^{(2)}, k = 0..14, NaN when not defined for n
    double D_R = 0;      // int_0^R (V_R - V) V/V'
    double q = 0;        // finite part of int_0^R W D for n = 2, 3
    std::vector<BoundednessCheck> checks;
    std::vector<std::string> diagnostics;
};

LargeRadiusConstants compute_constants(const Manifold& man,
                                       EndpointReading reading = EndpointReading::taylor);

// literal: the closed expansions as stated, per dimension.
// corrected: n = 4, 5 drop the spurious terms and n = 2, 3 use the
// recomputed third coefficient.
enum class ExpansionVariant { literal, corrected };

struct ExpansionTerms {
    std::vector<double> terms; // in increasing order of smallness
    double log_term = 0;       // part of terms carrying ln(R - r), n = 4, 6
    double value = 0;
    bool extrapolated = false;
};

ExpansionTerms expansion_terms(const LargeRadiusConstants& c, const Manifold& man, double r,
                               ExpansionVariant v = ExpansionVariant::corrected);
double expansion_evaluate(const LargeRadiusConstants& c, const Manifold& man, double r,
                          ExpansionVariant v = ExpansionVariant::corrected);

// Residual of lambda against the algebraic part of the expansion on a ladder
// of distances d_k to R.
struct LogTermReport {
    int n = 0;
    std::vector<double> delta, lambda_num, residual;
    double p = 0;                    // fitted exponent of residual / ln(delta)
    std::vector<double> coefficient; // residual / (delta^p ln delta)
    double coefficient_spread = 0;   // (max - min) / |mean|
    double expected_coefficient = 0; // nonzero for n = 4, 6
    int omitted_order = 0;           // first power not in the algebraic part
    // relative drop of the residual norm when delta^q ln delta joins the
    // regressors delta^q, delta^{q+1}
    double log_improvement = 0;
};

LogTermReport log_term_detector(const Manifold& man, const std::vector<double>& delta,
                                ExpansionVariant v = ExpansionVariant::corrected, double tol = 1e-14);

} // namespace geoball
