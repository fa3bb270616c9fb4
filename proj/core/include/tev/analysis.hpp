#pragma once

#include <span>
#include <string>
#include <vector>

#include "tev/charfn.hpp"
#include "tev/profile.hpp"

namespace tev {

// M1 = |n_L(1)^{1/4} - n_L(1)^{-1/4}|,
// Mt2 = n_L(1)^{1/4} + n_L(1)^{-1/4},
// M2 = max{(n_*/n^*)^{1/4} + (n^*/n_*)^{1/4}, Mt2}
struct TheoremConstants {
    double M1 = 0.0;
    double M2 = 0.0;
    double Mt2 = 0.0;
};
TheoremConstants theorem_constants(const RefractiveProfile& p);

enum class DependenceKind { Independent, Dependent, Boundary };

// Boundary: a rational ratio was detected but violates 0 < |q| < p
struct RationalDependence {
    DependenceKind kind = DependenceKind::Independent;
    long long q = 0;
    long long p = 0;
};

// Continued-fraction detector for b2/b1 = q/p: returns the first convergent
// within tol whose denominator stays under max_denominator.
RationalDependence rational_dependence(double b1, double b2, long long max_denominator,
                                       double tol);

enum class CaseVerdict { Case1, Case2a, Case2b, Inapplicable };
const char* case_verdict_name(CaseVerdict v);

struct HypothesisReport {
    double M1 = 0.0, M2 = 0.0, Mt1 = 0.0, Mt2 = 0.0;
    double epsilon0 = 0.0;
    double delta_L = 0.0;
    double alpha = 1.0;
    double beta1 = 0.0;       // 1 + delta_L
    double beta_last = 0.0;   // 1 - delta_L
    RationalDependence dependence;
    CaseVerdict verdict = CaseVerdict::Inapplicable;
    std::string reason;       // set when inapplicable
    double eps0_bound = 0.0;  // jump bound the verdict compared against
};

// Assembles constants, interface-jump size, dependence status and the case
// verdict for the uniqueness classification. The default detector window
// (denominators to 1e4 at 1e-10) flags genuine low-order relations while a
// generic irrational ratio's best convergent under the cap stays near
// 1/(p * p_next) ~ 1e-8 and is rejected.
HypothesisReport classify_case(const RefractiveProfile& p, double eps,
                               long long max_denominator = 10000, double dep_tol = 1e-10);

std::string hypothesis_report_json(const HypothesisReport& r);

struct KroneckerResult {
    bool found = false;
    double t = 0.0;
    std::vector<long long> p;
    std::vector<double> residuals;
};

// Simultaneous approximation: first grid point t in (T, T_cap] with
// |t v_j - p_j - a_j| < eps1 for all j, grid step eps1 / (4 max v_j).
// Grid points that provably fail the first inequality are skipped without
// evaluation; the returned t is the same as an exhaustive scan's.
KroneckerResult kronecker_search(std::span<const double> v, std::span<const double> a,
                                 double eps1, double T, double T_cap);

enum class ContourCase { Case1, Case2a, Case2b };

struct ContourParams {
    ContourCase contour_case = ContourCase::Case1;
    double c1_fit = 1.0;    // fitted remainder constant (safety factor applied)
    double eps = 0.05;      // the epsilon entering alpha
    double T_extra = 0.0;   // extra lower bound on the Kronecker search start
    double t_cap = 1e7;
    long long q_hat = 0, p_hat = 0;  // case 2 only
};

struct ContourSpec {
    double beta1 = 0.0;
    double t1 = 0.0;
    long long N1 = 0;
    double C2 = 0.0;
    double radius = 0.0;
    Cplx E1, F1, E2, F2;  // segment endpoints on Re k = -t1 and +t1
    std::vector<Cplx> samples;
    double eps1 = 0.0;
    double alpha1 = 0.0;
    KroneckerResult kron;
};

// Closed curve made of two circular arcs |k| = (N1 + 1/2) pi / beta1 and two
// vertical segments Re k = +-t1, with t1 from the Kronecker search and C2,
// N1 from the case recipe (the nonconstructive remainder constant replaced
// by params.c1_fit).
ContourSpec build_contour(const RefractiveProfile& p, const ContourParams& params);

// max over real k in [lo, hi] of k^2 |d(k) - D(d)(k)|
double remainder_fit(const RefractiveProfile& p, double lo, double hi, int samples,
                     double tol = 1e-10);

// min over circle samples of |sin(beta1 k)| / (exp(beta1 |Im k|)/4) on
// |k| = (N + 1/2) pi / beta1; the bound says this never drops below 1.
double verify_arc_bound(double beta1, long long N, int samples);

struct ContourBoundReport {
    double min_normalized = 0.0;  // min |d(k)| |k| exp(-beta1 |Im k|)
    Cplx argmin{};
    double paper_fraction = 0.0;  // min_normalized / (M1 / 24)
};

// Evaluates the normalized |d| along the contour samples in log space (the
// contour can sit at |Im k| far beyond direct range).
ContourBoundReport verify_contour_lower_bound(const RefractiveProfile& p,
                                              const ContourSpec& spec, double tol = 1e-10);

std::string contour_samples_csv(const RefractiveProfile& p, const ContourSpec& spec,
                                double tol = 1e-10);

}  // namespace tev
