#include "tev/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "tev/textio.hpp"

namespace tev {

namespace {
constexpr double kPi = std::numbers::pi;
}

TheoremConstants theorem_constants(const RefractiveProfile& p) {
    TheoremConstants c;
    const double nL1 = p.left_value(p.layer_count() - 1, 0);
    const double q = std::pow(nL1, 0.25);
    c.M1 = std::abs(q - 1.0 / q);
    c.Mt2 = q + 1.0 / q;
    const double ratio = std::pow(p.bounds().n_star / p.bounds().n_star_upper, 0.25);
    c.M2 = std::max(ratio + 1.0 / ratio, c.Mt2);
    return c;
}

RationalDependence rational_dependence(double b1, double b2, long long max_denominator,
                                       double tol) {
    if (b1 == 0.0) throw std::invalid_argument("rational_dependence: b1 must be nonzero");
    const double x = b2 / b1;
    const double ax = std::abs(x);
    const long long sign = x < 0.0 ? -1 : 1;

    // continued-fraction convergents of |x|
    double y = ax;
    long long h_prev = 1, k_prev = 0;  // h_{-1}/k_{-1}
    long long h = static_cast<long long>(std::floor(y));
    long long k = 1;
    double frac = y - std::floor(y);
    for (int iter = 0; iter < 64; ++iter) {
        if (k > max_denominator) break;
        if (std::abs(ax - static_cast<double>(h) / k) < tol) {
            const long long q = sign * h;
            if (q != 0 && std::llabs(q) < k) return {DependenceKind::Dependent, q, k};
            return {DependenceKind::Boundary, q, k};
        }
        if (frac < 1e-15) break;  // the double value itself is exhausted
        y = 1.0 / frac;
        const long long a = static_cast<long long>(std::floor(y));
        frac = y - std::floor(y);
        const long long h_next = a * h + h_prev;
        const long long k_next = a * k + k_prev;
        h_prev = h;
        k_prev = k;
        h = h_next;
        k = k_next;
        if (h < 0 || k < 0) break;  // overflow guard
    }
    return {DependenceKind::Independent, 0, 0};
}

namespace {

// the case-2a tolerance list entering Mt1
double case2a_eps1(long long q, long long p) {
    const double aq = static_cast<double>(std::llabs(q));
    const double ap = static_cast<double>(p);
    return std::min({1.0 / (2.0 * (ap + aq)), 4.0 * aq * (ap - aq) / (ap + aq),
                     4.0 * ap * (ap - aq) / (ap + aq), aq / (2.0 * ap * (ap + aq))});
}

double mt1_from(long long q, long long p) {
    const double aq = static_cast<double>(std::llabs(q));
    const double ap = static_cast<double>(p);
    const double eps1 = case2a_eps1(q, p);
    const double base = (ap - aq) / (ap + aq) * kPi;
    return std::min(std::abs(std::sin(base + 2.0 * ap * eps1)),
                    std::abs(std::sin(base - 2.0 * ap * eps1)));
}

}  // namespace

const char* case_verdict_name(CaseVerdict v) {
    switch (v) {
        case CaseVerdict::Case1: return "case1";
        case CaseVerdict::Case2a: return "case2a";
        case CaseVerdict::Case2b: return "case2b";
        case CaseVerdict::Inapplicable: return "inapplicable";
    }
    return "inapplicable";
}

HypothesisReport classify_case(const RefractiveProfile& p, double eps, long long max_denominator,
                               double dep_tol) {
    HypothesisReport r;
    const TheoremConstants c = theorem_constants(p);
    r.M1 = c.M1;
    r.M2 = c.M2;
    r.Mt2 = c.Mt2;
    r.delta_L = p.delta_total();
    r.epsilon0 = p.epsilon0();
    r.alpha = p.alpha_point(eps);
    r.beta1 = 1.0 + r.delta_L;
    r.beta_last = 1.0 - r.delta_L;

    const double nL1 = p.left_value(p.layer_count() - 1, 0);
    const int L = static_cast<int>(p.layer_count());
    const double m2pow = std::pow(r.M2, L - 1);
    const double n_star = p.bounds().n_star;

    if (std::abs(nL1 - 1.0) < 1e-12) {
        r.verdict = CaseVerdict::Inapplicable;
        r.reason = "n(1)=1";
        return r;
    }
    if (std::abs(r.delta_L - 1.0) < 1e-12) {
        r.verdict = CaseVerdict::Inapplicable;
        r.reason = "delta_L = 1 (beta_last vanishes)";
        return r;
    }

    r.dependence = rational_dependence(r.beta1, r.beta_last, max_denominator, dep_tol);
    switch (r.dependence.kind) {
        case DependenceKind::Independent: {
            r.eps0_bound = n_star * r.M1 / (24.0 * m2pow);
            if (r.epsilon0 <= r.eps0_bound) {
                r.verdict = CaseVerdict::Case1;
            } else {
                r.verdict = CaseVerdict::Inapplicable;
                r.reason = "eps0 bound violated";
            }
            return r;
        }
        case DependenceKind::Boundary: {
            r.verdict = CaseVerdict::Inapplicable;
            r.reason = "rational dependence violates 0 < |q| < p";
            return r;
        }
        case DependenceKind::Dependent: {
            r.Mt1 = mt1_from(r.dependence.q, r.dependence.p);
            const bool same_sign =
                (r.delta_L > 1.0 && nL1 > 1.0) || (r.delta_L < 1.0 && nL1 < 1.0);
            if (same_sign) {
                r.eps0_bound = r.M1 * r.Mt1 * n_star / (12.0 * m2pow);
                if (r.epsilon0 <= r.eps0_bound) {
                    r.verdict = CaseVerdict::Case2a;
                } else {
                    r.verdict = CaseVerdict::Inapplicable;
                    r.reason = "eps0 bound violated";
                }
            } else {
                r.eps0_bound = n_star * r.M1 / (24.0 * m2pow);
                if (r.epsilon0 <= r.eps0_bound) {
                    r.verdict = CaseVerdict::Case2b;
                } else {
                    r.verdict = CaseVerdict::Inapplicable;
                    r.reason = "eps0 bound violated";
                }
            }
            return r;
        }
    }
    return r;
}

std::string hypothesis_report_json(const HypothesisReport& r) {
    nlohmann::json j;
    j["M1"] = r.M1;
    j["M2"] = r.M2;
    j["Mt1"] = r.Mt1;
    j["Mt2"] = r.Mt2;
    j["epsilon0"] = r.epsilon0;
    j["delta_L"] = r.delta_L;
    j["alpha"] = r.alpha;
    j["beta1"] = r.beta1;
    j["beta_last"] = r.beta_last;
    switch (r.dependence.kind) {
        case DependenceKind::Independent: j["dependence"] = "independent"; break;
        case DependenceKind::Boundary:
            j["dependence"] = {{"kind", "boundary"}, {"q_hat", r.dependence.q}, {"p_hat", r.dependence.p}};
            break;
        case DependenceKind::Dependent:
            j["dependence"] = {{"kind", "dependent"}, {"q_hat", r.dependence.q}, {"p_hat", r.dependence.p}};
            break;
    }
    j["case_verdict"] = case_verdict_name(r.verdict);
    if (!r.reason.empty()) j["reason"] = r.reason;
    j["eps0_bound"] = r.eps0_bound;
    return j.dump(2);
}

KroneckerResult kronecker_search(std::span<const double> v, std::span<const double> a, double eps1,
                                 double T, double T_cap) {
    if (v.size() != a.size() || v.empty())
        throw std::invalid_argument("kronecker_search: v and a must have the same nonzero length");
    if (!(eps1 > 0.0)) throw std::invalid_argument("kronecker_search: eps1 must be positive");
    for (double vj : v)
        if (!(vj > 0.0)) throw std::invalid_argument("kronecker_search: frequencies must be positive");

    double vmax = 0.0;
    for (double vj : v) vmax = std::max(vmax, vj);
    const double step = eps1 / (4.0 * vmax);
    const long long m_max = static_cast<long long>(std::floor((T_cap - T) / step));

    const auto check = [&](double t, KroneckerResult& out) {
        out.p.clear();
        out.residuals.clear();
        for (std::size_t j = 0; j < v.size(); ++j) {
            const long long pj = std::llround(t * v[j] - a[j]);
            const double res = std::abs(t * v[j] - pj - a[j]);
            if (!(res < eps1)) return false;
            out.p.push_back(pj);
            out.residuals.push_back(res);
        }
        out.found = true;
        out.t = t;
        return true;
    };

    KroneckerResult out;
    // enumerate the windows where the first inequality can hold:
    // t v0 in [p + a0 - eps1, p + a0 + eps1]
    const double v0 = v[0];
    long long pw = static_cast<long long>(std::floor(T * v0 - a[0] - eps1));
    for (;; ++pw) {
        const double w_lo = (pw + a[0] - eps1) / v0;
        const double w_hi = (pw + a[0] + eps1) / v0;
        if (w_lo > T_cap) break;
        long long m_lo = static_cast<long long>(std::ceil((w_lo - T) / step));
        long long m_hi = static_cast<long long>(std::floor((w_hi - T) / step));
        m_lo = std::max(m_lo, 1LL);
        m_hi = std::min(m_hi, m_max);
        for (long long m = m_lo; m <= m_hi; ++m) {
            if (check(T + m * step, out)) return out;
        }
    }
    return out;  // found = false
}

namespace {

ContourSpec contour_from(const RefractiveProfile& p, double eps1, double alpha1_frac,
                         double alpha_last, int kron_dims, double p_hat, double C2, double T_start,
                         double t_cap) {
    const DominantTermModel model = dominant_coeffs(p);
    const double beta1 = 1.0 + model.delta_L;

    std::vector<double> v, a;
    if (kron_dims == 2) {
        v = {beta1 / (2.0 * kPi), std::abs(1.0 - model.delta_L) / (2.0 * kPi)};
        a = {alpha1_frac, alpha_last};
    } else {
        v = {beta1 / (2.0 * kPi * p_hat)};
        a = {alpha1_frac};
    }
    ContourSpec spec;
    spec.kron = kronecker_search(v, a, eps1, T_start, T_start + t_cap);
    if (!spec.kron.found)
        throw std::runtime_error("build_contour: Kronecker search exhausted its cap");
    spec.beta1 = beta1;
    spec.t1 = spec.kron.t;
    spec.C2 = C2;
    spec.eps1 = eps1;
    spec.alpha1 = alpha1_frac;
    spec.N1 = static_cast<long long>(
                  std::floor(beta1 / kPi * std::hypot(spec.t1, C2) - 0.5)) +
              1;
    spec.radius = (spec.N1 + 0.5) * kPi / beta1;
    const double h = std::sqrt(spec.radius * spec.radius - spec.t1 * spec.t1);
    spec.E1 = {-spec.t1, -h};
    spec.F1 = {-spec.t1, h};
    spec.E2 = {spec.t1, -h};
    spec.F2 = {spec.t1, h};

    // 1000 boundary samples spread by arclength over segments and arcs
    const double seg_len = 2.0 * h;
    const double theta1 = std::asin(h / spec.radius);  // corner polar angle above axis
    const double arc_len = spec.radius * (kPi - 2.0 * theta1);
    const double total = 2.0 * seg_len + 2.0 * arc_len;
    const int n_seg = std::max(50, static_cast<int>(1000.0 * seg_len / total));
    const int n_arc = std::max(50, static_cast<int>(1000.0 * arc_len / total));
    for (int i = 0; i <= n_seg; ++i) {
        const double y = -h + 2.0 * h * i / n_seg;
        spec.samples.push_back({spec.t1, y});
        spec.samples.push_back({-spec.t1, y});
    }
    // right-to-left top arc between F2 and F1; bottom arc mirrors it
    for (int i = 0; i <= n_arc; ++i) {
        const double th = theta1 + (kPi - 2.0 * theta1) * i / n_arc;
        spec.samples.push_back(std::polar(spec.radius, th));
        spec.samples.push_back(std::polar(spec.radius, -th));
    }
    return spec;
}

}  // namespace

ContourSpec build_contour(const RefractiveProfile& p, const ContourParams& params) {
    const TheoremConstants c = theorem_constants(p);
    const DominantTermModel model = dominant_coeffs(p);
    const int L = model.L;
    const double beta1 = 1.0 + model.delta_L;
    if (c.M1 <= 0.0) throw std::domain_error("build_contour: M1 = 0 (n(1) = 1)");

    // beta = smallest gap between beta1 and the other |frequencies|
    double beta_gap = beta1;
    for (std::size_t j = 1; j < model.betas.size(); ++j)
        beta_gap = std::min(beta_gap, beta1 - std::abs(model.betas[j]));
    if (beta_gap <= 0.0)
        throw std::domain_error("build_contour: duplicate extremal frequency, gap vanishes");

    const double m2L = std::pow(c.M2, L);
    const double log_term = std::log(24.0 * m2L / c.M1) / beta_gap;

    switch (params.contour_case) {
        case ContourCase::Case1: {
            const double eps1 = std::min(1.0 / 12.0, c.M1 / (96.0 * kPi * m2L));
            const double T1 = 24.0 * params.c1_fit / c.M1 + 1.0;
            const double C2 = std::max(log_term, T1);
            const double T_start = std::max(T1, params.T_extra);
            return contour_from(p, eps1, 0.25, 0.0, 2, 0, C2, T_start, params.t_cap);
        }
        case ContourCase::Case2a: {
            if (params.p_hat <= 0) throw std::invalid_argument("build_contour: case 2a needs q_hat/p_hat");
            const double eps1 = case2a_eps1(params.q_hat, params.p_hat);
            const double mt1 = mt1_from(params.q_hat, params.p_hat);
            const double T1 = std::max(24.0 * params.c1_fit / c.M1 + 1.0,
                                       4.0 * params.c1_fit / (c.M1 * mt1) + 1.0);
            const double C2 = std::max(log_term + 1.0, T1);
            const double ap = static_cast<double>(params.p_hat);
            const double aq = static_cast<double>(std::llabs(params.q_hat));
            const double alpha1 = 1.0 / (ap + aq);  // fractional part of 1 + 1/(p+|q|)
            const double T_start = std::max(T1, params.T_extra);
            return contour_from(p, eps1, alpha1, 0.0, 1, ap, C2, T_start, params.t_cap);
        }
        case ContourCase::Case2b: {
            if (params.p_hat <= 0 || params.q_hat == 0)
                throw std::invalid_argument("build_contour: case 2b needs q_hat/p_hat");
            const double ap = static_cast<double>(params.p_hat);
            const double aq = static_cast<double>(std::llabs(params.q_hat));
            const double eps1 = std::min(1.0 / (6.0 * ap), 0.25 * (1.0 / aq - 1.0 / ap));
            const double T1 = 24.0 * params.c1_fit / c.M1 + 1.0;
            const double C2 = std::max(log_term, T1);
            const double alpha1 = 1.0 / (4.0 * ap);
            const double T_start = std::max(T1, params.T_extra);
            return contour_from(p, eps1, alpha1, 0.0, 1, ap, C2, T_start, params.t_cap);
        }
    }
    throw std::logic_error("build_contour: unreachable");
}

double remainder_fit(const RefractiveProfile& p, double lo, double hi, int samples, double tol) {
    const DominantTermModel m = dominant_coeffs(p);
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double k = lo + (hi - lo) * (i + 0.5) / samples;
        const Cplx d = d_of_k(p, k, tol).d;
        const Cplx dd = dominant_eval(m, k);
        worst = std::max(worst, k * k * std::abs(d - dd));
    }
    return worst;
}

double verify_arc_bound(double beta1, long long N, int samples) {
    if (N < 1 || samples < 1) throw std::invalid_argument("verify_arc_bound: bad arguments");
    const double radius = (N + 0.5) * kPi / beta1;
    double worst = 1e300;
    for (int i = 0; i < samples; ++i) {
        const double th = 2.0 * kPi * i / samples;
        const Cplx k = std::polar(radius, th);
        const auto [s, c] = sincos_scaled(beta1 * k);
        (void)c;
        worst = std::min(worst, 4.0 * std::abs(s));
    }
    return worst;
}

ContourBoundReport verify_contour_lower_bound(const RefractiveProfile& p, const ContourSpec& spec,
                                              double tol) {
    ContourBoundReport rep;
    double best = 1e300;
    for (Cplx k : spec.samples) {
        const ScaledValue d = d_of_k_scaled(p, k, tol);
        if (!(std::abs(d.mantissa) > 0.0))
            throw std::runtime_error("verify_contour_lower_bound: sample hit a zero at k = " +
                                     complex_to_string(k));
        const double lognorm =
            d.log_abs() + std::log(std::abs(k)) - spec.beta1 * std::abs(k.imag());
        if (lognorm < best) {
            best = lognorm;
            rep.argmin = k;
        }
    }
    rep.min_normalized = std::exp(best);
    const double m1 = theorem_constants(p).M1;
    rep.paper_fraction = rep.min_normalized / (m1 / 24.0);
    return rep;
}

std::string contour_samples_csv(const RefractiveProfile& p, const ContourSpec& spec, double tol) {
    std::ostringstream out;
    out << "k_re,k_im,abs_d,normalized\n";
    for (Cplx k : spec.samples) {
        const ScaledValue d = d_of_k_scaled(p, k, tol);
        const double logabs = d.log_abs();
        const double lognorm = logabs + std::log(std::abs(k)) - spec.beta1 * std::abs(k.imag());
        out << fmt17(k.real()) << ',' << fmt17(k.imag()) << ','
            << fmt17(logabs < 700.0 ? std::exp(logabs) : std::numeric_limits<double>::infinity())
            << ',' << fmt17(std::exp(lognorm)) << '\n';
    }
    return out.str();
}

}  // namespace tev
