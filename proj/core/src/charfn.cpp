#include "tev/charfn.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "tev/quadrature.hpp"
#include "tev/textio.hpp"

namespace tev {

double ScaledValue::log_abs() const { return std::log(std::abs(mantissa)) + log_scale; }

CharacteristicValue d_of_k(const RefractiveProfile& p, Cplx k, double tol) {
    CharacteristicValue out;
    out.k = k;
    if (std::abs(k) < 1e-8) {
        // y(1) -> 1, y'(1) -> 1 as k -> 0, matching the free solution
        out.y1 = 1.0;
        out.yp1 = 1.0;
        out.d = 0.0;
        out.degenerate = true;
        return out;
    }
    const double growth = std::abs(k.imag()) * (1.0 + p.delta_total());
    if (growth > 700.0)
        throw std::domain_error("d_of_k: |Im k| too large for direct evaluation, use d_of_k_scaled");
    const StateVector s = solve_ivp(p, k, tol);
    const auto [f0, f0p] = free_solution(k);
    out.y1 = s.y;
    out.yp1 = s.yp;
    out.d = s.yp * f0 - s.y * f0p;
    return out;
}

ScaledValue d_of_k_scaled(const RefractiveProfile& p, Cplx k, double tol) {
    if (std::abs(k) < 1e-8) return {0.0, 0.0};
    const ScaledState s = solve_ivp_scaled(p, k, tol);
    const auto [sk, ck] = sincos_scaled(k);  // sin k, cos k damped by e^{-|Im k|}
    Cplx mant = s.yp * (sk / k) - s.y * ck;
    double logsc = s.log_scale + std::abs(k.imag());
    const double m = std::abs(mant);
    if (m > 0.0) {
        mant /= m;
        logsc += std::log(m);
    }
    return {mant, logsc};
}

Cplx d_two_layer_closed(double n1, double n2, double R1, Cplx k) {
    if (!(R1 > 0.0 && R1 < 1.0)) throw std::invalid_argument("d_two_layer_closed: need 0 < R1 < 1");
    const double s1 = std::sqrt(n1), s2 = std::sqrt(n2);
    const Cplx a = k * s1 * R1;
    const Cplx b = k * s2 * (1.0 - R1);
    // interface continuity of (y, y') at R1
    const Cplx b21 = std::cos(a);            // y'(R1)
    const Cplx b22 = R1 * sinc(a);           // y(R1) = sin(a)/(k s1)
    const Cplx y1 = b21 * (1.0 - R1) * sinc(b) + b22 * std::cos(b);
    const Cplx yp1 = b21 * std::cos(b) - b22 * (k * s2) * std::sin(b);
    const auto [f0, f0p] = free_solution(k);
    return yp1 * f0 - y1 * f0p;
}

DominantTermModel dominant_coeffs(const RefractiveProfile& p) {
    DominantTermModel m;
    const int L = static_cast<int>(p.layer_count());
    m.L = L;
    m.delta_L = p.delta_total();
    m.nL_end = p.left_value(L - 1, 0);  // n_L(1)

    const std::vector<double> dh = p.delta_hats();
    const double n0 = p.eval(0.0, 0);
    const double inv_n0_14 = 1.0 / std::pow(n0, 0.25);
    const double nL14 = std::pow(m.nL_end, 0.25);

    // interface quarter-power ratios rho_l = (n_{l-1}(R_{l-1}) / n_l(R_{l-1}))^{1/4}
    std::vector<double> rho(L + 1, 1.0);
    for (int l = 2; l <= L; ++l) {
        const double R = p.segment(l - 2).end;
        const double n_left = p.left_value(l - 2, 0);
        const double n_right = p.segment(l - 1).law.value(R);
        rho[l] = std::pow(n_left / n_right, 0.25);
    }

    const int full = 1 << L;
    m.betas.resize(full);
    m.weights.resize(full);
    for (int code = 0; code < full; ++code) {
        // bit (l-1) of code is i_l
        double beta = 1.0;
        for (int l = 1; l <= L; ++l) beta += ((code >> (l - 1)) & 1) ? -dh[l - 1] : dh[l - 1];
        double w = inv_n0_14;
        const int iL = (code >> (L - 1)) & 1;
        w *= nL14 + ((1 - iL) & 1 ? -1.0 : 1.0) / nL14;
        for (int l = 2; l <= L; ++l) {
            const int il = (code >> (l - 1)) & 1;
            const int ilm1 = (code >> (l - 2)) & 1;
            const int ipr = (il + ilm1) & 1;
            w *= rho[l] + (ipr ? -1.0 : 1.0) / rho[l];
        }
        m.betas[code] = beta;
        m.weights[code] = w;
    }

    // y-level model: i in {0,1}^{L-1}, i_L = 0
    const int half = 1 << (L - 1);
    m.y_betas.resize(half);
    m.y_weights.resize(half);
    for (int code = 0; code < half; ++code) {
        double beta = dh[L - 1];
        for (int l = 1; l <= L - 1; ++l) beta += ((code >> (l - 1)) & 1) ? -dh[l - 1] : dh[l - 1];
        double w = inv_n0_14 / half;
        for (int l = 2; l <= L; ++l) {
            const int il = (l == L) ? 0 : ((code >> (l - 1)) & 1);
            const int ilm1 = (code >> (l - 2)) & 1;
            const int ipr = (il + ilm1) & 1;
            w *= rho[l] + (ipr ? -1.0 : 1.0) / rho[l];
        }
        m.y_betas[code] = beta;
        m.y_weights[code] = w;
    }
    return m;
}

Cplx dominant_eval(const DominantTermModel& m, Cplx k) {
    if (std::abs(k) == 0.0) throw std::domain_error("dominant_eval: k must be nonzero");
    double max_beta = 0.0;
    for (double b : m.betas) max_beta = std::max(max_beta, std::abs(b));
    if (std::abs(k.imag()) * max_beta > 700.0)
        throw std::domain_error("dominant_eval: |Im k| too large, use dominant_eval_scaled");
    Cplx acc = 0.0;
    for (std::size_t j = 0; j < m.betas.size(); ++j) acc += m.weights[j] * std::sin(m.betas[j] * k);
    const double scale = static_cast<double>(1 << m.L);
    return acc / (scale * k);
}

ScaledValue dominant_eval_scaled(const DominantTermModel& m, Cplx k) {
    if (std::abs(k) == 0.0) throw std::domain_error("dominant_eval_scaled: k must be nonzero");
    const double y = std::abs(k.imag());
    double max_beta = 0.0;
    for (double b : m.betas) max_beta = std::max(max_beta, std::abs(b));
    const double ref = max_beta * y;  // factor the largest exponential out
    Cplx acc = 0.0;
    for (std::size_t j = 0; j < m.betas.size(); ++j) {
        const auto [s, c] = sincos_scaled(m.betas[j] * k);
        (void)c;
        acc += m.weights[j] * s * std::exp(std::abs(m.betas[j]) * y - ref);
    }
    const double scale = static_cast<double>(1 << m.L);
    Cplx mant = acc / (scale * k);
    double logsc = ref;
    const double mag = std::abs(mant);
    if (mag > 0.0) {
        mant /= mag;
        logsc += std::log(mag);
    }
    return {mant, logsc};
}

std::pair<Cplx, Cplx> dominant_y_eval(const DominantTermModel& m, Cplx k) {
    const double nL14 = std::pow(m.nL_end, 0.25);
    Cplx sy = 0.0, syp = 0.0;
    for (std::size_t j = 0; j < m.y_betas.size(); ++j) {
        sy += m.y_weights[j] * std::sin(m.y_betas[j] * k);
        syp += m.y_weights[j] * std::cos(m.y_betas[j] * k);
    }
    return {sy / (nL14 * k), nL14 * syp};
}

double lagrange_residual(const RefractiveProfile& p1, const RefractiveProfile& p2, Cplx k,
                         double upper, double tol) {
    if (!(upper > 0.0 && upper <= 1.0)) throw std::domain_error("lagrange_residual: bad upper");
    if (upper < 1.0) {
        for (int i = 0; i <= 32; ++i) {
            const double r = upper + (1.0 - upper) * i / 32.0;
            if (std::abs(p1.eval(r) - p2.eval(r)) > 1e-10)
                throw std::domain_error("lagrange_residual: profiles differ beyond upper");
        }
    }
    // breakpoint-split composite Gauss grid
    std::vector<double> cuts{0.0, upper};
    for (double b : p1.interior_breakpoints())
        if (b < upper) cuts.push_back(b);
    for (double b : p2.interior_breakpoints())
        if (b < upper) cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    static const GaussRule rule = gauss_legendre(64);
    std::vector<double> nodes;
    std::vector<double> wts;
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        const double mid = 0.5 * (cuts[c] + cuts[c + 1]);
        const double rad = 0.5 * (cuts[c + 1] - cuts[c]);
        for (int i = 0; i < 64; ++i) {
            nodes.push_back(mid + rad * rule.nodes[i]);
            wts.push_back(rad * rule.weights[i]);
        }
    }
    std::vector<std::size_t> order(nodes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return nodes[a] < nodes[b]; });
    std::vector<double> sorted_nodes(nodes.size());
    for (std::size_t i = 0; i < order.size(); ++i) sorted_nodes[i] = nodes[order[i]];

    const auto tr1 = solve_ivp_samples(p1, k, sorted_nodes, tol);
    const auto tr2 = solve_ivp_samples(p2, k, sorted_nodes, tol);

    Cplx integral = 0.0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const double r = sorted_nodes[i];
        const double w = wts[order[i]];
        integral += w * (p2.eval(r) - p1.eval(r)) * tr1[i].y * tr2[i].y;
    }
    const StateVector e1 = solve_ivp(p1, k, tol);
    const StateVector e2 = solve_ivp(p2, k, tol);
    const Cplx wronskian = e1.yp * e2.y - e1.y * e2.yp;
    return std::abs(k * k * integral - wronskian);
}

void write_sweep_csv(std::ostream& out, const RefractiveProfile& p, const std::vector<Cplx>& ks,
                     double tol) {
    const DominantTermModel model = dominant_coeffs(p);
    out << "k_re,k_im,d_re,d_im,Dd_re,Dd_im\n";
    for (Cplx k : ks) {
        const CharacteristicValue v = d_of_k(p, k, tol);
        Cplx dd = 0.0;
        if (!v.degenerate) dd = dominant_eval(model, k);
        out << fmt17(k.real()) << ',' << fmt17(k.imag()) << ',' << fmt17(v.d.real()) << ','
            << fmt17(v.d.imag()) << ',' << fmt17(dd.real()) << ',' << fmt17(dd.imag()) << '\n';
    }
}

}  // namespace tev
