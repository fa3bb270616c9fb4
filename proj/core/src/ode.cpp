#include "tev/ode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tev {

Cplx sinc(Cplx z) {
    if (std::abs(z) < 1e-8) {
        const Cplx z2 = z * z;
        return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
    }
    return std::sin(z) / z;
}

std::pair<Cplx, Cplx> sincos_scaled(Cplx z) {
    const double y = z.imag();
    if (y < 0.0) {
        auto [s, c] = sincos_scaled(std::conj(z));
        return {std::conj(s), std::conj(c)};
    }
    const Cplx eip = std::polar(1.0, z.real());   // e^{i Re z}
    const Cplx eim = std::conj(eip);              // e^{-i Re z}
    const double damp = std::exp(-2.0 * y);
    const Cplx s = (eip * damp - eim) / Cplx(0.0, 2.0);
    const Cplx c = (eip * damp + eim) * 0.5;
    return {s, c};
}

Propagator propagate_constant(double n_value, double length, Cplx k) {
    if (!(n_value > 0.0)) throw std::invalid_argument("propagate_constant: n must be positive");
    if (length < 0.0) throw std::invalid_argument("propagate_constant: negative length");
    const double sq = std::sqrt(n_value);
    const Cplx x = k * sq * length;
    const Cplx snc = sinc(x);  // sin(x)/x, finite at k = 0
    Propagator P;
    P.m00 = std::abs(x) < 1e-8 ? 1.0 - x * x * 0.5 + x * x * x * x / 24.0 : std::cos(x);
    P.m01 = length * snc;
    P.m10 = -(k * k) * n_value * length * snc;
    P.m11 = P.m00;
    return P;
}

ScaledPropagator propagate_constant_scaled(double n_value, double length, Cplx k) {
    const double sq = std::sqrt(n_value);
    const Cplx x = k * sq * length;
    if (std::abs(x.imag()) < 1.0) return {propagate_constant(n_value, length, k), 0.0};
    const auto [s, c] = sincos_scaled(x);
    ScaledPropagator P;
    P.m.m00 = c;
    P.m.m01 = s / (k * sq);
    P.m.m10 = -(k * sq) * s;
    P.m.m11 = c;
    P.log_scale = std::abs(x.imag());
    return P;
}

namespace {

struct Pair2 {
    Cplx y, yp;
};

// Dormand-Prince 5(4) tableau
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176,
                 A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784,
                 B6 = 11.0 / 84;
//(5th-order weights) minus (4th-order weights); k7 = f at the new point
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920, E5 = -17253.0 / 339200,
                 E6 = 22.0 / 525, E7 = -1.0 / 40;

template <typename Rhs>
Pair2 rk45_segment(const Rhs& rhs, double a, double b, Pair2 s, double tol,
                   double* log_scale = nullptr) {
    const double span = b - a;
    double h = span / 64.0;
    double r = a;
    const double hmin = span * 1e-15;
    int accepted = 0;
    Pair2 k1 = rhs(r, s);
    while (r < b) {
        h = std::min(h, b - r);
        const Pair2 k2 = rhs(r + A21 * h, {s.y + h * (A21 * k1.y), s.yp + h * (A21 * k1.yp)});
        const Pair2 k3 = rhs(r + 0.3 * h, {s.y + h * (A31 * k1.y + A32 * k2.y),
                                           s.yp + h * (A31 * k1.yp + A32 * k2.yp)});
        const Pair2 k4 = rhs(r + 0.8 * h, {s.y + h * (A41 * k1.y + A42 * k2.y + A43 * k3.y),
                                           s.yp + h * (A41 * k1.yp + A42 * k2.yp + A43 * k3.yp)});
        const Pair2 k5 =
            rhs(r + 8.0 / 9.0 * h,
                {s.y + h * (A51 * k1.y + A52 * k2.y + A53 * k3.y + A54 * k4.y),
                 s.yp + h * (A51 * k1.yp + A52 * k2.yp + A53 * k3.yp + A54 * k4.yp)});
        const Pair2 k6 =
            rhs(r + h, {s.y + h * (A61 * k1.y + A62 * k2.y + A63 * k3.y + A64 * k4.y + A65 * k5.y),
                        s.yp + h * (A61 * k1.yp + A62 * k2.yp + A63 * k3.yp + A64 * k4.yp +
                                    A65 * k5.yp)});
        const Pair2 ynew = {s.y + h * (B1 * k1.y + B3 * k3.y + B4 * k4.y + B5 * k5.y + B6 * k6.y),
                            s.yp + h * (B1 * k1.yp + B3 * k3.yp + B4 * k4.yp + B5 * k5.yp +
                                        B6 * k6.yp)};
        const Pair2 k7 = rhs(r + h, ynew);
        const Cplx ey =
            h * (E1 * k1.y + E3 * k3.y + E4 * k4.y + E5 * k5.y + E6 * k6.y + E7 * k7.y);
        const Cplx eyp =
            h * (E1 * k1.yp + E3 * k3.yp + E4 * k4.yp + E5 * k5.yp + E6 * k6.yp + E7 * k7.yp);
        const double sc_y = std::max({1.0, std::abs(s.y), std::abs(ynew.y)});
        const double sc_yp = std::max({1.0, std::abs(s.yp), std::abs(ynew.yp)});
        const double err = std::max(std::abs(ey) / sc_y, std::abs(eyp) / sc_yp) / tol;
        if (err <= 1.0) {
            r += h;
            s = ynew;
            k1 = k7;  // first-same-as-last
            ++accepted;
            if (log_scale) {
                const double m = std::max(std::abs(s.y), std::abs(s.yp));
                if (m > 1e50) {
                    s.y /= m;
                    s.yp /= m;
                    k1.y /= m;
                    k1.yp /= m;
                    *log_scale += std::log(m);
                }
            }
            if (!std::isfinite(s.y.real()) || !std::isfinite(s.y.imag()) ||
                !std::isfinite(s.yp.real()) || !std::isfinite(s.yp.imag()))
                throw std::runtime_error("integrate_variable: non-finite state at r=" +
                                         std::to_string(r));
        }
        const double grow = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
        h *= std::clamp(grow, 0.2, 5.0);
        if (h < hmin && r < b)
            throw std::runtime_error("integrate_variable: step-size underflow at r=" +
                                     std::to_string(r));
    }
    (void)accepted;
    return s;
}

Pair2 rk45_ode(const Segment& seg, Cplx k, double a, double b, Pair2 s, double tol,
               double* log_scale) {
    const Cplx k2 = k * k;
    const auto rhs = [&](double r, Pair2 v) -> Pair2 { return {v.yp, -k2 * seg.law.value(r) * v.y}; };
    return rk45_segment(rhs, a, b, s, tol, log_scale);
}

}  // namespace

StateVector integrate_variable(const Segment& seg, Cplx k, const StateVector& state_in,
                               double tol) {
    if (seg.law.is_constant()) {
        const Propagator P = propagate_constant(seg.law.coeffs[0], seg.end - seg.start, k);
        return P.apply(state_in, seg.end);
    }
    if (std::abs(state_in.r - seg.start) > 1e-12)
        throw std::invalid_argument("integrate_variable: state not at segment start");
    const Pair2 out = rk45_ode(seg, k, seg.start, seg.end, {state_in.y, state_in.yp}, tol, nullptr);
    return {out.y, out.yp, seg.end};
}

StateVector solve_ivp(const RefractiveProfile& p, Cplx k, double tol) {
    StateVector s{0.0, 1.0, 0.0};
    for (const Segment& seg : p.segments()) s = integrate_variable(seg, k, s, tol);
    return s;
}

ScaledState solve_ivp_scaled(const RefractiveProfile& p, Cplx k, double tol) {
    ScaledState s{0.0, 1.0, 0.0, 0.0};
    for (const Segment& seg : p.segments()) {
        if (seg.law.is_constant()) {
            const ScaledPropagator P =
                propagate_constant_scaled(seg.law.coeffs[0], seg.end - seg.start, k);
            const StateVector next = P.m.apply({s.y, s.yp, s.r}, seg.end);
            s.y = next.y;
            s.yp = next.yp;
            s.log_scale += P.log_scale;
        } else {
            const Pair2 out = rk45_ode(seg, k, seg.start, seg.end, {s.y, s.yp}, tol, &s.log_scale);
            s.y = out.y;
            s.yp = out.yp;
        }
        s.r = seg.end;
        const double m = std::max(std::abs(s.y), std::abs(s.yp));
        if (m > 1e50 || (m > 0.0 && m < 1e-50)) {
            s.y /= m;
            s.yp /= m;
            s.log_scale += std::log(m);
        }
    }
    return s;
}

std::vector<StateVector> solve_ivp_samples(const RefractiveProfile& p, Cplx k,
                                           std::span<const double> radii, double tol) {
    std::vector<StateVector> out;
    out.reserve(radii.size());
    StateVector s{0.0, 1.0, 0.0};
    std::size_t i = 0;
    for (const Segment& seg : p.segments()) {
        while (i < radii.size() && radii[i] <= seg.end + 1e-15) {
            const double r = std::clamp(radii[i], seg.start, seg.end);
            if (seg.law.is_constant()) {
                const Propagator P = propagate_constant(seg.law.coeffs[0], r - seg.start, k);
                out.push_back(P.apply(s, r));
            } else if (r <= seg.start + 1e-15) {
                out.push_back({s.y, s.yp, r});
            } else {
                const Pair2 v = rk45_ode(seg, k, seg.start, r, {s.y, s.yp}, tol, nullptr);
                out.push_back({v.y, v.yp, r});
            }
            ++i;
        }
        s = integrate_variable(seg, k, s, tol);
    }
    while (i < radii.size()) {
        out.push_back(s);
        ++i;
    }
    return out;
}

std::pair<Cplx, Cplx> free_solution(Cplx k) {
    // same sinc branch as the constant propagator, so n == 1 cancels exactly
    return {sinc(k), std::cos(k)};
}

std::pair<Cplx, Cplx> integrate_second_order(const std::function<Cplx(double)>& q, double a,
                                             double b, Cplx w, Cplx wp, double tol) {
    if (a == b) return {w, wp};
    const auto rhs = [&](double x, Pair2 v) -> Pair2 { return {v.yp, -q(x) * v.y}; };
    const Pair2 out = rk45_segment(rhs, a, b, {w, wp}, tol, nullptr);
    return {out.y, out.yp};
}

}  // namespace tev
