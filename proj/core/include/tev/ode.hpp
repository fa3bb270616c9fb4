#pragma once

#include <complex>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "tev/profile.hpp"

namespace tev {

using Cplx = std::complex<double>;

// sin(z)/z with a series branch below |z| = 1e-8
Cplx sinc(Cplx z);

// sin(z)*exp(-|Im z|) and cos(z)*exp(-|Im z|), stable for any |Im z|
std::pair<Cplx, Cplx> sincos_scaled(Cplx z);

// Propagated solution pair of y'' + k^2 n(r) y = 0
struct StateVector {
    Cplx y{};
    Cplx yp{};
    double r = 0.0;
};

// Same pair with an explicit log-magnitude factor: actual value is
// (y, yp) * exp(log_scale). Lets d(k) be evaluated far above the ~700
// log-unit overflow ceiling of plain doubles.
struct ScaledState {
    Cplx y{};
    Cplx yp{};
    double r = 0.0;
    double log_scale = 0.0;
};

// 2x2 complex transfer matrix mapping (y, y') at segment start to its end.
// No first-derivative term in the ODE, so det = 1.
struct Propagator {
    Cplx m00{1.0}, m01{}, m10{}, m11{1.0};

    Cplx det() const { return m00 * m11 - m01 * m10; }
    StateVector apply(const StateVector& s, double r_out) const {
        return {m00 * s.y + m01 * s.yp, m10 * s.y + m11 * s.yp, r_out};
    }
    Propagator operator*(const Propagator& rhs) const {  // this after rhs
        return {m00 * rhs.m00 + m01 * rhs.m10, m00 * rhs.m01 + m01 * rhs.m11,
                m10 * rhs.m00 + m11 * rhs.m10, m10 * rhs.m01 + m11 * rhs.m11};
    }
};

struct ScaledPropagator {
    Propagator m;
    double log_scale = 0.0;
};

// Exact trigonometric propagator across a constant-index stretch:
//   [[cos(x), sin(x)/(k sqrt n)], [-k sqrt n sin(x), cos(x)]],  x = k sqrt(n) len.
// k = 0 and tiny |x| go through the sinc series (analytic limit [[1,len],[0,1]]).
Propagator propagate_constant(double n_value, double length, Cplx k);
ScaledPropagator propagate_constant_scaled(double n_value, double length, Cplx k);

// Adaptive embedded Runge-Kutta 5(4) on the first-order complex system
// (y, y')' = (y', -k^2 n(r) y) across one segment. Steps never cross a
// breakpoint because integration is per-segment. Constant laws delegate to
// the exact propagator, bit-identically.
StateVector integrate_variable(const Segment& seg, Cplx k, const StateVector& state_in,
                               double tol = 1e-10);

// Whole-interval solve with the normalization y(0) = 0, y'(0) = 1.
StateVector solve_ivp(const RefractiveProfile& p, Cplx k, double tol = 1e-10);
ScaledState solve_ivp_scaled(const RefractiveProfile& p, Cplx k, double tol = 1e-10);

// Trajectory sampling hook: states at each requested radius (ascending).
std::vector<StateVector> solve_ivp_samples(const RefractiveProfile& p, Cplx k,
                                           std::span<const double> radii, double tol = 1e-10);

// Free-space pair (y0(1), y0'(1)) = (sin k / k, cos k); k -> 0 limit (1, 1).
std::pair<Cplx, Cplx> free_solution(Cplx k);

// Shared driver for w'' + q(x) w = 0 under the same embedded RK contract;
// returns (w, w') at b.
std::pair<Cplx, Cplx> integrate_second_order(const std::function<Cplx(double)>& q, double a,
                                             double b, Cplx w, Cplx wp, double tol = 1e-10);

}  // namespace tev
