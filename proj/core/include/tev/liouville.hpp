#pragma once

#include <cstddef>
#include <vector>

#include "tev/ode.hpp"
#include "tev/profile.hpp"

namespace tev {

// Per-layer change of variables xi = delta_{l-1} + integral sqrt(n_l),
// z = n_l^{1/4} y, turning y'' + k^2 n y = 0 into z'' + (k^2 - p(xi)) z = 0
// with p = n''/(4n^2) - 5 n'^2 / (16 n^3).
//
// The map is tabulated on a fine grid (cumulative Simpson, values plus the
// exact derivative sqrt(n) at the nodes) and interpolated by monotone cubic
// Hermite pieces; the inverse is Newton on that interpolant, so the
// round-trip closes to ~1e-13.
class LiouvilleChart {
  public:
    LiouvilleChart(const RefractiveProfile& p, std::size_t segment_index);

    double xi_of_r(double r) const;
    double r_of_xi(double xi) const;
    double potential(double xi) const;  // p(xi)

    double delta_lm1() const { return delta_lm1_; }
    double delta_l() const { return delta_l_; }
    std::size_t segment_index() const { return seg_idx_; }

    // n_l and n_l' at the left endpoint R_{l-1} (the transformed initial data
    // live there)
    double n_left() const { return n_left_; }
    double np_left() const { return np_left_; }

  private:
    std::size_t seg_idx_;
    Segment seg_;
    double delta_lm1_ = 0.0;
    double delta_l_ = 0.0;
    double n_left_ = 0.0;
    double np_left_ = 0.0;
    std::vector<double> rs_;    // grid nodes
    std::vector<double> xis_;   // cumulative xi at nodes
    std::vector<double> sqns_;  // sqrt(n) at nodes

    double hermite_xi(double r) const;
    double hermite_dxi(double r) const;
};

LiouvilleChart build_chart(const RefractiveProfile& p, std::size_t segment_index);

// Independent solve of the whole-interval IVP through the transformed
// equation: per layer the two z-bases are integrated with their initial
// data, combined with (y'(R_{l-1}), y(R_{l-1})), and mapped back through
// y = z / n^{1/4}. Cross-checks ode.solve_ivp.
StateVector transform_solve(const RefractiveProfile& p, Cplx k, double tol = 1e-12);

// Leading large-|k| term of the z-bases:
//   which = 1:  sin(k(xi - delta_{l-1})) / (n_l(R_{l-1})^{1/4} k)
//   which = 2:  n_l(R_{l-1})^{1/4} cos(k(xi - delta_{l-1}))
Cplx z_leading_order(const LiouvilleChart& chart, Cplx k, int which, double xi);

// Exact z-basis value at xi (integrated), for remainder studies.
Cplx z_basis(const LiouvilleChart& chart, Cplx k, int which, double xi, double tol = 1e-12);

}  // namespace tev
