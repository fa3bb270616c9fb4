#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "tev/ode.hpp"
#include "tev/profile.hpp"

namespace tev {

// d(k) = det [ y(1)  -sin k / k ; y'(1)  -cos k ] = -y(1) cos k + y'(1) sin k / k.
// Zeros away from k = 0 are the radially symmetric transmission eigenvalues.
struct CharacteristicValue {
    Cplx k{};
    Cplx d{};
    Cplx y1{};   // y(1)
    Cplx yp1{};  // y'(1)
    bool degenerate = false;  // |k| below the limit floor; d set to the limit 0
};

// value * exp(log_scale); keeps |Im k| * beta_1 in the thousands representable
struct ScaledValue {
    Cplx mantissa{};
    double log_scale = 0.0;

    double log_abs() const;
};

CharacteristicValue d_of_k(const RefractiveProfile& p, Cplx k, double tol = 1e-10);
ScaledValue d_of_k_scaled(const RefractiveProfile& p, Cplx k, double tol = 1e-10);

// Explicit two-layer piecewise-constant determinant, assembled from the
// interface continuity coefficients. Cross-checks the transfer-matrix path.
Cplx d_two_layer_closed(double n1, double n2, double R1, Cplx k);

// Large-|k| trigonometric models. The d-level model is
//   D(d)(k) = 1/(2^L k) * sum_j A_j sin(beta_j k),
// frequencies beta_j = 1 + sum_l (-1)^{i_l} deltahat_l over all sign vectors
// i in {0,1}^L (index j = 1 + sum i_l 2^{l-1}), weights built from the
// interface ratios, the r = 1 factor, and the n_1(0)^{-1/4} normalization of
// the initial layer. For piecewise-constant profiles the model equals d
// exactly. The y-level model (2^{L-1} terms, i_L pinned to 0) is kept too.
struct DominantTermModel {
    int L = 1;
    double delta_L = 0.0;
    double nL_end = 1.0;  // n_L(1)
    std::vector<double> betas;      // 2^L frequencies, j-ordered
    std::vector<double> weights;    // 2^L weights
    std::vector<double> y_betas;    // 2^{L-1}
    std::vector<double> y_weights;  // 2^{L-1}
};

DominantTermModel dominant_coeffs(const RefractiveProfile& p);
Cplx dominant_eval(const DominantTermModel& m, Cplx k);
ScaledValue dominant_eval_scaled(const DominantTermModel& m, Cplx k);
// (D(y(1)), D(y'(1)))
std::pair<Cplx, Cplx> dominant_y_eval(const DominantTermModel& m, Cplx k);

// |k^2 integral_0^upper (n2 - n1) y1 y2 dr - (y1'(1) y2(1) - y1(1) y2'(1))|.
// Both trajectories share the y(0) = 0, y'(0) = 1 normalization, so the
// Wronskian identity makes this zero for exact solutions. Composite 64-point
// Gauss per segment, split at every breakpoint of either profile.
// Requires p1 == p2 on [upper, 1] when upper < 1.
double lagrange_residual(const RefractiveProfile& p1, const RefractiveProfile& p2, Cplx k,
                         double upper, double tol = 1e-10);

// rows: k_re,k_im,d_re,d_im,Dd_re,Dd_im
void write_sweep_csv(std::ostream& out, const RefractiveProfile& p,
                     const std::vector<Cplx>& ks, double tol = 1e-10);

}  // namespace tev
