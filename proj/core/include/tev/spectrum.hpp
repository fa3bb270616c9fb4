#pragma once

#include <string>
#include <vector>

#include "tev/charfn.hpp"
#include "tev/profile.hpp"

namespace tev {

// Zeros below this are excluded: d(0) = 0 identically but k = 0 is not an
// eigenvalue.
inline constexpr double kFloor = 1e-3;

struct Rect {
    double re0 = 0.0, re1 = 0.0, im0 = 0.0, im1 = 0.0;
};

struct ComplexZero {
    Cplx z{};
    int multiplicity = 1;
    double residual = 0.0;
};

struct EigenvalueSet {
    std::vector<double> real_zeros;          // ascending, above kFloor
    std::vector<int> real_multiplicities;    // filled by density_fit / on request
    std::vector<double> residuals;           // |d| at each real zero
    std::vector<ComplexZero> complex_zeros;  // open upper-right quarter plane
    Rect region;
    std::vector<std::string> warnings;
};

// Sign-change scan of d on (kFloor, k_max], grid step pi/(8 (1 + delta_L)),
// bisection to 1e-12 and a guarded Newton polish. Refuses profiles whose d
// vanishes identically (n == 1).
EigenvalueSet real_eigs(const RefractiveProfile& p, double k_max, double tol = 1e-10);

// Argument-principle count over the rectangle boundary (trapezoid over
// d'/d, central-difference derivative). Non-integer winding after
// refinement raises; a boundary too close to a zero is nudged outward by
// 1e-4 up to 5 times.
int winding_number(const RefractiveProfile& p, const Rect& r, double tol = 1e-10);

// Recursive quadrisection until each cell holds one zero (or is tiny, in
// which case the winding count becomes the multiplicity), then Newton
// polish.
std::vector<ComplexZero> complex_eigs(const RefractiveProfile& p, const Rect& r,
                                      double tol = 1e-10);

// Multiplicity of an (already located) real zero via a small winding box.
int real_zero_multiplicity(const RefractiveProfile& p, double z, double half_width,
                           double tol = 1e-10);

struct CountingFit {
    std::vector<double> thresholds;
    std::vector<double> counts;  // all four symmetry images, with multiplicity
    double slope = 0.0;
    double intercept = 0.0;
    double delta_estimate = 0.0;
    std::string caveat;
};

// Least-squares line through (T_m, N(T_m)) at 10 thresholds. N counts zeros
// of modulus <= T over the whole plane with multiplicity: quarter-plane
// zeros x4, axis zeros x2. delta_estimate = slope * pi/2 - 1. The complex
// search sweeps [kFloor, T_max] x [kFloor, rect_height] only; zeros above
// that height are not counted (reported as the caveat).
CountingFit density_fit(const RefractiveProfile& p, double T_max, double rect_height = 5.0,
                        double tol = 1e-10);

// CSV writers: "index,k_re,k_im,multiplicity,residual" and "T,count"
std::string eigenvalues_csv(const EigenvalueSet& s);
std::string counting_csv(const CountingFit& f);

}  // namespace tev
