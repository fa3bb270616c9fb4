#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tev/profile.hpp"

namespace tev {

// The two-layer swap pair: 4|16 and 16|4 split at 1/2. Their characteristic
// functions differ by the exact factor 3, so their zero sets coincide and no
// eigenvalue data can tell them apart.
std::pair<RefractiveProfile, RefractiveProfile> build_counterexample_pair();

struct CounterexampleReport {
    double max_identity_dev = 0.0;     // max |d1 - 3 d2|
    double max_stated_form_dev = 0.0;  // vs (9/16k)(sin 2k + sin 4k), as printed in the source text
    double max_exact_form_dev = 0.0;   // vs (9/16k)(sin 4k - 2 sin 2k), the actual determinant
    double zero_set_hausdorff = 0.0;   // between the two real zero sets
    int grid_points = 0;
};

// Max deviations over a k grid plus the Hausdorff distance between the two
// real zero sets on (0, k_max].
CounterexampleReport verify_counterexample(const std::vector<double>& k_grid, double zero_k_max,
                                           double tol = 1e-10);

enum class FitModelKind { TwoLayerInner, LConstants, SinglePolynomial };

struct FitProblem {
    std::vector<double> eigenvalues;
    FitModelKind model = FitModelKind::TwoLayerInner;
    // TwoLayerInner: fixed outer constant and breakpoint, parameter = inner
    double known_outer = 1.0;
    double known_r1 = 0.5;
    // LConstants: fixed breakpoints R_1..R_{L-1}; parameters = L constants
    std::vector<double> known_breakpoints;
    // SinglePolynomial: parameters = degree+1 ascending coefficients
    int degree = 0;
    // known tail on [tail_from, 1]; tail parameters are never free
    std::optional<SegmentLaw> tail_law;
    double tail_from = 1.0;
    std::vector<std::vector<double>> initial_guesses;
};

struct FitMinimum {
    std::vector<double> params;
    double residual = 0.0;
    bool converged = true;
};

struct FitResult {
    std::vector<double> best_params;
    double best_residual = 0.0;
    std::vector<FitMinimum> minima;  // deduplicated, sorted by residual
    bool non_uniqueness_flag = false;
    std::vector<std::string> notes;
};

// Multi-start Nelder-Mead on theta -> sum_j |d_theta(k_j)|^2. Deterministic:
// starts are inputs, never drawn internally. Twin minima below 1e-10
// residual separated by more than 1e-3 raise the non-uniqueness flag.
FitResult fit_profile(const FitProblem& problem);

std::string fit_result_json(const FitResult& r);

// parse "index,k_re,k_im,multiplicity,residual" rows; returns real parts of
// the real eigenvalues (k_im == 0)
std::vector<double> read_eigenvalue_csv(const std::string& text);

}  // namespace tev
