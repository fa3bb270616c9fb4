#pragma once

#include <functional>
#include <vector>

namespace tev {

// Adaptive Simpson on [a,b] with absolute tolerance. Recursion depth is
// capped; the cap is generous enough for the C^0 integrands the mollifier
// produces.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12, int max_depth = 40);

// Same integral but split at the given interior points first, so piecewise
// integrands are never sampled across a kink or jump.
double adaptive_simpson_split(const std::function<double(double)>& f, double a, double b,
                              const std::vector<double>& interior_splits,
                              double tol = 1e-12, int max_depth = 40);

// Gauss-Legendre nodes/weights on [-1,1], computed by Newton iteration on
// the Legendre recurrence.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
GaussRule gauss_legendre(int n);

}  // namespace tev
