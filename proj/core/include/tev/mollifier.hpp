#pragma once

#include <functional>

namespace tev {

// Compactly supported bump exp(1/(x^2-1)) on (-1,1), scaled to unit mass.
double bump_kernel(double x);
double bump_kernel_mass_raw();  // integral of the unscaled bump

// Smooth approximant of a function with Lipschitz derivative. The derivative
// is extended constantly beyond [0,1], convolved with the width-1/j bump,
// and re-integrated from f(0):
//   g_j = (extended f') * eta_{1/j},   f_j(x) = f(0) + integral_0^x g_j.
class Mollified {
  public:
    Mollified(std::function<double(double)> f, std::function<double(double)> fprime, int j);

    double g(double x) const;   // smoothed derivative
    double fj(double x) const;  // smoothed function
    int order() const { return j_; }

  private:
    std::function<double(double)> f_;
    std::function<double(double)> fp_;
    int j_;
    double f0_;
};

}  // namespace tev
