#include "tev/mollifier.hpp"

#include <cmath>
#include <stdexcept>

#include "tev/quadrature.hpp"

namespace tev {

namespace {

double bump_raw(double x) {
    if (std::abs(x) >= 1.0) return 0.0;
    return std::exp(1.0 / (x * x - 1.0));
}

double raw_mass() {
    static const double mass =
        adaptive_simpson([](double x) { return bump_raw(x); }, -1.0, 1.0, 1e-14);
    return mass;
}

}  // namespace

double bump_kernel_mass_raw() { return raw_mass(); }

double bump_kernel(double x) { return bump_raw(x) / raw_mass(); }

Mollified::Mollified(std::function<double(double)> f, std::function<double(double)> fprime, int j)
    : f_(std::move(f)), fp_(std::move(fprime)), j_(j) {
    if (j < 1) throw std::invalid_argument("mollify: j must be >= 1");
    f0_ = f_(0.0);
}

double Mollified::g(double x) const {
    // substitute u = j*z: integral over the unit support of the bump
    const auto ext = [this](double t) {
        if (t < 0.0) return fp_(0.0);
        if (t > 1.0) return fp_(1.0);
        return fp_(t);
    };
    const double val = adaptive_simpson(
        [&](double u) { return ext(x - u / j_) * bump_raw(u); }, -1.0, 1.0, 1e-13);
    return val / raw_mass();
}

double Mollified::fj(double x) const {
    if (x == 0.0) return f0_;
    // g is smooth, plain adaptive quadrature suffices
    return f0_ + adaptive_simpson([this](double t) { return g(t); }, 0.0, x, 1e-10, 24);
}

}  // namespace tev
