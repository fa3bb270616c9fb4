#include "tev/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tev {

namespace {
constexpr int kPanels = 1024;
}

LiouvilleChart::LiouvilleChart(const RefractiveProfile& p, std::size_t l) : seg_idx_(l) {
    if (l >= p.layer_count()) throw std::invalid_argument("build_chart: segment index out of range");
    seg_ = p.segment(l);
    delta_lm1_ = p.delta_integral(0.0, seg_.start);
    n_left_ = seg_.law.value(seg_.start);
    np_left_ = seg_.law.deriv(seg_.start);

    rs_.resize(kPanels + 1);
    xis_.resize(kPanels + 1);
    sqns_.resize(kPanels + 1);
    const double h = (seg_.end - seg_.start) / kPanels;
    for (int i = 0; i <= kPanels; ++i) {
        rs_[i] = seg_.start + i * h;
        sqns_[i] = std::sqrt(seg_.law.value(rs_[i]));
    }
    xis_[0] = delta_lm1_;
    for (int i = 0; i < kPanels; ++i) {
        const double m = 0.5 * (rs_[i] + rs_[i + 1]);
        const double fm = std::sqrt(seg_.law.value(m));
        xis_[i + 1] = xis_[i] + h / 6.0 * (sqns_[i] + 4.0 * fm + sqns_[i + 1]);
    }
    delta_l_ = xis_[kPanels];
}

double LiouvilleChart::hermite_xi(double r) const {
    const double h = rs_[1] - rs_[0];
    int i = static_cast<int>((r - rs_[0]) / h);
    i = std::clamp(i, 0, kPanels - 1);
    const double t = (r - rs_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return h00 * xis_[i] + h10 * h * sqns_[i] + h01 * xis_[i + 1] + h11 * h * sqns_[i + 1];
}

double LiouvilleChart::hermite_dxi(double r) const {
    const double h = rs_[1] - rs_[0];
    int i = static_cast<int>((r - rs_[0]) / h);
    i = std::clamp(i, 0, kPanels - 1);
    const double t = (r - rs_[i]) / h;
    const double t2 = t * t;
    const double d00 = (6 * t2 - 6 * t) / h, d10 = 3 * t2 - 4 * t + 1;
    const double d01 = (-6 * t2 + 6 * t) / h, d11 = 3 * t2 - 2 * t;
    return d00 * xis_[i] + d10 * sqns_[i] + d01 * xis_[i + 1] + d11 * sqns_[i + 1];
}

double LiouvilleChart::xi_of_r(double r) const {
    if (r < seg_.start - 1e-12 || r > seg_.end + 1e-12)
        throw std::domain_error("xi_of_r: r outside segment");
    return hermite_xi(std::clamp(r, seg_.start, seg_.end));
}

double LiouvilleChart::r_of_xi(double xi) const {
    if (xi < delta_lm1_ - 1e-9 || xi > delta_l_ + 1e-9)
        throw std::domain_error("r_of_xi: xi outside chart range");
    xi = std::clamp(xi, delta_lm1_, delta_l_);
    // bracket by table, then Newton on the interpolant
    const auto it = std::upper_bound(xis_.begin(), xis_.end(), xi);
    int i = static_cast<int>(std::distance(xis_.begin(), it)) - 1;
    i = std::clamp(i, 0, kPanels - 1);
    double lo = rs_[i], hi = rs_[i + 1];
    double r = lo + (hi - lo) * (xi - xis_[i]) / std::max(xis_[i + 1] - xis_[i], 1e-300);
    for (int it2 = 0; it2 < 60; ++it2) {
        const double f = hermite_xi(r) - xi;
        if (f > 0.0)
            hi = r;
        else
            lo = r;
        const double step = f / hermite_dxi(r);
        double next = r - step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - r) < 1e-14) return next;
        r = next;
    }
    return r;
}

double LiouvilleChart::potential(double xi) const {
    const double r = r_of_xi(xi);
    const double n = seg_.law.value(r);
    const double np = seg_.law.deriv(r);
    const double npp = seg_.law.deriv2(r);
    return npp / (4.0 * n * n) - 5.0 * np * np / (16.0 * n * n * n);
}

LiouvilleChart build_chart(const RefractiveProfile& p, std::size_t segment_index) {
    return LiouvilleChart(p, segment_index);
}

StateVector transform_solve(const RefractiveProfile& p, Cplx k, double tol) {
    Cplx b1 = 1.0;  // y'(R_{l-1})
    Cplx b2 = 0.0;  // y(R_{l-1})
    const Cplx k2 = k * k;
    for (std::size_t l = 0; l < p.layer_count(); ++l) {
        const LiouvilleChart chart(p, l);
        const Segment& seg = p.segment(l);
        const double nl = chart.n_left();
        const double q14 = std::pow(nl, 0.25);

        const auto q = [&](double xi) -> Cplx {
            if (seg.law.is_constant()) return k2;
            return k2 - chart.potential(xi);
        };
        // z-basis with y-start (0, 1)
        auto [z1, z1p] = integrate_second_order(q, chart.delta_lm1(), chart.delta_l(), Cplx(0.0),
                                                Cplx(1.0 / q14), tol);
        // z-basis with y-start (1, 0); slope follows from z = n^{1/4} y
        auto [z2, z2p] = integrate_second_order(
            q, chart.delta_lm1(), chart.delta_l(), Cplx(q14),
            Cplx(chart.np_left() / (4.0 * std::pow(nl, 1.25))), tol);

        const double nr = p.left_value(l, 0);
        const double nrp = p.left_value(l, 1);
        const double nr14 = std::pow(nr, 0.25);
        const Cplx z = b1 * z1 + b2 * z2;
        const Cplx zp = b1 * z1p + b2 * z2p;
        const Cplx y_end = z / nr14;
        const Cplx yp_end = nr14 * zp - nrp / (4.0 * std::pow(nr, 1.25)) * z;
        b1 = yp_end;
        b2 = y_end;
    }
    return {b2, b1, 1.0};
}

Cplx z_leading_order(const LiouvilleChart& chart, Cplx k, int which, double xi) {
    const double q14 = std::pow(chart.n_left(), 0.25);
    const Cplx phase = k * (xi - chart.delta_lm1());
    if (which == 1) return std::sin(phase) / (q14 * k);
    if (which == 2) return q14 * std::cos(phase);
    throw std::invalid_argument("z_leading_order: which must be 1 or 2");
}

Cplx z_basis(const LiouvilleChart& chart, Cplx k, int which, double xi, double tol) {
    const double q14 = std::pow(chart.n_left(), 0.25);
    const Cplx k2 = k * k;
    const auto q = [&](double x) -> Cplx { return k2 - chart.potential(x); };
    Cplx z0, zp0;
    if (which == 1) {
        z0 = 0.0;
        zp0 = 1.0 / q14;
    } else if (which == 2) {
        z0 = q14;
        zp0 = chart.np_left() / (4.0 * std::pow(chart.n_left(), 1.25));
    } else {
        throw std::invalid_argument("z_basis: which must be 1 or 2");
    }
    auto [z, zp] = integrate_second_order(q, chart.delta_lm1(), xi, z0, zp0, tol);
    (void)zp;
    return z;
}

}  // namespace tev
