#include "tev/profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tev/quadrature.hpp"

namespace tev {

double SegmentLaw::value(double r) const {
    double acc = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * r + coeffs[i];
    return acc;
}

double SegmentLaw::deriv(double r) const {
    double acc = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 1;) acc = acc * r + i * coeffs[i];
    return acc;
}

double SegmentLaw::deriv2(double r) const {
    double acc = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 2;) acc = acc * r + i * (i - 1) * coeffs[i];
    return acc;
}

RefractiveProfile::RefractiveProfile(std::vector<Segment> segments, Regularity reg, Bounds bounds)
    : segments_(std::move(segments)), regularity_(reg), bounds_(bounds) {
    if (segments_.empty()) throw std::invalid_argument("profile: needs at least one segment");
    if (std::abs(segments_.front().start) > 1e-12 || std::abs(segments_.back().end - 1.0) > 1e-12)
        throw std::invalid_argument("profile: segments must cover [0,1]");
    segments_.front().start = 0.0;
    segments_.back().end = 1.0;
    for (std::size_t l = 0; l + 1 < segments_.size(); ++l) {
        if (std::abs(segments_[l].end - segments_[l + 1].start) > 1e-12)
            throw std::invalid_argument("profile: segments must be contiguous");
        segments_[l + 1].start = segments_[l].end;  // snap shared breakpoint
    }
    for (const Segment& s : segments_) {
        if (!(s.start < s.end)) throw std::invalid_argument("profile: segment start must precede end");
        for (int i = 0; i <= 64; ++i) {
            const double r = s.start + (s.end - s.start) * i / 64.0;
            const double v = s.law.value(r);
            if (!(v > 0.0)) throw std::invalid_argument("profile: law must be positive on its segment");
            if (bounds_.n_star > 0.0 && (v < bounds_.n_star - 1e-9 || v > bounds_.n_star_upper + 1e-9))
                throw std::invalid_argument("profile: law violates declared bounds");
        }
    }
    if (bounds_.n_star <= 0.0)
        throw std::invalid_argument("profile: n_star must be positive");
    if (regularity_ == Regularity::C2 || regularity_ == Regularity::C11) {
        for (std::size_t l = 0; l + 1 < segments_.size(); ++l) {
            const double R = segments_[l].end;
            if (std::abs(segments_[l].law.value(R) - segments_[l + 1].law.value(R)) > 1e-9 ||
                std::abs(segments_[l].law.deriv(R) - segments_[l + 1].law.deriv(R)) > 1e-9)
                throw std::invalid_argument("profile: C2/C11 tag requires C1 matching at breakpoints");
        }
    }
    if (regularity_ == Regularity::PiecewiseConstant) {
        for (const Segment& s : segments_)
            if (!s.law.is_constant())
                throw std::invalid_argument("profile: piecewise_constant tag requires constant laws");
    }
    delta_total_ = delta_integral(0.0, 1.0);
}

std::size_t RefractiveProfile::segment_index(double r) const {
    if (r < 0.0 || r > 1.0) throw std::domain_error("profile: r outside [0,1]");
    if (r >= segments_.back().start) return segments_.size() - 1;
    std::size_t lo = 0, hi = segments_.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (r < segments_[mid].end)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

double RefractiveProfile::eval(double r, int order) const {
    if (order < 0 || order > 2) throw std::invalid_argument("profile: derivative order must be 0, 1 or 2");
    const Segment& s = segments_[segment_index(r)];
    switch (order) {
        case 0: return s.law.value(r);
        case 1: return s.law.deriv(r);
        default: return s.law.deriv2(r);
    }
}

double RefractiveProfile::left_value(std::size_t l, int order) const {
    const Segment& s = segments_.at(l);
    switch (order) {
        case 0: return s.law.value(s.end);
        case 1: return s.law.deriv(s.end);
        default: return s.law.deriv2(s.end);
    }
}

double RefractiveProfile::delta_integral(double a, double b) const {
    if (!(0.0 <= a && a <= b && b <= 1.0))
        throw std::domain_error("delta_integral: need 0 <= a <= b <= 1");
    if (a == b) return 0.0;
    double total = 0.0;
    for (const Segment& s : segments_) {
        const double lo = std::max(a, s.start);
        const double hi = std::min(b, s.end);
        if (lo >= hi) continue;
        if (s.law.is_constant()) {
            total += std::sqrt(s.law.coeffs[0]) * (hi - lo);
        } else {
            total += adaptive_simpson([&s](double r) { return std::sqrt(s.law.value(r)); }, lo, hi);
        }
    }
    return total;
}

std::vector<double> RefractiveProfile::delta_hats() const {
    std::vector<double> out;
    out.reserve(segments_.size());
    for (const Segment& s : segments_) out.push_back(delta_integral(s.start, s.end));
    return out;
}

double RefractiveProfile::epsilon0() const {
    double worst = 0.0;
    for (std::size_t l = 0; l + 1 < segments_.size(); ++l) {
        const double R = segments_[l].end;
        worst = std::max(worst, std::abs(segments_[l + 1].law.value(R) - segments_[l].law.value(R)));
    }
    return worst;
}

double RefractiveProfile::alpha_point(double eps) const {
    if (!(eps > 0.0)) throw std::domain_error("alpha_point: eps must be positive");
    if (delta_total_ < 1.0) return 1.0;
    const double target = 0.5 * (delta_total_ - 1.0 + eps);
    if (target > delta_total_ + 1e-15)
        throw std::domain_error("alpha_point: eps too large, tail mass exceeds total");
    // tail(alpha) = integral_alpha^1 sqrt(n) is strictly decreasing
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (delta_integral(mid, 1.0) > target)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-12) break;
    }
    return 0.5 * (lo + hi);
}

std::vector<double> RefractiveProfile::breakpoints() const {
    std::vector<double> out;
    out.push_back(0.0);
    for (const Segment& s : segments_) out.push_back(s.end);
    return out;
}

std::vector<double> RefractiveProfile::interior_breakpoints() const {
    std::vector<double> out;
    for (std::size_t l = 0; l + 1 < segments_.size(); ++l) out.push_back(segments_[l].end);
    return out;
}

bool RefractiveProfile::piecewise_constant() const {
    for (const Segment& s : segments_)
        if (!s.law.is_constant()) return false;
    return true;
}

ProfileMetrics profile_metrics(const RefractiveProfile& p, double eps) {
    ProfileMetrics m;
    m.delta_hats = p.delta_hats();
    m.delta_L = p.delta_total();
    m.epsilon0 = p.epsilon0();
    m.alpha = p.alpha_point(eps);
    return m;
}

SignPartition m_sign_partition(const RefractiveProfile& p1, const RefractiveProfile& p2, int grid) {
    if (grid < 2) throw std::invalid_argument("m_sign_partition: grid must be >= 2");
    const auto diff = [&](double r) { return p1.eval(r) - p2.eval(r); };
    const double zero_tol = 1e-13;
    const auto sgn = [&](double v) { return v > zero_tol ? 1 : (v < -zero_tol ? -1 : 0); };

    // sample on the grid plus both profiles' breakpoints (jumps live there)
    std::vector<double> xs;
    for (int i = 0; i <= grid; ++i) xs.push_back(static_cast<double>(i) / grid);
    for (double b : p1.interior_breakpoints()) xs.push_back(b);
    for (double b : p2.interior_breakpoints()) xs.push_back(b);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    SignPartition out;
    out.points.push_back(0.0);
    std::vector<int> signs;
    int prev = sgn(diff(xs[0]));
    std::size_t prev_idx = 0;
    int changes = 0;
    for (std::size_t i = 1; i < xs.size(); ++i) {
        const int cur = sgn(diff(xs[i]));
        // an isolated zero sample between opposite signs is the crossing
        // itself, not a zero interval
        if (cur == 0 && i + 1 < xs.size()) continue;
        if (cur != prev) {
            ++changes;
            double lo = xs[prev_idx], hi = xs[i];
            for (int it = 0; it < 60 && hi - lo > 1e-10; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (sgn(diff(mid)) == prev)
                    lo = mid;
                else
                    hi = mid;
            }
            const double cut = 0.5 * (lo + hi);
            if (cut > out.points.back() + 1e-12 && cut < 1.0 - 1e-12) {
                out.points.push_back(cut);
                signs.push_back(prev);
            }
            prev = cur;
        }
        prev_idx = i;
    }
    out.points.push_back(1.0);
    signs.push_back(prev);
    out.signs = signs;
    out.resolvable = changes <= grid / 2;
    return out;
}

const char* regularity_name(Regularity r) {
    switch (r) {
        case Regularity::PiecewiseC2: return "piecewise_c2";
        case Regularity::C2: return "c2";
        case Regularity::C11: return "c11";
        case Regularity::PiecewiseConstant: return "piecewise_constant";
    }
    return "piecewise_c2";
}

Regularity regularity_from_name(const std::string& s) {
    if (s == "piecewise_c2") return Regularity::PiecewiseC2;
    if (s == "c2") return Regularity::C2;
    if (s == "c11") return Regularity::C11;
    if (s == "piecewise_constant") return Regularity::PiecewiseConstant;
    throw std::invalid_argument("unknown regularity: " + s);
}

}  // namespace tev
