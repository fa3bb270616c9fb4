#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace tev {

enum class LawKind { Constant, Affine, Polynomial };

// Within-segment law n_l(r). Coefficients are ascending powers of r
// (global coordinate), so Affine{a,b} means a + b*r.
struct SegmentLaw {
    LawKind kind = LawKind::Constant;
    std::vector<double> coeffs{1.0};

    double value(double r) const;
    double deriv(double r) const;
    double deriv2(double r) const;
    bool is_constant() const { return kind == LawKind::Constant; }
};

struct Segment {
    double start = 0.0;
    double end = 1.0;
    SegmentLaw law;
};

enum class Regularity { PiecewiseC2, C2, C11, PiecewiseConstant };

struct Bounds {
    double n_star = 0.0;        // lower bound on n
    double n_star_upper = 0.0;  // upper bound on n
};

// Layered radial refractive index on [0,1]. Segments are half-open
// [R_{l-1}, R_l); the last one is closed at r = 1. Immutable after
// construction; all member functions are const and thread-safe.
class RefractiveProfile {
  public:
    RefractiveProfile(std::vector<Segment> segments, Regularity reg, Bounds bounds);

    // n, n' or n'' at r; interior breakpoints take the right limit.
    double eval(double r, int order = 0) const;

    // integral of sqrt(n) over [a,b], split at interior breakpoints.
    double delta_integral(double a, double b) const;

    // per-layer optical thicknesses and their total
    std::vector<double> delta_hats() const;
    double delta_total() const { return delta_total_; }

    // largest |n_{l+1}(R_l) - n_l(R_l)| over interior breakpoints
    double epsilon0() const;

    // radius alpha with integral_alpha^1 sqrt(n) = (delta_L - 1 + eps)/2,
    // or 1 when delta_L < 1.
    double alpha_point(double eps) const;

    std::size_t layer_count() const { return segments_.size(); }
    const std::vector<Segment>& segments() const { return segments_; }
    const Segment& segment(std::size_t l) const { return segments_[l]; }
    std::vector<double> breakpoints() const;  // R_0..R_L
    std::vector<double> interior_breakpoints() const;

    Regularity regularity() const { return regularity_; }
    Bounds bounds() const { return bounds_; }
    bool piecewise_constant() const;

    // index l of the segment owning r (right-limit convention)
    std::size_t segment_index(double r) const;

    // left-limit value at a breakpoint (owning segment's closure)
    double left_value(std::size_t segment_idx, int order = 0) const;

  private:
    std::vector<Segment> segments_;
    Regularity regularity_;
    Bounds bounds_;
    double delta_total_ = 0.0;
};

struct ProfileMetrics {
    std::vector<double> delta_hats;
    double delta_L = 0.0;
    double epsilon0 = 0.0;
    double alpha = 1.0;
};
ProfileMetrics profile_metrics(const RefractiveProfile& p, double eps);

// Sign pattern of p1 - p2 on [0,1]: partition 0 = x_0 < ... < x_S = 1 with a
// constant sign (-1, 0, +1) on each open interval. Sign changes located by
// grid sampling plus bisection to 1e-10. When more changes appear than
// grid/2 the result is flagged unresolved.
struct SignPartition {
    std::vector<double> points;
    std::vector<int> signs;
    bool resolvable = true;
};
SignPartition m_sign_partition(const RefractiveProfile& p1, const RefractiveProfile& p2,
                               int grid);

const char* regularity_name(Regularity r);
Regularity regularity_from_name(const std::string& s);

}  // namespace tev
