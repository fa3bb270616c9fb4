#pragma once

#include <random>
#include <vector>

#include "tev/profile.hpp"

namespace tev::testing {

inline RefractiveProfile constant_profile(double value) {
    std::vector<Segment> segs{{0.0, 1.0, {LawKind::Constant, {value}}}};
    return RefractiveProfile(std::move(segs), Regularity::PiecewiseConstant,
                             {value * 0.99, value * 1.01});
}

inline RefractiveProfile unit_profile() { return constant_profile(1.0); }

// 4 | 16 split at 1/2
inline RefractiveProfile counterexample_first() {
    std::vector<Segment> segs{{0.0, 0.5, {LawKind::Constant, {4.0}}},
                              {0.5, 1.0, {LawKind::Constant, {16.0}}}};
    return RefractiveProfile(std::move(segs), Regularity::PiecewiseConstant, {4.0, 16.0});
}

// 16 | 4 split at 1/2
inline RefractiveProfile counterexample_second() {
    std::vector<Segment> segs{{0.0, 0.5, {LawKind::Constant, {16.0}}},
                              {0.5, 1.0, {LawKind::Constant, {4.0}}}};
    return RefractiveProfile(std::move(segs), Regularity::PiecewiseConstant, {4.0, 16.0});
}

// n(r) = 2 + r
inline RefractiveProfile affine_profile() {
    std::vector<Segment> segs{{0.0, 1.0, {LawKind::Affine, {2.0, 1.0}}}};
    return RefractiveProfile(std::move(segs), Regularity::C2, {1.999, 3.001});
}

// n(r) = (1 + r)^4
inline RefractiveProfile quartic_profile() {
    std::vector<Segment> segs{{0.0, 1.0, {LawKind::Polynomial, {1.0, 4.0, 6.0, 4.0, 1.0}}}};
    return RefractiveProfile(std::move(segs), Regularity::C2, {0.999, 16.001});
}

// two C2 laws glued with a jump at 0.4: 2 + r | 1.5 + r^2
inline RefractiveProfile two_piece_smooth() {
    std::vector<Segment> segs{{0.0, 0.4, {LawKind::Affine, {2.0, 1.0}}},
                              {0.4, 1.0, {LawKind::Polynomial, {1.5, 0.0, 1.0}}}};
    return RefractiveProfile(std::move(segs), Regularity::PiecewiseC2, {1.4, 3.1});
}

// random piecewise-constant profile, 1..4 layers, values in [0.5, 9]
inline RefractiveProfile random_piecewise_constant(std::mt19937& rng) {
    std::uniform_int_distribution<int> layers(1, 4);
    std::uniform_real_distribution<double> val(0.5, 9.0);
    std::uniform_real_distribution<double> cut(0.0, 1.0);
    const int L = layers(rng);
    std::vector<double> cuts{0.0, 1.0};
    while (static_cast<int>(cuts.size()) < L + 1) {
        const double c = cut(rng);
        bool ok = true;
        for (double existing : cuts)
            if (std::abs(existing - c) < 0.08) ok = false;
        if (ok) cuts.push_back(c);
    }
    std::sort(cuts.begin(), cuts.end());
    std::vector<Segment> segs;
    double lo = 1e300, hi = 0.0;
    for (int l = 0; l < L; ++l) {
        const double v = val(rng);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        segs.push_back({cuts[l], cuts[l + 1], {LawKind::Constant, {v}}});
    }
    return RefractiveProfile(std::move(segs), Regularity::PiecewiseConstant, {lo, hi});
}

}  // namespace tev::testing
