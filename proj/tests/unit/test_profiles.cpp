#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "tev/mollifier.hpp"
#include "tev/profile.hpp"
#include "tev/profile_io.hpp"
#include "tev/quadrature.hpp"

using namespace tev;
using namespace tev::testing;

TEST_CASE("eval takes the right limit at breakpoints") {
    const RefractiveProfile p = counterexample_first();
    CHECK(p.eval(0.25) == doctest::Approx(4.0));
    CHECK(p.eval(0.5) == doctest::Approx(16.0));   // right limit
    CHECK(p.eval(0.75) == doctest::Approx(16.0));
    CHECK(p.eval(1.0) == doctest::Approx(16.0));
    CHECK(unit_profile().eval(0.7) == doctest::Approx(1.0));

    std::vector<Segment> segs{{0.0, 1.0, {LawKind::Affine, {2.0, 1.0}}}};
    const RefractiveProfile aff(std::move(segs), Regularity::C2, {1.9, 3.1});
    CHECK(aff.eval(0.5, 1) == doctest::Approx(1.0));
    CHECK(aff.eval(0.5, 2) == doctest::Approx(0.0));
    CHECK_THROWS_AS(aff.eval(1.5), std::domain_error);
    CHECK_THROWS_AS(aff.eval(0.5, 3), std::invalid_argument);
}

TEST_CASE("delta integrals match antiderivative oracles") {
    // exact antiderivative per constant piece: 2 * 1/2 + 4 * 1/2 = 3
    CHECK(counterexample_first().delta_integral(0, 1) == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(unit_profile().delta_integral(0, 1) == doctest::Approx(1.0).epsilon(1e-13));
    // integral of sqrt(2+r): (2/3)((3)^{3/2} - 2^{3/2})
    const double expect = 2.0 / 3.0 * (std::pow(3.0, 1.5) - std::pow(2.0, 1.5));
    CHECK(affine_profile().delta_integral(0, 1) == doctest::Approx(expect).epsilon(1e-12));
    // integral of (1+r)^2 = 7/3
    CHECK(quartic_profile().delta_integral(0, 1) == doctest::Approx(7.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("delta integral additivity") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const RefractiveProfile p = two_piece_smooth();
    for (int i = 0; i < 40; ++i) {
        double a = u(rng), b = u(rng), c = u(rng);
        if (a > b) std::swap(a, b);
        if (b > c) std::swap(b, c);
        if (a > b) std::swap(a, b);
        CHECK(p.delta_integral(a, c) ==
              doctest::Approx(p.delta_integral(a, b) + p.delta_integral(b, c)).epsilon(1e-12));
    }
}

TEST_CASE("epsilon0 is the largest interface jump") {
    CHECK(counterexample_first().epsilon0() == doctest::Approx(12.0));
    CHECK(affine_profile().epsilon0() == doctest::Approx(0.0));
    std::vector<Segment> segs{{0.0, 0.3, {LawKind::Constant, {1.0}}},
                              {0.3, 0.6, {LawKind::Constant, {1.1}}},
                              {0.6, 1.0, {LawKind::Constant, {1.05}}}};
    const RefractiveProfile p(std::move(segs), Regularity::PiecewiseConstant, {0.9, 1.2});
    CHECK(p.epsilon0() == doctest::Approx(0.1));
}

TEST_CASE("alpha point") {
    // tail mass (3 - 1 + 0.5)/2 = 1.25 over sqrt(16) = 4: alpha = 1 - 1.25/4
    CHECK(counterexample_first().alpha_point(0.5) == doctest::Approx(0.6875).epsilon(1e-10));
    CHECK(constant_profile(0.25).alpha_point(0.3) == doctest::Approx(1.0));  // delta_L < 1
    // n == 1: integral_alpha^1 = eps/2
    CHECK(unit_profile().alpha_point(0.4) == doctest::Approx(1.0 - 0.2).epsilon(1e-10));
    CHECK_THROWS_AS(counterexample_first().alpha_point(5.0), std::domain_error);

    // strictly decreasing in eps when delta_L >= 1
    const RefractiveProfile p = counterexample_first();
    double prev = 2.0;
    for (double eps : {0.1, 0.3, 0.6, 1.0, 1.5}) {
        const double a = p.alpha_point(eps);
        CHECK(a < prev);
        prev = a;
    }
}

TEST_CASE("declared bounds hold on random samples") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const RefractiveProfile& p :
         {counterexample_first(), affine_profile(), quartic_profile(), two_piece_smooth()}) {
        for (int i = 0; i < 10000; ++i) {
            const double v = p.eval(u(rng));
            CHECK(v >= p.bounds().n_star);
            CHECK(v <= p.bounds().n_star_upper);
        }
    }
}

TEST_CASE("sign partition of profile differences") {
    // p1 - p2 = r - 1/2 via laws 2+r and 2.5
    std::vector<Segment> sa{{0.0, 1.0, {LawKind::Affine, {2.0, 1.0}}}};
    const RefractiveProfile pa(std::move(sa), Regularity::C2, {1.9, 3.1});
    const RefractiveProfile pb = constant_profile(2.5);
    const SignPartition part = m_sign_partition(pa, pb, 64);
    REQUIRE(part.points.size() == 3);
    CHECK(part.points[1] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(part.signs[0] == -1);
    CHECK(part.signs[1] == 1);
    CHECK(part.resolvable);

    const SignPartition same = m_sign_partition(pa, pa, 32);
    REQUIRE(same.signs.size() == 1);
    CHECK(same.signs[0] == 0);

    const SignPartition cx = m_sign_partition(counterexample_first(), counterexample_second(), 64);
    REQUIRE(cx.points.size() == 3);
    CHECK(cx.points[1] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(cx.signs[0] == -1);
    CHECK(cx.signs[1] == 1);
}

TEST_CASE("profile JSON round trip and validation") {
    const RefractiveProfile p = two_piece_smooth();
    const RefractiveProfile q = parse_profile(profile_to_json(p));
    CHECK(q.layer_count() == p.layer_count());
    CHECK(q.delta_total() == doctest::Approx(p.delta_total()).epsilon(1e-14));

    CHECK_THROWS(parse_profile(R"({"regularity":"c2","bounds":{"n_star":1,"n_star_upper":2},
        "segments":[{"start":0,"end":0.4,"law":{"kind":"constant","coefficients":[1.5]}},
                    {"start":0.6,"end":1,"law":{"kind":"constant","coefficients":[1.5]}}]})"));
    CHECK_THROWS(parse_profile(R"({"regularity":"piecewise_constant",
        "bounds":{"n_star":1,"n_star_upper":2},
        "segments":[{"start":0,"end":0.6,"law":{"kind":"constant","coefficients":[1.5]}},
                    {"start":0.4,"end":1,"law":{"kind":"constant","coefficients":[1.5]}}]})"));
    CHECK_THROWS(parse_profile(R"({"regularity":"piecewise_constant",
        "bounds":{"n_star":1,"n_star_upper":2},
        "segments":[{"start":0,"end":1,"law":{"kind":"constant","coefficients":[-1.0]}}]})"));
}

TEST_CASE("mollifier kernel mass and exactness cases") {
    const double mass = adaptive_simpson([](double x) { return bump_kernel(x); }, -1.0, 1.0, 1e-13);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));

    // f(x) = x^2: odd-kernel symmetry gives g_j(x) = 2x away from the edges
    for (int j : {4, 16}) {
        const Mollified m([](double x) { return x * x; }, [](double x) { return 2.0 * x; }, j);
        for (double x = 1.0 / j; x <= 1.0 - 1.0 / j + 1e-12; x += 0.1)
            CHECK(m.g(x) == doctest::Approx(2.0 * x).epsilon(1e-10));
    }

    // constant f is a fixed point
    const Mollified mc([](double) { return 3.25; }, [](double) { return 0.0; }, 8);
    for (double x : {0.0, 0.3, 0.9, 1.0}) CHECK(mc.fj(x) == doctest::Approx(3.25).epsilon(1e-12));
}

TEST_CASE("mollifier keeps the derivative Lipschitz bound") {
    // f' = 3|x - 1/2| has Lipschitz constant 3
    const Mollified m([](double x) { return 1.5 * (x - 0.5) * std::abs(x - 0.5) + 0.375; },
                      [](double x) { return 3.0 * std::abs(x - 0.5); }, 8);
    double sup = 0.0;
    for (int i = 1; i < 200; ++i) {
        const double x = i / 200.0, h = 1e-5;
        sup = std::max(sup, std::abs(m.g(x + h) - m.g(x - h)) / (2.0 * h));
    }
    CHECK(sup <= 3.0 + 1e-6);
}

TEST_CASE("mollifier sup error decreases over j") {
    const auto f = [](double x) { return (x - 0.5) * std::abs(x - 0.5) / 2.0 + 0.125; };
    const auto fp = [](double x) { return std::abs(x - 0.5); };
    double prev = 1e300;
    for (int j : {4, 8, 16, 32}) {
        const Mollified m(f, fp, j);
        double sup = 0.0;
        for (int i = 0; i <= 100; ++i) {
            const double x = i / 100.0;
            sup = std::max(sup, std::abs(m.fj(x) - f(x)));
        }
        CHECK(sup <= prev + 1e-12);
        prev = sup;
    }
}
