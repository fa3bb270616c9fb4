#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "tev/charfn.hpp"

using namespace tev;
using namespace tev::testing;

TEST_CASE("unit medium: d vanishes identically, bitwise") {
    const RefractiveProfile p = unit_profile();
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const Cplx k{20.0 * u(rng), 18.0 * u(rng)};
        if (std::abs(k) < 1e-3) continue;
        CHECK(std::abs(d_of_k(p, k).d) == 0.0);
    }
}

TEST_CASE("determinant is rebuildable from its parts") {
    const RefractiveProfile p = counterexample_first();
    for (const Cplx k : {Cplx{0.7, 0.0}, Cplx{3.0, 1.2}}) {
        const CharacteristicValue v = d_of_k(p, k);
        const Cplx rebuilt = -v.y1 * std::cos(k) + v.yp1 * std::sin(k) / k;
        CHECK(std::abs(rebuilt - v.d) < 1e-12 * std::max(1.0, std::abs(v.d)));
    }
    CHECK(d_of_k(p, 1e-12).degenerate);
}

TEST_CASE("two-layer swap: factor-3 identity and the factored closed form") {
    const RefractiveProfile p1 = counterexample_first();
    const RefractiveProfile p2 = counterexample_second();
    for (int i = 1; i <= 200; ++i) {
        const double k = 0.1 + (50.0 - 0.1) * i / 200.0;
        const Cplx d1 = d_of_k(p1, k).d;
        const Cplx d2 = d_of_k(p2, k).d;
        CHECK(std::abs(d1 - 3.0 * d2) < 1e-12);
        // the exact determinant: (9/16k)(sin 4k - 2 sin 2k) = -(9/2k) sin^3 k cos k
        const double closed = 9.0 / (16.0 * k) * (std::sin(4.0 * k) - 2.0 * std::sin(2.0 * k));
        CHECK(std::abs(d1 - closed) < 1e-12);
    }
}

TEST_CASE("explicit two-layer formula matches the transfer-matrix path") {
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> nval(0.5, 9.0), cut(0.15, 0.85), kk(0.3, 30.0);
    for (int i = 0; i < 50; ++i) {
        const double n1 = nval(rng), n2 = nval(rng), R1 = cut(rng);
        std::vector<Segment> segs{{0.0, R1, {LawKind::Constant, {n1}}},
                                  {R1, 1.0, {LawKind::Constant, {n2}}}};
        const RefractiveProfile p(std::move(segs), Regularity::PiecewiseConstant,
                                  {std::min(n1, n2), std::max(n1, n2)});
        const double k = kk(rng);
        CHECK(std::abs(d_two_layer_closed(n1, n2, R1, k) - d_of_k(p, k).d) < 1e-12);
    }
    // equal layers reduce to the one-layer determinant
    const RefractiveProfile c4 = constant_profile(4.0);
    for (const double k : {0.9, 7.7}) {
        CHECK(std::abs(d_two_layer_closed(4.0, 4.0, 0.3, k) - d_of_k(c4, k).d) < 1e-13);
        // cos(2k) sin(k)/k - cos(k) sin(2k)/(2k)
        const double closed = std::cos(2 * k) * std::sin(k) / k - std::cos(k) * std::sin(2 * k) / (2 * k);
        CHECK(d_of_k(c4, k).d.real() == doctest::Approx(closed).epsilon(1e-13));
    }
    CHECK(std::abs(d_two_layer_closed(16.0, 4.0, 0.5, 1.3) -
                   d_of_k(counterexample_second(), 1.3).d) < 1e-13);
}

TEST_CASE("dominant model frequencies and weights") {
    // constant n = 4: frequencies {3, -1}, model (1/2k)(sin 3k / 2 - 3 sin k / 2)
    const DominantTermModel m4 = dominant_coeffs(constant_profile(4.0));
    REQUIRE(m4.betas.size() == 2);
    CHECK(m4.betas[0] == doctest::Approx(3.0));
    CHECK(m4.betas[1] == doctest::Approx(-1.0));
    CHECK(m4.weights[0] == doctest::Approx(0.5));
    CHECK(m4.weights[1] == doctest::Approx(1.5));
    for (const double k : {0.7, 2.9}) {
        const Cplx v = dominant_eval(m4, k);
        CHECK(v.real() ==
              doctest::Approx((0.5 * std::sin(3 * k) - 1.5 * std::sin(k)) / (2 * k)).epsilon(1e-14));
    }

    // the swap pair: frequencies {4, 2, 0, -2}; model reproduces the closed form
    const DominantTermModel m1 = dominant_coeffs(counterexample_first());
    REQUIRE(m1.betas.size() == 4);
    CHECK(m1.betas[0] == doctest::Approx(4.0));
    CHECK(m1.betas[1] == doctest::Approx(2.0));
    CHECK(m1.betas[2] == doctest::Approx(0.0));
    CHECK(m1.betas[3] == doctest::Approx(-2.0));
    for (const double k : {0.9, 11.0}) {
        const double closed = 9.0 / (16.0 * k) * (std::sin(4.0 * k) - 2.0 * std::sin(2.0 * k));
        CHECK(dominant_eval(m1, k).real() == doctest::Approx(closed).epsilon(1e-13));
    }

    // frequency endpoints are 1 +- delta_L
    for (const RefractiveProfile& p : {two_piece_smooth(), affine_profile()}) {
        const DominantTermModel m = dominant_coeffs(p);
        CHECK(m.betas.front() == doctest::Approx(1.0 + p.delta_total()).epsilon(1e-12));
        CHECK(m.betas.back() == doctest::Approx(1.0 - p.delta_total()).epsilon(1e-12));
    }

    // n = 1: the leading weight vanishes with d
    const DominantTermModel mu = dominant_coeffs(unit_profile());
    CHECK(std::abs(mu.weights[0]) < 1e-15);
}

TEST_CASE("single smooth layer reduces to the two-term endpoint model") {
    const RefractiveProfile p = affine_profile();
    const DominantTermModel m = dominant_coeffs(p);
    const double n0 = 2.0, n1 = 3.0;
    const double a1 = std::pow(n0, -0.25) * (std::pow(n1, 0.25) - std::pow(n1, -0.25));
    const double a2 = std::pow(n0, -0.25) * (std::pow(n1, 0.25) + std::pow(n1, -0.25));
    CHECK(m.weights[0] == doctest::Approx(a1).epsilon(1e-13));
    CHECK(m.weights[1] == doctest::Approx(a2).epsilon(1e-13));
}

TEST_CASE("piecewise-constant profiles: the model is exact") {
    std::mt19937 rng(21);
    for (int trial = 0; trial < 6; ++trial) {
        const RefractiveProfile p = random_piecewise_constant(rng);
        const DominantTermModel m = dominant_coeffs(p);
        std::uniform_real_distribution<double> kk(0.05, 50.0);
        for (int i = 0; i < 50; ++i) {
            const double k = kk(rng);
            CHECK(std::abs(d_of_k(p, k).d - dominant_eval(m, k)) < 1e-10);
        }
    }
}

TEST_CASE("y-level dominant model is exact for piecewise-constant media") {
    std::mt19937 rng(23);
    const RefractiveProfile p = counterexample_first();
    const DominantTermModel m = dominant_coeffs(p);
    std::uniform_real_distribution<double> kk(0.3, 40.0);
    for (int i = 0; i < 40; ++i) {
        const double k = kk(rng);
        const StateVector s = solve_ivp(p, k);
        const auto [dy, dyp] = dominant_y_eval(m, k);
        CHECK(std::abs(s.y - dy) < 1e-11);
        CHECK(std::abs(s.yp - dyp) < 1e-11);
    }
}

TEST_CASE("evenness, realness, conjugation of d") {
    std::mt19937 rng(6);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (const RefractiveProfile& p : {counterexample_first(), affine_profile()}) {
        for (int i = 0; i < 20; ++i) {
            const Cplx k{10.0 * u(rng), 4.0 * u(rng)};
            if (std::abs(k) < 0.2) continue;
            const Cplx d = d_of_k(p, k).d;
            CHECK(std::abs(d_of_k(p, -k).d - d) <= 1e-10 * std::max(1.0, std::abs(d)));
            CHECK(std::abs(std::conj(d_of_k(p, std::conj(k)).d) - d) <=
                  1e-10 * std::max(1.0, std::abs(d)));
        }
        for (int i = 0; i < 10; ++i) {
            const double k = 0.4 + 12.0 * std::abs(u(rng));
            CHECK(std::abs(d_of_k(p, k).d.imag()) < 1e-12);
        }
    }
}

TEST_CASE("remainder decay for the smooth fixture") {
    const RefractiveProfile p = affine_profile();
    const DominantTermModel m = dominant_coeffs(p);
    const auto cfit = [&](double lo, double hi) {
        double worst = 0.0;
        for (int i = 0; i < 40; ++i) {
            const double k = lo + (hi - lo) * (i + 0.5) / 40.0;
            worst = std::max(worst, k * k * std::abs(d_of_k(p, k).d - dominant_eval(m, k)));
        }
        return worst;
    };
    const double c_lo = cfit(50.0, 100.0), c_hi = cfit(100.0, 200.0);
    CHECK(std::max(c_lo, c_hi) / std::min(c_lo, c_hi) < 4.0);
}

TEST_CASE("lagrange identity residual") {
    const RefractiveProfile p1 = counterexample_first();
    const RefractiveProfile p2 = counterexample_second();
    CHECK(lagrange_residual(p1, p1, Cplx{2.0, 0.3}, 1.0) < 1e-12);
    CHECK(lagrange_residual(p1, p2, Cplx{M_PI / 2.0, 0.0}, 1.0) < 1e-8);

    std::mt19937 rng(8);
    std::uniform_real_distribution<double> re(0.5, 10.0), im(0.0, 1.0);
    const RefractiveProfile ps = affine_profile();
    const RefractiveProfile pq = quartic_profile();
    for (int i = 0; i < 30; ++i) {
        const Cplx k{re(rng), im(rng)};
        CHECK(lagrange_residual(ps, pq, k, 1.0) < 1e-7);
    }
    // upper < 1 demands agreement beyond upper
    CHECK_THROWS_AS(lagrange_residual(p1, p2, Cplx{1.0, 0.0}, 0.5), std::domain_error);
    CHECK(lagrange_residual(p1, p1, Cplx{1.0, 0.0}, 0.5) < 1e-12);
}

TEST_CASE("scaled evaluation extends the direct one") {
    const RefractiveProfile p = counterexample_first();
    const Cplx k{3.0, 12.0};
    const Cplx direct = d_of_k(p, k).d;
    const ScaledValue scaled = d_of_k_scaled(p, k);
    CHECK(std::abs(scaled.mantissa * std::exp(scaled.log_scale) - direct) <=
          1e-10 * std::abs(direct));
    // far beyond the ~700 log-unit ceiling
    CHECK_THROWS_AS(d_of_k(p, Cplx{1.0, 400.0}), std::domain_error);
    const ScaledValue big = d_of_k_scaled(p, Cplx{1.0, 400.0});
    CHECK(std::isfinite(big.log_abs()));
    CHECK(big.log_abs() > 1000.0);
}

TEST_CASE("sweep csv emission") {
    std::ostringstream out;
    write_sweep_csv(out, counterexample_first(), {Cplx{1.0, 0.0}, Cplx{2.0, 0.5}});
    const std::string text = out.str();
    CHECK(text.rfind("k_re,k_im,d_re,d_im,Dd_re,Dd_im\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 3);
}
