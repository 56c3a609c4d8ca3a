#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "polcor/rng.hpp"
#include "polcor/semiclassical.hpp"

using namespace polcor;

namespace {

const BlochVector kZ{0.0, 0.0, 1.0};
const BlochVector kX{1.0, 0.0, 0.0};
const DetectorModel kIdeal{1.0};

BlochVector xz_direction(double alpha) {
    return {std::sin(alpha), 0.0, std::cos(alpha)};
}

BeamPair anti_pair(double s) {
    return {{0.0, 0.0, s}, {0.0, 0.0, -s}};
}

}  // namespace

TEST_CASE("series helpers") {
    CHECK(series::sinhc(0.0) == 1.0);
    CHECK(series::sinhc(0.5) == doctest::Approx(1.0421906109874947).epsilon(1e-15));
    CHECK(series::sinhc(1.0) == doctest::Approx(std::sinh(1.0)).epsilon(1e-15));
    // the series branch must join the direct branch smoothly
    CHECK(series::sinhc(1e-6) == doctest::Approx(1.0 + 1e-12 / 6.0).epsilon(1e-15));

    CHECK(series::haar_no_click(1.0) == doctest::Approx(0.6321205588285577).epsilon(1e-15));
    CHECK(series::haar_no_click(1e-9) == doctest::Approx(1.0 - 0.5e-9).epsilon(1e-15));
    CHECK(series::haar_click(1.0) ==
          doctest::Approx(1.0 - 0.6321205588285577).epsilon(1e-14));
    CHECK(series::haar_click(1e-9) == doctest::Approx(0.5e-9).epsilon(1e-9));

    CHECK(series::cosh_minus_sinhc(0.0) == 0.0);
    CHECK(series::cosh_minus_sinhc(0.5) ==
          doctest::Approx(std::cosh(0.5) - 1.0421906109874947).epsilon(1e-13));
    // x^2/3 leading term
    CHECK(series::cosh_minus_sinhc(1e-4) == doctest::Approx(1e-8 / 3.0).epsilon(1e-8));
}

TEST_CASE("polarizer intensity") {
    const BlochVector s{0.0, 0.0, 2.0};
    CHECK(polarizer_intensity(s, kZ) == doctest::Approx(2.0));
    CHECK(polarizer_intensity(s, {0.0, 0.0, -1.0}) == doctest::Approx(0.0));
    CHECK(polarizer_intensity(s, kX) == doctest::Approx(1.0));
    CHECK_THROWS_AS((void)polarizer_intensity(s, BlochVector{0.0, 0.0, 0.5}), std::domain_error);
}

TEST_CASE("closed anticorrelated coincidence against frozen values") {
    CHECK(coincidence_closed_anti(1.0, 0.0) ==
          doctest::Approx(0.10363832351432696).epsilon(1e-14));
    CHECK(coincidence_closed_anti(1.0, std::numbers::pi / 2) ==
          doctest::Approx(0.13507054675846447).epsilon(1e-14));
    CHECK(coincidence_closed_anti(1.0, std::numbers::pi) ==
          doctest::Approx(0.16809124072457830).epsilon(1e-14));
    // aligned analyzers on anticorrelated beams: also expressible as 3/e - 1
    CHECK(coincidence_closed_anti(1.0, 0.0) ==
          doctest::Approx(3.0 * std::exp(-1.0) - 1.0).epsilon(1e-14));
}

TEST_CASE("closed form equals its textbook expression") {
    // written out with the raw standard-library pieces, no series guards
    for (double s : {0.3, 1.0, 4.0, 10.0}) {
        for (int k = 1; k < 12; ++k) {
            const double alpha = std::numbers::pi * k / 12.0;
            const double x = s * std::sin(alpha / 2.0);
            const double direct =
                1.0 - 2.0 * (1.0 - std::exp(-s)) / s + std::exp(-s) * std::sinh(x) / x;
            CHECK(coincidence_closed_anti(s, alpha) ==
                  doctest::Approx(direct).epsilon(1e-13));
        }
    }
}

TEST_CASE("parallel pairs mirror anticorrelated pairs") {
    for (double s : {0.01, 0.5, 1.0, 4.0, 10.0}) {
        for (int k = 0; k <= 24; ++k) {
            const double alpha = std::numbers::pi * k / 24.0;
            CHECK(coincidence_closed_parallel(s, alpha) ==
                  doctest::Approx(coincidence_closed_anti(s, std::numbers::pi - alpha))
                      .epsilon(1e-12));
        }
    }
}

TEST_CASE("closed forms stay inside [0,1]") {
    RandomStream rng(11);
    for (int i = 0; i < 2000; ++i) {
        const double s = std::exp(rng.uniform(std::log(1e-4), std::log(20.0)));
        const double alpha = rng.uniform(0.0, std::numbers::pi);
        for (double p : {coincidence_closed_anti(s, alpha),
                         coincidence_closed_parallel(s, alpha)}) {
            CHECK(p >= -1e-12);
            CHECK(p <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("quadrature reproduces the closed forms") {
    for (double s : {0.1, 1.0, 10.0}) {
        for (int k = 0; k <= 6; ++k) {
            const double alpha = std::numbers::pi * k / 6.0;
            const double quad = omega_averaged_coincidence_quadrature(
                anti_pair(s), kZ, xz_direction(alpha), kIdeal, 32);
            CHECK(quad ==
                  doctest::Approx(coincidence_closed_anti(s, alpha)).epsilon(1e-10));
        }
    }
    // tiny s: the closed form itself carries ~1e-11 cancellation noise
    const double quad = omega_averaged_coincidence_quadrature(
        anti_pair(0.0025), kZ, xz_direction(1.0), kIdeal, 24);
    CHECK(quad ==
          doctest::Approx(coincidence_closed_anti(0.0025, 1.0)).epsilon(1e-8));
}

TEST_CASE("monte carlo reproduces the closed forms within 3 sigma") {
    RandomStream rng(20240817);
    for (double s : {1.0, 10.0}) {
        for (int k = 0; k <= 4; ++k) {
            const double alpha = std::numbers::pi * k / 4.0;
            const McEstimate mc = omega_averaged_coincidence_mc(
                anti_pair(s), kZ, xz_direction(alpha), kIdeal, 200000, rng);
            CHECK(mc.std_error > 0.0);
            const double diff = std::abs(mc.value - coincidence_closed_anti(s, alpha));
            CHECK(diff <= 3.0 * mc.std_error);
        }
    }
}

TEST_CASE("haar kernel estimates against frozen quadrature values") {
    RandomStream rng(5150);
    const struct {
        double s;
        double alpha;
        double expected;
    } cases[] = {
        {1.0, std::numbers::pi / 2, 1.085441641273},
        {10.0, std::numbers::pi / 2, 83.25501832609},
        {10.0, std::numbers::pi, 1101.323287470},
    };
    for (const auto& c : cases) {
        const McEstimate u = u_kernel_mc(anti_pair(c.s), kZ, xz_direction(c.alpha),
                                         1'000'000, rng);
        CHECK(std::abs(u.value - c.expected) <= 3.0 * u.std_error);
    }
}

TEST_CASE("identical seeds give identical results for any thread count") {
    const BeamPair pair{{0.3, -0.2, 0.9}, {-0.5, 0.1, -1.2}};
    const BlochVector u_a = normalized({1.0, 2.0, -1.0});
    const BlochVector u_b = normalized({-2.0, 0.5, 0.3});

    RandomStream r1(42), r4(42);
    const McEstimate a = omega_averaged_coincidence_mc(pair, u_a, u_b, kIdeal, 100000, r1, 1);
    const McEstimate b = omega_averaged_coincidence_mc(pair, u_a, u_b, kIdeal, 100000, r4, 4);
    CHECK(a.value == b.value);
    CHECK(a.std_error == b.std_error);

    RandomStream k1(43), k3(43);
    const McEstimate c = u_kernel_mc(pair, u_a, u_b, 100000, k1, 1);
    const McEstimate d = u_kernel_mc(pair, u_a, u_b, 100000, k3, 3);
    CHECK(c.value == d.value);
    CHECK(c.std_error == d.std_error);
}

TEST_CASE("omega average is rotation invariant") {
    RandomStream rng(314);
    for (int i = 0; i < 3; ++i) {
        const BeamPair pair{rng.uniform(0.1, 5.0) * haar_rotation(rng).apply(kZ),
                            rng.uniform(0.1, 5.0) * haar_rotation(rng).apply(kZ)};
        const BlochVector u_a = haar_rotation(rng).apply(kZ);
        const BlochVector u_b = haar_rotation(rng).apply(kZ);
        const Rotation3 r = haar_rotation(rng);
        const double base =
            omega_averaged_coincidence_quadrature(pair, u_a, u_b, kIdeal, 28);
        const double rotated = omega_averaged_coincidence_quadrature(
            {r.apply(pair.s_a), r.apply(pair.s_b)}, r.apply(u_a), r.apply(u_b), kIdeal, 28);
        CHECK(std::abs(rotated - base) <= 1e-9);
    }
}

TEST_CASE("detector efficiency rescales the beams") {
    const BeamPair pair{{0.4, 0.1, 0.8}, {-0.3, 0.2, -0.9}};
    const BeamPair half{0.5 * pair.s_a, 0.5 * pair.s_b};
    const BlochVector u_a = normalized({1.0, 1.0, 0.0});
    const BlochVector u_b = normalized({0.0, -1.0, 1.0});
    const double with_eff =
        omega_averaged_coincidence_quadrature(pair, u_a, u_b, DetectorModel{0.5}, 24);
    const double rescaled =
        omega_averaged_coincidence_quadrature(half, u_a, u_b, kIdeal, 24);
    CHECK(with_eff == doctest::Approx(rescaled).epsilon(1e-13));
}

TEST_CASE("monte carlo input validation") {
    RandomStream rng(1);
    CHECK_THROWS_AS(
        (void)omega_averaged_coincidence_mc(anti_pair(1.0), kZ, kZ, kIdeal, 0, rng),
        std::domain_error);
    CHECK_THROWS_AS(
        (void)omega_averaged_coincidence_mc(anti_pair(1.0), kZ, kZ, kIdeal, 100, rng, 0),
        std::invalid_argument);
    CHECK_THROWS_AS((void)u_kernel_mc(anti_pair(1.0), kZ, kZ, 0, rng), std::domain_error);
}

TEST_CASE("kernel bounds") {
    CHECK(u_lower_bound(1.0, 1.0) == doctest::Approx(1.0));
    CHECK(u_lower_bound(1.0, 3.0) == doctest::Approx(std::cosh(0.5)).epsilon(1e-15));
    CHECK(u_upper_bound(1.0, 1.0) == doctest::Approx(std::sinh(1.0)).epsilon(1e-14));
    CHECK(u_upper_bound(1.0, 4.0) ==
          doctest::Approx(std::sqrt(std::sinh(1.0) * std::sinh(4.0) / 4.0)).epsilon(1e-14));
    CHECK(u_lower_bound(2.0, 2.0) <= u_upper_bound(2.0, 2.0));
}

TEST_CASE("bound sandwich on random inputs") {
    RandomStream rng(909090);
    for (int i = 0; i < 200; ++i) {
        const double sa = rng.uniform(0.01, 10.0);
        const double sb = rng.uniform(0.01, 10.0);
        const BlochVector da = haar_rotation(rng).apply(kZ);
        const BlochVector db = haar_rotation(rng).apply(kZ);
        const BlochVector u_a = haar_rotation(rng).apply(kZ);
        const BlochVector u_b = haar_rotation(rng).apply(kZ);
        const McEstimate u = u_kernel_mc({sa * da, sb * db}, u_a, u_b, 10000, rng);
        CHECK(u_lower_bound(sa, sb) - 3.0 * u.std_error <= u.value);
        CHECK(u.value <= u_upper_bound(sa, sb) + 3.0 * u.std_error);
    }
}

TEST_CASE("symmetric visibility frozen values and limits") {
    CHECK(visibility_symmetric(1.0) ==
          doctest::Approx(0.23719508545483177).epsilon(1e-14));
    CHECK(visibility_symmetric(1e-3) ==
          doctest::Approx(0.33322223703765380).epsilon(1e-13));
    CHECK(visibility_symmetric(2.5e-3) ==
          doctest::Approx(0.33305564815777278).epsilon(1e-13));
    CHECK(visibility_symmetric(10.0) ==
          doctest::Approx(0.030274348930702276).epsilon(1e-14));
    CHECK(visibility_symmetric(20.0) ==
          doctest::Approx(0.013698628989021591).epsilon(1e-14));
    CHECK(visibility_symmetric(1e-6) ==
          doctest::Approx(0.333333222222237).epsilon(1e-12));
    CHECK(std::abs(visibility_symmetric(1e-6) - 1.0 / 3.0) <= 1e-4);
}

TEST_CASE("symmetric visibility decreases with intensity") {
    const double log_lo = std::log(1e-3);
    const double log_hi = std::log(20.0);
    double prev = visibility_symmetric(1e-3);
    for (int i = 1; i < 50; ++i) {
        const double s = std::exp(log_lo + (log_hi - log_lo) * i / 49.0);
        const double v = visibility_symmetric(s);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("series and direct branches of the symmetric visibility join smoothly") {
    // the switch sits at s = 1e-2; straddle it so closely that the true slope
    // contributes ~1e-15 and any gap is pure branch disagreement (the direct
    // branch carries ~1e-9 relative cancellation noise at this scale)
    const double below = visibility_symmetric(1e-2 * (1.0 - 1e-12));
    const double above = visibility_symmetric(1e-2 * (1.0 + 1e-12));
    CHECK(below == doctest::Approx(above).epsilon(1e-8));
    // still strictly decreasing through the seam at resolvable separation
    CHECK(visibility_symmetric(0.999e-2) > visibility_symmetric(1.001e-2));
}

TEST_CASE("visibility from closed-form extremes matches the symmetric formula") {
    for (double s : {0.1, 1.0, 5.0, 10.0}) {
        const double pmax = coincidence_closed_anti(s, std::numbers::pi);
        const double pmin = coincidence_closed_anti(s, 0.0);
        const double v = (pmax - pmin) / (pmax + pmin);
        CHECK(std::abs(v - visibility_symmetric(s)) <= 1e-12);
    }
}

TEST_CASE("visibility bound surface") {
    // frozen off-diagonal values (the bound may exceed 1/3 near the axes)
    CHECK(visibility_bound_surface(0.05, 5.0) ==
          doctest::Approx(1.44516497797).epsilon(1e-9));
    CHECK(visibility_bound_surface(0.1, 5.0) ==
          doctest::Approx(1.08156979467).epsilon(1e-9));
    // tight on the diagonal: the bound equals the exact symmetric visibility
    for (double s : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0}) {
        CHECK(visibility_bound_surface(s, s) ==
              doctest::Approx(visibility_symmetric(s)).epsilon(1e-12));
    }
    CHECK_THROWS_AS((void)visibility_bound_surface(0.0, 1.0), std::domain_error);
}

TEST_CASE("weak limit of a single anticorrelated pair") {
    const double s = 0.0025;
    const std::vector<WeightedBeamPair> ensemble{{anti_pair(s), 1.0}};
    CHECK(weak_limit_coincidence(ensemble, kZ, kZ) ==
          doctest::Approx(s * s / 6.0).epsilon(1e-12));
    CHECK(weak_limit_coincidence(ensemble, kZ, {0.0, 0.0, -1.0}) ==
          doctest::Approx(s * s / 3.0).epsilon(1e-12));
    CHECK(weak_limit_visibility(ensemble) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("weak limit of a mixed ensemble") {
    // half anticorrelated along z, half uncorrelated cross pair
    const std::vector<WeightedBeamPair> ensemble{
        {{{0.0, 0.0, 0.002}, {0.0, 0.0, -0.002}}, 1.0},
        {{{0.002, 0.0, 0.0}, {0.0, 0.0, 0.002}}, 1.0},
    };
    // <|sa||sb|> = 4e-6, <sa.sb> = (-4e-6 + 0)/2 = -2e-6
    const double expected_vis = 2e-6 / (3.0 * 4e-6);
    CHECK(weak_limit_visibility(ensemble) == doctest::Approx(expected_vis).epsilon(1e-12));
    const double p_aligned = weak_limit_coincidence(ensemble, kZ, kZ);
    // 1/4 (<|sa||sb|> + <sa.sb>/3): aligned settings pick up the full correlation
    CHECK(p_aligned == doctest::Approx(0.25 * (4e-6 - 2e-6 / 3.0)).epsilon(1e-12));
    CHECK(weak_limit_visibility(ensemble) <= 1.0 / 3.0 + 1e-15);
}

TEST_CASE("weak limit validates weights") {
    const std::vector<WeightedBeamPair> bad{{anti_pair(0.001), -1.0}};
    CHECK_THROWS_AS((void)weak_limit_visibility(bad), std::domain_error);
    const std::vector<WeightedBeamPair> empty;
    CHECK_THROWS_AS((void)weak_limit_visibility(empty), std::domain_error);
}

TEST_CASE("strong-weak expansion against frozen values") {
    const BlochVector s_a{0.0, 0.0, -1e-3};
    const BlochVector s_b{0.0, 0.0, 1.0};
    CHECK(small_sa_coincidence(s_a, s_b, kZ, kZ) ==
          doctest::Approx(0.000132058838827).epsilon(1e-9));
    CHECK(small_sa_coincidence(s_a, s_b, kZ, {0.0, 0.0, -1.0}) ==
          doctest::Approx(0.000235645356132).epsilon(1e-9));
    CHECK(small_sa_coincidence(s_a, s_b, kX, kZ) ==
          doctest::Approx(0.00018385209748).epsilon(1e-9));
}

TEST_CASE("strong-weak expansion agrees with direct averaging") {
    const BlochVector s_a{0.0, 0.0, -1e-3};
    const BlochVector s_b{0.0, 0.0, 1.0};
    for (const BlochVector& u_b : {kZ, BlochVector{0.0, 0.0, -1.0}}) {
        const double expansion = small_sa_coincidence(s_a, s_b, kZ, u_b);
        const double quad = omega_averaged_coincidence_quadrature({s_a, s_b}, kZ, u_b,
                                                                  kIdeal, 32);
        // the expansion truncates at first order in |s_a|
        CHECK(std::abs(expansion - quad) / quad <= 2e-3);
    }
}

TEST_CASE("extracted visibility limit of the strong-weak expansion") {
    CHECK(small_sa_visibility_limit(1.0) ==
          doctest::Approx(3.0 - std::exp(1.0)).epsilon(1e-13));
    CHECK(small_sa_visibility_limit(1e-3) ==
          doctest::Approx(0.33327778148179005).epsilon(1e-12));
    CHECK(std::abs(small_sa_visibility_limit(1e-8) - 1.0 / 3.0) <= 1e-7);
    // monotone toward the weak-beam ceiling
    CHECK(small_sa_visibility_limit(0.5) < small_sa_visibility_limit(0.1));
    CHECK(small_sa_visibility_limit(0.1) < 1.0 / 3.0);
}

TEST_CASE("analyzer-free pair probability") {
    CHECK(p_total(1.0, 1.0, kIdeal) ==
          doctest::Approx(0.39957640089372805).epsilon(1e-14));
    const double c1 = click_probability(1.0, kIdeal);
    CHECK(p_total(1.0, 1.0, kIdeal) == doctest::Approx(c1 * c1).epsilon(1e-15));
    const DetectorModel half{0.5};
    CHECK(p_total(2.0, 3.0, half) ==
          doctest::Approx(click_probability(2.0, half) * click_probability(3.0, half))
              .epsilon(1e-15));
}
