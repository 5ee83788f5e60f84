#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "planode/classifier.hpp"
#include "test_util.hpp"

using namespace planode;
using planode::testing::Rng;

namespace {

Classification classify_c1(const Mat2& J) {
    return spectral_classify(eigen(J), RegularityClass::c1());
}

Mat2 random_clear_structure(Rng& rng) {
    while (true) {
        const Mat2 J{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2),
                     rng.uniform(-2, 2)};
        const double disc = J.trace() * J.trace() - 4.0 * J.det();
        const double re_min =
            std::min(std::fabs(eigen(J).lambda1.real()),
                     std::fabs(eigen(J).lambda2.real()));
        if (std::fabs(disc) > 1e-3 && re_min > 1e-2) {
            return J;
        }
    }
}

}  // namespace

TEST_CASE("spectral classification of the five reference spectra") {
    {
        const Classification c = classify_c1(Mat2{1, 0, 0, 2});
        CHECK(c.shape == Shape::Node);
        CHECK(c.stability == Stability::Repelling);
        CHECK(c.evidence == Evidence::SpectralDistinct);
    }
    {
        const Classification c = classify_c1(Mat2{1, 0, 0, -1});
        CHECK(c.shape == Shape::Saddle);
        CHECK(c.stability == Stability::NotApplicable);
    }
    {
        const Classification c = classify_c1(Mat2{-1, 2, -2, -1});  // -1 +- 2i
        CHECK(c.shape == Shape::Focus);
        CHECK(c.stability == Stability::Attracting);
    }
    {
        const Classification c = classify_c1(Mat2{-1, 0, 1, -1});
        CHECK(c.shape == Shape::Undetermined);
        CHECK(c.stability == Stability::Attracting);
    }
    {
        const Classification c = spectral_classify(
            eigen(Mat2{-1, 0, 1, -1}), RegularityClass::c1_alpha(0.5));
        CHECK(c.shape == Shape::Node);
        CHECK(c.stability == Stability::Attracting);
        CHECK(c.evidence == Evidence::SpectralRepeatedHolder);
    }
}

TEST_CASE("zero real part is never classified") {
    const Classification c = classify_c1(Mat2{0, 1, -1, 0});
    CHECK(c.shape == Shape::Undetermined);
    CHECK(c.stability == Stability::NotApplicable);
}

TEST_CASE("regularity alpha validation") {
    CHECK_THROWS_AS(RegularityClass::c1_alpha(0.0), ParameterOutOfRange);
    CHECK_THROWS_AS(RegularityClass::c1_alpha(1.0), ParameterOutOfRange);
    CHECK_NOTHROW(RegularityClass::c1_alpha(0.999));
}

TEST_CASE("spectral classification is scale invariant") {
    Rng rng(41);
    for (int i = 0; i < 200; ++i) {
        const Mat2 J = random_clear_structure(rng);
        const double c = std::exp(rng.uniform(std::log(1e-2), std::log(1e2)));
        const Classification base = classify_c1(J);
        const Classification scaled = classify_c1(J * c);
        CHECK(base.shape == scaled.shape);
        CHECK(base.stability == scaled.stability);
    }
}

TEST_CASE("spectral classification is similarity invariant") {
    Rng rng(43);
    for (int i = 0; i < 200; ++i) {
        const Mat2 J = random_clear_structure(rng);
        const Mat2 Q = planode::testing::random_invertible(rng);
        const Classification base = classify_c1(J);
        const Classification conj = classify_c1(planode::testing::conjugate(J, Q));
        CHECK(base.shape == conj.shape);
        CHECK(base.stability == conj.stability);
    }
}

TEST_CASE("empirical: the log-rotation system is a focus") {
    IntegratorConfig cfg;
    cfg.t_max = 3e5;
    const Classification c =
        empirical_classify(counterexample(0.0), -1.0, 0.0, cfg);
    CHECK(c.shape == Shape::Focus);
    CHECK(c.stability == Stability::Attracting);
    CHECK(c.evidence == Evidence::Empirical);
    REQUIRE(c.turns.has_value());
    CHECK(*c.turns >= 2.0);
    CHECK_FALSE(c.theta_limit.has_value());
}

TEST_CASE("empirical: focus verdict is epsilon-uniform") {
    for (double eps : {0.5, 1.0, 1.5}) {
        IntegratorConfig cfg;
        cfg.t_max = 1e3;  // the coupling term spins these up quickly
        const Classification c =
            empirical_classify(counterexample(eps), -1.0, 0.0, cfg);
        CHECK(c.shape == Shape::Focus);
    }
}

TEST_CASE("empirical: diagonal holder family is a node") {
    IntegratorConfig cfg;
    cfg.t_max = 100.0;
    const PlanarSystem sys = holder_family(-1.0, 0.5, 0.1, 3, false);
    const Classification c = empirical_classify(sys, std::log(0.01), 0.3, cfg);
    CHECK(c.shape == Shape::Node);
    CHECK(c.stability == Stability::Attracting);
    REQUIRE(c.theta_limit.has_value());
    CHECK(*c.theta_limit >= 0.0);
    CHECK(*c.theta_limit < 2.0 * M_PI);
    CHECK(c.f_angle.has_value());
}

TEST_CASE("empirical: Jordan holder family settles on a half-pi direction") {
    IntegratorConfig cfg;
    cfg.t_max = 5000.0;
    const PlanarSystem sys = holder_family(-1.0, 0.5, 0.1, 3, true);
    const Classification c = empirical_classify(sys, std::log(0.01), 0.1, cfg);
    CHECK(c.shape == Shape::Node);
    REQUIRE(c.theta_limit.has_value());
    CHECK(std::fabs(*c.theta_limit - M_PI / 2.0) < 1e-2);
}

TEST_CASE("empirical: repelling systems are classified via time reversal") {
    Rng rng(47);
    const Mat2 Q = planode::testing::random_invertible(rng);
    PlanarSystem sys;
    sys.J = planode::testing::conjugate(Mat2{0.8, 0, 0, 1.3}, Q);
    sys.kind = RemainderKind::HolderPolar;
    sys.alpha = 0.5;
    sys.amplitude = 0.05;
    sys.wavenumber = 2;

    IntegratorConfig cfg;
    cfg.t_max = 120.0;
    const Classification c = empirical_classify(sys, std::log(0.01), 1.0, cfg);
    CHECK(c.shape == Shape::Node);
    CHECK(c.stability == Stability::Repelling);
}

TEST_CASE("empirical: short horizons admit indecision, mismatches throw") {
    IntegratorConfig cfg;
    cfg.t_max = 40.0;
    const Classification c =
        empirical_classify(counterexample(0.0), -1.0, 0.0, cfg);
    CHECK(c.shape == Shape::Undetermined);

    CHECK_THROWS_AS(
        empirical_classify(linear_system(Mat2{1, 0, 0, -1}), -1.0, 0.0, cfg),
        SpectrumMismatch);
    CHECK_THROWS_AS(
        empirical_classify(linear_system(Mat2{0, 1, -1, 0}), -1.0, 0.0, cfg),
        SpectrumMismatch);
}

TEST_CASE("empirical agrees with spectral on random clear systems") {
    Rng rng(53);
    int done = 0;
    while (done < 20) {
        const bool want_focus = done % 2 == 1;
        const double stable = rng.sign();
        Mat2 core;
        double t_max;
        if (want_focus) {
            const double re = stable * rng.uniform(0.4, 1.5);
            const double om = rng.sign() * rng.uniform(0.5, 2.0);
            core = Mat2{re, om, -om, re};
            t_max = 60.0;
        } else {
            const double l1 = stable * rng.uniform(0.4, 1.0);
            const double l2 = l1 + stable * rng.uniform(0.3, 1.0);
            core = Mat2{l1, 0, 0, l2};
            t_max = 120.0;
        }
        PlanarSystem sys;
        sys.J = planode::testing::conjugate(
            core, planode::testing::random_invertible(rng));
        sys.kind = RemainderKind::HolderPolar;
        sys.alpha = rng.uniform(0.3, 0.8);
        sys.amplitude = rng.uniform(0.0, 0.03);
        sys.wavenumber = rng.uniform_int(1, 4);

        IntegratorConfig cfg;
        cfg.t_max = t_max;
        const Classification spectral =
            spectral_classify(eigen(sys.J), RegularityClass::c1());
        const Classification empirical = empirical_classify(
            sys, std::log(0.01), rng.uniform(-M_PI, M_PI), cfg);
        CHECK(empirical.shape == spectral.shape);
        CHECK(empirical.stability == spectral.stability);
        ++done;
    }
}
