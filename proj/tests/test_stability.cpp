#include <catch2/catch_amalgamated.hpp>

#include "logring/stability.hpp"

using namespace logring;
using Catch::Approx;

TEST_CASE("theorem bounds") {
    SECTION("n=2 is empty") {
        const MuBounds b = theorem_bounds(2);
        REQUIRE(b.kind == MuBounds::Kind::Empty);
        REQUIRE(!b.lower);
        REQUIRE(!b.contains(0.5));
    }
    SECTION("n=3 is the single point mu=1") {
        const MuBounds b = theorem_bounds(3);
        REQUIRE(b.kind == MuBounds::Kind::Point);
        REQUIRE(*b.upper == Rational(1));
        REQUIRE(b.contains(1.0));
        REQUIRE(!b.contains(0.999999));
    }
    SECTION("4 <= n <= 9 is [4/(n-1)^2, 1)") {
        for (int n = 4; n <= 9; ++n) {
            const MuBounds b = theorem_bounds(n);
            REQUIRE(b.kind == MuBounds::Kind::OpenUnit);
            REQUIRE(*b.lower == Rational(4, static_cast<std::int64_t>(n - 1) * (n - 1)));
            REQUIRE(b.contains(b.lower->value()));
            REQUIRE(!b.contains(1.0));
        }
    }
    SECTION("even n >= 10") {
        const MuBounds b = theorem_bounds(10);
        REQUIRE(*b.lower == Rational(4, 81));
        REQUIRE(*b.upper == Rational(4, 7));
        REQUIRE(b.contains(4.0 / 7.0));
        REQUIRE(!b.contains(4.0 / 7.0 + 1e-6));
        REQUIRE(std::string(b.label()) == "even");
    }
    SECTION("odd n >= 11") {
        const MuBounds b = theorem_bounds(11);
        REQUIRE(*b.lower == Rational(1, 25));
        REQUIRE(*b.upper == Rational(2, 5));
        REQUIRE(std::string(b.label()) == "odd");
    }
    SECTION("upper bound is below 1 from n = 10 on") {
        for (int n = 10; n <= 60; ++n) {
            const MuBounds b = theorem_bounds(n);
            REQUIRE(*b.lower <= *b.upper);
            REQUIRE(b.upper->value() < 1.0);
        }
    }
}

TEST_CASE("theorem classifier") {
    REQUIRE(classify_theorem(3, 1.0) == StabilityStatus::SpectrallyStable);
    REQUIRE(classify_theorem(3, 0.9) == StabilityStatus::Unstable);
    REQUIRE(classify_theorem(12, 0.3) == StabilityStatus::Unstable);  // 0.3 > 16/56
    REQUIRE(classify_theorem(12, 0.28) == StabilityStatus::SpectrallyStable);
    REQUIRE(classify_theorem(6, 0.0, true) == StabilityStatus::SpectrallyStable);
    REQUIRE(classify_theorem(7, 0.0, true) == StabilityStatus::Unstable);
}

TEST_CASE("spectral classifier") {
    SECTION("two-body ring is always unstable, witnessed by mode 1") {
        const StabilityVerdict v = classify_spectral(RingParams::central(2, 0.5));
        REQUIRE(v.status == StabilityStatus::Unstable);
        REQUIRE(v.witness_mode == 1);
        REQUIRE(v.max_re_lambda > 0.1);
        REQUIRE(v.trivial_zeros_excluded == 2);
    }
    SECTION("n=9 mu=0.9 is spectrally stable") {
        const StabilityVerdict v = classify_spectral(RingParams::central(9, 0.9));
        REQUIRE(v.status == StabilityStatus::SpectrallyStable);
        REQUIRE(v.max_re_lambda <= 1e-9 * RingParams::central(9, 0.9).omega);
    }
    SECTION("free n=7 is degenerate through P_3 = P_4 = 0") {
        const StabilityVerdict v = classify_spectral(RingParams::free_ring(7));
        REQUIRE(v.status == StabilityStatus::Degenerate);
        REQUIRE(v.per_mode_P[3] == 0.0);
        REQUIRE(v.per_mode_P[4] == 0.0);
        REQUIRE((v.witness_mode == 3 || v.witness_mode == 4));
    }
    SECTION("exact theorem endpoints are degenerate") {
        REQUIRE(classify_spectral(RingParams::central(5, 4.0 / 16.0)).status ==
                StabilityStatus::Degenerate);
        REQUIRE(classify_spectral(RingParams::central(10, 4.0 / 7.0)).status ==
                StabilityStatus::Degenerate);
        REQUIRE(classify_spectral(RingParams::central(3, 1.0)).status ==
                StabilityStatus::Degenerate);
    }
    SECTION("witness just below the lower bound is mode 1 or n-1") {
        for (int n : {5, 9, 14, 23}) {
            const double lower = 4.0 / ((n - 1.0) * (n - 1.0));
            const StabilityVerdict v =
                classify_spectral(RingParams::central(n, lower * 0.9));
            REQUIRE(v.status == StabilityStatus::Unstable);
            REQUIRE((v.witness_mode == 1 || v.witness_mode == n - 1));
        }
    }
    SECTION("free-ring statuses across n") {
        for (int n = 2; n <= 40; ++n) {
            const StabilityStatus want = n <= 6   ? StabilityStatus::SpectrallyStable
                                         : n == 7 ? StabilityStatus::Degenerate
                                                  : StabilityStatus::Unstable;
            CAPTURE(n);
            REQUIRE(classify_spectral(RingParams::free_ring(n)).status == want);
        }
    }
}

TEST_CASE("cross check of the two classifiers") {
    SECTION("interior grid never disagrees") {
        for (int n = 2; n <= 30; ++n) {
            std::vector<double> grid(100);
            for (int i = 0; i < 100; ++i) grid[i] = (i + 1) / 101.0;
            const CrossCheckReport rep = cross_check(n, grid);
            CAPTURE(n);
            REQUIRE(rep.interior_failures == 0);
        }
    }
    SECTION("n=3 mu=1 reconciles as a boundary degeneracy") {
        const std::vector<double> grid{1.0};
        const CrossCheckReport rep = cross_check(3, grid);
        REQUIRE(rep.interior_failures == 0);
        REQUIRE(rep.boundary_reconciliations == 1);
        REQUIRE(rep.disagreements[0].spectral == StabilityStatus::Degenerate);
        REQUIRE(rep.disagreements[0].theorem == StabilityStatus::SpectrallyStable);
    }
    SECTION("n=10 mu=4/7 reconciles as a boundary degeneracy") {
        const std::vector<double> grid{4.0 / 7.0};
        const CrossCheckReport rep = cross_check(10, grid);
        REQUIRE(rep.interior_failures == 0);
        REQUIRE(rep.boundary_reconciliations == 1);
    }
    SECTION("max Re lambda turns on exactly outside the interval") {
        for (int n : {4, 7, 10, 13, 20, 41, 60}) {
            const MuBounds b = theorem_bounds(n);
            const double tolRe = 1e-9;  // omega factors handled inside classify
            const double lower = b.lower->value();
            if (lower - 0.01 > 0.0) {
                const RingParams p = RingParams::central(n, lower - 0.01);
                REQUIRE(classify_spectral(p).max_re_lambda > tolRe * p.omega);
            }
            const double upper = b.kind == MuBounds::Kind::OpenUnit ? 1.0 : b.upper->value();
            if (upper + 0.01 < 1.0) {
                const RingParams p = RingParams::central(n, upper + 0.01);
                REQUIRE(classify_spectral(p).max_re_lambda > tolRe * p.omega);
            }
            const double mid = 0.5 * (lower + upper);
            if (b.contains(mid)) {
                const RingParams p = RingParams::central(n, mid);
                REQUIRE(classify_spectral(p).max_re_lambda <= 1e-9 * p.omega);
            }
        }
    }
}
