#include <catch2/catch_amalgamated.hpp>

#include "logring/dynamics.hpp"

using namespace logring;
using Catch::Approx;

TEST_CASE("conserved quantities") {
    SECTION("ring equilibrium has zero momentum and L = n mu r^2 w") {
        const RingParams p = RingParams::central(4, 0.5);
        const ConservedQuantities q = conserved(re_configuration(p, 0.0));
        REQUIRE(q.linear_momentum.norm() <= 1e-14);
        REQUIRE(q.angular_momentum ==
                Approx(4 * p.mu * p.r * p.r * p.omega).epsilon(1e-13));
    }
    SECTION("zero-velocity state has purely potential energy") {
        BodySet b;
        b.masses = {2.0, 3.0, 0.5};
        b.positions = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 2.0}};
        b.velocities = {{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}};
        const double want = 2.0 * 3.0 * std::log(1.0) + 2.0 * 0.5 * std::log(2.0) +
                            3.0 * 0.5 * std::log(std::sqrt(5.0));
        REQUIRE(conserved(b).energy == Approx(want).epsilon(1e-14));
    }
}

TEST_CASE("equilibrium integration fidelity") {
    SECTION("ten periods stay on the rotating ring") {
        const RingParams p = RingParams::central(6, 0.5);
        IntegratorConfig cfg;
        cfg.dense_output_stride = 10.0 * p.period() / 64.0;
        const Trajectory traj = integrate(re_configuration(p, 0.0), 10.0 * p.period(), cfg);
        REQUIRE(!traj.collision);
        REQUIRE(!traj.step_underflow);
        REQUIRE(deviation_from_re(traj.back(), p) <= 1e-6);
    }
    SECTION("one period returns to the start") {
        const RingParams p = RingParams::free_ring(5);
        const Trajectory traj = integrate(re_configuration(p, 0.0), p.period());
        const BodySet& final = traj.back();
        const BodySet start = re_configuration(p, 0.0);
        for (std::size_t i = 0; i < start.size(); ++i) {
            REQUIRE((final.positions[i] - start.positions[i]).norm() <= 1e-7);
            REQUIRE((final.velocities[i] - start.velocities[i]).norm() <= 1e-7);
        }
    }
    SECTION("free two-body circular orbit holds its radius") {
        const RingParams p = RingParams::free_ring(2);
        REQUIRE(p.omega * p.omega == Approx(0.5));
        const Trajectory traj = integrate(re_configuration(p, 0.0), 3.0 * p.period());
        for (const PhaseState& s : traj.samples)
            for (const Vec2& x : s.positions)
                REQUIRE(x.norm() == Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("conservation drift over ten periods") {
    for (int n = 2; n <= 12; ++n) {
        for (bool central : {true, false}) {
            const RingParams p = central ? RingParams::central(n, 0.5)
                                         : RingParams::free_ring(n);
            IntegratorConfig cfg;
            cfg.dense_output_stride = 10.0 * p.period() / 32.0;
            const Trajectory traj =
                integrate(re_configuration(p, 0.0), 10.0 * p.period(), cfg);
            const ConservedQuantities q0 = conserved(traj.samples.front());
            CAPTURE(n, central);
            for (const PhaseState& s : traj.samples) {
                const ConservedQuantities q = conserved(s);
                REQUIRE(std::abs(q.energy - q0.energy) <=
                        1e-8 * std::max(1.0, std::abs(q0.energy)));
                REQUIRE(std::abs(q.angular_momentum - q0.angular_momentum) <=
                        1e-10 * std::abs(q0.angular_momentum));
                REQUIRE(q.linear_momentum.norm() <= 1e-12);
            }
        }
    }
}

TEST_CASE("integrator convergence and reversibility") {
    SECTION("halving the tolerances at least halves the ten-period error") {
        const RingParams p = RingParams::central(6, 0.5);
        auto error_at = [&](double rel) {
            IntegratorConfig cfg;
            cfg.rel_tol = rel;
            cfg.abs_tol = rel * 1e-2;
            cfg.dense_output_stride = 10.0 * p.period();
            const Trajectory t = integrate(re_configuration(p, 0.0), 10.0 * p.period(), cfg);
            return deviation_from_re(t.back(), p);
        };
        const double coarse = error_at(1e-6);
        const double fine = error_at(5e-7);
        REQUIRE(fine * 2.0 <= coarse);
    }
    SECTION("time reversal returns to the start") {
        const RingParams p = RingParams::central(8, 0.5);
        const double T = 3.0 * p.period();
        const Trajectory fwd = integrate(re_configuration(p, 0.0), T);
        PhaseState turn = fwd.back();
        for (Vec2& v : turn.velocities) v = {-v.x, -v.y};
        turn.time = 0.0;
        const Trajectory bwd = integrate(turn, T);
        const BodySet start = re_configuration(p, 0.0);
        for (std::size_t i = 0; i < start.size(); ++i) {
            REQUIRE((bwd.back().positions[i] - start.positions[i]).norm() <= 1e-6);
            const Vec2 vflip{-bwd.back().velocities[i].x, -bwd.back().velocities[i].y};
            REQUIRE((vflip - start.velocities[i]).norm() <= 1e-6);
        }
    }
}

TEST_CASE("collision handling") {
    BodySet b;
    b.masses = {1.0, 1.0};
    b.positions = {{-0.5, 0.0}, {0.5, 0.0}};
    b.velocities = {{0.0, 0.0}, {0.0, 0.0}};
    IntegratorConfig cfg;
    cfg.dmin = 1e-6;
    const Trajectory traj = integrate(b, 10.0, cfg);
    REQUIRE(traj.collision);
    REQUIRE(traj.collision_time < 10.0);
}

TEST_CASE("mode perturbations") {
    SECTION("the j=0 zero mode is a rephased equilibrium") {
        const RingParams p = RingParams::central(5, 0.6);
        const double eps = 1e-8;
        const PhaseState st = perturb_along_mode(p, 0, Complex{0.0, 0.0}, eps);
        IntegratorConfig cfg;
        cfg.dense_output_stride = 2.0 * p.period() / 64.0;
        const Trajectory traj = integrate(st, 2.0 * p.period(), cfg);
        for (const PhaseState& s : traj.samples)
            REQUIRE(deviation_from_re(s, p) <= 2.5 * eps);
    }
    SECTION("stable modes stay bounded for twenty periods") {
        const RingParams p = RingParams::central(5, 0.6);
        const ModeFactor f = mode_factor(p, 2);
        const double eps = 1e-8;
        const PhaseState st = perturb_along_mode(p, 2, f.lambdas[0], eps);
        IntegratorConfig cfg;
        cfg.dense_output_stride = 20.0 * p.period() / 256.0;
        const Trajectory traj = integrate(st, 20.0 * p.period(), cfg);
        double worst = 0.0;
        for (const PhaseState& s : traj.samples)
            worst = std::max(worst, deviation_from_re(s, p));
        REQUIRE(worst <= 10.0 * eps);
        REQUIRE(!growth_rate(traj, p, eps).window_found);
    }
    SECTION("unstable mode growth matches the predicted eigenvalue") {
        const RingParams p = RingParams::central(2, 0.5);
        const ModeFactor f = mode_factor(p, 1);
        Complex lam{0.0, 0.0};
        for (const Complex l : f.lambdas)
            if (l.real() > lam.real()) lam = l;
        REQUIRE(lam.real() == Approx(std::sqrt(0.75)).epsilon(1e-12));
        const double eps = 1e-8;
        const PhaseState st = perturb_along_mode(p, 1, lam, eps);
        IntegratorConfig cfg;
        cfg.dense_output_stride = 0.02;
        const Trajectory traj = integrate(st, std::log(3000.0) / lam.real() * 1.3, cfg);
        const GrowthEstimate est = growth_rate(traj, p, eps);
        REQUIRE(est.window_found);
        REQUIRE(est.samples_used >= 50);
        REQUIRE(est.rate == Approx(lam.real()).epsilon(0.2));
        REQUIRE(est.r_squared >= 0.99);
    }
    SECTION("perturbed states conserve linear momentum") {
        for (int j : {1, 2}) {
            const RingParams p = RingParams::central(4, 0.5);
            const ModeFactor f = mode_factor(p, j);
            const PhaseState st = perturb_along_mode(p, j, f.lambdas[0], 1e-6);
            REQUIRE(conserved(st).linear_momentum.norm() <= 1e-15);
        }
    }
}
