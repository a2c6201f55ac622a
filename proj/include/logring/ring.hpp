#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace logring {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
    Vec2& operator+=(Vec2 v) { x += v.x; y += v.y; return *this; }
    double norm() const { return std::hypot(x, y); }
    double norm2() const { return x * x + y * y; }
    double cross(Vec2 v) const { return x * v.y - y * v.x; }
};

class CollisionError : public std::runtime_error {
public:
    CollisionError(std::size_t i, std::size_t k, double dist)
        : std::runtime_error("bodies " + std::to_string(i) + " and " + std::to_string(k) +
                             " closer than the collision guard (distance " +
                             std::to_string(dist) + ")"),
          body_a(i), body_b(k), distance(dist) {}
    std::size_t body_a, body_b;
    double distance;
};

/// Vertex angle of body j on the regular n-gon.
inline double ring_angle(int n, int j) {
    return 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
}

/// Angular velocity of the ring equilibrium, from the force balance of one
/// ring body. Central case: r^2 w^2 = 1 + mu (n-1)/2. Free ring (unit ring
/// masses): r^2 w^2 = (n-1)/2.
inline double re_angular_velocity(int n, double mu, double r, bool has_central) {
    if (n < 2) throw std::domain_error("re_angular_velocity: n must be >= 2");
    if (mu <= 0.0) throw std::domain_error("re_angular_velocity: mu must be positive");
    if (r <= 0.0) throw std::domain_error("re_angular_velocity: r must be positive");
    const double nm1 = static_cast<double>(n - 1);
    const double rw2 = has_central ? 1.0 + 0.5 * mu * nm1 : 0.5 * nm1;
    return std::sqrt(rw2) / r;
}

/// Newtonian (1/r^2 force) counterpart of the ring angular velocity,
/// provided for comparison runs only: r^3 w^2 = 1 + (mu/2) sum 1/(2 sin(theta_k/2)).
inline double newtonian_re_omega(int n, double mu, double r) {
    if (n < 2) throw std::domain_error("newtonian_re_omega: n must be >= 2");
    if (mu <= 0.0) throw std::domain_error("newtonian_re_omega: mu must be positive");
    if (r <= 0.0) throw std::domain_error("newtonian_re_omega: r must be positive");
    double sum = 0.0;
    for (int k = 1; k < n; ++k) sum += 1.0 / (2.0 * std::sin(0.5 * ring_angle(n, k)));
    return std::sqrt((1.0 + 0.5 * mu * sum) / (r * r * r));
}

/// Problem instance: n equal ring bodies of mass ratio mu on a circle of
/// radius r, optionally with a unit central mass, rotating at the derived
/// angular velocity. The free ring is scaled so the ring masses are 1.
struct RingParams {
    int n = 3;
    double mu = 1.0;
    bool has_central = true;
    double r = 1.0;
    double omega = 0.0;

    static RingParams central(int n, double mu, double r = 1.0) {
        RingParams p{n, mu, true, r, re_angular_velocity(n, mu, r, true)};
        return p;
    }
    static RingParams free_ring(int n, double r = 1.0) {
        RingParams p{n, 1.0, false, r, re_angular_velocity(n, 1.0, r, false)};
        return p;
    }

    /// Mass of one ring body in scaled units.
    double ring_mass() const { return has_central ? mu : 1.0; }
    int body_count() const { return has_central ? n + 1 : n; }
    double period() const { return 2.0 * std::numbers::pi / omega; }

    void validate() const {
        if (n < 2) throw std::domain_error("RingParams: n must be >= 2");
        if (mu <= 0.0) throw std::domain_error("RingParams: mu must be positive");
        if (r <= 0.0 || omega <= 0.0)
            throw std::domain_error("RingParams: r and omega must be positive");
        const double rw2 = r * r * omega * omega;
        const double want = has_central ? 1.0 + 0.5 * mu * (n - 1) : 0.5 * (n - 1);
        if (std::abs(rw2 - want) > 1e-14 * std::max(1.0, std::abs(want)))
            throw std::domain_error("RingParams: omega does not satisfy the ring relation");
    }
};

/// Planar positions, velocities and masses of all bodies at one instant.
/// Central case stores the central body last.
struct BodySet {
    std::vector<double> masses;
    std::vector<Vec2> positions;
    std::vector<Vec2> velocities;
    double time = 0.0;

    std::size_t size() const { return masses.size(); }
};

/// The ring equilibrium at time t: body j at angle w t + theta_j with
/// tangential speed r w; the central body (when present) at rest at the origin.
inline BodySet re_configuration(const RingParams& params, double t) {
    params.validate();
    BodySet b;
    const std::size_t count = static_cast<std::size_t>(params.body_count());
    b.masses.reserve(count);
    b.positions.reserve(count);
    b.velocities.reserve(count);
    b.time = t;
    const double rw = params.r * params.omega;
    for (int j = 0; j < params.n; ++j) {
        const double phi = params.omega * t + ring_angle(params.n, j);
        b.masses.push_back(params.ring_mass());
        b.positions.push_back({params.r * std::cos(phi), params.r * std::sin(phi)});
        b.velocities.push_back({-rw * std::sin(phi), rw * std::cos(phi)});
    }
    if (params.has_central) {
        b.masses.push_back(1.0);
        b.positions.push_back({0.0, 0.0});
        b.velocities.push_back({0.0, 0.0});
    }
    return b;
}

/// Accelerations under the scaled logarithmic pair force: body i feels
/// sum_k m_k (x_k - x_i)/|x_k - x_i|^2. Throws CollisionError when any
/// pairwise distance falls below dmin.
inline std::vector<Vec2> accelerations(const BodySet& bodies, double dmin = 1e-12) {
    const std::size_t count = bodies.size();
    std::vector<Vec2> acc(count, Vec2{});
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t k = 0; k < count; ++k) {
            if (k == i) continue;
            const Vec2 d = bodies.positions[k] - bodies.positions[i];
            const double d2 = d.norm2();
            if (d2 < dmin * dmin) throw CollisionError(i, k, std::sqrt(d2));
            acc[i] += (bodies.masses[k] / d2) * d;
        }
    }
    return acc;
}

/// Force-balance defect of the ring equilibrium: max over bodies of
/// |a_j + w^2 x_j| (the central body contributes |a_n|, its position being
/// the origin of the rotation).
inline double re_residual(const RingParams& params) {
    const BodySet b = re_configuration(params, 0.0);
    const std::vector<Vec2> acc = accelerations(b);
    const double w2 = params.omega * params.omega;
    double worst = 0.0;
    for (int j = 0; j < params.n; ++j)
        worst = std::max(worst, (acc[j] + w2 * b.positions[j]).norm());
    if (params.has_central) worst = std::max(worst, acc.back().norm());
    return worst;
}

}  // namespace logring
