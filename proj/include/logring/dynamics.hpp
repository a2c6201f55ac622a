#pragma once

#include <algorithm>
#include <complex>
#include <limits>
#include <optional>
#include <vector>

#include "logring/linmat.hpp"
#include "logring/ring.hpp"

namespace logring {

using PhaseState = BodySet;

struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = std::numeric_limits<double>::infinity();
    /// Sampling interval for the returned trajectory; 0 picks span/1024.
    double dense_output_stride = 0.0;
    double dmin = 1e-12;
};

struct Trajectory {
    std::vector<PhaseState> samples;
    bool collision = false;
    double collision_time = 0.0;
    bool step_underflow = false;
    double underflow_time = 0.0;

    const PhaseState& back() const { return samples.back(); }
};

/// First integrals of the logarithmic pair system.
struct ConservedQuantities {
    double energy = 0.0;            // (1/2) sum m v^2 + sum_{i<k} m_i m_k ln r_ik
    double angular_momentum = 0.0;  // sum m (x cross v)
    Vec2 linear_momentum{};
};

inline ConservedQuantities conserved(const PhaseState& state, double dmin = 1e-12) {
    ConservedQuantities q;
    const std::size_t count = state.size();
    for (std::size_t i = 0; i < count; ++i) {
        const double m = state.masses[i];
        q.energy += 0.5 * m * state.velocities[i].norm2();
        q.angular_momentum += m * state.positions[i].cross(state.velocities[i]);
        q.linear_momentum += m * state.velocities[i];
        for (std::size_t k = i + 1; k < count; ++k) {
            const double d = (state.positions[k] - state.positions[i]).norm();
            if (d < dmin) throw CollisionError(i, k, d);
            q.energy += m * state.masses[k] * std::log(d);
        }
    }
    return q;
}

namespace detail {

inline void rhs(const std::vector<double>& masses, const std::vector<double>& y,
                std::vector<double>& dy, double dmin) {
    const std::size_t count = masses.size();
    dy.assign(4 * count, 0.0);
    for (std::size_t i = 0; i < count; ++i) {
        dy[4 * i] = y[4 * i + 2];
        dy[4 * i + 1] = y[4 * i + 3];
    }
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t k = i + 1; k < count; ++k) {
            const double dx = y[4 * k] - y[4 * i];
            const double dyy = y[4 * k + 1] - y[4 * i + 1];
            const double d2 = dx * dx + dyy * dyy;
            if (d2 < dmin * dmin) throw CollisionError(i, k, std::sqrt(d2));
            const double fi = masses[k] / d2;
            const double fk = masses[i] / d2;
            dy[4 * i + 2] += fi * dx;
            dy[4 * i + 3] += fi * dyy;
            dy[4 * k + 2] -= fk * dx;
            dy[4 * k + 3] -= fk * dyy;
        }
    }
}

inline std::vector<double> pack(const PhaseState& s) {
    std::vector<double> y(4 * s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        y[4 * i] = s.positions[i].x;
        y[4 * i + 1] = s.positions[i].y;
        y[4 * i + 2] = s.velocities[i].x;
        y[4 * i + 3] = s.velocities[i].y;
    }
    return y;
}

inline PhaseState unpack(const std::vector<double>& y, const std::vector<double>& masses,
                         double t) {
    PhaseState s;
    const std::size_t count = masses.size();
    s.masses = masses;
    s.positions.resize(count);
    s.velocities.resize(count);
    s.time = t;
    for (std::size_t i = 0; i < count; ++i) {
        s.positions[i] = {y[4 * i], y[4 * i + 1]};
        s.velocities[i] = {y[4 * i + 2], y[4 * i + 3]};
    }
    return s;
}

}  // namespace detail

/// Adaptive Dormand-Prince 5(4) integration of the full nonlinear system in
/// the inertial frame, sampling at the configured stride. Terminates early
/// with a flag on collision or on step-size underflow.
inline Trajectory integrate(const PhaseState& initial, double t_final,
                            const IntegratorConfig& cfg = {}) {
    if (!(t_final > initial.time))
        throw std::domain_error("integrate: t_final must exceed the initial time");

    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    const double span = t_final - initial.time;
    const double stride =
        cfg.dense_output_stride > 0.0 ? cfg.dense_output_stride : span / 1024.0;

    Trajectory traj;
    traj.samples.push_back(initial);

    const std::vector<double> masses = initial.masses;
    std::vector<double> y = detail::pack(initial);
    const std::size_t dim = y.size();
    std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim),
        ytmp(dim), ynew(dim);

    auto combine = [&](std::vector<double>& out, double h,
                       std::initializer_list<std::pair<double, const std::vector<double>*>>
                           terms) {
        out = y;
        for (const auto& [coeff, k] : terms)
            for (std::size_t i = 0; i < dim; ++i) out[i] += h * coeff * (*k)[i];
    };

    double t = initial.time;
    double h = std::min({cfg.max_step, span / 100.0, stride});
    int next_sample = 1;

    auto tiny_at = [&](double x) {
        return 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x));
    };
    auto record_sample = [&](double sample_t) {
        if (sample_t <= t_final + tiny_at(t_final) && t >= sample_t - tiny_at(t)) {
            traj.samples.push_back(detail::unpack(y, masses, t));
            ++next_sample;
        }
    };

    try {
        detail::rhs(masses, y, k1, cfg.dmin);
        while (t < t_final - tiny_at(t_final)) {
            const double sample_t = initial.time + next_sample * stride;
            const double target = std::min(t_final, sample_t);
            const double gap = target - t;
            if (gap <= tiny_at(t)) {
                t = target;
                record_sample(sample_t);
                continue;
            }
            const double h_try = std::min(h, gap);
            const bool clamped = h_try < h;

            combine(ytmp, h_try, {{a21, &k1}});
            detail::rhs(masses, ytmp, k2, cfg.dmin);
            combine(ytmp, h_try, {{a31, &k1}, {a32, &k2}});
            detail::rhs(masses, ytmp, k3, cfg.dmin);
            combine(ytmp, h_try, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
            detail::rhs(masses, ytmp, k4, cfg.dmin);
            combine(ytmp, h_try, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
            detail::rhs(masses, ytmp, k5, cfg.dmin);
            combine(ytmp, h_try, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
            detail::rhs(masses, ytmp, k6, cfg.dmin);
            combine(ynew, h_try, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
            detail::rhs(masses, ynew, k7, cfg.dmin);

            double err = 0.0;
            for (std::size_t i = 0; i < dim; ++i) {
                const double ei = h_try * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                                           e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
                const double sc =
                    cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
                err += (ei / sc) * (ei / sc);
            }
            err = std::sqrt(err / dim);
            if (!std::isfinite(err)) err = 1e10;

            const bool accept = err <= 1.0;
            if (accept) {
                t = (h_try == gap) ? target : t + h_try;
                y.swap(ynew);
                k1.swap(k7);  // first-same-as-last
                record_sample(sample_t);
            }

            const double factor =
                std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
            const double h_ctrl = std::min(h_try * factor, cfg.max_step);
            h = (accept && clamped) ? std::max(h, h_ctrl) : h_ctrl;
            if (!accept && h_try <= tiny_at(t)) {
                traj.step_underflow = true;
                traj.underflow_time = t;
                return traj;
            }
        }
        t = t_final;
    } catch (const CollisionError&) {
        traj.collision = true;
        traj.collision_time = t;
        return traj;
    }

    if (traj.samples.back().time < t - tiny_at(t))
        traj.samples.push_back(detail::unpack(y, masses, t));
    return traj;
}

/// Positions of the exactly-rotated ring equilibrium at time t.
inline std::vector<Vec2> rotating_reference(const RingParams& params, double t) {
    const BodySet base = re_configuration(params, 0.0);
    const double c = std::cos(params.omega * t), s = std::sin(params.omega * t);
    std::vector<Vec2> out(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
        const Vec2 p = base.positions[i];
        out[i] = {c * p.x - s * p.y, s * p.x + c * p.y};
    }
    return out;
}

/// Max over bodies of the distance to the rotating reference.
inline double deviation_from_re(const PhaseState& state, const RingParams& params) {
    const std::vector<Vec2> ref = rotating_reference(params, state.time);
    double d = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i)
        d = std::max(d, (state.positions[i] - ref[i]).norm());
    return d;
}

/// Ring equilibrium displaced along one linearization mode. The doubled
/// (dw, conj dw) eigensolution is folded to a real perturbation, mapped to
/// inertial coordinates at t = 0 and scaled so the largest body
/// displacement is eps. The central body takes the counter-momentum
/// displacement dictated by the fixed centre of mass.
inline PhaseState perturb_along_mode(const RingParams& params, int j,
                                     std::complex<double> lambda, double eps) {
    params.validate();
    if (eps <= 0.0) throw std::domain_error("perturb_along_mode: eps must be positive");
    const ModeEigenpair pair = mode_eigenvector(params, j, lambda);
    if (!pair.ok)
        throw std::runtime_error("perturb_along_mode: degenerate mode eigenvector");

    const int n = params.n;
    const detail::UnitCircleTable t(n);
    const Complex iw{0.0, params.omega};

    // Inertial image (delta z_k, delta zdot_k) of the conjugacy-folded mode.
    auto image = [&](Complex phase) {
        std::vector<std::pair<Complex, Complex>> out(n);
        for (int k = 0; k < n; ++k) {
            const int idx = static_cast<int>((static_cast<long long>(k) * j) % n);
            const Complex rho{t.cos_v[idx], t.sin_v[idx]};
            const Complex dw =
                phase * rho * pair.xi[0] + std::conj(phase * rho * pair.xi[1]);
            const Complex dwdot = lambda * phase * rho * pair.xi[0] +
                                  std::conj(lambda * phase * rho * pair.xi[1]);
            const Complex e{t.cos_v[k], t.sin_v[k]};
            out[k] = {e * dw, e * (iw * dw + dwdot)};
        }
        return out;
    };

    auto max_pos = [](const std::vector<std::pair<Complex, Complex>>& img) {
        double m = 0.0;
        for (const auto& [dz, dzdot] : img) m = std::max(m, std::abs(dz));
        return m;
    };

    auto img1 = image({1.0, 0.0});
    auto img2 = image({0.0, 1.0});
    const auto& img = max_pos(img1) >= max_pos(img2) ? img1 : img2;
    const double scale_base = max_pos(img);
    if (scale_base == 0.0)
        throw std::runtime_error("perturb_along_mode: mode image has no position part");
    const double scale = eps / scale_base;

    PhaseState state = re_configuration(params, 0.0);
    Complex dz_sum{0.0, 0.0}, dv_sum{0.0, 0.0};
    for (int k = 0; k < n; ++k) {
        const Complex dz = scale * img[k].first;
        const Complex dv = scale * img[k].second;
        state.positions[k] += Vec2{dz.real(), dz.imag()};
        state.velocities[k] += Vec2{dv.real(), dv.imag()};
        dz_sum += dz;
        dv_sum += dv;
    }
    if (params.has_central) {
        const Complex dz = -params.mu * dz_sum;
        const Complex dv = -params.mu * dv_sum;
        state.positions[n] += Vec2{dz.real(), dz.imag()};
        state.velocities[n] += Vec2{dv.real(), dv.imag()};
    }
    return state;
}

struct GrowthEstimate {
    double rate = 0.0;
    double window_t0 = 0.0;
    double window_t1 = 0.0;
    double r_squared = 0.0;
    bool window_found = false;
    int samples_used = 0;
};

/// Exponential growth rate of the deviation from the rotating reference,
/// fitted on log d(t) over the linear regime 10 eps <= d <= 1000 eps.
inline GrowthEstimate growth_rate(const Trajectory& traj, const RingParams& params,
                                  double eps) {
    GrowthEstimate est;
    std::vector<double> ts, logs;
    for (const PhaseState& s : traj.samples) {
        const double d = deviation_from_re(s, params);
        if (d < 10.0 * eps) {
            if (!ts.empty()) break;  // left the regime downward, close the window
            continue;
        }
        if (d > 1000.0 * eps) break;
        ts.push_back(s.time);
        logs.push_back(std::log(d));
    }
    if (ts.size() < 5) return est;

    const double m = static_cast<double>(ts.size());
    double st = 0.0, sl = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        st += ts[i];
        sl += logs[i];
    }
    const double tbar = st / m, lbar = sl / m;
    double stt = 0.0, stl = 0.0, sll = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        stt += (ts[i] - tbar) * (ts[i] - tbar);
        stl += (ts[i] - tbar) * (logs[i] - lbar);
        sll += (logs[i] - lbar) * (logs[i] - lbar);
    }
    if (stt == 0.0 || sll == 0.0) return est;
    est.rate = stl / stt;
    est.r_squared = (stl * stl) / (stt * sll);
    est.window_t0 = ts.front();
    est.window_t1 = ts.back();
    est.samples_used = static_cast<int>(ts.size());
    est.window_found = true;
    return est;
}

}  // namespace logring
