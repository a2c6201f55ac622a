#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "logring/rational.hpp"
#include "logring/spectral.hpp"

namespace logring {

enum class StabilityStatus { SpectrallyStable, Degenerate, Unstable };

inline const char* to_string(StabilityStatus s) {
    switch (s) {
        case StabilityStatus::SpectrallyStable: return "spectrally_stable";
        case StabilityStatus::Degenerate: return "degenerate";
        case StabilityStatus::Unstable: return "unstable";
    }
    return "unknown";
}

/// Verdict of the spectral classifier. The two zero eigenvalues of mode 0
/// (the rotation / rescaling family) are always set aside.
struct StabilityVerdict {
    StabilityStatus status = StabilityStatus::Unstable;
    double max_re_lambda = 0.0;
    std::optional<int> witness_mode;
    int trivial_zeros_excluded = 2;
    std::vector<double> per_mode_P;
    std::vector<ModeFactor> factors;
};

/// Classify from the mode factors. With S_j = -2w^2 < 0 and Delta_j >= 0,
/// spectral stability is equivalent to P_j > 0 for every nontrivial mode;
/// the sign tests use tolerances tied to the natural scales w^4 and w.
inline StabilityVerdict classify_spectral(const RingParams& params) {
    params.validate();
    const int n = params.n;
    const double w4 = std::pow(params.omega, 4);
    const double tolP = 1e-9 * w4;
    const double tolRe = 1e-9 * params.omega;

    StabilityVerdict v;
    v.per_mode_P.reserve(n);
    v.factors.reserve(n);
    for (int j = 0; j < n; ++j) {
        v.factors.push_back(mode_factor(params, j));
        v.per_mode_P.push_back(v.factors.back().P);
    }

    double max_re = 0.0;
    std::optional<int> re_witness;
    for (int j = 0; j < n; ++j) {
        for (const auto& lam : v.factors[j].lambdas) {
            if (lam.real() > max_re) {
                max_re = lam.real();
                re_witness = j;
            }
        }
    }
    v.max_re_lambda = max_re;

    bool any_negative = false, any_zero = false;
    int neg_witness = -1, zero_witness = -1;
    double most_negative = 0.0, smallest_abs = 0.0;
    for (int j = 1; j < n; ++j) {
        const double P = v.per_mode_P[j];
        if (P < -tolP && (!any_negative || P < most_negative)) {
            any_negative = true;
            most_negative = P;
            neg_witness = j;
        }
        if (std::abs(P) <= tolP && (!any_zero || std::abs(P) < smallest_abs)) {
            any_zero = true;
            smallest_abs = std::abs(P);
            zero_witness = j;
        }
    }

    // A negative product forces a real pair; the Re-lambda clause also
    // catches any off-axis root. Near-zero products take precedence so that
    // boundary parameters classify as degenerate rather than as spurious
    // sqrt-of-roundoff instabilities.
    if (any_negative || (!any_zero && max_re > tolRe)) {
        v.status = StabilityStatus::Unstable;
        v.witness_mode = re_witness ? re_witness : std::optional<int>(neg_witness);
    } else if (any_zero) {
        v.status = StabilityStatus::Degenerate;
        v.witness_mode = zero_witness;
    } else {
        v.status = StabilityStatus::SpectrallyStable;
        v.witness_mode.reset();
    }
    return v;
}

/// Admissible mass-ratio interval of the main stability theorem.
struct MuBounds {
    enum class Kind { Empty, Point, OpenUnit, Closed };

    int n = 0;
    Kind kind = Kind::Empty;
    std::optional<Rational> lower;
    std::optional<Rational> upper;  // exclusive for OpenUnit, inclusive otherwise

    bool contains(double mu) const {
        switch (kind) {
            case Kind::Empty: return false;
            case Kind::Point: return mu == upper->value();
            case Kind::OpenUnit: return mu >= lower->value() && mu < 1.0;
            case Kind::Closed: return mu >= lower->value() && mu <= upper->value();
        }
        return false;
    }

    const char* label() const {
        switch (kind) {
            case Kind::Empty: return "unstable";
            case Kind::Point: return "point";
            case Kind::OpenUnit: return "open-unit";
            case Kind::Closed: return n % 2 == 0 ? "even" : "odd";
        }
        return "unknown";
    }

    /// Finite endpoints of the interval, for boundary-distance bookkeeping.
    std::vector<double> boundary_points() const {
        switch (kind) {
            case Kind::Empty: return {};
            case Kind::Point: return {upper->value()};
            case Kind::OpenUnit: return {lower->value(), 1.0};
            case Kind::Closed: return {lower->value(), upper->value()};
        }
        return {};
    }
};

/// Theorem intervals: empty for n=2; the point mu=1 for n=3;
/// [4/(n-1)^2, 1) for 4 <= n <= 9; [4/(n-1)^2, 16/(n^2-8n+8)] for even
/// n >= 10 and [4/(n-1)^2, 16/((n-1)(n-7))] for odd n >= 11.
inline MuBounds theorem_bounds(int n) {
    if (n < 2) throw std::domain_error("theorem_bounds: n must be >= 2");
    MuBounds b;
    b.n = n;
    if (n == 2) {
        b.kind = MuBounds::Kind::Empty;
        return b;
    }
    if (n == 3) {
        b.kind = MuBounds::Kind::Point;
        b.lower = Rational(1);
        b.upper = Rational(1);
        return b;
    }
    const std::int64_t nn = n;
    b.lower = Rational(4, (nn - 1) * (nn - 1));
    if (n <= 9) {
        b.kind = MuBounds::Kind::OpenUnit;
        b.upper = Rational(1);
    } else if (n % 2 == 0) {
        b.kind = MuBounds::Kind::Closed;
        b.upper = Rational(16, nn * nn - 8 * nn + 8);
    } else {
        b.kind = MuBounds::Kind::Closed;
        b.upper = Rational(16, (nn - 1) * (nn - 7));
    }
    return b;
}

/// The theorem's verdict verbatim: stable iff mu lies in the interval
/// (central case), or iff n <= 6 (free case).
inline StabilityStatus classify_theorem(int n, double mu, bool free_ring = false) {
    if (n < 2) throw std::domain_error("classify_theorem: n must be >= 2");
    if (free_ring)
        return n <= 6 ? StabilityStatus::SpectrallyStable : StabilityStatus::Unstable;
    if (mu <= 0.0) throw std::domain_error("classify_theorem: mu must be positive");
    return theorem_bounds(n).contains(mu) ? StabilityStatus::SpectrallyStable
                                          : StabilityStatus::Unstable;
}

struct CrossCheckEntry {
    double mu = 0.0;
    StabilityStatus spectral = StabilityStatus::Unstable;
    StabilityStatus theorem = StabilityStatus::Unstable;
    double boundary_distance = 0.0;
    bool interior = false;  // true means a genuine failure
};

/// Comparison of the two independent classifiers over a mu grid.
/// Disagreements at theorem-boundary points are expected (the spectrum is
/// degenerate there); interior disagreements are failures.
struct CrossCheckReport {
    int n = 0;
    std::vector<CrossCheckEntry> disagreements;
    int interior_failures = 0;
    int boundary_reconciliations = 0;
};

inline CrossCheckReport cross_check(int n, std::span<const double> mu_grid,
                                    double boundary_tol = 1e-9) {
    CrossCheckReport rep;
    rep.n = n;
    const MuBounds bounds = theorem_bounds(n);
    const std::vector<double> edges = bounds.boundary_points();
    for (const double mu : mu_grid) {
        const RingParams params = RingParams::central(n, mu);
        const StabilityStatus s = classify_spectral(params).status;
        const StabilityStatus t = classify_theorem(n, mu);
        if (s == t) continue;
        CrossCheckEntry e;
        e.mu = mu;
        e.spectral = s;
        e.theorem = t;
        e.boundary_distance = std::numeric_limits<double>::infinity();
        for (const double edge : edges)
            e.boundary_distance = std::min(e.boundary_distance, std::abs(mu - edge));
        e.interior = e.boundary_distance > boundary_tol;
        if (e.interior)
            ++rep.interior_failures;
        else
            ++rep.boundary_reconciliations;
        rep.disagreements.push_back(e);
    }
    return rep;
}

}  // namespace logring
