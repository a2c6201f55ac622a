#pragma once

#include <array>
#include <complex>
#include <utility>
#include <vector>

#include "logring/rational.hpp"
#include "logring/ring.hpp"

namespace logring {

using Complex = std::complex<double>;

namespace detail {

/// cos/sin of 2 pi m / n for m = 0..n-1, built with exact mirror symmetry
/// (sin[n-m] == -sin[m], cos[n-m] == cos[m]) so antisymmetric sums cancel
/// to roundoff rather than to table noise.
struct UnitCircleTable {
    std::vector<double> cos_v, sin_v;

    explicit UnitCircleTable(int n) : cos_v(n), sin_v(n) {
        cos_v[0] = 1.0;
        sin_v[0] = 0.0;
        for (int m = 1; 2 * m <= n; ++m) {
            const double th = 2.0 * std::numbers::pi * m / n;
            double c = std::cos(th);
            double s = std::sin(th);
            if (2 * m == n) { c = -1.0; s = 0.0; }
            cos_v[m] = c;
            sin_v[m] = s;
            cos_v[n - m] = c;
            sin_v[n - m] = -s;
        }
    }
};

/// 1/(4 sin^2(pi k/n)) for k = 1..n-1, mirrored exactly about k = n/2.
inline std::vector<double> inv_four_sin_sq(int n) {
    std::vector<double> v(n, 0.0);
    for (int k = 1; 2 * k <= n; ++k) {
        const double s = std::sin(std::numbers::pi * k / n);
        const double val = 1.0 / (4.0 * s * s);
        v[k] = val;
        v[n - k] = val;
    }
    return v;
}

}  // namespace detail

/// One n-th root of unity labelling a 4-dimensional invariant subspace of
/// the ring linearization.
struct ModeIndex {
    int j = 0;
    int n = 1;
    std::complex<double> rho;
};

inline ModeIndex mode_index(int n, int j) {
    if (n < 2) throw std::domain_error("mode_index: n must be >= 2");
    if (j < 0 || j >= n) throw std::domain_error("mode_index: j must lie in 0..n-1");
    const detail::UnitCircleTable t(n);
    return {j, n, {t.cos_v[j], t.sin_v[j]}};
}

/// Result of the term-by-term mode sum: its real part and the magnitude of
/// the imaginary part (which must vanish by the k <-> n-k antisymmetry).
struct CSum {
    double real = 0.0;
    double imag_abs = 0.0;
};

/// C_j evaluated brute force: (1/4) sum_{k=1}^{n-1} rho_j^k / sin^2(pi k/n),
/// accumulated in extended precision.
inline CSum c_sum_bruteforce(int n, int j) {
    if (n < 2) throw std::domain_error("c_sum_bruteforce: n must be >= 2");
    if (j < 0 || j >= n) throw std::domain_error("c_sum_bruteforce: j out of range");
    const detail::UnitCircleTable t(n);
    const std::vector<double> w = detail::inv_four_sin_sq(n);
    long double re = 0.0L, im = 0.0L;
    for (int k = 1; k < n; ++k) {
        const int m = static_cast<int>((static_cast<long long>(k) * j) % n);
        re += static_cast<long double>(t.cos_v[m]) * w[k];
        im += static_cast<long double>(t.sin_v[m]) * w[k];
    }
    return {static_cast<double>(re), std::abs(static_cast<double>(im))};
}

/// Closed form of the mode sum: C_j = (n^2 - 6nj + 6j^2 - 1)/12, exact.
inline Rational c_sum_closed(int n, int j) {
    if (n < 2) throw std::domain_error("c_sum_closed: n must be >= 2");
    if (j < 0 || j >= n) throw std::domain_error("c_sum_closed: j out of range");
    const std::int64_t nn = n, jj = j;
    return Rational(nn * nn - 6 * nn * jj + 6 * jj * jj - 1, 12);
}

/// The two trigonometric identities behind the diagonal blocks:
/// sum 1/sin^2(pi k/n) = (n^2-1)/3 and Re sum e^{i theta_k}/sin^2(pi k/n)
/// = (n-1)(n-5)/3.
inline std::pair<double, double> trig_identity_sums(int n) {
    if (n < 2) throw std::domain_error("trig_identity_sums: n must be >= 2");
    const detail::UnitCircleTable t(n);
    const std::vector<double> w = detail::inv_four_sin_sq(n);
    long double s1 = 0.0L, s2 = 0.0L;
    for (int k = 1; k < n; ++k) {
        s1 += 4.0L * w[k];
        s2 += static_cast<long double>(t.cos_v[k]) * 4.0L * w[k];
    }
    return {static_cast<double>(s1), static_cast<double>(s2)};
}

/// Diagonal-block constants of the two linearizations.
struct SpectralConstants {
    double a = 0.0;  // central case
    double b = 0.0;  // free case
};

inline double spectral_a(const RingParams& params) {
    const double w2 = params.omega * params.omega;
    const double nm1 = static_cast<double>(params.n - 1);
    return params.mu * w2 * nm1 * (params.n - 5) / (6.0 * (2.0 + params.mu * nm1));
}

inline double spectral_b(const RingParams& params) {
    const double w2 = params.omega * params.omega;
    return w2 * (params.n - 5) / 6.0;
}

inline SpectralConstants spectral_constants(int n, double mu, double r = 1.0) {
    return {spectral_a(RingParams::central(n, mu, r)),
            spectral_b(RingParams::free_ring(n, r))};
}

/// Roots of lambda^4 + A lambda^2 + B = 0 via the quadratic in y = lambda^2.
/// The larger-magnitude y root is taken from the sign-matched quadratic
/// formula and the other as B over it, so small products survive intact.
inline std::array<std::complex<double>, 4> biquadratic_roots(double A, double B) {
    using C = std::complex<double>;
    const double disc = A * A - 4.0 * B;
    C y1, y2;
    if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        const double big = (A >= 0.0) ? -0.5 * (A + sq) : -0.5 * (A - sq);
        y1 = big;
        y2 = (big != 0.0) ? B / big : 0.0;
    } else {
        const double im = 0.5 * std::sqrt(-disc);
        y1 = {-0.5 * A, im};
        y2 = {-0.5 * A, -im};
    }
    auto lam = [](C y) -> C {
        if (y.imag() == 0.0) {
            const double yr = y.real();
            return yr >= 0.0 ? C{std::sqrt(yr), 0.0} : C{0.0, std::sqrt(-yr)};
        }
        return std::sqrt(y);
    };
    const C l1 = lam(y1), l2 = lam(y2);
    return {l1, -l1, l2, -l2};
}

/// One factor of the characteristic polynomial: the biquadratic
/// lambda^4 + A lambda^2 + B of mode j, with the root sum/product/
/// discriminant bookkeeping of the y-quadratic.
struct ModeFactor {
    ModeIndex j;
    double c_sum = 0.0;  // C_j
    double A = 0.0;      // 2 w^2
    double B = 0.0;      // constant coefficient
    double delta = 0.0;  // y-quadratic discriminant, per-case form
    double S = 0.0;      // root sum  (= -A)
    double P = 0.0;      // root product (= B)
    std::array<std::complex<double>, 4> lambdas{};
};

namespace detail {

/// (j-1)(j-(n-1)) -- the integer the trig identities reduce the bracket
/// 12 C_j - (n-1)(n-5) to (divided by 6).
inline std::int64_t bracket_core(int n, int j) {
    return static_cast<std::int64_t>(j - 1) * (j - (n - 1));
}

}  // namespace detail

/// Mode factor for the ring with a central mass. The off-diagonal brackets
/// are (2 + mu u + 2 mu n d)/g in units of w^2, with u = (j-1)(j-(n-1)),
/// g = 2 + mu(n-1), and d the Kronecker delta: the first bracket carries
/// [j=1], the second [j=n-1]. For n=2 the single nontrivial mode satisfies
/// both, so both brackets pick up the delta term.
inline ModeFactor mode_factor_central(const RingParams& params, int j) {
    if (!params.has_central)
        throw std::domain_error("mode_factor_central: params must have a central mass");
    const int n = params.n;
    const double mu = params.mu;
    const double w2 = params.omega * params.omega;
    const double w4 = w2 * w2;

    const double u = static_cast<double>(detail::bracket_core(n, j));
    const double g = 2.0 + mu * (n - 1);
    const double k12 = 2.0 + mu * u + (j == 1 ? 2.0 * mu * n : 0.0);
    const double k21 = 2.0 + mu * u + (j == n - 1 ? 2.0 * mu * n : 0.0);
    const double prod = (k12 * k21) / (g * g);

    ModeFactor f;
    f.j = mode_index(n, j);
    f.c_sum = c_sum_closed(n, j).value();
    f.A = 2.0 * w2;
    f.B = w4 * (1.0 - prod);
    f.delta = w4 * prod;  // quarter-discriminant, w^4 - B
    f.S = -f.A;
    f.P = f.B;
    f.lambdas = biquadratic_roots(f.A, f.B);
    return f;
}

/// Mode factor for the free ring: both brackets equal C_j/r^2 - b, which
/// reduces to w^2 u/(n-1) with the same integer u.
inline ModeFactor mode_factor_free(const RingParams& params, int j) {
    if (params.has_central)
        throw std::domain_error("mode_factor_free: params must be the free ring");
    const int n = params.n;
    const double w2 = params.omega * params.omega;
    const double w4 = w2 * w2;

    const double q = static_cast<double>(detail::bracket_core(n, j)) / (n - 1);

    ModeFactor f;
    f.j = mode_index(n, j);
    f.c_sum = c_sum_closed(n, j).value();
    f.A = 2.0 * w2;
    f.B = w4 * (1.0 - q * q);
    f.delta = 4.0 * w4 * q * q;  // full discriminant, 4 (C_j/r^2 - b)^2
    f.S = -f.A;
    f.P = f.B;
    f.lambdas = biquadratic_roots(f.A, f.B);
    return f;
}

inline ModeFactor mode_factor(const RingParams& params, int j) {
    return params.has_central ? mode_factor_central(params, j) : mode_factor_free(params, j);
}

/// Closed-form root product P_j for the central case. Generic modes follow
/// the parabola formula, the j=1 / j=n-1 pair its own quadratic-in-mu form,
/// and n=2 the double-delta bracket of the two-body ring.
inline double product_formula_central(int n, double mu, int j, double r = 1.0) {
    if (n < 2) throw std::domain_error("product_formula_central: n must be >= 2");
    if (j < 0 || j >= n) throw std::domain_error("product_formula_central: j out of range");
    const double w2 = (1.0 + 0.5 * mu * (n - 1)) / (r * r);
    const double w4 = w2 * w2;
    const double g2 = (2.0 + mu * (n - 1)) * (2.0 + mu * (n - 1));
    if (n == 2 && j == 1)
        return -w4 * 3.0 * mu * (4.0 + 5.0 * mu) / g2;
    if (j == 1 || j == n - 1) {
        const double nm1 = static_cast<double>(n - 1);
        return w4 * mu * (mu * nm1 * nm1 - 4.0) / g2;
    }
    const double parabola = static_cast<double>(j) * j - static_cast<double>(j) * n +
                            2.0 * (n - 1);
    return w4 * mu * j * (n - j) * (mu * parabola + 4.0) / g2;
}

/// Closed-form root product for the free ring,
/// P_j = w^4 j(n-j)(j^2 - jn + 2(n-1))/(n-1)^2.
inline double product_formula_free(int n, int j, double r = 1.0) {
    if (n < 2) throw std::domain_error("product_formula_free: n must be >= 2");
    if (j < 0 || j >= n) throw std::domain_error("product_formula_free: j out of range");
    const double w2 = 0.5 * (n - 1) / (r * r);
    const double w4 = w2 * w2;
    const double nm1 = static_cast<double>(n - 1);
    const double parabola = static_cast<double>(j) * j - static_cast<double>(j) * n +
                            2.0 * (n - 1);
    return w4 * j * (n - j) * parabola / (nm1 * nm1);
}

}  // namespace logring
