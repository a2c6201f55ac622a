#pragma once

#include <array>
#include <complex>
#include <limits>
#include <vector>

#include "logring/spectral.hpp"

namespace logring {

using Block2 = std::array<std::array<Complex, 2>, 2>;

/// Dense 4n x 4n complex linearization of the co-rotating variational
/// system, in the block layout [[0, I], [L, blockdiag(Omega)]] with L
/// block-circulant: L(j,k) = D for j = k and N_{(k-j) mod n} otherwise.
/// Assembled from the raw trigonometric block entries, deliberately not
/// reusing the reduced closed forms it is meant to check.
class LinearizationMatrix {
public:
    explicit LinearizationMatrix(const RingParams& params)
        : params_(params), n_(params.n), dim_(4 * params.n),
          entries_(static_cast<std::size_t>(dim_) * dim_, Complex{0.0, 0.0}) {
        params.validate();
        build();
    }

    int n() const { return n_; }
    int dim() const { return dim_; }
    const RingParams& params() const { return params_; }

    Complex at(int row, int col) const {
        return entries_[static_cast<std::size_t>(row) * dim_ + col];
    }

    Block2 block_D() const { return d_; }
    Block2 block_Omega() const {
        const Complex o{0.0, 2.0 * params_.omega};
        return {{{-o, 0.0}, {0.0, o}}};
    }
    /// N_k for k = 1..n-1.
    Block2 block_N(int k) const {
        return {{{0.0, n12_[k]}, {n21_[k], 0.0}}};
    }

    /// Maximum absolute row sum, the norm used by all scaled tolerances.
    double norm() const {
        double best = 0.0;
        for (int i = 0; i < dim_; ++i) {
            double s = 0.0;
            for (int k = 0; k < dim_; ++k) s += std::abs(at(i, k));
            best = std::max(best, s);
        }
        return best;
    }

    Complex trace() const {
        Complex t{0.0, 0.0};
        for (int i = 0; i < dim_; ++i) t += at(i, i);
        return t;
    }

    std::vector<Complex> apply(const std::vector<Complex>& v) const {
        std::vector<Complex> out(dim_, Complex{0.0, 0.0});
        for (int i = 0; i < dim_; ++i) {
            Complex s{0.0, 0.0};
            const Complex* row = entries_.data() + static_cast<std::size_t>(i) * dim_;
            for (int k = 0; k < dim_; ++k) s += row[k] * v[k];
            out[i] = s;
        }
        return out;
    }

private:
    void build() {
        const int n = n_;
        const double r2 = params_.r * params_.r;
        const double w2 = params_.omega * params_.omega;
        const detail::UnitCircleTable t(n);
        const std::vector<double> s = detail::inv_four_sin_sq(n);

        double dswap;
        n12_.assign(n, Complex{0.0, 0.0});
        n21_.assign(n, Complex{0.0, 0.0});
        if (params_.has_central) {
            dswap = (params_.mu + 1.0) / r2 - spectral_a(params_);
            for (int k = 1; k < n; ++k) {
                const double mu_r2 = params_.mu / r2;
                n12_[k] = mu_r2 * Complex{t.cos_v[k] + s[k], -t.sin_v[k]};
                n21_[k] = mu_r2 * Complex{t.cos_v[k] + s[k], t.sin_v[k]};
            }
        } else {
            dswap = -spectral_b(params_);
            for (int k = 1; k < n; ++k) {
                n12_[k] = Complex{s[k] / r2, 0.0};
                n21_[k] = n12_[k];
            }
        }
        d_ = {{{Complex{w2, 0.0}, Complex{dswap, 0.0}},
               {Complex{dswap, 0.0}, Complex{w2, 0.0}}}};

        auto set = [&](int row, int col, Complex val) {
            entries_[static_cast<std::size_t>(row) * dim_ + col] = val;
        };

        for (int i = 0; i < 2 * n; ++i) set(i, 2 * n + i, Complex{1.0, 0.0});
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                const Block2 blk = (j == k) ? d_ : block_N(((k - j) % n + n) % n);
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b)
                        set(2 * n + 2 * j + a, 2 * k + b, blk[a][b]);
            }
            const Complex o{0.0, 2.0 * params_.omega};
            set(2 * n + 2 * j, 2 * n + 2 * j, -o);
            set(2 * n + 2 * j + 1, 2 * n + 2 * j + 1, o);
        }
    }

    RingParams params_;
    int n_;
    int dim_;
    std::vector<Complex> entries_;
    Block2 d_{};
    std::vector<Complex> n12_, n21_;
};

inline LinearizationMatrix assemble(const RingParams& params) {
    return LinearizationMatrix(params);
}

struct DetResult {
    Complex det{0.0, 0.0};
    /// |det| divided by the product of row maxima of M - lambda I, computed
    /// in log space; 0 for an exactly singular matrix.
    double scaled_magnitude = 0.0;
};

/// det(M - lambda I) by LU with partial pivoting on a private copy.
/// A zero pivot is reported as determinant zero, not as a failure.
inline DetResult det_at(const LinearizationMatrix& m, Complex lambda) {
    const int dim = m.dim();
    std::vector<Complex> a(static_cast<std::size_t>(dim) * dim);
    for (int i = 0; i < dim; ++i)
        for (int k = 0; k < dim; ++k)
            a[static_cast<std::size_t>(i) * dim + k] =
                m.at(i, k) - (i == k ? lambda : Complex{0.0, 0.0});

    double log_row_scale = 0.0;
    for (int i = 0; i < dim; ++i) {
        double rowmax = 0.0;
        for (int k = 0; k < dim; ++k)
            rowmax = std::max(rowmax, std::abs(a[static_cast<std::size_t>(i) * dim + k]));
        if (rowmax == 0.0) return {Complex{0.0, 0.0}, 0.0};
        log_row_scale += std::log(rowmax);
    }

    auto at = [&](int i, int k) -> Complex& {
        return a[static_cast<std::size_t>(i) * dim + k];
    };
    Complex det{1.0, 0.0};
    double log_mag = 0.0;
    for (int col = 0; col < dim; ++col) {
        int pivot = col;
        double best = std::abs(at(col, col));
        for (int i = col + 1; i < dim; ++i) {
            const double v = std::abs(at(i, col));
            if (v > best) { best = v; pivot = i; }
        }
        if (best == 0.0) return {Complex{0.0, 0.0}, 0.0};
        if (pivot != col) {
            for (int k = col; k < dim; ++k) std::swap(at(pivot, k), at(col, k));
            det = -det;
        }
        const Complex p = at(col, col);
        det *= p;
        log_mag += std::log(std::abs(p));
        for (int i = col + 1; i < dim; ++i) {
            const Complex f = at(i, col) / p;
            at(i, col) = f;
            for (int k = col + 1; k < dim; ++k) at(i, k) -= f * at(col, k);
        }
    }
    return {det, std::exp(log_mag - log_row_scale)};
}

/// Eigenvector of one predicted eigenvalue, built from the roots-of-unity
/// ansatz: positions (xi, rho xi, ..., rho^{n-1} xi), velocities lambda
/// times them.
struct ModeEigenpair {
    int j = 0;
    Complex lambda{0.0, 0.0};
    std::array<Complex, 2> xi{Complex{1.0, 0.0}, Complex{0.0, 0.0}};
    std::vector<Complex> v;
    double kernel_residual = 0.0;  // ||K xi|| / ||xi|| relative to ||K||
    bool ok = true;
};

namespace detail {

/// The 2x2 per-mode matrix K(lambda) = D + sum rho^k N_k + lambda Omega
/// - lambda^2 I, evaluated from the dense blocks.
inline std::array<Complex, 4> mode_block(const LinearizationMatrix& m, int j,
                                         Complex lambda) {
    const RingParams& p = m.params();
    const int n = m.n();
    const UnitCircleTable t(n);
    const double w2 = p.omega * p.omega;
    Complex k12 = m.block_D()[0][1];
    Complex k21 = m.block_D()[1][0];
    for (int k = 1; k < n; ++k) {
        const int idx = static_cast<int>((static_cast<long long>(k) * j) % n);
        const Complex rho{t.cos_v[idx], t.sin_v[idx]};
        k12 += rho * m.block_N(k)[0][1];
        k21 += rho * m.block_N(k)[1][0];
    }
    const Complex two_iw{0.0, 2.0 * p.omega};
    const Complex k11 = w2 - two_iw * lambda - lambda * lambda;
    const Complex k22 = w2 + two_iw * lambda - lambda * lambda;
    return {k11, k12, k21, k22};
}

}  // namespace detail

inline ModeEigenpair mode_eigenvector(const LinearizationMatrix& m, int j,
                                      Complex lambda) {
    const int n = m.n();
    const auto [k11, k12, k21, k22] = detail::mode_block(m, j, lambda);

    const double knorm = std::max({std::abs(k11), std::abs(k12), std::abs(k21),
                                   std::abs(k22)});
    const std::array<Complex, 2> cand_a{k12, -k11};
    const std::array<Complex, 2> cand_b{k22, -k21};
    const double na = std::hypot(std::abs(cand_a[0]), std::abs(cand_a[1]));
    const double nb = std::hypot(std::abs(cand_b[0]), std::abs(cand_b[1]));

    ModeEigenpair pair;
    pair.j = j;
    pair.lambda = lambda;
    const double degenerate = 1e-13 * std::max(1.0, knorm);
    if (na < degenerate && nb < degenerate)
        pair.xi = {Complex{1.0, 0.0}, Complex{0.0, 0.0}};
    else
        pair.xi = (na >= nb) ? cand_a : cand_b;

    const Complex r0 = k11 * pair.xi[0] + k12 * pair.xi[1];
    const Complex r1 = k21 * pair.xi[0] + k22 * pair.xi[1];
    const double xin = std::hypot(std::abs(pair.xi[0]), std::abs(pair.xi[1]));
    pair.kernel_residual = std::hypot(std::abs(r0), std::abs(r1)) / xin;
    pair.ok = pair.kernel_residual <= 1e-8 * std::max(knorm, 1e-300);

    const detail::UnitCircleTable t(n);
    pair.v.assign(4 * n, Complex{0.0, 0.0});
    for (int k = 0; k < n; ++k) {
        const int idx = static_cast<int>((static_cast<long long>(k) * j) % n);
        const Complex rho{t.cos_v[idx], t.sin_v[idx]};
        pair.v[2 * k] = rho * pair.xi[0];
        pair.v[2 * k + 1] = rho * pair.xi[1];
        pair.v[2 * n + 2 * k] = lambda * pair.v[2 * k];
        pair.v[2 * n + 2 * k + 1] = lambda * pair.v[2 * k + 1];
    }
    return pair;
}

inline ModeEigenpair mode_eigenvector(const RingParams& params, int j, Complex lambda) {
    return mode_eigenvector(LinearizationMatrix(params), j, lambda);
}

/// ||(M - lambda I) v|| / ||v|| for a candidate eigenpair.
inline double eigenpair_residual(const LinearizationMatrix& m, const ModeEigenpair& p) {
    const std::vector<Complex> mv = m.apply(p.v);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < mv.size(); ++i) {
        num += std::norm(mv[i] - p.lambda * p.v[i]);
        den += std::norm(p.v[i]);
    }
    return std::sqrt(num / den);
}

/// Constructive verification of the whole predicted spectrum against the
/// dense matrix: eigenvector residuals, determinant magnitude at every
/// predicted root, eigenvalue-sum-equals-trace, and the conjugate-mode
/// pairing that real solutions rely on.
struct SpectrumCheckReport {
    int n = 0;
    bool central = true;
    double matrix_norm = 0.0;
    double max_residual = 0.0;        // worst ||(M - lambda)v||/||v||
    double max_det_scaled = 0.0;      // worst det_at scaled magnitude
    double trace_error = 0.0;         // |sum lambda - tr M|
    int conjugate_pair_violations = 0;
    bool pass = false;
};

inline SpectrumCheckReport full_spectrum_check(const RingParams& params) {
    const LinearizationMatrix m(params);
    SpectrumCheckReport rep;
    rep.n = params.n;
    rep.central = params.has_central;
    rep.matrix_norm = m.norm();

    std::vector<ModeFactor> factors;
    factors.reserve(params.n);
    for (int j = 0; j < params.n; ++j) factors.push_back(mode_factor(params, j));

    Complex lambda_sum{0.0, 0.0};
    for (int j = 0; j < params.n; ++j) {
        for (const Complex lam : factors[j].lambdas) {
            lambda_sum += lam;
            const ModeEigenpair pair = mode_eigenvector(m, j, lam);
            rep.max_residual = std::max(rep.max_residual, eigenpair_residual(m, pair));
            rep.max_det_scaled = std::max(rep.max_det_scaled,
                                          det_at(m, lam).scaled_magnitude);
            if (lam.real() == 0.0) {
                const auto& partner = factors[(params.n - j) % params.n].lambdas;
                double best = std::numeric_limits<double>::infinity();
                for (const Complex q : partner) best = std::min(best, std::abs(q - std::conj(lam)));
                if (best > 1e-10 * std::max(1.0, std::abs(lam)))
                    ++rep.conjugate_pair_violations;
            }
        }
    }
    rep.trace_error = std::abs(lambda_sum - m.trace());
    rep.pass = rep.max_residual <= 1e-9 * rep.matrix_norm &&
               rep.max_det_scaled <= 1e-8 &&
               rep.trace_error <= 1e-8 * rep.matrix_norm;
    return rep;
}

}  // namespace logring
