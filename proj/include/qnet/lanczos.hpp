#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qnet/dense_eigen.hpp"
#include "qnet/rng.hpp"

namespace qnet {

enum class Reorthogonalization { Full, Selective };

struct LanczosConfig {
    int max_iterations = 1000;
    double tolerance = 1e-10;
    Reorthogonalization reorthogonalization = Reorthogonalization::Full;
    std::uint64_t seed = 12345;

    void validate() const {
        if (tolerance <= 0.0) throw std::invalid_argument("LanczosConfig: tolerance must be > 0");
        if (max_iterations < 1) throw std::invalid_argument("LanczosConfig: max_iterations must be >= 1");
    }
};

enum class Extreme { Largest, Smallest };

struct LanczosResult {
    double value = 0.0;
    double residual = 0.0;
    int iterations = 0;
    std::vector<double> vector;
};

class LanczosError : public std::runtime_error {
public:
    LanczosError(const std::string& what, double best, double residual)
        : std::runtime_error(what), best_estimate(best), residual(residual) {}
    double best_estimate;
    double residual;
};

using MatVec = std::function<void(const double*, double*)>;

namespace detail {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

// Probabilistic symmetry check on random vectors: |<x, Ay> - <Ax, y>| must
// stay below tol relative to the vector norms.
inline void check_operator_symmetric(const MatVec& apply, std::size_t dim,
                                     std::uint64_t seed, double tol = 1e-10) {
    SplitMix64 rng(seed ^ 0x5ca1ab1eULL);
    std::vector<double> x(dim), y(dim), ax(dim), ay(dim);
    for (int trial = 0; trial < 2; ++trial) {
        for (std::size_t i = 0; i < dim; ++i) {
            x[i] = rng.next_double(-1.0, 1.0);
            y[i] = rng.next_double(-1.0, 1.0);
        }
        apply(x.data(), ax.data());
        apply(y.data(), ay.data());
        const double lhs = dot(x, ay), rhs = dot(ax, y);
        const double scale = std::max(1.0, norm(x) * norm(y));
        if (std::abs(lhs - rhs) > tol * scale)
            throw std::invalid_argument("lanczos_extreme: operator not symmetric");
    }
}

} // namespace detail

// Extreme eigenvalue of a symmetric operator restricted to the orthogonal
// complement of the (orthonormal) deflation vectors. Deterministic given
// the config seed. Throws LanczosError on non-convergence, carrying the
// best estimate.
inline LanczosResult lanczos_extreme(const MatVec& apply, std::size_t dim,
                                     Extreme which,
                                     const std::vector<std::vector<double>>& deflate,
                                     const LanczosConfig& cfg = {}) {
    cfg.validate();
    if (dim == 0) throw std::invalid_argument("lanczos_extreme: empty operator");
    detail::check_operator_symmetric(apply, dim, cfg.seed);
    for (const auto& d : deflate) {
        if (d.size() != dim)
            throw std::invalid_argument("lanczos_extreme: deflation vector dimension mismatch");
        if (std::abs(detail::norm(d) - 1.0) > 1e-8)
            throw std::invalid_argument("lanczos_extreme: deflation vectors must be orthonormal");
    }

    const int max_m = std::min<int>(cfg.max_iterations, static_cast<int>(dim));
    std::vector<std::vector<double>> basis;
    basis.reserve(static_cast<std::size_t>(max_m));
    std::vector<double> alpha, beta;

    auto project_out = [&](std::vector<double>& w) {
        for (const auto& d : deflate) {
            const double c = detail::dot(w, d);
            for (std::size_t i = 0; i < dim; ++i) w[i] -= c * d[i];
        }
    };

    // seeded random start vector in the deflated complement
    SplitMix64 rng(cfg.seed);
    std::vector<double> v(dim);
    for (auto& x : v) x = rng.next_double(-1.0, 1.0);
    project_out(v);
    {
        const double nv = detail::norm(v);
        if (nv < 1e-12)
            throw std::invalid_argument("lanczos_extreme: start vector annihilated by deflation");
        for (auto& x : v) x /= nv;
    }

    std::vector<double> w(dim);
    double best_val = 0.0, best_res = 1e300;
    std::vector<double> ritz_last;

    for (int j = 0; j < max_m; ++j) {
        basis.push_back(v);
        apply(v.data(), w.data());
        const double a = detail::dot(w, v);
        alpha.push_back(a);

        for (std::size_t i = 0; i < dim; ++i) w[i] -= a * v[i];
        if (j > 0)
            for (std::size_t i = 0; i < dim; ++i) w[i] -= beta[static_cast<std::size_t>(j) - 1] * basis[static_cast<std::size_t>(j) - 1][i];

        // Full reorthogonalization against the deflation set and the whole
        // Krylov basis (two passes).
        for (int pass = 0; pass < 2; ++pass) {
            project_out(w);
            for (const auto& q : basis) {
                const double c = detail::dot(w, q);
                for (std::size_t i = 0; i < dim; ++i) w[i] -= c * q[i];
            }
        }

        const double b = detail::norm(w);

        // Ritz estimate + residual |beta * s_last| from the tridiagonal.
        const std::size_t m = alpha.size();
        std::vector<double> last;
        auto vals = tridiagonal_eigenvalues(alpha, beta, &last);
        const std::size_t pick = (which == Extreme::Largest) ? m - 1 : 0;
        const double theta = vals[pick];
        const double resid = std::abs(b * last[pick]);
        if (resid < best_res) {
            best_res = resid;
            best_val = theta;
        }
        if (resid <= cfg.tolerance || b < 1e-14) {
            // assemble the Ritz vector from the tridiagonal eigenvector
            std::vector<double> td = alpha, te(m, 0.0);
            // recompute with full eigenvector of the small problem
            std::vector<double> tv(m * m, 0.0);
            for (std::size_t i = 0; i < m; ++i) tv[i * m + i] = 1.0;
            for (std::size_t i = 1; i < m; ++i) te[i] = beta[i - 1];
            detail::tql2(td, te, m, tv.data(), m);
            // locate the picked eigenvalue
            std::size_t best_k = 0;
            for (std::size_t k = 1; k < m; ++k) {
                const bool better = (which == Extreme::Largest) ? td[k] > td[best_k]
                                                                : td[k] < td[best_k];
                if (better) best_k = k;
            }
            LanczosResult res;
            res.value = td[best_k];
            res.residual = resid;
            res.iterations = static_cast<int>(m);
            res.vector.assign(dim, 0.0);
            for (std::size_t k = 0; k < m; ++k) {
                const double c = tv[k * m + best_k];
                for (std::size_t i = 0; i < dim; ++i) res.vector[i] += c * basis[k][i];
            }
            const double nv = detail::norm(res.vector);
            if (nv > 0.0)
                for (auto& x : res.vector) x /= nv;
            return res;
        }

        beta.push_back(b);
        for (std::size_t i = 0; i < dim; ++i) v[i] = w[i] / b;
    }

    throw LanczosError("lanczos_extreme: no convergence after " +
                           std::to_string(max_m) + " iterations (best " +
                           std::to_string(best_val) + ", residual " +
                           std::to_string(best_res) + ")",
                       best_val, best_res);
}

} // namespace qnet
