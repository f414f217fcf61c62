#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace qnet {

// In-house symmetric eigensolver: Householder tridiagonalization followed
// by implicit-shift QL iteration. Serves as the independent oracle for
// every spectral claim, so it deliberately wraps no external library.

struct DenseEigenResult {
    std::vector<double> values;  // ascending
    std::vector<double> vectors; // column j (stride n) is the j-th eigenvector; empty unless requested
    std::size_t n = 0;

    const double* vector(std::size_t j) const { return vectors.data() + j * n; }
};

namespace detail {

// Householder reduction of the symmetric matrix held in v (row-major) to
// tridiagonal form: diagonal in d, subdiagonal in e[1..n-1]. When
// accumulate is set, v holds the orthogonal transform on exit.
inline void tred2(std::vector<double>& v, std::size_t n, std::vector<double>& d,
                  std::vector<double>& e, bool accumulate) {
    auto V = [&](std::size_t i, std::size_t j) -> double& { return v[i * n + j]; };

    for (std::size_t j = 0; j < n; ++j) d[j] = V(n - 1, j);

    for (std::size_t i = n - 1; i > 0; --i) {
        double scale = 0.0, h = 0.0;
        for (std::size_t k = 0; k < i; ++k) scale += std::abs(d[k]);
        if (scale == 0.0) {
            e[i] = d[i - 1];
            for (std::size_t j = 0; j < i; ++j) {
                d[j] = V(i - 1, j);
                V(i, j) = 0.0;
                V(j, i) = 0.0;
            }
        } else {
            for (std::size_t k = 0; k < i; ++k) {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            double f = d[i - 1];
            double g = std::sqrt(h);
            if (f > 0.0) g = -g;
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;

            for (std::size_t j = 0; j < i; ++j) {
                f = d[j];
                V(j, i) = f;
                g = e[j] + V(j, j) * f;
                for (std::size_t k = j + 1; k < i; ++k) {
                    g += V(k, j) * d[k];
                    e[k] += V(k, j) * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for (std::size_t j = 0; j < i; ++j) {
                e[j] /= h;
                f += e[j] * d[j];
            }
            const double hh = f / (h + h);
            for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
            for (std::size_t j = 0; j < i; ++j) {
                f = d[j];
                g = e[j];
                for (std::size_t k = j; k < i; ++k) V(k, j) -= (f * e[k] + g * d[k]);
                d[j] = V(i - 1, j);
                V(i, j) = 0.0;
            }
        }
        d[i] = h;
    }

    if (accumulate) {
        for (std::size_t i = 0; i + 1 < n; ++i) {
            V(n - 1, i) = V(i, i);
            V(i, i) = 1.0;
            const double h = d[i + 1];
            if (h != 0.0) {
                for (std::size_t k = 0; k <= i; ++k) d[k] = V(k, i + 1) / h;
                for (std::size_t j = 0; j <= i; ++j) {
                    double g = 0.0;
                    for (std::size_t k = 0; k <= i; ++k) g += V(k, i + 1) * V(k, j);
                    for (std::size_t k = 0; k <= i; ++k) V(k, j) -= g * d[k];
                }
            }
            for (std::size_t k = 0; k <= i; ++k) V(k, i + 1) = 0.0;
        }
        for (std::size_t j = 0; j < n; ++j) {
            d[j] = V(n - 1, j);
            V(n - 1, j) = 0.0;
        }
        V(n - 1, n - 1) = 1.0;
    } else {
        // diagonal of the tridiagonal matrix sits at V(i, i)
        for (std::size_t j = 0; j < n; ++j) d[j] = V(j, j);
    }
    e[0] = 0.0;
}

// Implicit-shift QL on the tridiagonal (d, e); if v is non-null its
// columns are rotated into eigenvectors.
inline void tql2(std::vector<double>& d, std::vector<double>& e, std::size_t n,
                 double* v, std::size_t vrows) {
    for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;

    double f = 0.0, tst1 = 0.0;
    const double eps = 2.220446049250313e-16;
    for (std::size_t l = 0; l < n; ++l) {
        tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
        std::size_t m = l;
        while (m < n && std::abs(e[m]) > eps * tst1) ++m;

        if (m > l) {
            int iter = 0;
            do {
                if (++iter > 80)
                    throw std::runtime_error("tql2: QL iteration failed to converge");
                double g = d[l];
                double p = (d[l + 1] - g) / (2.0 * e[l]);
                double r = std::hypot(p, 1.0);
                if (p < 0.0) r = -r;
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                const double dl1 = d[l + 1];
                double h = g - d[l];
                for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
                f += h;

                p = d[m];
                double c = 1.0, c2 = c, c3 = c;
                const double el1 = e[l + 1];
                double s = 0.0, s2 = 0.0;
                for (std::size_t i = m; i-- > l;) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = std::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if (v) {
                        for (std::size_t k = 0; k < vrows; ++k) {
                            h = v[k * n + i + 1];
                            v[k * n + i + 1] = s * v[k * n + i] + c * h;
                            v[k * n + i] = c * v[k * n + i] - s * h;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (std::abs(e[l]) > eps * tst1);
        }
        d[l] += f;
        e[l] = 0.0;
    }
}

} // namespace detail

// Full spectrum of a symmetric matrix (row-major, n x n), ascending.
// Throws if the input is asymmetric beyond tol or larger than the ceiling.
inline DenseEigenResult dense_symmetric_eigen(const std::vector<double>& a,
                                              std::size_t n,
                                              bool want_vectors = false,
                                              std::size_t dense_ceiling = 4096,
                                              double symmetry_tol = 1e-12) {
    if (a.size() != n * n)
        throw std::invalid_argument("dense_symmetric_eigen: size mismatch");
    if (n > dense_ceiling)
        throw std::invalid_argument("dense_symmetric_eigen: dimension exceeds ceiling");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(a[i * n + j] - a[j * n + i]) > symmetry_tol)
                throw std::invalid_argument("dense_symmetric_eigen: matrix not symmetric");

    DenseEigenResult res;
    res.n = n;
    if (n == 0) return res;
    if (n == 1) {
        res.values = {a[0]};
        if (want_vectors) res.vectors = {1.0};
        return res;
    }

    std::vector<double> z = a;
    res.values.assign(n, 0.0);
    std::vector<double> e(n, 0.0);
    detail::tred2(z, n, res.values, e, want_vectors);
    detail::tql2(res.values, e, n, want_vectors ? z.data() : nullptr, n);

    // sort ascending, permuting vectors alongside
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return res.values[i] < res.values[j]; });
    std::vector<double> vals(n);
    for (std::size_t j = 0; j < n; ++j) vals[j] = res.values[order[j]];
    res.values = std::move(vals);
    if (want_vectors) {
        res.vectors.assign(n * n, 0.0);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                res.vectors[j * n + k] = z[k * n + order[j]];
    }
    return res;
}

// Eigenvalues of a symmetric tridiagonal matrix (diag, sub), ascending.
// Used by the Lanczos solver for its Ritz values.
inline std::vector<double> tridiagonal_eigenvalues(std::vector<double> diag,
                                                   std::vector<double> sub,
                                                   std::vector<double>* last_row = nullptr) {
    const std::size_t n = diag.size();
    std::vector<double> e(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) e[i] = sub[i - 1];
    // Only the last row of the eigenvector matrix is tracked: the QL
    // rotations mix columns row-by-row, so one row can be carried alone.
    std::vector<double> v;
    double* vp = nullptr;
    if (last_row) {
        v.assign(n, 0.0);
        v[n - 1] = 1.0;
        vp = v.data();
    }
    detail::tql2(diag, e, n, vp, 1);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return diag[i] < diag[j]; });
    std::vector<double> vals(n);
    for (std::size_t j = 0; j < n; ++j) vals[j] = diag[order[j]];
    if (last_row) {
        last_row->assign(n, 0.0);
        for (std::size_t j = 0; j < n; ++j) (*last_row)[j] = v[order[j]];
    }
    return vals;
}

} // namespace qnet
