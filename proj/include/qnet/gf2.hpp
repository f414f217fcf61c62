#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>

namespace qnet {

// N x N bit matrix over GF(2), rows bit-packed (column j = bit j), N <= 16.
// CNOT gates are transvections: identity plus a single off-diagonal 1.
struct GF2Matrix {
    int n = 0;
    std::array<std::uint16_t, 16> rows{};

    bool operator==(const GF2Matrix& o) const {
        if (n != o.n) return false;
        for (int i = 0; i < n; ++i)
            if (rows[static_cast<std::size_t>(i)] != o.rows[static_cast<std::size_t>(i)]) return false;
        return true;
    }

    // v -> M v on bit vectors (component j = bit j)
    std::uint16_t apply(std::uint16_t v) const {
        std::uint16_t out = 0;
        for (int i = 0; i < n; ++i)
            out |= static_cast<std::uint16_t>(
                (__builtin_popcount(rows[static_cast<std::size_t>(i)] & v) & 1) << i);
        return out;
    }

    std::uint64_t key() const {
        std::uint64_t h = 1469598103934665603ULL;
        for (int i = 0; i < n; ++i) {
            h ^= rows[static_cast<std::size_t>(i)];
            h *= 1099511628211ULL;
        }
        return h;
    }
};

inline GF2Matrix gf2_identity(int n) {
    if (n < 1 || n > 16) throw std::invalid_argument("gf2_identity: n out of range");
    GF2Matrix m;
    m.n = n;
    for (int i = 0; i < n; ++i) m.rows[static_cast<std::size_t>(i)] = static_cast<std::uint16_t>(1u << i);
    return m;
}

// (AB).row[i] = xor of B.row[k] over set bits k of A.row[i]
inline GF2Matrix gf2_mul(const GF2Matrix& a, const GF2Matrix& b) {
    if (a.n != b.n) throw std::invalid_argument("gf2_mul: dimension mismatch");
    GF2Matrix c;
    c.n = a.n;
    for (int i = 0; i < a.n; ++i) {
        std::uint16_t acc = 0;
        std::uint16_t row = a.rows[static_cast<std::size_t>(i)];
        while (row) {
            const int k = __builtin_ctz(row);
            row &= static_cast<std::uint16_t>(row - 1);
            acc ^= b.rows[static_cast<std::size_t>(k)];
        }
        c.rows[static_cast<std::size_t>(i)] = acc;
    }
    return c;
}

// CNOT(control -> target) as a linear map on F2^N: identity with an extra
// 1 at (target, control). An involution.
inline GF2Matrix cnot_gf2(int control, int target, int n) {
    if (control < 0 || control >= n || target < 0 || target >= n)
        throw std::invalid_argument("cnot_gf2: index out of range");
    if (control == target) throw std::invalid_argument("cnot_gf2: control equals target");
    GF2Matrix m = gf2_identity(n);
    m.rows[static_cast<std::size_t>(target)] ^= static_cast<std::uint16_t>(1u << control);
    return m;
}

inline int gf2_rank(GF2Matrix m) {
    int rank = 0;
    for (int col = 0; col < m.n; ++col) {
        int pivot = -1;
        for (int r = rank; r < m.n; ++r)
            if ((m.rows[static_cast<std::size_t>(r)] >> col) & 1u) { pivot = r; break; }
        if (pivot < 0) continue;
        std::swap(m.rows[static_cast<std::size_t>(pivot)], m.rows[static_cast<std::size_t>(rank)]);
        for (int r = 0; r < m.n; ++r)
            if (r != rank && ((m.rows[static_cast<std::size_t>(r)] >> col) & 1u))
                m.rows[static_cast<std::size_t>(r)] ^= m.rows[static_cast<std::size_t>(rank)];
        ++rank;
    }
    return rank;
}

inline bool gf2_invertible(const GF2Matrix& m) { return gf2_rank(m) == m.n; }

// Trace of the corresponding permutation operator on C^(2^N): the number
// of fixed points of the linear map, 2^(N - rank(M + I)).
inline std::int64_t element_trace(const GF2Matrix& g) {
    GF2Matrix d = g;
    for (int i = 0; i < d.n; ++i)
        d.rows[static_cast<std::size_t>(i)] ^= static_cast<std::uint16_t>(1u << i);
    return std::int64_t{1} << (g.n - gf2_rank(d));
}

} // namespace qnet
