#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "qnet/dense_eigen.hpp"
#include "qnet/gf2.hpp"

namespace qnet {

namespace detail {

using GF2Key = std::array<std::uint64_t, 4>;

inline GF2Key pack_key(const GF2Matrix& m) {
    GF2Key k{};
    for (int i = 0; i < m.n; ++i)
        k[static_cast<std::size_t>(i) / 4] |=
            static_cast<std::uint64_t>(m.rows[static_cast<std::size_t>(i)]) << (16 * (i % 4));
    return k;
}

struct GF2KeyHash {
    std::size_t operator()(const GF2Key& k) const {
        std::uint64_t h = 1469598103934665603ULL;
        for (auto w : k) {
            h ^= w;
            h *= 1099511628211ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

} // namespace detail

// The finite group generated by a set of GF(2) gate matrices, with a
// left-multiplication action table. Element 0 is the identity; the rest
// follow BFS discovery order, which makes the ordering deterministic.
struct GroupTable {
    std::vector<GF2Matrix> elements;
    std::vector<GF2Matrix> generators;
    std::vector<std::uint32_t> action; // action[e * n_gen + i] = index of gen_i * element_e
    std::size_t identity_index = 0;

    std::size_t order() const { return elements.size(); }
    std::size_t n_generators() const { return generators.size(); }

    std::uint32_t act(std::size_t element, std::size_t gen) const {
        return action[element * generators.size() + gen];
    }
};

class GroupCapExceeded : public std::runtime_error {
public:
    explicit GroupCapExceeded(std::size_t cap)
        : std::runtime_error("generate_group: element cap " + std::to_string(cap) +
                             " exceeded") {}
};

// BFS closure under left multiplication by the generators.
inline GroupTable generate_group(const std::vector<GF2Matrix>& generators,
                                 std::size_t cap = 1000000) {
    if (generators.empty())
        throw std::invalid_argument("generate_group: no generators");
    const int n = generators.front().n;
    for (const auto& g : generators) {
        if (g.n != n) throw std::invalid_argument("generate_group: mixed dimensions");
        if (!gf2_invertible(g))
            throw std::invalid_argument("generate_group: generator not invertible");
    }

    GroupTable gt;
    gt.generators = generators;
    std::unordered_map<detail::GF2Key, std::uint32_t, detail::GF2KeyHash> index;

    const GF2Matrix id = gf2_identity(n);
    gt.elements.push_back(id);
    index.emplace(detail::pack_key(id), 0);

    std::deque<std::uint32_t> queue{0};
    while (!queue.empty()) {
        const std::uint32_t e = queue.front();
        queue.pop_front();
        for (const auto& g : generators) {
            const GF2Matrix prod = gf2_mul(g, gt.elements[e]);
            const auto key = detail::pack_key(prod);
            auto it = index.find(key);
            if (it == index.end()) {
                if (gt.elements.size() >= cap) throw GroupCapExceeded(cap);
                const auto idx = static_cast<std::uint32_t>(gt.elements.size());
                gt.elements.push_back(prod);
                index.emplace(key, idx);
                queue.push_back(idx);
            }
        }
    }

    // action table in a second pass, over the final element list
    const std::size_t ng = generators.size();
    gt.action.assign(gt.elements.size() * ng, 0);
    for (std::size_t e = 0; e < gt.elements.size(); ++e)
        for (std::size_t i = 0; i < ng; ++i) {
            const auto key = detail::pack_key(gf2_mul(generators[i], gt.elements[e]));
            gt.action[e * ng + i] = index.at(key);
        }
    return gt;
}

// Stochastic matrix of the multiplicative random process on the group:
// W[a,b] = sum_i p_i [g_a = U_i g_b]. The probabilities are always kept;
// the dense matrix is materialized only up to dense_cap elements (at N=4
// the group already has 20160 elements).
struct WalkMatrix {
    std::size_t m = 0;
    std::vector<double> probabilities;
    std::vector<double> dense; // row-major m x m, empty above dense_cap

    double at(std::size_t a, std::size_t b) const { return dense[a * m + b]; }
};

inline WalkMatrix build_walk_matrix(const GroupTable& gt,
                                    const std::vector<double>& probabilities,
                                    std::size_t dense_cap = 4096) {
    if (probabilities.size() != gt.n_generators())
        throw std::invalid_argument("build_walk_matrix: probability list misaligned");
    double sum = 0.0;
    for (double p : probabilities) sum += p;
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("build_walk_matrix: probabilities must sum to 1");

    WalkMatrix w;
    w.m = gt.order();
    w.probabilities = probabilities;
    if (w.m <= dense_cap) {
        w.dense.assign(w.m * w.m, 0.0);
        for (std::size_t b = 0; b < w.m; ++b)
            for (std::size_t i = 0; i < probabilities.size(); ++i)
                w.dense[static_cast<std::size_t>(gt.act(b, i)) * w.m + b] += probabilities[i];
        // involutive generators make W symmetric; verify
        for (std::size_t a = 0; a < w.m; ++a)
            for (std::size_t b = a + 1; b < w.m; ++b)
                if (w.dense[a * w.m + b] != w.dense[b * w.m + a])
                    throw std::runtime_error("build_walk_matrix: W not symmetric");
    }
    return w;
}

struct WalkSpectrum {
    std::vector<double> values;  // ascending
    std::vector<double> vectors; // column j = eigenvector j (stride m)
    std::size_t m = 0;
};

inline WalkSpectrum walk_spectrum(const WalkMatrix& w) {
    if (w.dense.empty())
        throw std::invalid_argument("walk_spectrum: dense W not materialized (group too large)");
    auto eig = dense_symmetric_eigen(w.dense, w.m, true, w.m);
    return {std::move(eig.values), std::move(eig.vectors), w.m};
}

// One step of the MRP: k'[U_i g] += p_i k[g]; this is W applied through
// the action table, no dense matrix needed.
inline void walk_step(const GroupTable& gt, const std::vector<double>& probs,
                      const std::vector<double>& k, std::vector<double>& out) {
    out.assign(k.size(), 0.0);
    const std::size_t ng = gt.n_generators();
    for (std::size_t e = 0; e < k.size(); ++e) {
        if (k[e] == 0.0) continue;
        for (std::size_t i = 0; i < ng; ++i) out[gt.act(e, i)] += probs[i] * k[e];
    }
}

// Tr(phi^n) via the group expansion: propagate the identity-concentrated
// distribution n steps and weight by the element traces.
inline double trace_phi_power(const GroupTable& gt, const WalkMatrix& w, int n) {
    if (n < 0) throw std::invalid_argument("trace_phi_power: n must be >= 0");
    std::vector<double> k(gt.order(), 0.0), next;
    k[gt.identity_index] = 1.0;
    for (int step = 0; step < n; ++step) {
        walk_step(gt, w.probabilities, k, next);
        k.swap(next);
    }
    double tr = 0.0;
    for (std::size_t e = 0; e < k.size(); ++e)
        if (k[e] != 0.0)
            tr += k[e] * static_cast<double>(element_trace(gt.elements[e]));
    return tr;
}

// Cross-check route through the eigendecomposition of W:
// k_a(n) = sum_b omega_b^n <g_a|omega_b><omega_b|identity>.
inline double trace_phi_power_eig(const GroupTable& gt, const WalkMatrix& w,
                                  const WalkSpectrum& spec, int n) {
    const std::size_t m = w.m;
    double tr = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
        double ka = 0.0;
        for (std::size_t b = 0; b < m; ++b) {
            const double* vb = spec.vectors.data() + b * m;
            ka += std::pow(spec.values[b], n) * vb[a] * vb[gt.identity_index];
        }
        tr += ka * static_cast<double>(element_trace(gt.elements[a]));
    }
    return tr;
}

struct BipartitenessReport {
    bool bipartite = false;
    std::vector<int> parity; // 0/1 labels when bipartite, empty otherwise
};

// 2-coloring of the walk graph (edges g <-> U_i g over generators with
// nonzero probability).
inline BipartitenessReport bipartiteness_check(const GroupTable& gt, const WalkMatrix& w) {
    std::vector<int> color(gt.order(), -1);
    std::deque<std::uint32_t> queue;
    color[gt.identity_index] = 0;
    queue.push_back(static_cast<std::uint32_t>(gt.identity_index));
    const std::size_t ng = gt.n_generators();
    while (!queue.empty()) {
        const std::uint32_t e = queue.front();
        queue.pop_front();
        for (std::size_t i = 0; i < ng; ++i) {
            if (w.probabilities[i] == 0.0) continue;
            const std::uint32_t f = gt.act(e, i);
            if (color[f] < 0) {
                color[f] = 1 - color[e];
                queue.push_back(f);
            } else if (color[f] == color[e]) {
                return {false, {}};
            }
        }
    }
    // Walk graph is connected (the group is generated by the generators),
    // so every element is colored at this point.
    return {true, std::move(color)};
}

// All CNOT gates of an interaction-graph link list, as GF(2) matrices.
inline std::vector<GF2Matrix> cnot_generators(int n, const std::vector<std::pair<int, int>>& links) {
    std::vector<GF2Matrix> gens;
    gens.reserve(links.size());
    for (auto [c, t] : links) gens.push_back(cnot_gf2(c, t, n));
    return gens;
}

} // namespace qnet
