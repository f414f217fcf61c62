#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qnet/interaction_graph.hpp"

namespace qnet {

// Basis states are N-bit masks: bit j holds qubit j's excitation.
using BasisState = std::uint32_t;

// Flip the target bit iff the control bit is set. Involution, bijective.
inline BasisState apply_cnot(BasisState state, int control, int target) {
    return state ^ (((state >> control) & 1u) << target);
}

inline BasisState apply_cnot_checked(BasisState state, int control, int target, int n) {
    if (control < 0 || control >= n || target < 0 || target >= n)
        throw std::invalid_argument("apply_cnot: qubit index out of range");
    if (control == target)
        throw std::invalid_argument("apply_cnot: control equals target");
    return apply_cnot(state, control, target);
}

// Render a basis state as a ket string, qubit 0 leftmost.
inline std::string state_label(BasisState s, int n) {
    std::string out(static_cast<std::size_t>(n), '0');
    for (int j = 0; j < n; ++j)
        if ((s >> j) & 1u) out[static_cast<std::size_t>(j)] = '1';
    return out;
}

inline BasisState state_from_label(const std::string& label) {
    BasisState s = 0;
    for (std::size_t j = 0; j < label.size(); ++j) {
        if (label[j] == '1') s |= (1u << j);
        else if (label[j] != '0')
            throw std::invalid_argument("state label must be a 0/1 string");
    }
    return s;
}

// Weighted graph on computational basis states induced by the channel:
// every gate contributes its probability either to the edge {x, U x} or,
// when x is fixed, to the loop at x. With the zero state dropped the
// vertices are the masks 1 .. 2^N - 1 (vertex v <-> mask v + 1).
//
// Stored as CSR with the loop weight kept separately per row; every row
// sum (off-diagonal + loop) equals one.
class InducedGraph {
public:
    int n_qubits = 0;
    bool zero_dropped = true;
    std::size_t n_vertices = 0;
    std::vector<std::size_t> row_ptr;
    std::vector<std::uint32_t> col_idx; // vertex ids
    std::vector<double> weight;
    std::vector<double> loop;

    BasisState mask_of(std::uint32_t vertex) const {
        return zero_dropped ? vertex + 1 : vertex;
    }

    double row_sum(std::uint32_t v) const {
        double s = loop[v];
        for (std::size_t k = row_ptr[v]; k < row_ptr[v + 1]; ++k) s += weight[k];
        return s;
    }

    // y = A x, loops included.
    void apply(const double* x, double* y) const {
        for (std::uint32_t v = 0; v < n_vertices; ++v) {
            double acc = loop[v] * x[v];
            for (std::size_t k = row_ptr[v]; k < row_ptr[v + 1]; ++k)
                acc += weight[k] * x[col_idx[k]];
            y[v] = acc;
        }
    }

    // Dense copy of the adjacency (loops on the diagonal); for oracles.
    std::vector<double> dense() const {
        std::vector<double> a(n_vertices * n_vertices, 0.0);
        for (std::uint32_t v = 0; v < n_vertices; ++v) {
            a[static_cast<std::size_t>(v) * n_vertices + v] = loop[v];
            for (std::size_t k = row_ptr[v]; k < row_ptr[v + 1]; ++k)
                a[static_cast<std::size_t>(v) * n_vertices + col_idx[k]] = weight[k];
        }
        return a;
    }

    // Edge-list export: "u v w" per line, loops as self-edges, each
    // undirected edge emitted once (u <= v).
    void write_edge_list(std::ostream& os) const {
        for (std::uint32_t v = 0; v < n_vertices; ++v) {
            if (loop[v] != 0.0)
                os << v << ' ' << v << ' ' << loop[v] << '\n';
            for (std::size_t k = row_ptr[v]; k < row_ptr[v + 1]; ++k)
                if (v <= col_idx[k])
                    os << v << ' ' << col_idx[k] << ' ' << weight[k] << '\n';
        }
    }
};

inline InducedGraph build_induced_graph(const InteractionGraph& g,
                                        bool drop_zero_vertex = true) {
    const int n = g.n_qubits();
    const std::size_t dim = std::size_t{1} << n;
    InducedGraph ig;
    ig.n_qubits = n;
    ig.zero_dropped = drop_zero_vertex;
    ig.n_vertices = drop_zero_vertex ? dim - 1 : dim;

    // Off-diagonal neighbors differ in exactly one bit (the target bit of
    // some gate), so each row has at most N candidate neighbors.
    ig.row_ptr.assign(ig.n_vertices + 1, 0);
    ig.loop.assign(ig.n_vertices, 0.0);

    std::vector<std::uint32_t> cols;
    std::vector<double> wts;
    cols.reserve(ig.n_vertices * static_cast<std::size_t>(n));
    wts.reserve(ig.n_vertices * static_cast<std::size_t>(n));

    // Per-row accumulation keyed by target bit.
    std::vector<double> acc(static_cast<std::size_t>(n));
    for (std::uint32_t v = 0; v < ig.n_vertices; ++v) {
        const BasisState x = ig.mask_of(v);
        std::fill(acc.begin(), acc.end(), 0.0);
        double lp = 0.0;
        for (const auto& l : g.links()) {
            const BasisState y = apply_cnot(x, l.control, l.target);
            if (y == x) lp += l.probability;
            else acc[static_cast<std::size_t>(l.target)] += l.probability;
        }
        ig.loop[v] = lp;
        for (int b = 0; b < n; ++b) {
            if (acc[static_cast<std::size_t>(b)] == 0.0) continue;
            const BasisState y = x ^ (1u << b);
            // y is never 0 here: CNOT fixes the zero state.
            cols.push_back(drop_zero_vertex ? y - 1 : y);
            wts.push_back(acc[static_cast<std::size_t>(b)]);
        }
        ig.row_ptr[v + 1] = cols.size();
    }
    ig.col_idx = std::move(cols);
    ig.weight = std::move(wts);

    // Symmetry is structural (the same gate set is summed from both
    // endpoints in the same order); assert it rather than averaging.
    for (std::uint32_t v = 0; v < ig.n_vertices; ++v) {
        for (std::size_t k = ig.row_ptr[v]; k < ig.row_ptr[v + 1]; ++k) {
            const std::uint32_t u = ig.col_idx[k];
            if (u < v) continue;
            double back = 0.0;
            bool found = false;
            for (std::size_t k2 = ig.row_ptr[u]; k2 < ig.row_ptr[u + 1]; ++k2)
                if (ig.col_idx[k2] == v) { back = ig.weight[k2]; found = true; }
            if (!found || std::abs(back - ig.weight[k]) > 1e-15)
                throw std::runtime_error("build_induced_graph: asymmetric assembly");
        }
    }
    return ig;
}

struct ConnectivityReport {
    bool connected = false;
    int n_components = 0;
    std::vector<int> component; // label per vertex
};

inline ConnectivityReport connectivity_check(const InducedGraph& ig) {
    ConnectivityReport rep;
    rep.component.assign(ig.n_vertices, -1);
    std::deque<std::uint32_t> queue;
    for (std::uint32_t s = 0; s < ig.n_vertices; ++s) {
        if (rep.component[s] >= 0) continue;
        const int label = rep.n_components++;
        rep.component[s] = label;
        queue.push_back(s);
        while (!queue.empty()) {
            const std::uint32_t v = queue.front();
            queue.pop_front();
            for (std::size_t k = ig.row_ptr[v]; k < ig.row_ptr[v + 1]; ++k) {
                const std::uint32_t u = ig.col_idx[k];
                if (rep.component[u] < 0) {
                    rep.component[u] = label;
                    queue.push_back(u);
                }
            }
        }
    }
    rep.connected = (rep.n_components == 1) && ig.n_vertices > 0;
    return rep;
}

// Exact diameter of the loop-stripped unweighted skeleton, by BFS from
// every vertex.
inline int unweighted_diameter(const InducedGraph& ig) {
    const auto rep = connectivity_check(ig);
    if (!rep.connected) {
        // name one unreachable pair for the error message
        std::uint32_t a = 0, b = 0;
        for (std::uint32_t v = 1; v < ig.n_vertices; ++v)
            if (rep.component[v] != rep.component[0]) { b = v; break; }
        throw std::runtime_error(
            "unweighted_diameter: graph disconnected (vertices " +
            std::to_string(a) + " and " + std::to_string(b) + " unreachable)");
    }
    const std::uint32_t nv = static_cast<std::uint32_t>(ig.n_vertices);
    int diam = 0;
    std::vector<int> dist(nv);
    std::vector<std::uint32_t> frontier;
    frontier.reserve(nv);
    for (std::uint32_t s = 0; s < nv; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[s] = 0;
        frontier.clear();
        frontier.push_back(s);
        std::size_t head = 0;
        int far = 0;
        while (head < frontier.size()) {
            const std::uint32_t v = frontier[head++];
            for (std::size_t k = ig.row_ptr[v]; k < ig.row_ptr[v + 1]; ++k) {
                const std::uint32_t u = ig.col_idx[k];
                if (dist[u] < 0) {
                    dist[u] = dist[v] + 1;
                    far = std::max(far, dist[u]);
                    frontier.push_back(u);
                }
            }
        }
        diam = std::max(diam, far);
    }
    return diam;
}

} // namespace qnet
