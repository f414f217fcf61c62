#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qnet/rng.hpp"

namespace qnet {

struct Link {
    int control;
    int target;
    double probability;
};

struct NoiseSpec {
    double epsilon = 0.0; // multiplier interval [1-eps, 1+eps]
    std::uint64_t seed = 0;
};

// Which qubit pairs interact, and with what probability. Probabilities
// always sum to one; each ordered (control, target) pair appears at most
// once and control != target.
class InteractionGraph {
public:
    static constexpr int kDefaultMaxQubits = 16;

    InteractionGraph(int n_qubits, std::vector<Link> links,
                     int max_qubits = kDefaultMaxQubits)
        : n_qubits_(n_qubits), links_(std::move(links)) {
        validate(max_qubits);
    }

    int n_qubits() const { return n_qubits_; }
    const std::vector<Link>& links() const { return links_; }

    double min_probability() const {
        double m = 2.0;
        for (const auto& l : links_) m = std::min(m, l.probability);
        return m;
    }

    // All N(N-1) ordered pairs present iff the topology is complete.
    bool is_complete() const {
        if (static_cast<long>(links_.size()) !=
            static_cast<long>(n_qubits_) * (n_qubits_ - 1))
            return false;
        std::vector<char> seen(static_cast<std::size_t>(n_qubits_) * n_qubits_, 0);
        for (const auto& l : links_)
            seen[static_cast<std::size_t>(l.control) * n_qubits_ + l.target] = 1;
        for (int c = 0; c < n_qubits_; ++c)
            for (int t = 0; t < n_qubits_; ++t)
                if (c != t && !seen[static_cast<std::size_t>(c) * n_qubits_ + t])
                    return false;
        return true;
    }

private:
    void validate(int max_qubits) const {
        if (n_qubits_ < 2)
            throw std::invalid_argument("InteractionGraph: need at least 2 qubits");
        if (n_qubits_ > max_qubits)
            throw std::invalid_argument("InteractionGraph: qubit count " +
                                        std::to_string(n_qubits_) +
                                        " exceeds ceiling " + std::to_string(max_qubits));
        std::vector<char> seen(static_cast<std::size_t>(n_qubits_) * n_qubits_, 0);
        double sum = 0.0;
        for (const auto& l : links_) {
            if (l.control < 0 || l.control >= n_qubits_ || l.target < 0 ||
                l.target >= n_qubits_)
                throw std::invalid_argument("InteractionGraph: link index out of range");
            if (l.control == l.target)
                throw std::invalid_argument("InteractionGraph: control equals target");
            auto idx = static_cast<std::size_t>(l.control) * n_qubits_ + l.target;
            if (seen[idx])
                throw std::invalid_argument("InteractionGraph: duplicate ordered pair");
            seen[idx] = 1;
            if (l.probability < 0.0)
                throw std::invalid_argument("InteractionGraph: negative probability");
            sum += l.probability;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw std::invalid_argument("InteractionGraph: probabilities sum to " +
                                        std::to_string(sum) + ", expected 1");
    }

    int n_qubits_;
    std::vector<Link> links_;
};

// Fully connected topology, all N(N-1) ordered pairs equally weighted.
inline InteractionGraph make_complete(int n) {
    if (n < 2) throw std::invalid_argument("make_complete: N must be >= 2");
    std::vector<Link> links;
    links.reserve(static_cast<std::size_t>(n) * (n - 1));
    const double p = 1.0 / (static_cast<double>(n) * (n - 1));
    for (int c = 0; c < n; ++c)
        for (int t = 0; t < n; ++t)
            if (c != t) links.push_back({c, t, p});
    return InteractionGraph(n, std::move(links));
}

// Oriented cycle i -> i+1 (mod N), uniform weights. With both_orientations
// the reversed links are added as well (2N links, still uniform).
inline InteractionGraph make_cycle(int n, bool both_orientations = false) {
    if (n < 3) throw std::invalid_argument("make_cycle: N must be >= 3");
    std::vector<Link> links;
    const int m = both_orientations ? 2 * n : n;
    const double p = 1.0 / m;
    for (int i = 0; i < n; ++i) {
        links.push_back({i, (i + 1) % n, p});
        if (both_orientations) links.push_back({(i + 1) % n, i, p});
    }
    return InteractionGraph(n, std::move(links));
}

// Oriented star: hub qubit 0 controls every other qubit.
inline InteractionGraph make_star(int n) {
    if (n < 2) throw std::invalid_argument("make_star: N must be >= 2");
    std::vector<Link> links;
    const double p = 1.0 / (n - 1);
    for (int j = 1; j < n; ++j) links.push_back({0, j, p});
    return InteractionGraph(n, std::move(links));
}

// Complete topology with very unbalanced weights: link (0 -> 1) has raw
// weight 1, every other link has raw weight N^-3; weights are then
// normalized. The minimum probability is N^-3 / (1 + (N(N-1)-1) N^-3).
inline InteractionGraph make_unbalanced(int n) {
    if (n < 3) throw std::invalid_argument("make_unbalanced: N must be >= 3");
    const double eps = 1.0 / (static_cast<double>(n) * n * n);
    const double denom = 1.0 + (static_cast<double>(n) * (n - 1) - 1.0) * eps;
    std::vector<Link> links;
    for (int c = 0; c < n; ++c)
        for (int t = 0; t < n; ++t) {
            if (c == t) continue;
            const double raw = (c == 0 && t == 1) ? 1.0 : eps;
            links.push_back({c, t, raw / denom});
        }
    return InteractionGraph(n, std::move(links));
}

// Multiply each probability by an independent uniform draw from
// [1-eps, 1+eps] (stream order = link list order), then renormalize.
inline InteractionGraph apply_noise(const InteractionGraph& g, const NoiseSpec& spec) {
    if (spec.epsilon < 0.0 || spec.epsilon > 1.0)
        throw std::invalid_argument("apply_noise: epsilon must be in [0, 1]");
    if (spec.epsilon == 0.0) return g;
    std::vector<Link> links = g.links();
    SplitMix64 rng(spec.seed);
    double sum = 0.0;
    for (auto& l : links) {
        const double u = rng.next_double(1.0 - spec.epsilon, 1.0 + spec.epsilon);
        l.probability *= u;
        sum += l.probability;
    }
    for (auto& l : links) l.probability /= sum;
    return InteractionGraph(g.n_qubits(), std::move(links));
}

} // namespace qnet
