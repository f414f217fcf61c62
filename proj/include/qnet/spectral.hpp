#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qnet/dense_eigen.hpp"
#include "qnet/induced_graph.hpp"
#include "qnet/interaction_graph.hpp"
#include "qnet/lanczos.hpp"

namespace qnet {

struct SpectralSummary {
    double lambda_max = 0.0; // expected 1 for connected doubly stochastic adjacency
    double lambda_2 = 0.0;   // second-largest of A
    double lambda_min = 0.0; // most negative of A
    double gamma = 0.0;      // algebraic connectivity, 1 - lambda_2
    double beta_star = 0.0;  // max(lambda_2, |lambda_min|)
    bool positivity_violated = false; // |lambda_min| > lambda_2
    double residual_max = 0.0;
    double residual_2 = 0.0;
    double residual_min = 0.0;
    int iterations = 0;
};

// gamma = 1 - lambda_2(A), with the uniform vector (the known lambda = 1
// eigenvector of the doubly stochastic adjacency) deflated away; the most
// negative eigenvalue is computed as well so beta_star covers both ends of
// the spectrum.
inline SpectralSummary algebraic_connectivity(const InducedGraph& ig,
                                              const LanczosConfig& cfg = {}) {
    if (!connectivity_check(ig).connected)
        throw std::invalid_argument("algebraic_connectivity: induced graph disconnected");

    const std::size_t dim = ig.n_vertices;
    MatVec apply = [&ig](const double* x, double* y) { ig.apply(x, y); };

    SpectralSummary s;
    auto top = lanczos_extreme(apply, dim, Extreme::Largest, {}, cfg);
    s.lambda_max = top.value;
    s.residual_max = top.residual;

    std::vector<double> uniform(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
    auto second = lanczos_extreme(apply, dim, Extreme::Largest, {uniform}, cfg);
    s.lambda_2 = second.value;
    s.residual_2 = second.residual;

    auto bottom = lanczos_extreme(apply, dim, Extreme::Smallest, {}, cfg);
    s.lambda_min = bottom.value;
    s.residual_min = bottom.residual;

    s.iterations = top.iterations + second.iterations + bottom.iterations;
    s.gamma = 1.0 - s.lambda_2;
    s.beta_star = std::max(s.lambda_2, std::abs(s.lambda_min));
    s.positivity_violated = std::abs(s.lambda_min) > s.lambda_2;
    return s;
}

// Same quantities through the dense oracle; for cross-checks at small N.
inline SpectralSummary algebraic_connectivity_dense(const InducedGraph& ig,
                                                    std::size_t dense_ceiling = 4096) {
    if (!connectivity_check(ig).connected)
        throw std::invalid_argument("algebraic_connectivity: induced graph disconnected");
    const std::size_t dim = ig.n_vertices;
    auto eig = dense_symmetric_eigen(ig.dense(), dim, false, dense_ceiling);
    SpectralSummary s;
    s.lambda_max = eig.values[dim - 1];
    s.lambda_2 = dim >= 2 ? eig.values[dim - 2] : eig.values[0];
    s.lambda_min = eig.values[0];
    s.gamma = 1.0 - s.lambda_2;
    s.beta_star = std::max(s.lambda_2, std::abs(s.lambda_min));
    s.positivity_violated = std::abs(s.lambda_min) > s.lambda_2;
    return s;
}

// Basis-state permutation of one CNOT gate, as a lookup table.
inline std::vector<std::uint32_t> gate_permutation(int n, int control, int target) {
    const std::uint32_t dim = 1u << n;
    std::vector<std::uint32_t> perm(dim);
    for (std::uint32_t x = 0; x < dim; ++x)
        perm[x] = apply_cnot(x, control, target);
    return perm;
}

// The vectorized channel Phi = sum_i p_i U_i (x) U_i as a sparse map on
// the 4^N pair space, index (x, y) -> x * 2^N + y (row-major vec(rho)).
// Every gate is a real permutation, so Phi is symmetric and stochastic.
class SparseSuperoperator {
public:
    explicit SparseSuperoperator(const InteractionGraph& g) : n_(g.n_qubits()) {
        const std::uint32_t d = 1u << n_;
        dim_ = static_cast<std::size_t>(d) * d;
        for (const auto& l : g.links()) {
            perms_.push_back(gate_permutation(n_, l.control, l.target));
            probs_.push_back(l.probability);
        }
    }

    std::size_t dim() const { return dim_; }
    int n_qubits() const { return n_; }

    void apply(const double* x, double* y) const {
        const std::uint32_t d = 1u << n_;
        for (std::size_t i = 0; i < dim_; ++i) y[i] = 0.0;
        for (std::size_t gi = 0; gi < perms_.size(); ++gi) {
            const auto& perm = perms_[gi];
            const double p = probs_[gi];
            for (std::uint32_t a = 0; a < d; ++a) {
                const std::size_t row = static_cast<std::size_t>(perm[a]) * d;
                const std::size_t src = static_cast<std::size_t>(a) * d;
                for (std::uint32_t b = 0; b < d; ++b)
                    y[row + perm[b]] += p * x[src + b];
            }
        }
    }

    std::vector<double> dense() const {
        std::vector<double> m(dim_ * dim_, 0.0);
        const std::uint32_t d = 1u << n_;
        for (std::size_t gi = 0; gi < perms_.size(); ++gi) {
            const auto& perm = perms_[gi];
            const double p = probs_[gi];
            for (std::uint32_t a = 0; a < d; ++a)
                for (std::uint32_t b = 0; b < d; ++b) {
                    const std::size_t col = static_cast<std::size_t>(a) * d + b;
                    const std::size_t row = static_cast<std::size_t>(perm[a]) * d + perm[b];
                    m[row * dim_ + col] += p;
                }
        }
        return m;
    }

private:
    int n_;
    std::size_t dim_;
    std::vector<std::vector<std::uint32_t>> perms_;
    std::vector<double> probs_;
};

// Full spectrum of the dense 4^N superoperator (ascending).
inline std::vector<double> superoperator_spectrum(const InteractionGraph& g,
                                                  int max_qubits = 6) {
    if (g.n_qubits() > max_qubits)
        throw std::invalid_argument("superoperator_spectrum: N exceeds dense ceiling");
    SparseSuperoperator phi(g);
    return dense_symmetric_eigen(phi.dense(), phi.dim(), false, phi.dim()).values;
}

// Largest eigenvalue of Phi with modulus below 1 - 1e-9 (the subleading
// eigenvalue when it is positive), from the full dense spectrum.
inline double subleading_superoperator(const InteractionGraph& g, int max_qubits = 6) {
    auto vals = superoperator_spectrum(g, max_qubits);
    for (std::size_t k = vals.size(); k-- > 0;)
        if (std::abs(vals[k]) < 1.0 - 1e-9) return vals[k];
    throw std::runtime_error("subleading_superoperator: no eigenvalue below unit modulus");
}

} // namespace qnet
