#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <stdexcept>
#include <string>
#include <vector>

#include "qnet/dense_eigen.hpp"
#include "qnet/induced_graph.hpp"
#include "qnet/interaction_graph.hpp"
#include "qnet/lanczos.hpp"
#include "qnet/spectral.hpp"

namespace qnet {

// Real symmetric density matrix on 2^N dimensions. The channel core works
// in real arithmetic: every CNOT is a real permutation and the initial
// states used here are basis projectors, so imaginary parts never appear.
struct DensityMatrix {
    std::size_t dim = 0;
    std::vector<double> data; // row-major

    double& at(std::size_t i, std::size_t j) { return data[i * dim + j]; }
    double at(std::size_t i, std::size_t j) const { return data[i * dim + j]; }

    double trace() const {
        double t = 0.0;
        for (std::size_t i = 0; i < dim; ++i) t += at(i, i);
        return t;
    }

    static DensityMatrix basis_projector(int n_qubits, BasisState s) {
        DensityMatrix rho;
        rho.dim = std::size_t{1} << n_qubits;
        if (s >= rho.dim) throw std::invalid_argument("basis_projector: state out of range");
        rho.data.assign(rho.dim * rho.dim, 0.0);
        rho.at(s, s) = 1.0;
        return rho;
    }

    static DensityMatrix maximally_mixed(int n_qubits) {
        DensityMatrix rho;
        rho.dim = std::size_t{1} << n_qubits;
        rho.data.assign(rho.dim * rho.dim, 0.0);
        for (std::size_t i = 0; i < rho.dim; ++i) rho.at(i, i) = 1.0 / static_cast<double>(rho.dim);
        return rho;
    }

    // Hermiticity / trace / positivity within the stated tolerances.
    void check_valid(double herm_tol = 1e-12, double trace_tol = 1e-12,
                     double psd_tol = 1e-10) const {
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = i + 1; j < dim; ++j)
                if (std::abs(at(i, j) - at(j, i)) > herm_tol)
                    throw std::runtime_error("DensityMatrix: not Hermitian");
        if (std::abs(trace() - 1.0) > trace_tol)
            throw std::runtime_error("DensityMatrix: trace != 1");
        auto eig = dense_symmetric_eigen(data, dim, false, dim);
        if (eig.values.front() < -psd_tol)
            throw std::runtime_error("DensityMatrix: negative eigenvalue " +
                                     std::to_string(eig.values.front()));
    }
};

// Phi(rho) = sum_i p_i U_i rho U_i, evaluated gate-by-gate as an index
// permutation of rows and columns (CNOT is a real involution).
inline DensityMatrix apply_channel(const InteractionGraph& g, const DensityMatrix& rho) {
    const std::size_t dim = std::size_t{1} << g.n_qubits();
    if (rho.dim != dim)
        throw std::invalid_argument("apply_channel: dimension mismatch");
    DensityMatrix out;
    out.dim = dim;
    out.data.assign(dim * dim, 0.0);
    for (const auto& l : g.links()) {
        const auto perm = gate_permutation(g.n_qubits(), l.control, l.target);
        for (std::size_t i = 0; i < dim; ++i) {
            const std::size_t pi = perm[i];
            for (std::size_t j = 0; j < dim; ++j)
                out.data[pi * dim + perm[j]] += l.probability * rho.data[i * dim + j];
        }
    }
    return out;
}

// sqrt(Tr (r1 - r2)^2)
inline double hs_distance(const DensityMatrix& r1, const DensityMatrix& r2) {
    if (r1.dim != r2.dim) throw std::invalid_argument("hs_distance: dimension mismatch");
    double s = 0.0;
    for (std::size_t k = 0; k < r1.data.size(); ++k) {
        const double d = r1.data[k] - r2.data[k];
        s += d * d;
    }
    return std::sqrt(s);
}

// Orthonormal basis of the unit-modulus eigenspaces of Phi.
//
// Phi is a convex combination of the pair permutations Q_i = U_i (x) U_i
// with all p_i > 0, so Phi v = +/- v forces Q_i v = +/- v for every i
// (strict convexity of the Euclidean ball). The +1 eigenspace is spanned
// by the uniform vectors of the orbits of <Q_i> on pair indices; a -1
// eigenvector exists on an orbit iff it admits a 2-coloring in which every
// generator move flips the color.
class AttractorProjection {
public:
    explicit AttractorProjection(const InteractionGraph& g) : n_(g.n_qubits()) {
        const std::uint32_t d = 1u << n_;
        dim_ = static_cast<std::size_t>(d) * d;
        std::vector<std::vector<std::uint32_t>> perms;
        for (const auto& l : g.links())
            perms.push_back(gate_permutation(n_, l.control, l.target));

        orbit_.assign(dim_, -1);
        sign_.assign(dim_, 1);
        std::deque<std::size_t> queue;
        for (std::size_t s = 0; s < dim_; ++s) {
            if (orbit_[s] >= 0) continue;
            const int id = static_cast<int>(orbit_sizes_.size());
            orbit_[s] = id;
            sign_[s] = 1;
            bool signable = true;
            std::size_t size = 0;
            queue.push_back(s);
            while (!queue.empty()) {
                const std::size_t v = queue.front();
                queue.pop_front();
                ++size;
                const std::uint32_t x = static_cast<std::uint32_t>(v / d);
                const std::uint32_t y = static_cast<std::uint32_t>(v % d);
                for (const auto& perm : perms) {
                    const std::size_t u = static_cast<std::size_t>(perm[x]) * d + perm[y];
                    if (orbit_[u] < 0) {
                        orbit_[u] = id;
                        sign_[u] = static_cast<std::int8_t>(-sign_[v]);
                        queue.push_back(u);
                    } else if (sign_[u] != -sign_[v]) {
                        signable = false;
                    }
                }
            }
            orbit_sizes_.push_back(size);
            orbit_signable_.push_back(signable);
        }
        basis_dim_ = 0;
        for (bool s : orbit_signable_) basis_dim_ += s ? 2 : 1;
    }

    std::size_t dim() const { return dim_; }
    std::size_t basis_dimension() const { return basis_dim_; }
    std::size_t n_orbits() const { return orbit_sizes_.size(); }

    // P v, the orthogonal projection onto the attractor manifold.
    std::vector<double> project(const std::vector<double>& v) const {
        check_dim(v);
        const std::size_t no = orbit_sizes_.size();
        std::vector<double> mean(no, 0.0), smean(no, 0.0);
        accumulate(v, mean, smean);
        std::vector<double> out(dim_, 0.0);
        for (std::size_t k = 0; k < dim_; ++k) {
            const auto o = static_cast<std::size_t>(orbit_[k]);
            out[k] = mean[o];
            if (orbit_signable_[o]) out[k] += sign_[k] * smean[o];
        }
        return out;
    }

    // || (I - P) v ||, without materializing the projector. The residual is
    // accumulated componentwise (not as norm^2 - projection^2, which loses
    // all precision for vectors inside the manifold).
    double distance(const std::vector<double>& v) const {
        check_dim(v);
        const std::size_t no = orbit_sizes_.size();
        std::vector<double> mean(no, 0.0), smean(no, 0.0);
        accumulate(v, mean, smean);
        double res2 = 0.0;
        for (std::size_t k = 0; k < dim_; ++k) {
            const auto o = static_cast<std::size_t>(orbit_[k]);
            double r = v[k] - mean[o];
            if (orbit_signable_[o]) r -= sign_[k] * smean[o];
            res2 += r * r;
        }
        return std::sqrt(res2);
    }

    double distance(const DensityMatrix& rho) const { return distance(rho.data); }

    // Explicit orthonormal basis vectors (for deflation and tests).
    std::vector<std::vector<double>> basis() const {
        std::vector<std::vector<double>> vecs;
        const std::size_t no = orbit_sizes_.size();
        for (std::size_t o = 0; o < no; ++o) {
            const double inv = 1.0 / std::sqrt(static_cast<double>(orbit_sizes_[o]));
            std::vector<double> u(dim_, 0.0);
            for (std::size_t k = 0; k < dim_; ++k)
                if (static_cast<std::size_t>(orbit_[k]) == o) u[k] = inv;
            vecs.push_back(std::move(u));
            if (orbit_signable_[o]) {
                std::vector<double> w(dim_, 0.0);
                for (std::size_t k = 0; k < dim_; ++k)
                    if (static_cast<std::size_t>(orbit_[k]) == o) w[k] = sign_[k] * inv;
                vecs.push_back(std::move(w));
            }
        }
        return vecs;
    }

private:
    void check_dim(const std::vector<double>& v) const {
        if (v.size() != dim_)
            throw std::invalid_argument("AttractorProjection: vector dimension mismatch");
    }

    void accumulate(const std::vector<double>& v, std::vector<double>& mean,
                    std::vector<double>& smean) const {
        for (std::size_t k = 0; k < dim_; ++k) {
            const auto o = static_cast<std::size_t>(orbit_[k]);
            mean[o] += v[k];
            smean[o] += sign_[k] * v[k];
        }
        for (std::size_t o = 0; o < mean.size(); ++o) {
            mean[o] /= static_cast<double>(orbit_sizes_[o]);
            smean[o] /= static_cast<double>(orbit_sizes_[o]);
        }
    }

    int n_;
    std::size_t dim_ = 0;
    std::size_t basis_dim_ = 0;
    std::vector<int> orbit_;
    std::vector<std::int8_t> sign_;
    std::vector<std::size_t> orbit_sizes_;
    std::vector<bool> orbit_signable_;
};

inline AttractorProjection attractor_projection(const InteractionGraph& g,
                                                int max_qubits = 8) {
    if (g.n_qubits() > max_qubits)
        throw std::invalid_argument("attractor_projection: N exceeds ceiling");
    return AttractorProjection(g);
}

// Subleading eigenvalue of Phi: largest magnitude in the orthogonal
// complement of the attractor manifold, via Lanczos on the sparse
// superoperator with the attractor basis deflated.
inline double channel_beta_star(const InteractionGraph& g, const AttractorProjection& proj,
                                const LanczosConfig& cfg = {}) {
    SparseSuperoperator phi(g);
    MatVec apply = [&phi](const double* x, double* y) { phi.apply(x, y); };
    const auto deflate = proj.basis();
    auto top = lanczos_extreme(apply, phi.dim(), Extreme::Largest, deflate, cfg);
    auto bottom = lanczos_extreme(apply, phi.dim(), Extreme::Smallest, deflate, cfg);
    return std::max(std::abs(top.value), std::abs(bottom.value));
}

struct TrajectoryPoint {
    int step;
    double distance;
    double bound;
};

struct Trajectory {
    std::string initial_label;
    double beta_star = 0.0;
    std::vector<TrajectoryPoint> points;
};

// Iterate the channel, recording the distance to the attractor manifold
// and the (beta_star)^n bound curve at every step. Validity of the state
// (trace, Hermiticity, positivity) is checked at each step when requested.
inline Trajectory trajectory(const InteractionGraph& g, const DensityMatrix& rho0,
                             int steps, const AttractorProjection& proj,
                             double beta_star, bool validate_states = false) {
    if (steps < 1) throw std::invalid_argument("trajectory: steps must be >= 1");
    Trajectory tr;
    tr.beta_star = beta_star;
    DensityMatrix rho = rho0;
    const double d0 = proj.distance(rho);
    tr.points.push_back({0, d0, d0});
    for (int n = 1; n <= steps; ++n) {
        rho = apply_channel(g, rho);
        if (validate_states) rho.check_valid(1e-12, 1e-12, 1e-10);
        tr.points.push_back({n, proj.distance(rho), std::pow(beta_star, n) * d0});
    }
    return tr;
}

} // namespace qnet
