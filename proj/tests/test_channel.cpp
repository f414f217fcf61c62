#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qnet/channel.hpp"
#include "qnet/rng.hpp"

using namespace qnet;

namespace {

// dense-gate oracle: sum_i p_i U_i rho U_i^T with explicit matrices
DensityMatrix apply_channel_dense(const InteractionGraph& g, const DensityMatrix& rho) {
    const std::size_t dim = std::size_t{1} << g.n_qubits();
    DensityMatrix out;
    out.dim = dim;
    out.data.assign(dim * dim, 0.0);
    for (const auto& l : g.links()) {
        std::vector<double> u(dim * dim, 0.0);
        for (std::size_t x = 0; x < dim; ++x)
            u[apply_cnot(static_cast<BasisState>(x), l.control, l.target) * dim + x] = 1.0;
        std::vector<double> tmp(dim * dim, 0.0);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t k = 0; k < dim; ++k) {
                if (u[i * dim + k] == 0.0) continue;
                for (std::size_t j = 0; j < dim; ++j)
                    tmp[i * dim + j] += rho.data[k * dim + j];
            }
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j)
                for (std::size_t k = 0; k < dim; ++k)
                    out.data[i * dim + j] += l.probability * tmp[i * dim + k] * u[j * dim + k];
    }
    return out;
}

DensityMatrix random_density(int n_qubits, std::uint64_t seed) {
    const std::size_t dim = std::size_t{1} << n_qubits;
    SplitMix64 rng(seed);
    // random PSD matrix B B^T, normalized to unit trace
    std::vector<double> b(dim * dim);
    for (auto& x : b) x = rng.next_double(-1.0, 1.0);
    DensityMatrix rho;
    rho.dim = dim;
    rho.data.assign(dim * dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
            double s = 0;
            for (std::size_t k = 0; k < dim; ++k) s += b[i * dim + k] * b[j * dim + k];
            rho.data[i * dim + j] = s;
        }
    const double tr = rho.trace();
    for (auto& x : rho.data) x /= tr;
    return rho;
}

} // namespace

TEST_CASE("apply_channel basics") {
    auto g = make_complete(2);

    SECTION("maximally mixed state is fixed") {
        auto rho = DensityMatrix::maximally_mixed(2);
        auto out = apply_channel(g, rho);
        CHECK(hs_distance(out, rho) <= 1e-15);
    }

    SECTION("hand evaluation of |10><10|") {
        auto rho = DensityMatrix::basis_projector(2, state_from_label("10"));
        auto out = apply_channel(g, rho);
        CHECK(out.at(state_from_label("11"), state_from_label("11")) == 0.5);
        CHECK(out.at(state_from_label("10"), state_from_label("10")) == 0.5);
        CHECK(out.trace() == Catch::Approx(1.0).margin(1e-14));
    }

    SECTION("trace preserved on random states") {
        for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
            auto rho = random_density(3, seed);
            auto out = apply_channel(make_complete(3), rho);
            CHECK(out.trace() == Catch::Approx(rho.trace()).margin(1e-14));
        }
    }

    SECTION("dimension mismatch rejected") {
        CHECK_THROWS_AS(apply_channel(make_complete(3), DensityMatrix::maximally_mixed(2)),
                        std::invalid_argument);
    }
}

TEST_CASE("apply_channel agrees with dense-gate conjugation for N <= 4") {
    for (int n = 2; n <= 4; ++n) {
        auto g = make_complete(n);
        auto rho = random_density(n, 99 + static_cast<std::uint64_t>(n));
        auto fast = apply_channel(g, rho);
        auto slow = apply_channel_dense(g, rho);
        REQUIRE(hs_distance(fast, slow) <= 1e-12);
    }
}

TEST_CASE("hs_distance metric axioms") {
    auto a = random_density(3, 11);
    CHECK(hs_distance(a, a) == 0.0);

    auto p00 = DensityMatrix::basis_projector(2, state_from_label("00"));
    auto p11 = DensityMatrix::basis_projector(2, state_from_label("11"));
    CHECK(hs_distance(p00, p11) == Catch::Approx(std::sqrt(2.0)).margin(1e-14));

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto x = random_density(3, 3 * seed);
        auto y = random_density(3, 3 * seed + 1);
        auto z = random_density(3, 3 * seed + 2);
        CHECK(hs_distance(x, y) == Catch::Approx(hs_distance(y, x)).margin(1e-14));
        CHECK(hs_distance(x, z) <= hs_distance(x, y) + hs_distance(y, z) + 1e-13);
        if (seed > 0) CHECK(hs_distance(x, y) > 0.0);
    }
}

TEST_CASE("attractor projection matches dense eigendecomposition at small N") {
    for (int n = 2; n <= 3; ++n) {
        auto g = make_complete(n);
        AttractorProjection proj(g);

        SparseSuperoperator phi(g);
        auto eig = dense_symmetric_eigen(phi.dense(), phi.dim(), true, phi.dim());
        std::size_t unit_dim = 0;
        for (double v : eig.values)
            if (std::abs(std::abs(v) - 1.0) < 1e-9) ++unit_dim;
        REQUIRE(proj.basis_dimension() == unit_dim);

        // every unit-modulus eigenvector is fixed by the projector
        SplitMix64 rng(5);
        std::vector<double> v(phi.dim());
        for (std::size_t k = 0; k < phi.dim(); ++k) {
            if (std::abs(std::abs(eig.values[k]) - 1.0) >= 1e-9) continue;
            for (std::size_t i = 0; i < phi.dim(); ++i) v[i] = eig.vector(k)[i];
            auto pv = proj.project(v);
            double diff = 0;
            for (std::size_t i = 0; i < phi.dim(); ++i)
                diff += (pv[i] - v[i]) * (pv[i] - v[i]);
            REQUIRE(std::sqrt(diff) < 1e-9);
        }
    }
}

TEST_CASE("projector idempotent and basis eigen-consistent") {
    auto g = make_complete(3);
    AttractorProjection proj(g);
    SparseSuperoperator phi(g);

    SplitMix64 rng(17);
    std::vector<double> v(proj.dim());
    for (auto& x : v) x = rng.next_double(-1.0, 1.0);
    auto pv = proj.project(v);
    auto ppv = proj.project(pv);
    double diff = 0;
    for (std::size_t i = 0; i < v.size(); ++i) diff += (ppv[i] - pv[i]) * (ppv[i] - pv[i]);
    CHECK(std::sqrt(diff) < 1e-10);

    // Phi maps every basis vector to +-itself within 1e-9
    std::vector<double> av(proj.dim());
    for (const auto& b : proj.basis()) {
        phi.apply(b.data(), av.data());
        double plus = 0, minus = 0;
        for (std::size_t i = 0; i < b.size(); ++i) {
            plus += (av[i] - b[i]) * (av[i] - b[i]);
            minus += (av[i] + b[i]) * (av[i] + b[i]);
        }
        REQUIRE(std::min(std::sqrt(plus), std::sqrt(minus)) < 1e-9);
    }

    // distance agrees with the explicit (I-P)v norm
    double d2 = 0;
    for (std::size_t i = 0; i < v.size(); ++i) d2 += (v[i] - pv[i]) * (v[i] - pv[i]);
    CHECK(proj.distance(v) == Catch::Approx(std::sqrt(d2)).margin(1e-10));
}

TEST_CASE("two-qubit attractor dimensions") {
    // lambda=1 eigenspace of the reduced map phi has dimension 2; the
    // superoperator attractor manifold is correspondingly larger
    auto g = make_complete(2);
    const std::size_t dim = 4;
    std::vector<double> phi_small(dim * dim, 0.0);
    for (const auto& l : g.links())
        for (std::size_t x = 0; x < dim; ++x)
            phi_small[apply_cnot(static_cast<BasisState>(x), l.control, l.target) * dim + x] +=
                l.probability;
    auto eig = dense_symmetric_eigen(phi_small, dim);
    int mult = 0;
    for (double v : eig.values)
        if (std::abs(v - 1.0) < 1e-12) ++mult;
    CHECK(mult == 2);
}

TEST_CASE("trajectory") {
    auto g = make_complete(3);
    AttractorProjection proj(g);
    LanczosConfig cfg;
    const double beta = channel_beta_star(g, proj, cfg);

    SECTION("beta_star consistent with the induced-graph route") {
        auto gamma = algebraic_connectivity_dense(build_induced_graph(g)).gamma;
        CHECK(beta == Catch::Approx(1.0 - gamma).margin(1e-9));
    }

    SECTION("distance under the bound, validity preserved") {
        auto rho0 = DensityMatrix::basis_projector(3, state_from_label("100"));
        auto tr = trajectory(g, rho0, 30, proj, beta, true);
        REQUIRE(tr.points.size() == 31);
        double prev = 1e300;
        for (const auto& pt : tr.points) {
            CHECK(pt.distance <= pt.bound + 1e-9);
            CHECK(pt.distance <= prev + 1e-12);
            prev = pt.distance;
        }
    }

    SECTION("state already in the manifold stays flat") {
        auto rho0 = DensityMatrix::maximally_mixed(3);
        auto tr = trajectory(g, rho0, 10, proj, beta);
        for (const auto& pt : tr.points) CHECK(pt.distance <= 1e-9);
    }
}
