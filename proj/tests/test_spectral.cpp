#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qnet/induced_graph.hpp"
#include "qnet/interaction_graph.hpp"
#include "qnet/spectral.hpp"

using namespace qnet;

TEST_CASE("two-qubit W-matrix spectrum at p=1/2 (dense oracle sanity)") {
    // 6x6 walk matrix of the two-qubit example; spectrum {1,-1,+-1/2 twice}
    const double p = 0.5;
    std::vector<double> w = {
        0, p, 1 - p, 0, 0, 0,
        p, 0, 0, 0, 1 - p, 0,
        1 - p, 0, 0, p, 0, 0,
        0, 0, p, 0, 0, 1 - p,
        0, 1 - p, 0, 0, 0, p,
        0, 0, 0, 1 - p, p, 0};
    auto eig = dense_symmetric_eigen(w, 6);
    const std::vector<double> expected = {-1.0, -0.5, -0.5, 0.5, 0.5, 1.0};
    for (std::size_t i = 0; i < 6; ++i)
        CHECK(eig.values[i] == Catch::Approx(expected[i]).margin(1e-12));
}

TEST_CASE("algebraic connectivity of complete N=2 is 1/2") {
    auto ig = build_induced_graph(make_complete(2));
    auto s = algebraic_connectivity(ig);
    CHECK(s.gamma == Catch::Approx(0.5).margin(1e-10));
    CHECK(s.lambda_max == Catch::Approx(1.0).margin(1e-10));
    auto d = algebraic_connectivity_dense(ig);
    CHECK(d.gamma == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("two-qubit beta_star formula") {
    for (double p : {0.1, 0.25, 0.5, 0.8}) {
        InteractionGraph g(2, {{0, 1, p}, {1, 0, 1 - p}});
        auto ig = build_induced_graph(g);
        auto s = algebraic_connectivity_dense(ig);
        const double expected = std::sqrt(1.0 - 3.0 * p + 3.0 * p * p);
        CHECK(s.beta_star == Catch::Approx(expected).margin(1e-12));
    }
}

TEST_CASE("lanczos summary matches dense oracle for N <= 8") {
    for (int n = 2; n <= 8; ++n) {
        auto ig = build_induced_graph(make_complete(n));
        auto lz = algebraic_connectivity(ig);
        auto dn = algebraic_connectivity_dense(ig);
        REQUIRE(lz.gamma == Catch::Approx(dn.gamma).margin(1e-8));
        REQUIRE(lz.lambda_min == Catch::Approx(dn.lambda_min).margin(1e-8));
        REQUIRE(std::abs(lz.lambda_max - 1.0) <= 1e-10);

        // spectrum within [-1, 1], uniform vector has Rayleigh quotient 1
        CHECK(dn.lambda_min >= -1.0 - 1e-10);
        CHECK(dn.lambda_max <= 1.0 + 1e-10);
        std::vector<double> u(ig.n_vertices, 1.0), au(ig.n_vertices);
        ig.apply(u.data(), au.data());
        double rq = 0;
        for (std::size_t i = 0; i < ig.n_vertices; ++i) rq += u[i] * au[i];
        rq /= static_cast<double>(ig.n_vertices);
        CHECK(rq == Catch::Approx(1.0).margin(1e-12));
    }
    for (int n = 3; n <= 8; ++n) {
        auto ig = build_induced_graph(make_cycle(n));
        auto lz = algebraic_connectivity(ig);
        auto dn = algebraic_connectivity_dense(ig);
        REQUIRE(lz.gamma == Catch::Approx(dn.gamma).margin(1e-8));
    }
}

TEST_CASE("gamma decreases with N for complete graphs") {
    double prev = 1e9;
    for (int n = 3; n <= 9; ++n) {
        auto g = algebraic_connectivity(build_induced_graph(make_complete(n))).gamma;
        CHECK(g < prev);
        prev = g;
    }
}

TEST_CASE("disconnected graph rejected") {
    InteractionGraph lone(3, {{0, 1, 1.0}});
    CHECK_THROWS_AS(algebraic_connectivity(build_induced_graph(lone)),
                    std::invalid_argument);
}

TEST_CASE("superoperator: N=2 subleading equals beta_star of the induced graph") {
    auto g = make_complete(2);
    const double sub = subleading_superoperator(g);
    CHECK(sub == Catch::Approx(0.5).margin(1e-10));

    auto spec = superoperator_spectrum(g);
    REQUIRE(spec.size() == 16);
    // leading eigenvalue 1, with multiplicity >= 2
    CHECK(spec.back() == Catch::Approx(1.0).margin(1e-10));
    int mult_one = 0;
    for (double v : spec)
        if (std::abs(v - 1.0) < 1e-9) ++mult_one;
    CHECK(mult_one >= 2);
}

TEST_CASE("superoperator coincidence with induced graph for N=3") {
    auto g = make_complete(3);
    const double sub = subleading_superoperator(g);
    const double gamma = algebraic_connectivity_dense(build_induced_graph(g)).gamma;
    CHECK(sub == Catch::Approx(1.0 - gamma).margin(1e-10));
}

TEST_CASE("superoperator ceiling enforced") {
    CHECK_THROWS_AS(subleading_superoperator(make_complete(7), 6), std::invalid_argument);
}
