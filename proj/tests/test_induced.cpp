#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <sstream>

#include "qnet/induced_graph.hpp"
#include "qnet/rng.hpp"

using namespace qnet;

TEST_CASE("apply_cnot truth table") {
    // |10> means qubit 0 excited (bit 0 set)
    CHECK(apply_cnot(0b01, 0, 1) == 0b11); // |10> -> |11>
    CHECK(apply_cnot(0b10, 0, 1) == 0b10); // |01> unchanged, control unexcited
    CHECK(state_label(0b01, 2) == "10");
    CHECK(state_from_label("10") == 0b01u);

    CHECK_THROWS_AS(apply_cnot_checked(0, 0, 2, 2), std::invalid_argument);
    CHECK_THROWS_AS(apply_cnot_checked(0, 1, 1, 2), std::invalid_argument);
}

TEST_CASE("apply_cnot involution and bijection on random pairs") {
    SplitMix64 rng(2024);
    const int n = 10;
    for (int trial = 0; trial < 10000; ++trial) {
        const BasisState s = static_cast<BasisState>(rng.next() & ((1u << n) - 1));
        const int c = static_cast<int>(rng.next() % n);
        int t = static_cast<int>(rng.next() % (n - 1));
        if (t >= c) ++t;
        REQUIRE(apply_cnot(apply_cnot(s, c, t), c, t) == s);
    }
    // bijection: each gate permutes the basis states
    for (int c = 0; c < 3; ++c)
        for (int t = 0; t < 3; ++t) {
            if (c == t) continue;
            std::vector<char> hit(8, 0);
            for (BasisState s = 0; s < 8; ++s) hit[apply_cnot(s, c, t)] = 1;
            for (char h : hit) CHECK(h == 1);
        }
}

TEST_CASE("two-qubit induced graph by hand") {
    // gates (0->1) and (1->0), p = 1/2 each; vertices |10>,|01>,|11>
    auto ig = build_induced_graph(make_complete(2));
    REQUIRE(ig.n_vertices == 3);

    // |01> = mask 2 (qubit 1 excited) -> vertex 1: gate (0->1) fixes it
    // (loop 1/2), gate (1->0) sends it to |11> (edge 1/2)
    const std::uint32_t v01 = 0b10 - 1;
    CHECK(ig.loop[v01] == 0.5);
    REQUIRE(ig.row_ptr[v01 + 1] - ig.row_ptr[v01] == 1);
    CHECK(ig.col_idx[ig.row_ptr[v01]] == 0b11u - 1);
    CHECK(ig.weight[ig.row_ptr[v01]] == 0.5);

    // |11> has no loop: both gates move it
    CHECK(ig.loop[0b11 - 1] == 0.0);

    for (std::uint32_t v = 0; v < ig.n_vertices; ++v)
        CHECK(std::abs(ig.row_sum(v) - 1.0) <= 1e-12);
}

TEST_CASE("row sums are one for all constructed graphs") {
    for (int n = 2; n <= 8; ++n) {
        for (auto ig : {build_induced_graph(make_complete(n))}) {
            for (std::uint32_t v = 0; v < ig.n_vertices; ++v)
                REQUIRE(std::abs(ig.row_sum(v) - 1.0) <= 1e-12);
        }
    }
    for (int n = 3; n <= 8; ++n) {
        auto ig = build_induced_graph(make_cycle(n));
        for (std::uint32_t v = 0; v < ig.n_vertices; ++v)
            REQUIRE(std::abs(ig.row_sum(v) - 1.0) <= 1e-12);
        auto st = build_induced_graph(make_star(n));
        for (std::uint32_t v = 0; v < st.n_vertices; ++v)
            REQUIRE(std::abs(st.row_sum(v) - 1.0) <= 1e-12);
    }
}

TEST_CASE("complete-topology skeleton equals hypercube minus zero") {
    for (int n = 2; n <= 10; ++n) {
        auto ig = build_induced_graph(make_complete(n));
        for (std::uint32_t v = 0; v < ig.n_vertices; ++v) {
            const BasisState x = ig.mask_of(v);
            std::set<BasisState> expected;
            for (int b = 0; b < n; ++b) {
                const BasisState y = x ^ (1u << b);
                if (y != 0) expected.insert(y);
            }
            std::set<BasisState> got;
            for (std::size_t k = ig.row_ptr[v]; k < ig.row_ptr[v + 1]; ++k)
                got.insert(ig.mask_of(ig.col_idx[k]));
            REQUIRE(got == expected);
        }
    }
}

TEST_CASE("off-diagonal edges connect single-bit-flip states only") {
    for (auto g : {make_star(4), make_cycle(5), make_unbalanced(4)}) {
        auto ig = build_induced_graph(g);
        for (std::uint32_t v = 0; v < ig.n_vertices; ++v)
            for (std::size_t k = ig.row_ptr[v]; k < ig.row_ptr[v + 1]; ++k) {
                const BasisState x = ig.mask_of(v);
                const BasisState y = ig.mask_of(ig.col_idx[k]);
                REQUIRE(__builtin_popcount(x ^ y) == 1);
            }
    }
}

TEST_CASE("star topology: equal-excitation vertices never adjacent") {
    auto ig = build_induced_graph(make_star(4));
    for (std::uint32_t v = 0; v < ig.n_vertices; ++v)
        for (std::size_t k = ig.row_ptr[v]; k < ig.row_ptr[v + 1]; ++k) {
            const int ex = __builtin_popcount(ig.mask_of(v));
            const int ey = __builtin_popcount(ig.mask_of(ig.col_idx[k]));
            CHECK(ex != ey);
        }
}

TEST_CASE("diameter") {
    CHECK(unweighted_diameter(build_induced_graph(make_complete(2))) == 2);
    CHECK(unweighted_diameter(build_induced_graph(make_complete(4))) == 4);
    CHECK(unweighted_diameter(build_induced_graph(make_cycle(4))) == 6);
    CHECK(unweighted_diameter(build_induced_graph(make_cycle(5))) == 8);
}

TEST_CASE("connectivity") {
    auto rep = connectivity_check(build_induced_graph(make_complete(3)));
    CHECK(rep.connected);
    CHECK(rep.n_components == 1);

    // keeping the zero vertex leaves it isolated: two components
    auto full = connectivity_check(build_induced_graph(make_complete(3), false));
    CHECK_FALSE(full.connected);
    CHECK(full.n_components == 2);

    // the oriented star disconnects: any state with the hub unexcited is
    // fixed by every gate, so those 2^(N-1) - 1 vertices are isolated and
    // the hub-excited states form one component
    auto star = connectivity_check(build_induced_graph(make_star(4)));
    CHECK_FALSE(star.connected);
    CHECK(star.n_components == 8);

    // a disconnected interaction graph (single link among 3 qubits)
    // also disconnects
    InteractionGraph lone(3, {{0, 1, 1.0}});
    auto rep2 = connectivity_check(build_induced_graph(lone));
    CHECK_FALSE(rep2.connected);
    CHECK_THROWS_WITH(unweighted_diameter(build_induced_graph(lone)),
                      Catch::Matchers::ContainsSubstring("disconnected"));
}

TEST_CASE("edge list export") {
    auto ig = build_induced_graph(make_complete(2));
    std::ostringstream os;
    ig.write_edge_list(os);
    // 2 loops + 2 edges
    int lines = 0;
    std::istringstream is(os.str());
    std::string line;
    while (std::getline(is, line)) ++lines;
    CHECK(lines == 4);
}
