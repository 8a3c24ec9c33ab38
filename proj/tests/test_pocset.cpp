#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>
#include <tuple>

#include "cubical/complex_ops.hpp"
#include "cubical/cube_window.hpp"
#include "cubical/pocset.hpp"
#include "oracles.hpp"

using namespace cubical;

namespace {

Pocset transverse_pocset(std::uint32_t n) {
    Pocset p(n);
    p.close();
    return p;
}

Pocset nested_chain(std::uint32_t n) {
    Pocset p(n);
    for (std::uint32_t i = 0; i + 1 < n; ++i)
        p.add_nesting(Halfspace::make(i, false), Halfspace::make(i + 1, false));
    p.close();
    return p;
}

// walls of a window and the dual of its pocset must agree vertex-for-vertex
// via wall signatures (vertex 0 of both carries the all-false signature)
bool isomorphic_via_signatures(const CubeWindow& a, const CubeWindow& b) {
    if (a.nv != b.nv || a.nwalls != b.nwalls || a.edges.size() != b.edges.size()) return false;
    const auto& sa = a.signatures();
    const auto& sb = b.signatures();
    std::map<Bitset, VertexId> of_b;
    for (VertexId v = 0; v < b.nv; ++v)
        if (!of_b.emplace(sb[v], v).second) return false;
    std::vector<VertexId> to_b(a.nv);
    for (VertexId v = 0; v < a.nv; ++v) {
        auto it = of_b.find(sa[v]);
        if (it == of_b.end()) return false;
        to_b[v] = it->second;
    }
    std::set<std::tuple<VertexId, VertexId, WallId>> eb;
    for (const auto& e : b.edges) {
        auto [u, v] = std::minmax(e.u, e.v);
        eb.insert({u, v, e.wall});
    }
    for (const auto& e : a.edges) {
        auto [u, v] = std::minmax(to_b[e.u], to_b[e.v]);
        if (!eb.count({u, v, e.wall})) return false;
    }
    return true;
}

} // namespace

TEST_CASE("three pairwise transverse walls give the 3-cube") {
    auto w = dual_complex(transverse_pocset(3));
    CHECK(w.nv == 8);
    CHECK(w.edges.size() == 12);
    CHECK(w.squares.size() == 6);
    CHECK(w.cubes.size() == 1);
    CHECK(w.validate().empty());
    CHECK(dimension(w) == 3);
}

TEST_CASE("nested chains dualise to combinatorial paths") {
    for (std::uint32_t n : {1u, 2u, 5u, 9u}) {
        auto w = dual_complex(nested_chain(n));
        CAPTURE(n);
        CHECK(w.nv == n + 1);
        CHECK(w.edges.size() == n);
        CHECK(w.validate().empty());
        if (n >= 1) CHECK(dimension(w) == 1);
    }
}

TEST_CASE("two transverse walls plus one facing-disjoint from both") {
    Pocset p(3);
    // wall 2's + side is disjoint from both + sides of walls 0 and 1
    p.add_nesting(Halfspace::make(2, false), Halfspace::make(0, true));
    p.add_nesting(Halfspace::make(2, false), Halfspace::make(1, true));
    p.close();
    p.require_valid();
    CHECK(p.relation(Halfspace::make(2, false), Halfspace::make(0, false)) == PairRel::FacingDisjoint);
    CHECK(p.relation(Halfspace::make(0, false), Halfspace::make(1, false)) == PairRel::Transverse);

    auto w = dual_complex(p);
    auto oracle = oracles::orientations_by_filter(p);
    CHECK(w.nv == oracle.size());
    CHECK(w.validate().empty());
}

TEST_CASE("dual vertex counts match the exhaustive orientation filter") {
    // a mixed bag of small pocsets, including randomised nesting patterns
    std::mt19937 rng(20240811);
    for (int trial = 0; trial < 40; ++trial) {
        std::uint32_t n = 2 + rng() % 5;
        Pocset p(n);
        for (std::uint32_t i = 0; i < n; ++i)
            for (std::uint32_t j = 0; j < n; ++j) {
                if (i == j || rng() % 3) continue;
                Halfspace a = Halfspace::make(i, rng() % 2);
                Halfspace b = Halfspace::make(j, rng() % 2);
                p.add_nesting(a, b);
            }
        p.close();
        if (!p.validate().empty()) continue; // random contradictions are fine, skip
        auto w = dual_complex(p);
        auto oracle = oracles::orientations_by_filter(p);
        CAPTURE(trial, n);
        REQUIRE(w.nv == oracle.size());
        CHECK(w.validate().empty()); // connected + median + partial cube
    }
}

TEST_CASE("round trip: dual of pocset_of returns the same window") {
    std::vector<CubeWindow> corpus;
    corpus.push_back(dual_complex(transverse_pocset(1)));
    corpus.push_back(dual_complex(transverse_pocset(3)));
    corpus.push_back(dual_complex(nested_chain(6)));
    {
        Pocset p(4); // two crossing pairs stacked: wall 3 above all
        p.add_nesting(Halfspace::make(0, false), Halfspace::make(3, false));
        p.add_nesting(Halfspace::make(1, false), Halfspace::make(3, false));
        p.add_nesting(Halfspace::make(2, false), Halfspace::make(3, false));
        p.close();
        corpus.push_back(dual_complex(p));
    }
    corpus.push_back(subdivide(corpus[1])); // subdivided 3-cube
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& w = corpus[i];
        auto back = dual_complex(pocset_of(w));
        CAPTURE(i);
        CHECK(isomorphic_via_signatures(w, back));
    }
}

TEST_CASE("is_median_graph agrees with the triple-by-triple definition") {
    auto cube3 = dual_complex(transverse_pocset(3));
    CHECK(is_median_graph(cube3));
    CHECK(oracles::median_by_triples(cube3.nv, oracles::edge_pairs(cube3)));

    // 6-cycle: not median
    std::vector<std::pair<VertexId, VertexId>> c6{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}};
    CHECK_FALSE(is_median_graph(6, c6));
    CHECK_FALSE(oracles::median_by_triples(6, c6));

    // single vertex
    CHECK(is_median_graph(1, {}));

    // Q3 minus a vertex: partial-cube-like but not median
    auto q3 = dual_complex(transverse_pocset(3));
    std::vector<std::pair<VertexId, VertexId>> q3m;
    for (const auto& e : q3.edges)
        if (e.u != 7 && e.v != 7) q3m.push_back({e.u, e.v});
    CHECK_FALSE(is_median_graph(7, q3m));
    CHECK_FALSE(oracles::median_by_triples(7, q3m));

    // odd cycle
    std::vector<std::pair<VertexId, VertexId>> c5{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}};
    CHECK_FALSE(is_median_graph(5, c5));
    CHECK_FALSE(oracles::median_by_triples(5, c5));

    // K_{2,3}
    std::vector<std::pair<VertexId, VertexId>> k23{{0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}};
    CHECK_FALSE(is_median_graph(5, k23));
    CHECK_FALSE(oracles::median_by_triples(5, k23));

    // random tree: always median
    std::mt19937 rng(7);
    std::vector<std::pair<VertexId, VertexId>> tree;
    for (VertexId v = 1; v < 12; ++v) tree.push_back({static_cast<VertexId>(rng() % v), v});
    CHECK(is_median_graph(12, tree));
    CHECK(oracles::median_by_triples(12, tree));

    SECTION("disconnected input is an error") {
        std::vector<std::pair<VertexId, VertexId>> disc{{0, 1}};
        CHECK_THROWS_AS(is_median_graph(3, disc), WindowError);
    }
}

TEST_CASE("dimension via clique of crossings") {
    CHECK(dimension(dual_complex(transverse_pocset(3))) == 3);
    CHECK(dimension(dual_complex(nested_chain(5))) == 1);

    // 2 transverse walls plus 1 nested above both
    Pocset p(3);
    p.add_nesting(Halfspace::make(0, false), Halfspace::make(2, false));
    p.add_nesting(Halfspace::make(1, false), Halfspace::make(2, false));
    p.close();
    auto w = dual_complex(p);
    CHECK(dimension(w) == 2);
    CHECK(dimension(w) == oracles::dimension_by_subsets(w));
}

TEST_CASE("pocset validation lists offending pairs") {
    Pocset p(2);
    p.add_nesting(Halfspace::make(0, false), Halfspace::make(1, false));
    p.add_nesting(Halfspace::make(1, false), Halfspace::make(0, false));
    p.close();
    auto bad = p.validate();
    REQUIRE_FALSE(bad.empty());
    CHECK_THROWS_AS(p.require_valid(), PocsetError);

    Pocset q(2);
    q.add_nesting(Halfspace::make(0, false), Halfspace::make(1, false));
    q.add_nesting(Halfspace::make(1, false), Halfspace::make(0, true));
    q.close(); // h0+ < h1+ < h0-: a halfspace under its own complement
    CHECK_FALSE(q.validate().empty());
}

TEST_CASE("pocset text format") {
    SECTION("parses and rebuilds") {
        std::string text = "hyperplanes 3\nH0+ < H2+\nH1+ < H2+\n";
        Pocset p = Pocset::parse(text);
        CHECK(p.wall_count() == 3);
        CHECK(p.relation(Halfspace::make(0, false), Halfspace::make(2, false)) == PairRel::FirstInsideSecond);
        Pocset q = Pocset::parse(p.format());
        CHECK(q.relation(Halfspace::make(0, false), Halfspace::make(2, false)) == PairRel::FirstInsideSecond);
    }
    SECTION("line-numbered diagnostics") {
        CHECK_THROWS_WITH(Pocset::parse("hyperplanes 2\nH0+ < H5-\n"),
                          Catch::Matchers::ContainsSubstring("line 2"));
        CHECK_THROWS_WITH(Pocset::parse("H0+ < H1-\n"), Catch::Matchers::ContainsSubstring("line 1"));
        CHECK_THROWS_WITH(Pocset::parse("hyperplanes 2\nH0+ H1-\n"),
                          Catch::Matchers::ContainsSubstring("line 2"));
        CHECK_THROWS_WITH(Pocset::parse("hyperplanes 2\nH0+ < H0-\n"),
                          Catch::Matchers::ContainsSubstring("same hyperplane"));
    }
    SECTION("contradictions rejected") {
        std::string text = "hyperplanes 2\nH0+ < H1+\nH1+ < H0-\n";
        CHECK_THROWS_AS(Pocset::parse(text), PocsetError);
    }
}

TEST_CASE("halfspace involution invariants") {
    Halfspace h = Halfspace::make(3, false);
    CHECK(h.complement().complement() == h);
    CHECK(h.complement().wall() == h.wall());
    CHECK(h.complement().minus_side() != h.minus_side());
}
