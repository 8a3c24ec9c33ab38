#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "cubical/complex_ops.hpp"
#include "cubical/cube_window.hpp"
#include "cubical/pocset.hpp"
#include "oracles.hpp"

using namespace cubical;

namespace {

CubeWindow cube(std::uint32_t n) {
    Pocset p(n);
    p.close();
    return dual_complex(p);
}

CubeWindow path(std::uint32_t edges) {
    Pocset p(edges);
    for (std::uint32_t i = 0; i + 1 < edges; ++i)
        p.add_nesting(Halfspace::make(i, false), Halfspace::make(i + 1, false));
    p.close();
    return dual_complex(p);
}

// an m x n grid patch as the dual of two nested chains crossing each other
CubeWindow grid_patch(std::uint32_t m, std::uint32_t n) {
    Pocset p(m + n);
    for (std::uint32_t i = 0; i + 1 < m; ++i)
        p.add_nesting(Halfspace::make(i, false), Halfspace::make(i + 1, false));
    for (std::uint32_t i = 0; i + 1 < n; ++i)
        p.add_nesting(Halfspace::make(m + i, false), Halfspace::make(m + i + 1, false));
    p.close();
    return dual_complex(p);
}

Bitset verts(const CubeWindow& w, std::initializer_list<VertexId> ids) {
    Bitset b(w.nv);
    for (auto v : ids) b.set(v);
    return b;
}

} // namespace

TEST_CASE("separating hyperplanes") {
    auto q = cube(2); // a square
    REQUIRE(q.nv == 4);
    const auto& adj = q.adjacency();

    SECTION("adjacent vertices: the single edge label") {
        for (const auto& e : q.edges) {
            auto seps = separating_hyperplanes(q, e.u, e.v);
            REQUIRE(seps.size() == 1);
            CHECK(seps[0] == e.wall);
        }
    }
    SECTION("opposite corners of a square: both walls, matching the scan oracle") {
        // find the vertex opposite to 0
        VertexId opp = 0;
        for (VertexId v = 0; v < q.nv; ++v)
            if (q.distance(0, v) == 2) opp = v;
        auto seps = separating_hyperplanes(q, 0, opp);
        CHECK(seps.size() == 2);
        auto oracle = oracles::separating_by_scan(q, verts(q, {0}), verts(q, {opp}));
        CHECK(seps == oracle);
    }
    SECTION("identical singletons: empty") {
        CHECK(separating_hyperplanes(q, 0, 0).empty());
    }
    SECTION("empty input is an error") {
        CHECK_THROWS_AS(separating_hyperplanes(q, Bitset(q.nv), verts(q, {0})), WindowError);
    }
    (void)adj;
}

TEST_CASE("convex hull") {
    auto q3 = cube(3);
    SECTION("single vertex") {
        auto h = convex_hull(q3, verts(q3, {5}));
        CHECK(h.window.nv == 1);
        CHECK(h.to_parent == std::vector<VertexId>{5});
    }
    SECTION("two opposite corners span the whole cube") {
        VertexId opp = 0;
        for (VertexId v = 0; v < q3.nv; ++v)
            if (q3.distance(0, v) == 3) opp = v;
        auto hv = convex_hull_vertices(q3, verts(q3, {0, opp}));
        CHECK(hv.count() == 8);
        CHECK(hv == oracles::hull_by_median_closure(q3, verts(q3, {0, opp})));
    }
    SECTION("two adjacent vertices give the edge") {
        const auto& e = q3.edges.front();
        auto hv = convex_hull_vertices(q3, verts(q3, {e.u, e.v}));
        CHECK(hv.count() == 2);
    }
    SECTION("idempotent and monotone, against the median-closure oracle") {
        auto g = grid_patch(3, 4);
        std::mt19937 rng(99);
        for (int trial = 0; trial < 25; ++trial) {
            Bitset a(g.nv), b(g.nv);
            for (VertexId v = 0; v < g.nv; ++v) {
                if (rng() % 4 == 0) a.set(v);
                if (a.test(v) || rng() % 4 == 0) b.set(v);
            }
            if (a.none() || b.none()) continue;
            auto ha = convex_hull_vertices(g, a);
            auto hb = convex_hull_vertices(g, b);
            CHECK(convex_hull_vertices(g, ha) == ha);
            CHECK(ha.is_subset_of(hb));
            CHECK(ha == oracles::hull_by_median_closure(g, a));
            CHECK(ha == oracles::hull_by_interval_closure(g, a));
        }
    }
    SECTION("hull's walls are exactly the cutting walls") {
        auto g = grid_patch(4, 3);
        auto h = convex_hull(g, verts(g, {0, 5, 11}));
        CHECK(h.window.validate().empty());
        CHECK(h.window.nwalls == walls_cutting(g, convex_hull_vertices(g, verts(g, {0, 5, 11}))).size());
    }
}

TEST_CASE("combinatorial geodesics") {
    auto g = grid_patch(4, 5);
    SECTION("trivial path at a vertex") {
        auto p = combinatorial_geodesic(g, 3, 3);
        CHECK(p == std::vector<VertexId>{3});
    }
    SECTION("length equals the separating wall count everywhere") {
        auto d = oracles::all_pairs_dist(g.nv, oracles::edge_pairs(g));
        std::mt19937 rng(4);
        for (int trial = 0; trial < 200; ++trial) {
            VertexId u = rng() % g.nv, v = rng() % g.nv;
            auto p = combinatorial_geodesic(g, u, v);
            REQUIRE(p.size() == d[u][v] + 1);
            auto seps = separating_hyperplanes(g, verts(g, {u}), verts(g, {v}));
            CHECK(p.size() - 1 == seps.size());
            // each edge of the path crosses a distinct separating wall
            std::set<WallId> crossed;
            for (std::size_t i = 0; i + 1 < p.size(); ++i) {
                auto es = separating_hyperplanes(g, p[i], p[i + 1]);
                REQUIRE(es.size() == 1);
                crossed.insert(es[0]);
            }
            CHECK(crossed.size() == p.size() - 1);
        }
    }
    SECTION("deterministic tie-break") {
        auto q = cube(2);
        VertexId opp = 0;
        for (VertexId v = 0; v < q.nv; ++v)
            if (q.distance(0, v) == 2) opp = v;
        auto p1 = combinatorial_geodesic(q, 0, opp);
        auto p2 = combinatorial_geodesic(q, 0, opp);
        CHECK(p1 == p2);
        CHECK(p1.size() == 3);
    }
}

TEST_CASE("parallelism of convex subcomplexes") {
    auto q = cube(2);
    // the square's two edges crossing wall 0
    std::vector<std::pair<VertexId, VertexId>> wall0_edges;
    for (const auto& e : q.edges)
        if (e.wall == 0) wall0_edges.push_back({e.u, e.v});
    REQUIRE(wall0_edges.size() == 2);

    SECTION("opposite edges of a square are parallel") {
        auto r = are_parallel(q, verts(q, {wall0_edges[0].first, wall0_edges[0].second}),
                              verts(q, {wall0_edges[1].first, wall0_edges[1].second}));
        CHECK(r.parallel);
        CHECK_FALSE(r.equal);
    }
    SECTION("identical subcomplexes report equality") {
        auto a = verts(q, {wall0_edges[0].first, wall0_edges[0].second});
        auto r = are_parallel(q, a, a);
        CHECK(r.parallel);
        CHECK(r.equal);
    }
    SECTION("edge vs disjoint square: wall sets differ") {
        auto g = grid_patch(3, 2);
        // an edge crossing only wall 0, and a square far away
        Bitset sq(g.nv);
        for (const auto& s : g.squares) {
            Bitset cand(g.nv);
            for (auto v : s) cand.set(v);
            if (!cand.test(0)) { sq = cand; break; }
        }
        REQUIRE(sq.any());
        const auto& e = g.edges.front();
        auto r = are_parallel(g, verts(g, {e.u, e.v}), sq);
        CHECK_FALSE(r.parallel);
        // oracle: compare cutting-wall sets directly
        CHECK((walls_cutting(g, verts(g, {e.u, e.v})) == walls_cutting(g, sq)) == r.parallel);
    }
    SECTION("non-convex input raises with a witness triple") {
        VertexId opp = 0;
        for (VertexId v = 0; v < q.nv; ++v)
            if (q.distance(0, v) == 2) opp = v;
        CHECK_THROWS_AS(are_parallel(q, verts(q, {0, opp}), verts(q, {0})), WindowError);
    }
}

TEST_CASE("cubical subdivision") {
    SECTION("single edge becomes a path of length 2") {
        auto e = path(1);
        auto s = subdivide(e);
        CHECK(s.nv == 3);
        CHECK(s.edges.size() == 2);
        CHECK(s.nwalls == 2);
        CHECK(s.validate().empty());
    }
    SECTION("single square becomes four squares with nine vertices") {
        auto q = cube(2);
        auto s = subdivide(q);
        CHECK(s.nv == 9);
        CHECK(s.squares.size() == 4);
        CHECK(s.edges.size() == 12);
        CHECK(s.nwalls == 4);
        CHECK(s.validate().empty());
    }
    SECTION("3-cube becomes eight cubes with 27 vertices") {
        auto c = cube(3);
        auto s = subdivide(c);
        CHECK(s.nv == 27); // 8 + 12 + 6 + 1, the cell count
        CHECK(s.cubes.size() == 8);
        CHECK(s.nwalls == 6);
        CHECK(s.validate().empty());
        // direct product oracle: the subdivided 3-cube is the 3x3x3 grid
        auto g3 = [&] {
            Pocset p(6);
            p.add_nesting(Halfspace::make(0, false), Halfspace::make(1, false));
            p.add_nesting(Halfspace::make(2, false), Halfspace::make(3, false));
            p.add_nesting(Halfspace::make(4, false), Halfspace::make(5, false));
            p.close();
            return dual_complex(p);
        }();
        CHECK(g3.nv == 27);
        CHECK(g3.cubes.size() == s.cubes.size());
        CHECK(g3.edges.size() == s.edges.size());
    }
    SECTION("subdivision doubles combinatorial distances on original vertices") {
        auto g = grid_patch(3, 3);
        auto s = subdivide(g);
        REQUIRE(s.validate().empty());
        // original vertex v maps to cell-vertex v in the subdivision
        auto d0 = oracles::all_pairs_dist(g.nv, oracles::edge_pairs(g));
        auto d1 = oracles::all_pairs_dist(s.nv, oracles::edge_pairs(s));
        for (VertexId u = 0; u < g.nv; ++u)
            for (VertexId v = 0; v < g.nv; ++v)
                CHECK(d1[u][v] == 2 * d0[u][v]);
    }
}

TEST_CASE("Helly property on corpus windows") {
    auto g = grid_patch(4, 4);
    std::mt19937 rng(11);
    int tested = 0;
    for (int trial = 0; trial < 200 && tested < 60; ++trial) {
        // three random hulls
        std::array<Bitset, 3> sets;
        for (auto& s : sets) {
            Bitset seed(g.nv);
            seed.set(rng() % g.nv);
            seed.set(rng() % g.nv);
            s = convex_hull_vertices(g, seed);
        }
        bool pairwise = sets[0].intersects(sets[1]) && sets[1].intersects(sets[2]) && sets[0].intersects(sets[2]);
        if (!pairwise) continue;
        ++tested;
        Bitset triple = sets[0];
        triple &= sets[1];
        triple &= sets[2];
        CHECK(triple.any());
    }
    CHECK(tested > 0);
}

TEST_CASE("window distance equals separating wall count (partial cube identity)") {
    auto g = grid_patch(5, 3);
    auto d = oracles::all_pairs_dist(g.nv, oracles::edge_pairs(g));
    for (VertexId u = 0; u < g.nv; ++u)
        for (VertexId v = 0; v < g.nv; ++v)
            CHECK(g.distance(u, v) == d[u][v]);
}
