#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "cubical/backend.hpp"
#include "cubical/bs_backend.hpp"
#include "cubical/finite_complex_backend.hpp"
#include "cubical/free_group_backend.hpp"
#include "cubical/grid_backend.hpp"
#include "cubical/presentation_backend.hpp"
#include "cubical/product_backend.hpp"
#include "oracles.hpp"

using namespace cubical;

namespace {

GridBackend make_z2() {
    AffineMap a = AffineMap::identity(2), b = AffineMap::identity(2);
    a.offset = {1, 0, 0};
    b.offset = {0, 1, 0};
    return GridBackend(2, {{'a', a}, {'b', b}});
}

GridBackend make_dinf_line() {
    // two reflections of the subdivided line, fixing 0 and 1... offsets stay even
    AffineMap a = AffineMap::identity(1), b = AffineMap::identity(1);
    a.sign = {-1, 1, 1};
    b.sign = {-1, 1, 1};
    b.offset = {2, 0, 0};
    return GridBackend(1, {{'a', a}, {'b', b}});
}

// brute-force ball oracle: enumerate all words, count classes by pairwise
// equality through the backend's element keys computed on raw words
std::vector<std::uint64_t> ball_by_words(const ActionBackend& b, const std::vector<Word>& S, std::uint32_t n) {
    std::vector<Word> letters;
    for (const auto& s : S) {
        letters.push_back(s);
        letters.push_back(invert_word(s));
    }
    std::set<std::string> seen{b.element_key(Word{})};
    std::vector<Word> layer{Word{}};
    std::vector<std::uint64_t> counts{1};
    for (std::uint32_t k = 1; k <= n; ++k) {
        std::vector<Word> next;
        for (const auto& w : layer)
            for (const auto& l : letters) next.push_back(w + l);
        for (const auto& w : next) seen.insert(b.element_key(w));
        counts.push_back(seen.size());
        layer = std::move(next);
    }
    return counts;
}

void check_action_property(ActionBackend& b, const std::vector<Word>& words, std::mt19937& rng) {
    std::uint64_t base = b.base_vertex();
    for (int trial = 0; trial < 30; ++trial) {
        const Word& u = words[rng() % words.size()];
        const Word& v = words[rng() % words.size()];
        std::uint64_t x = b.vertex_image(words[rng() % words.size()], base);
        CHECK(b.vertex_image(u + v, x) == b.vertex_image(u, b.vertex_image(v, x)));
    }
}

void check_relation_symmetries(ActionBackend& b, std::uint32_t radius, std::mt19937& rng) {
    CubeWindow w = b.window(radius);
    REQUIRE(w.nwalls >= 2);
    Budget budget;
    for (int trial = 0; trial < 60; ++trial) {
        SignedWall h1{w.wall_label[rng() % w.nwalls], static_cast<bool>(rng() % 2)};
        SignedWall h2{w.wall_label[rng() % w.nwalls], static_cast<bool>(rng() % 2)};
        auto r12 = b.halfspace_relation(h1, h2, budget).verdict;
        auto r21 = b.halfspace_relation(h2, h1, budget).verdict;
        auto rcc = b.halfspace_relation(h1.opposite(), h2.opposite(), budget).verdict;
        auto r1c = b.halfspace_relation(h1, h2.opposite(), budget).verdict;
        switch (r12) {
            case HsRel::Equal:
                CHECK(r21 == HsRel::Equal);
                CHECK(rcc == HsRel::Equal);
                CHECK(r1c == HsRel::Complement);
                break;
            case HsRel::Complement:
                CHECK(r21 == HsRel::Complement);
                CHECK(rcc == HsRel::Complement);
                CHECK(r1c == HsRel::Equal);
                break;
            case HsRel::FirstInsideSecond:
                CHECK(r21 == HsRel::SecondInsideFirst);
                CHECK(rcc == HsRel::SecondInsideFirst);
                CHECK(r1c == HsRel::FacingDisjoint);
                break;
            case HsRel::SecondInsideFirst:
                CHECK(r21 == HsRel::FirstInsideSecond);
                CHECK(rcc == HsRel::FirstInsideSecond);
                CHECK(r1c == HsRel::Codisjoint);
                break;
            case HsRel::Transverse:
                CHECK(r21 == HsRel::Transverse);
                CHECK(rcc == HsRel::Transverse);
                CHECK(r1c == HsRel::Transverse);
                break;
            case HsRel::FacingDisjoint:
                CHECK(r21 == HsRel::FacingDisjoint);
                CHECK(rcc == HsRel::Codisjoint);
                CHECK(r1c == HsRel::FirstInsideSecond);
                break;
            case HsRel::Codisjoint:
                CHECK(r21 == HsRel::Codisjoint);
                CHECK(rcc == HsRel::FacingDisjoint);
                CHECK(r1c == HsRel::SecondInsideFirst);
                break;
            case HsRel::Unknown:
                break;
        }
    }
}

void check_window_convexity(ActionBackend& b, std::uint32_t radius) {
    CubeWindow small = b.window(radius);
    CubeWindow big = b.window(radius + 2);
    Bitset inside(big.nv);
    for (VertexId v = 0; v < small.nv; ++v) {
        auto lv = big.vertex_by_label(small.vertex_label[v]);
        REQUIRE(lv.has_value());
        inside.set(*lv);
    }
    CHECK(convex_hull_vertices(big, inside) == inside);
}

void check_image_equivariance(ActionBackend& b, const std::vector<Word>& words, std::uint32_t radius,
                              std::mt19937& rng) {
    CubeWindow w = b.window(radius);
    Budget budget;
    for (int trial = 0; trial < 40; ++trial) {
        SignedWall h1{w.wall_label[rng() % w.nwalls], static_cast<bool>(rng() % 2)};
        SignedWall h2{w.wall_label[rng() % w.nwalls], static_cast<bool>(rng() % 2)};
        const Word& g = words[rng() % words.size()];
        auto before = b.halfspace_relation(h1, h2, budget).verdict;
        auto after = b.halfspace_relation(b.image_halfspace(g, h1), b.image_halfspace(g, h2), budget).verdict;
        CHECK(before == after);
    }
}

} // namespace

TEST_CASE("grid backend: windows, spelling, counts") {
    auto z2 = make_z2();

    SECTION("radius-2 window is the 5x5 block over the 13-vertex l1 ball") {
        CubeWindow w = z2.window(2);
        CHECK(w.nv == 25);
        CHECK(w.edges.size() == 40);
        CHECK(w.squares.size() == 16);
        CHECK(w.validate().empty());
        std::uint32_t within = 0;
        for (VertexId v = 0; v < w.nv; ++v)
            if (w.distance(0, v) <= 2) ++within;
        CHECK(within == 13);
    }
    SECTION("ball counts: 2n^2 + 2n + 1 against the lattice-point oracle") {
        auto res = ball(z2, {"a", "b"}, 8);
        for (std::uint32_t n = 0; n <= 8; ++n) {
            CHECK(res.counts[n] == 2ull * n * n + 2 * n + 1);
            std::uint64_t lattice = 0;
            for (long long p = -static_cast<long long>(n); p <= static_cast<long long>(n); ++p)
                for (long long q = -static_cast<long long>(n); q <= static_cast<long long>(n); ++q)
                    if (std::llabs(p) + std::llabs(q) <= n) ++lattice;
            CHECK(res.counts[n] == lattice);
        }
    }
    SECTION("normal form via the abelian spelling") {
        CHECK(z2.normal_form("baBa") == "aa");
        CHECK(z2.normal_form("") == "");
        CHECK(z2.normal_form(z2.normal_form("abbaBA")) == z2.normal_form("abbaBA"));
    }
    SECTION("no-inversion validation rejects odd reflections") {
        AffineMap r = AffineMap::identity(1);
        r.sign = {-1, 1, 1};
        r.offset = {1, 0, 0};
        CHECK_THROWS_AS(GridBackend(1, {{'a', r}}), BackendError);
    }
    SECTION("homomorphism, relations, convexity, equivariance") {
        std::mt19937 rng(1);
        std::vector<Word> words{"a", "b", "ab", "AB", "aab", "bA"};
        check_action_property(z2, words, rng);
        check_relation_symmetries(z2, 3, rng);
        check_window_convexity(z2, 2);
        check_image_equivariance(z2, words, 3, rng);
    }
    SECTION("transverse walls across axes") {
        CubeWindow w = z2.window(1);
        // find one wall per axis via labels
        Budget budget;
        SignedWall wx{z2.wall_id(0, 1), false};
        SignedWall wy{z2.wall_id(1, 1), false};
        CHECK(z2.halfspace_relation(wx, wy, budget).verdict == HsRel::Transverse);
        CHECK(z2.halfspace_relation(wx, SignedWall{z2.wall_id(0, 2), false}, budget).verdict !=
              HsRel::Transverse);
        (void)w;
    }
}

TEST_CASE("infinite dihedral on the subdivided line") {
    auto d = make_dinf_line();
    CHECK(*d.translation_length("a") == 0);
    CHECK(*d.translation_length("b") == 0);
    CHECK(*d.translation_length("ab") == 2);
    // a fixes the base vertex, b fixes vertex (1)... vertex labels via coords
    CHECK(d.vertex_image("a", d.base_vertex()) == d.base_vertex());
    std::uint64_t v1 = d.vertex_id({1, 0, 0});
    CHECK(d.vertex_image("b", v1) == v1);
    CHECK(d.normal_form("abab") == d.normal_form("abab"));
    CHECK(d.elements_equal("abA", "Bab") == false);
    CHECK(d.elements_equal("ab", "BA") == false);
    CHECK(d.elements_equal("ab", "ba") == false);
    CHECK(d.elements_equal("aa", ""));
}

TEST_CASE("free group backend: tree windows and F2 growth") {
    FreeGroupBackend f2("xy");

    SECTION("radius-2 window is the 17-vertex tree ball; radius 1 the star") {
        CubeWindow w = f2.window(2);
        CHECK(w.nv == 17);
        CHECK(w.edges.size() == 16);
        CHECK(w.validate().empty());
        CHECK(dimension(w) == 1);
        CubeWindow star = f2.window(1);
        CHECK(star.nv == 5);
        CHECK(star.edges.size() == 4);
    }
    SECTION("ball counts follow 2*3^n - 1, and match the word-enumeration oracle") {
        auto res = ball(f2, {"x", "y"}, 7);
        std::uint64_t pw = 1; // 3^n
        for (std::uint32_t n = 0; n <= 7; ++n) {
            CHECK(res.counts[n] == 2 * pw - 1);
            pw *= 3;
        }
        auto oracle = ball_by_words(f2, {"x", "y"}, 4);
        for (std::uint32_t n = 0; n <= 4; ++n) CHECK(res.counts[n] == oracle[n]);
    }
    SECTION("nested halfspaces along a geodesic") {
        Budget budget;
        f2.window(3);
        SignedWall h1{f2.wall_id("x"), true};   // cone(x)
        SignedWall h2{f2.wall_id("xx"), true};  // cone(xx)
        CHECK(f2.halfspace_relation(h2, h1, budget).verdict == HsRel::FirstInsideSecond);
        CHECK(f2.halfspace_relation(h1, h2, budget).verdict == HsRel::SecondInsideFirst);
        SignedWall h3{f2.wall_id("y"), true};
        CHECK(f2.halfspace_relation(h1, h3, budget).verdict == HsRel::FacingDisjoint);
    }
    SECTION("properties") {
        std::mt19937 rng(2);
        std::vector<Word> words{"x", "y", "xy", "XY", "xyX", "yxY"};
        check_action_property(f2, words, rng);
        check_relation_symmetries(f2, 3, rng);
        check_window_convexity(f2, 2);
        check_image_equivariance(f2, words, 3, rng);
    }
}

TEST_CASE("BS(1,2) backend: affine model on the Bass-Serre tree") {
    BsBackend bs(2);

    SECTION("radius-2 window is the 10-vertex ball of the 3-regular tree") {
        CubeWindow w = bs.window(2);
        CHECK(w.nv == 10);
        CHECK(w.edges.size() == 9);
        CHECK(w.validate().empty());
    }
    SECTION("normal forms and the defining relation") {
        CHECK(bs.normal_form("taT") == "aa");
        CHECK(bs.normal_form("") == "");
        CHECK(bs.normal_form("Tat") == "Tat"); // x -> x + 1/2 has no shorter form
        CHECK(bs.normal_form(bs.normal_form("tatAAT")) == bs.normal_form("tatAAT"));
    }
    SECTION("a is elliptic at the base, t translates") {
        CHECK(*bs.translation_length("a") == 0);
        CHECK(bs.vertex_image("a", bs.base_vertex()) == bs.base_vertex());
        CHECK(*bs.translation_length("t") == 1);
        CHECK(bs.vertex_image("t", bs.base_vertex()) != bs.base_vertex());
    }
    SECTION("tree distance agrees with window BFS") {
        CubeWindow w = bs.window(3);
        auto d = oracles::all_pairs_dist(w.nv, oracles::edge_pairs(w));
        for (VertexId u = 0; u < w.nv; ++u)
            for (VertexId v = 0; v < w.nv; ++v)
                CHECK(w.distance(u, v) == d[u][v]);
    }
    SECTION("ball counts match the word-enumeration oracle") {
        auto res = ball(bs, {"a", "t"}, 4);
        auto oracle = ball_by_words(bs, {"a", "t"}, 4);
        for (std::uint32_t n = 0; n <= 4; ++n) CHECK(res.counts[n] == oracle[n]);
    }
    SECTION("properties") {
        std::mt19937 rng(3);
        std::vector<Word> words{"a", "t", "at", "Ta", "tat", "TaT"};
        check_action_property(bs, words, rng);
        check_relation_symmetries(bs, 3, rng);
        check_window_convexity(bs, 2);
        check_image_equivariance(bs, words, 3, rng);
    }
}

TEST_CASE("product backend: tree x line") {
    ProductBackend p("xy");

    SECTION("window structure") {
        CubeWindow w = p.window(1);
        CHECK(w.nv == 15); // 5-vertex star x 3 levels
        CHECK(w.squares.size() == 8);
        CHECK(w.validate().empty());
        CHECK(dimension(w) == 2);
    }
    SECTION("normal forms put the line letters last") {
        CHECK(p.normal_form("zxZ") == "x");
        CHECK(p.normal_form("xzyZz") == "xyz");
        CHECK(p.elements_equal("xz", "zx"));
        CHECK_FALSE(p.elements_equal("xy", "yx"));
    }
    SECTION("tree walls cross line walls") {
        p.window(2);
        Budget budget;
        SignedWall tw{p.tree_wall_id("x"), true};
        SignedWall lw{p.line_wall_id(1), true};
        CHECK(p.halfspace_relation(tw, lw, budget).verdict == HsRel::Transverse);
    }
    SECTION("properties") {
        std::mt19937 rng(4);
        std::vector<Word> words{"x", "y", "z", "xz", "Zy", "xyz"};
        check_action_property(p, words, rng);
        check_relation_symmetries(p, 2, rng);
        check_window_convexity(p, 2);
        check_image_equivariance(p, words, 2, rng);
    }
}

TEST_CASE("presentation backend: Z^2 as a square presentation") {
    PresentationBackend rw(Presentation("ab", {"abAB"}));
    REQUIRE(rw.usable());
    REQUIRE(rw.geometric());

    SECTION("universal cover windows match the closed-form grid") {
        CubeWindow w = rw.window(2);
        auto z2 = make_z2();
        CubeWindow g = z2.window(2);
        CHECK(w.nv == g.nv);
        CHECK(w.edges.size() == g.edges.size());
        CHECK(w.squares.size() == g.squares.size());
        CHECK(w.nwalls == g.nwalls);
        CHECK(w.validate().empty());
    }
    SECTION("ball counts equal the closed-form backend and the word oracle") {
        auto res = ball(rw, {"a", "b"}, 5);
        auto z2 = make_z2();
        auto res2 = ball(z2, {"a", "b"}, 5);
        CHECK(res.counts == res2.counts);
        auto oracle = ball_by_words(rw, {"a", "b"}, 4);
        for (std::uint32_t n = 0; n <= 4; ++n) CHECK(res.counts[n] == oracle[n]);
    }
    SECTION("budget 0 means Unknown") {
        rw.window(2);
        Budget zero;
        zero.max_radius = 0;
        SignedWall h{0, false};
        CHECK(rw.halfspace_relation(h, h, zero).verdict == HsRel::Unknown);
    }
    SECTION("window-bounded relations are sound where determined") {
        CubeWindow w = rw.window(2);
        Budget budget;
        budget.max_radius = 3;
        std::mt19937 rng(5);
        int determined = 0;
        for (int trial = 0; trial < 40; ++trial) {
            SignedWall h1{w.wall_label[rng() % w.nwalls], static_cast<bool>(rng() % 2)};
            SignedWall h2{w.wall_label[rng() % w.nwalls], static_cast<bool>(rng() % 2)};
            auto v = rw.halfspace_relation(h1, h2, budget).verdict;
            if (v != HsRel::Unknown) ++determined;
        }
        CHECK(determined > 0);
    }
    SECTION("incomplete KB refuses service") {
        PresentationBackend bad(Presentation("at", {"taTAA"}));
        CHECK_FALSE(bad.usable());
        CHECK_THROWS_AS(bad.normal_form("a"), BackendError);
        CHECK_THROWS_AS(bad.window(2), BackendError);
    }
    SECTION("right-angled path group covers a 2-dimensional complex") {
        PresentationBackend raag(Presentation("bac", {"abAB", "bcBC"}));
        REQUIRE(raag.usable());
        CubeWindow w = raag.window(2);
        CHECK(w.validate().empty());
        CHECK(dimension(w) == 2);
    }
}

TEST_CASE("finite complex automorphism backend") {
    // a single square: automorphism group D4 of order 8
    Pocset sq(2);
    sq.close();
    auto square = dual_complex(sq);
    FiniteComplexBackend aut(square);
    CHECK(aut.group_order() == 8);
    CHECK(aut.complex().nv == 9);

    SECTION("every element fixes a subdivision vertex") {
        for (const auto& w : aut.element_words()) {
            auto v = aut.min_displacement_vertex(w);
            REQUIRE(v.has_value());
            CHECK(aut.vertex_image(w, *v) == *v);
        }
    }
    SECTION("relations are exact and symmetric") {
        std::mt19937 rng(6);
        check_relation_symmetries(aut, 1, rng);
        check_action_property(aut, aut.element_words(), rng);
    }
    SECTION("normal forms enumerate the group") {
        std::set<std::string> keys;
        for (const auto& w : aut.element_words()) keys.insert(aut.element_key(w));
        CHECK(keys.size() == 8);
        for (const auto& w : aut.element_words()) CHECK(aut.normal_form(aut.normal_form(w)) == aut.normal_form(w));
    }
    SECTION("a 2x1 block has the Klein four-group") {
        Pocset p(3);
        p.add_nesting(Halfspace::make(0, false), Halfspace::make(1, false));
        p.close();
        auto block = dual_complex(p); // 2x1 grid of squares
        FiniteComplexBackend a2(block);
        CHECK(a2.group_order() == 4);
    }
}
