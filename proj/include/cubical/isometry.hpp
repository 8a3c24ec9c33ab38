#pragma once

#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "cubical/backend.hpp"
#include "cubical/certificates.hpp"
#include "cubical/complex_ops.hpp"

namespace cubical {

/// A group element together with the backend it acts through.
struct Isometry {
    ActionBackend* backend = nullptr;
    Word word;
};

struct Classification {
    enum class Kind { Elliptic, Hyperbolic, Unknown } kind = Kind::Unknown;
    std::uint64_t fixed_vertex = 0;     // elliptic witness
    HyperbolicCertificate certificate;  // hyperbolic witness
    std::uint32_t radius_used = 0;
    std::string note;
    bool elliptic() const { return kind == Kind::Elliptic; }
    bool hyperbolic() const { return kind == Kind::Hyperbolic; }
    bool unknown() const { return kind == Kind::Unknown; }
};

inline std::uint64_t lcm_upto(std::uint32_t d) {
    std::uint64_t k = 1;
    for (std::uint32_t i = 2; i <= d; ++i) k = std::lcm(k, static_cast<std::uint64_t>(i));
    return k;
}

namespace detail {

/// Hyperbolicity certificate from the first wall crossed by a geodesic from
/// an axis vertex to its image, searching powers up to the dimension.
inline std::optional<HyperbolicCertificate> axis_certificate(ActionBackend& b, const Word& g,
                                                             std::uint64_t axis_vertex,
                                                             std::uint32_t radius, const Budget& budget) {
    CubeWindow w = b.window(radius);
    auto lv = w.vertex_by_label(axis_vertex);
    if (!lv) return std::nullopt;
    std::uint64_t img_global = b.vertex_image(g, axis_vertex);
    auto li = w.vertex_by_label(img_global);
    if (!li) return std::nullopt;
    auto path = combinatorial_geodesic(w, *lv, *li);
    if (path.size() < 2) return std::nullopt;
    // wall of the first edge, oriented toward the image
    std::optional<WallId> wall;
    for (auto [y, wy] : w.adjacency()[path[0]])
        if (y == path[1]) wall = wy;
    if (!wall) return std::nullopt;
    SignedWall hs{w.wall_label[*wall], w.wall_side[*wall].test(path[1])};
    for (std::uint32_t p = 1; p <= std::max(1u, b.complex_dimension()); ++p) {
        auto rel = b.halfspace_relation(b.image_halfspace(word_power(g, static_cast<int>(p)), hs), hs, budget);
        if (rel.verdict == HsRel::FirstInsideSecond)
            return HyperbolicCertificate{g, hs, p};
    }
    return std::nullopt;
}

} // namespace detail

/**
 * Combinatorial classification of an isometry. Closed-form backends never
 * return Unknown: translation length decides the dichotomy and the
 * certificate comes off an axis. Window backends scan for fixed vertices and
 * search certificates among window walls; exhausting the budget yields
 * Unknown. Every verdict is re-verified through the independent checker
 * before being returned.
 */
inline Classification classify(ActionBackend& b, const Word& g, Budget budget = {}) {
    Classification out;
    out.radius_used = budget.max_radius;
    CertificateChecker checker(b);

    if (b.is_identity(g)) {
        out.kind = Classification::Kind::Elliptic;
        out.fixed_vertex = b.base_vertex();
        out.note = "identity";
        return out;
    }

    if (b.global_oracle()) {
        auto tau = b.translation_length(g);
        if (tau && *tau == 0) {
            auto v = b.min_displacement_vertex(g);
            if (v && checker.check_fixed_vertex(g, *v).passed()) {
                out.kind = Classification::Kind::Elliptic;
                out.fixed_vertex = *v;
                return out;
            }
        } else if (tau) {
            auto v = b.min_displacement_vertex(g);
            if (v) {
                // window large enough to hold the axis step
                std::uint32_t radius = budget.max_radius;
                for (int attempt = 0; attempt < 3; ++attempt, radius *= 2) {
                    auto cert = detail::axis_certificate(b, g, *v, radius, budget);
                    if (cert && checker.check_hyperbolic(*cert, radius).passed()) {
                        out.kind = Classification::Kind::Hyperbolic;
                        out.certificate = *cert;
                        out.radius_used = radius;
                        return out;
                    }
                }
            }
            throw BackendError("closed-form backend failed to certify a hyperbolic element: " + g);
        }
    }

    // window-bounded path
    CubeWindow w = b.window(budget.max_radius);
    for (VertexId v = 0; v < w.nv; ++v)
        if (b.vertex_image(g, w.vertex_label[v]) == w.vertex_label[v]) {
            out.kind = Classification::Kind::Elliptic;
            out.fixed_vertex = w.vertex_label[v];
            return out;
        }
    std::uint32_t d = std::max(1u, b.complex_dimension());
    for (std::uint32_t p = 1; p <= d; ++p) {
        Word gp = word_power(g, static_cast<int>(p));
        for (WallId wall = 0; wall < w.nwalls; ++wall)
            for (bool side : {false, true}) {
                SignedWall hs{w.wall_label[wall], side};
                auto rel = b.halfspace_relation(b.image_halfspace(gp, hs), hs, budget);
                if (rel.verdict != HsRel::FirstInsideSecond) continue;
                HyperbolicCertificate cert{g, hs, p};
                if (checker.check_hyperbolic(cert, budget.max_radius).passed()) {
                    out.kind = Classification::Kind::Hyperbolic;
                    out.certificate = cert;
                    return out;
                }
            }
    }
    out.kind = Classification::Kind::Unknown;
    out.note = "budget exhausted at radius " + std::to_string(budget.max_radius);
    return out;
}

/// All window vertices fixed by g, as a local vertex set.
inline Bitset fixed_vertices(ActionBackend& b, const Word& g, const CubeWindow& w) {
    Bitset out(w.nv);
    for (VertexId v = 0; v < w.nv; ++v)
        if (b.vertex_image(g, w.vertex_label[v]) == w.vertex_label[v]) out.set(v);
    return out;
}

struct HullFixPower {
    std::uint64_t k = 1;
    bool verified = false;
    Bitset hull;
};

/**
 * The hull-fixing power: k = lcm(1..dim) and whether a^k pointwise fixes the
 * hull of a's fixed set in the window. On genuine CAT(0) windows `verified`
 * must come back true; false indicates a bug or a non-CAT(0) input.
 */
inline HullFixPower hull_fix_power(ActionBackend& b, const Word& a, const CubeWindow& w) {
    HullFixPower out;
    out.k = lcm_upto(std::max(1u, dimension(w)));
    Bitset fix = fixed_vertices(b, a, w);
    if (fix.none()) throw WindowError("hull_fix_power: element has no fixed vertex in the window");
    out.hull = convex_hull_vertices(w, fix);
    Word ak = word_power(a, static_cast<int>(out.k));
    out.verified = true;
    out.hull.for_each([&](std::size_t v) {
        if (b.vertex_image(ak, w.vertex_label[v]) != w.vertex_label[v]) out.verified = false;
    });
    return out;
}

struct SkewerSplit {
    std::vector<WallId> skewered;
    std::vector<WallId> parallel;
    std::vector<WallId> peripheral;
    std::vector<VertexId> orbit_path; // the g-orbit geodesic used, local ids
    bool window_relative = true;
};

/**
 * Skewer/parallel/peripheral partition of the window's walls relative to a
 * hyperbolic isometry: walls crossed exactly once by a combinatorial orbit
 * geodesic are skewered; walls crossing every skewered wall present are
 * parallel; the rest are peripheral. The verdicts are window-relative.
 */
inline SkewerSplit skewer_parallel_split(ActionBackend& b, const Word& g, const CubeWindow& w) {
    SkewerSplit out;
    // min-displacement vertex within the window
    std::optional<VertexId> best;
    std::uint32_t best_disp = 0;
    for (VertexId v = 0; v < w.nv; ++v) {
        auto img = w.vertex_by_label(b.vertex_image(g, w.vertex_label[v]));
        if (!img) continue;
        std::uint32_t disp = w.distance(v, *img);
        if (!best || disp < best_disp) {
            best = v;
            best_disp = disp;
        }
    }
    if (!best || best_disp == 0)
        throw WindowError("skewer_parallel_split: no hyperbolic displacement visible; enlarge the window");

    // walk the orbit forwards and backwards while it stays in the window
    std::vector<VertexId> orbit{*best};
    const Word ginv = invert_word(g);
    for (const Word* dir : {&g, &ginv}) {
        std::uint64_t cur = w.vertex_label[*best];
        while (true) {
            std::uint64_t nxt = b.vertex_image(*dir, cur);
            auto l = w.vertex_by_label(nxt);
            if (!l) break;
            if (dir == &g)
                orbit.push_back(*l);
            else
                orbit.insert(orbit.begin(), *l);
            cur = nxt;
        }
    }
    std::uint32_t dim = std::max(1u, dimension(w));
    if (w.distance(orbit.front(), orbit.back()) < 2 * dim)
        throw WindowError("skewer_parallel_split: orbit segment shorter than twice the dimension; enlarge the window");

    std::vector<std::uint32_t> crossings(w.nwalls, 0);
    for (std::size_t i = 0; i + 1 < orbit.size(); ++i) {
        auto path = combinatorial_geodesic(w, orbit[i], orbit[i + 1]);
        for (std::size_t j = 0; j + 1 < path.size(); ++j) {
            auto seps = separating_hyperplanes(w, path[j], path[j + 1]);
            crossings[seps.at(0)] += 1;
        }
        if (i + 2 < orbit.size()) out.orbit_path.insert(out.orbit_path.end(), path.begin(), path.end() - 1);
        else out.orbit_path.insert(out.orbit_path.end(), path.begin(), path.end());
    }

    auto cross = crossing_graph(w);
    Bitset sk_set(w.nwalls);
    for (WallId h = 0; h < w.nwalls; ++h)
        if (crossings[h] == 1) {
            out.skewered.push_back(h);
            sk_set.set(h);
        }
    for (WallId h = 0; h < w.nwalls; ++h) {
        if (sk_set.test(h)) continue;
        if (crossings[h] > 1) {
            out.peripheral.push_back(h);
            continue;
        }
        bool crosses_all = true;
        for (WallId s : out.skewered)
            if (!cross[h].test(s)) crosses_all = false;
        if (crosses_all && !out.skewered.empty())
            out.parallel.push_back(h);
        else
            out.peripheral.push_back(h);
    }
    return out;
}

struct ParallelSubcomplex {
    CubeWindow euclidean; // dual to the skewered walls; contains the orbit hull
    CubeWindow fixed;     // dual to the parallel walls
};

/// The product decomposition around the axis: E dual to sk(g), K dual to
/// p(g). Fails if some parallel wall misses a skewered wall in the window.
inline ParallelSubcomplex parallel_subcomplex(ActionBackend& b, const Word& g, const CubeWindow& w) {
    SkewerSplit split = skewer_parallel_split(b, g, w);
    auto cross = crossing_graph(w);
    for (WallId p : split.parallel)
        for (WallId s : split.skewered)
            if (!cross[p].test(s))
                throw WindowError("parallel_subcomplex: inconsistent window data (parallel wall missing a skewered wall)");
    auto restrict_dual = [&](const std::vector<WallId>& walls) {
        Pocset p(static_cast<std::uint32_t>(walls.size()));
        for (std::uint32_t i = 0; i < walls.size(); ++i)
            for (std::uint32_t j = 0; j < walls.size(); ++j) {
                if (i == j) continue;
                const Bitset& si = w.wall_side[walls[i]];
                const Bitset& sj = w.wall_side[walls[j]];
                Bitset ci = si.complement(), cj = sj.complement();
                if (si != sj && si.is_subset_of(sj)) p.add_nesting(Halfspace::make(i, true), Halfspace::make(j, true));
                if (si != cj && si.is_subset_of(cj)) p.add_nesting(Halfspace::make(i, true), Halfspace::make(j, false));
                if (ci != sj && ci.is_subset_of(sj)) p.add_nesting(Halfspace::make(i, false), Halfspace::make(j, true));
                if (ci != cj && ci.is_subset_of(cj)) p.add_nesting(Halfspace::make(i, false), Halfspace::make(j, false));
            }
        p.close();
        return dual_complex(p);
    };
    ParallelSubcomplex out;
    out.euclidean = restrict_dual(split.skewered);
    out.fixed = restrict_dual(split.parallel);
    return out;
}

} // namespace cubical
