#pragma once

#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "cubical/backend.hpp"
#include "cubical/complex_ops.hpp"

namespace cubical {

/// Evidence that an element is hyperbolic: element^power maps the halfspace
/// strictly inside itself.
struct HyperbolicCertificate {
    Word element;
    SignedWall halfspace;
    std::uint32_t power = 1;
};

/// Evidence that two words generate a free semigroup: both map the halfspace
/// strictly inside itself with disjoint images (halfspace ping-pong).
struct FreeSemigroupCertificate {
    Word u, v;
    SignedWall halfspace;
    std::uint32_t shortness = 0; // max S-length of u and v
};

struct CheckResult {
    enum class Status { Pass, Fail, Inconclusive } status = Status::Inconclusive;
    std::string detail;
    bool passed() const { return status == Status::Pass; }
};

/**
 * Independent certificate checker. All halfspace logic here is combinatorial
 * set arithmetic on window bipartitions; it shares no evaluation path with
 * the backends' closed-form halfspace oracles that the searches use. The
 * soundness of a window verdict rests on the window being convex and every
 * involved wall crossing it (the Helly property then pins the restriction to
 * the global relation); when that fails the checker reports Inconclusive
 * rather than guessing.
 */
class CertificateChecker {
public:
    explicit CertificateChecker(ActionBackend& backend) : b_(backend) {}

    CheckResult check_hyperbolic(const HyperbolicCertificate& c, std::uint32_t radius) {
        CubeWindow w = b_.window(radius);
        Word gp = word_power(c.element, static_cast<int>(c.power));
        auto hs = resolve(w, c.halfspace);
        if (!hs) return inconclusive("halfspace does not cross the window");
        auto img = image_in_window(w, gp, *hs);
        if (!img) return inconclusive("image halfspace not determined in the window");
        Bitset side = w.halfspace_set(*hs);
        Bitset iside = w.halfspace_set(*img);
        if (!iside.is_subset_of(side)) return fail("image halfspace not inside the original");
        if (iside == side) return fail("nesting not strict");
        return pass("g^" + std::to_string(c.power) + " h strictly inside h in a radius-" +
                    std::to_string(radius) + " window");
    }

    CheckResult check_free_semigroup(const FreeSemigroupCertificate& c, std::uint32_t radius,
                                     std::uint32_t distinctness_length = 8) {
        CubeWindow w = b_.window(radius);
        auto hs = resolve(w, c.halfspace);
        if (!hs) return inconclusive("halfspace does not cross the window");
        auto uimg = image_in_window(w, c.u, *hs);
        auto vimg = image_in_window(w, c.v, *hs);
        if (!uimg || !vimg) return inconclusive("image halfspace not determined in the window");
        Bitset side = w.halfspace_set(*hs);
        Bitset us = w.halfspace_set(*uimg);
        Bitset vs = w.halfspace_set(*vimg);
        if (!us.is_subset_of(side) || us == side) return fail("u image not strictly inside the halfspace");
        if (!vs.is_subset_of(side) || vs == side) return fail("v image not strictly inside the halfspace");
        if (us.intersects(vs)) return fail("u and v images are not disjoint");
        // empirical cross-check: positive words up to the given length are
        // pairwise distinct group elements
        std::unordered_set<std::string> keys;
        std::vector<Word> layer{Word{}};
        std::uint64_t expect = 1;
        keys.insert(b_.element_key(Word{}));
        for (std::uint32_t l = 1; l <= distinctness_length; ++l) {
            std::vector<Word> next;
            for (const auto& p : layer)
                for (const Word* g : {&c.u, &c.v}) next.push_back(p + *g);
            for (const auto& p : next) keys.insert(b_.element_key(p));
            expect += 1ull << l;
            if (keys.size() != expect)
                return fail("positive words of length <= " + std::to_string(l) + " collide");
            layer = std::move(next);
        }
        return pass("ping-pong halfspace verified; 2^" + std::to_string(distinctness_length) +
                    " positive words distinct");
    }

    CheckResult check_fixed_vertex(const Word& g, std::uint64_t vertex) {
        if (b_.vertex_image(g, vertex) == vertex) return pass("vertex fixed");
        return fail("vertex moved");
    }

private:
    /// Map a signed wall into the window using only the backend's labelling.
    std::optional<WindowHalfspace> resolve(const CubeWindow& w, SignedWall h) const {
        return b_.locate_halfspace(w, h);
    }

    /// Push a window halfspace through a group element combinatorially: map
    /// the defining edge of its wall and read off the image wall and side.
    std::optional<WindowHalfspace> image_in_window(const CubeWindow& w, const Word& g, WindowHalfspace hs) {
        // defining edge: any window edge crossing the wall
        for (const auto& e : w.edges) {
            if (e.wall != hs.wall) continue;
            std::uint64_t gu = b_.vertex_image(g, w.vertex_label[e.u]);
            std::uint64_t gv = b_.vertex_image(g, w.vertex_label[e.v]);
            auto lu = w.vertex_by_label(gu);
            auto lv = w.vertex_by_label(gv);
            if (!lu || !lv) return std::nullopt;
            // the connecting edge carries the image wall
            std::optional<WallId> iw;
            for (auto [y, wy] : w.adjacency()[*lu])
                if (y == *lv) iw = wy;
            if (!iw) return std::nullopt;
            // image side: contains the image of a sample vertex of hs's side
            VertexId sample = w.in_halfspace(hs, e.u) ? e.u : e.v;
            std::uint64_t gs = b_.vertex_image(g, w.vertex_label[sample]);
            auto ls = w.vertex_by_label(gs);
            if (!ls) return std::nullopt;
            return WindowHalfspace{*iw, w.wall_side[*iw].test(*ls)};
        }
        return std::nullopt;
    }

    static CheckResult pass(const std::string& d) { return {CheckResult::Status::Pass, d}; }
    static CheckResult fail(const std::string& d) { return {CheckResult::Status::Fail, d}; }
    static CheckResult inconclusive(const std::string& d) { return {CheckResult::Status::Inconclusive, d}; }

    ActionBackend& b_;
};

} // namespace cubical
