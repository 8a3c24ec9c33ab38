#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cubical/cube_window.hpp"
#include "cubical/word.hpp"

namespace cubical {

struct BackendError : std::runtime_error {
    explicit BackendError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Search budgets shared by all window-bounded computations.
struct Budget {
    std::uint32_t max_radius = 5;
    std::uint64_t max_words = 200000;
    std::uint32_t max_halfspaces = 20000;
};

/// Verdict of a halfspace pair query. `Unknown` is the safe fallback for
/// window-bounded oracles; every other verdict is globally sound.
enum class HsRel {
    Equal,
    Complement,
    FirstInsideSecond,
    SecondInsideFirst,
    Transverse,
    FacingDisjoint, // the two halfspaces are disjoint
    Codisjoint,     // their complements are disjoint (the two cover everything)
    Unknown
};

inline const char* to_string(HsRel r) {
    switch (r) {
        case HsRel::Equal: return "equal";
        case HsRel::Complement: return "complement";
        case HsRel::FirstInsideSecond: return "nested-first-inside-second";
        case HsRel::SecondInsideFirst: return "nested-second-inside-first";
        case HsRel::Transverse: return "transverse";
        case HsRel::FacingDisjoint: return "facing-disjoint";
        case HsRel::Codisjoint: return "codisjoint";
        case HsRel::Unknown: return "unknown";
    }
    return "?";
}

/**
 * A halfspace of the complex a backend acts on: a globally identified wall
 * plus a side flag. Side false is the side containing the base vertex.
 */
struct SignedWall {
    std::uint64_t wall = 0;
    bool side = false;
    SignedWall opposite() const { return {wall, !side}; }
    bool operator==(const SignedWall& o) const { return wall == o.wall && side == o.side; }
};

struct HalfspaceRelation {
    HsRel verdict = HsRel::Unknown;
    std::uint32_t radius_used = 0;
    std::string witness; // human-readable evidence backing the verdict
};

/**
 * A group acting on a CAT(0) cube complex, explored through finite convex
 * windows around a base vertex. Vertices and walls carry stable integer ids
 * handed out by the backend (the base vertex is always id 0). Backends are
 * logically immutable; the only internal mutation is the monotone growth of
 * the id registries, which is deterministic in the call sequence.
 *
 * Backends with closed-form geometry (`global_oracle() == true`) answer
 * halfspace queries exactly; rewriting backends answer within a window and
 * return Unknown rather than guess.
 */
class ActionBackend {
public:
    virtual ~ActionBackend() = default;

    virtual std::string kind() const = 0;
    virtual const Alphabet& alphabet() const = 0;
    virtual std::uint32_t complex_dimension() const = 0;
    virtual bool global_oracle() const = 0;

    /// Canonical word for the element; idempotent, equal elements agree.
    virtual Word normal_form(const Word& w) const = 0;
    /// Compact canonical key (need not be a word); default is the normal form.
    virtual std::string element_key(const Word& w) const { return normal_form(w); }
    bool is_identity(const Word& w) const { return element_key(w) == element_key(Word{}); }
    bool elements_equal(const Word& u, const Word& v) const { return element_key(u) == element_key(v); }

    std::uint64_t base_vertex() const { return 0; }
    virtual std::uint64_t vertex_image(const Word& w, std::uint64_t v) = 0;
    virtual std::string describe_vertex(std::uint64_t v) const = 0;
    virtual std::string describe_wall(std::uint64_t wall) const = 0;

    /// Convex window of the complex around the base vertex.
    virtual CubeWindow window(std::uint32_t radius) = 0;

    virtual SignedWall image_halfspace(const Word& w, SignedWall h) = 0;
    virtual HalfspaceRelation halfspace_relation(SignedWall a, SignedWall b, const Budget& budget) = 0;

    /// Local (wall, side) handle of a signed wall inside a window built by
    /// this backend, or nullopt when the wall does not cross it. Local side
    /// flags agree with the global convention because window vertex 0 is the
    /// base vertex.
    virtual std::optional<WindowHalfspace> locate_halfspace(const CubeWindow& w, SignedWall h) const {
        auto lw = w.wall_by_label(h.wall);
        if (!lw) return std::nullopt;
        return WindowHalfspace{*lw, h.side};
    }

    /// Global signed wall for a window halfspace (inverse of locate_halfspace).
    virtual SignedWall to_signed(const CubeWindow& w, WindowHalfspace h) const {
        return SignedWall{w.wall_label[h.wall], h.side};
    }

    /// A convex window containing the given vertices and the base vertex.
    /// Balls blow up exponentially on trees, so searches work through these
    /// linear-sized hulls instead.
    virtual CubeWindow span_window(const std::vector<std::uint64_t>& vertices) = 0;

    /// Exact minimal vertex displacement, when the backend knows it.
    virtual std::optional<std::uint64_t> translation_length(const Word& w) const { (void)w; return std::nullopt; }
    /// A vertex realising the minimal displacement (on a combinatorial axis
    /// for hyperbolic elements, a fixed vertex for elliptic ones).
    virtual std::optional<std::uint64_t> min_displacement_vertex(const Word& w) { (void)w; return std::nullopt; }
};

struct BallResult {
    std::vector<std::uint64_t> counts; // counts[k] = |B(k)|
    std::vector<Word> elements;        // one shortest S-representative per element, discovery order
    bool truncated = false;
};

/**
 * Ball of radius n in the word metric of S (inverses included): counts[k] is
 * the number of distinct group elements expressible as products of at most k
 * elements of S and their inverses. Enumeration is layer-synchronous with a
 * deterministic element order; distinctness goes through element_key so it
 * stays cheap even when canonical words are long.
 */
inline BallResult ball(const ActionBackend& b, const std::vector<Word>& S, std::uint32_t n,
                       std::uint64_t max_elements = 50u << 20) {
    for (const auto& s : S) b.alphabet().check_word(s);
    std::vector<Word> gens;
    {
        std::unordered_set<std::string> seen;
        for (const auto& s : S)
            for (const Word& g : {s, invert_word(s)})
                if (!b.is_identity(g) && seen.insert(b.element_key(g)).second) gens.push_back(g);
    }
    BallResult res;
    std::unordered_set<std::string> known;
    std::vector<Word> frontier;
    known.insert(b.element_key(Word{}));
    res.elements.push_back(Word{});
    frontier.push_back(Word{});
    res.counts.push_back(1);
    for (std::uint32_t k = 1; k <= n; ++k) {
        std::vector<Word> next;
        for (const auto& w : frontier)
            for (const auto& g : gens) {
                Word prod = free_reduce(w + g);
                if (known.insert(b.element_key(prod)).second) {
                    next.push_back(prod);
                    res.elements.push_back(prod);
                    if (known.size() >= max_elements) {
                        res.truncated = true;
                        res.counts.push_back(known.size());
                        return res;
                    }
                }
            }
        res.counts.push_back(known.size());
        frontier = std::move(next);
    }
    return res;
}

} // namespace cubical
