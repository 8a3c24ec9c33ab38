#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "cubical/bits.hpp"
#include "cubical/pocset.hpp"

namespace cubical {

using VertexId = std::uint32_t;
using WallId = std::uint32_t;

struct WindowError : std::runtime_error {
    explicit WindowError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A halfspace of a CubeWindow: a wall index plus one of its two sides.
/// Side false is the side containing vertex 0 of the window.
struct WindowHalfspace {
    WallId wall = 0;
    bool side = false;
    WindowHalfspace opposite() const { return {wall, !side}; }
    bool operator==(const WindowHalfspace& o) const { return wall == o.wall && side == o.side; }
};

struct WindowEdge {
    VertexId u = 0, v = 0;
    WallId wall = 0;
};

/**
 * A finite convex window of a CAT(0) cube complex: a median graph with its
 * hyperplane bipartitions plus explicit square and cube records (dimension
 * up to 3 is stored; anything higher would be reconstructed from below).
 *
 * `vertex_label` / `wall_label` carry stable external ids when the window
 * was cut out of a backend's complex; for standalone windows they default
 * to the identity labelling.
 */
class CubeWindow {
public:
    std::uint32_t nv = 0;
    std::vector<WindowEdge> edges;
    std::uint32_t nwalls = 0;
    // per wall: the set of vertices on side `true` (vertex 0 is always on side false)
    std::vector<Bitset> wall_side;
    // squares as cyclic corner tuples (c0 c1 c2 c3 with edges between neighbours)
    std::vector<std::array<VertexId, 4>> squares;
    // cubes as bit-indexed corners: index b2b1b0, adjacent iff indices differ in one bit
    std::vector<std::array<VertexId, 8>> cubes;
    std::vector<std::uint64_t> vertex_label;
    std::vector<std::uint64_t> wall_label;

    const std::vector<std::vector<std::pair<VertexId, WallId>>>& adjacency() const {
        if (adj_.size() != nv) build_adjacency();
        return adj_;
    }

    bool in_halfspace(WindowHalfspace h, VertexId v) const {
        return wall_side[h.wall].test(v) == h.side;
    }
    Bitset halfspace_set(WindowHalfspace h) const {
        return h.side ? wall_side[h.wall] : wall_side[h.wall].complement();
    }

    /// Per-vertex wall membership signature (bit w set iff vertex on side true of w).
    const std::vector<Bitset>& signatures() const {
        if (sig_.size() != nv) {
            sig_.assign(nv, Bitset(nwalls));
            for (WallId w = 0; w < nwalls; ++w)
                wall_side[w].for_each([&](std::size_t v) { sig_[v].set(w); });
        }
        return sig_;
    }

    /// Combinatorial distance; exact on valid windows (count of separating walls).
    std::uint32_t distance(VertexId u, VertexId v) const {
        const auto& s = signatures();
        return static_cast<std::uint32_t>(s[u].count_xor(s[v]));
    }

    void invalidate_caches() const {
        adj_.clear();
        sig_.clear();
    }

    void default_labels() {
        vertex_label.resize(nv);
        for (VertexId v = 0; v < nv; ++v) vertex_label[v] = v;
        wall_label.resize(nwalls);
        for (WallId w = 0; w < nwalls; ++w) wall_label[w] = w;
    }

    std::optional<VertexId> vertex_by_label(std::uint64_t label) const {
        if (vlabel_map_.size() != nv) {
            vlabel_map_.clear();
            for (VertexId v = 0; v < nv; ++v) vlabel_map_[vertex_label[v]] = v;
        }
        auto it = vlabel_map_.find(label);
        if (it == vlabel_map_.end()) return std::nullopt;
        return it->second;
    }
    std::optional<WallId> wall_by_label(std::uint64_t label) const {
        if (wlabel_map_.size() != nwalls) {
            wlabel_map_.clear();
            for (WallId w = 0; w < nwalls; ++w) wlabel_map_[wall_label[w]] = w;
        }
        auto it = wlabel_map_.find(label);
        if (it == wlabel_map_.end()) return std::nullopt;
        return it->second;
    }

    /// Derive wall bipartitions from the labelled edge list: removing all
    /// edges of a wall must leave exactly two components. Called by parsers
    /// and constructors that only know the edges.
    void rebuild_wall_sides() {
        wall_side.assign(nwalls, Bitset(nv));
        std::vector<std::vector<VertexId>> wall_edges(nwalls);
        for (std::size_t i = 0; i < edges.size(); ++i) wall_edges[edges[i].wall].push_back(static_cast<VertexId>(i));
        build_adjacency();
        for (WallId w = 0; w < nwalls; ++w) {
            // BFS avoiding edges of wall w, started from vertex 0
            std::vector<char> seen(nv, 0);
            std::queue<VertexId> q;
            q.push(0);
            seen[0] = 1;
            while (!q.empty()) {
                VertexId x = q.front();
                q.pop();
                for (auto [y, wy] : adj_[x]) {
                    if (wy == w || seen[y]) continue;
                    seen[y] = 1;
                    q.push(y);
                }
            }
            Bitset side(nv);
            for (VertexId v = 0; v < nv; ++v)
                if (!seen[v]) side.set(v);
            wall_side[w] = side;
        }
        sig_.clear();
    }

    /**
     * Structural validation. Checks, in order: basic well-formedness, that
     * each wall's halfspaces bipartition the window (cut edges = labelled
     * edges), that the 1-skeleton is a partial cube w.r.t. the walls, that
     * every alternating 4-cycle bounds a recorded square, and (optionally,
     * it is the expensive part) that the graph is median.
     */
    std::vector<std::string> validate(bool check_median = true) const;

    void require_valid(bool check_median = true) const {
        auto bad = validate(check_median);
        if (!bad.empty()) {
            std::string msg = "invalid cube window:";
            for (const auto& s : bad) msg += "\n  " + s;
            throw WindowError(msg);
        }
    }

private:
    void build_adjacency() const {
        adj_.assign(nv, {});
        for (std::size_t i = 0; i < edges.size(); ++i) {
            adj_[edges[i].u].push_back({edges[i].v, edges[i].wall});
            adj_[edges[i].v].push_back({edges[i].u, edges[i].wall});
        }
        for (auto& row : adj_) std::sort(row.begin(), row.end());
    }

    mutable std::vector<std::vector<std::pair<VertexId, WallId>>> adj_;
    mutable std::vector<Bitset> sig_;
    mutable std::unordered_map<std::uint64_t, VertexId> vlabel_map_;
    mutable std::unordered_map<std::uint64_t, WallId> wlabel_map_;
};

/// Extract the pocset of a window: its walls with nesting given by strict
/// containment of halfspace vertex sets.
inline Pocset pocset_of(const CubeWindow& w) {
    Pocset p(w.nwalls);
    std::vector<Bitset> hs(2 * w.nwalls);
    for (WallId i = 0; i < w.nwalls; ++i) {
        hs[2 * i] = w.wall_side[i].complement(); // '+' side: contains vertex 0
        hs[2 * i + 1] = w.wall_side[i];
    }
    for (std::uint32_t a = 0; a < 2 * w.nwalls; ++a)
        for (std::uint32_t b = 0; b < 2 * w.nwalls; ++b) {
            if (a / 2 == b / 2) continue;
            if (hs[a] != hs[b] && hs[a].is_subset_of(hs[b]))
                p.add_nesting(Halfspace{a}, Halfspace{b});
        }
    p.close();
    return p;
}

namespace detail {

/**
 * Enumerate consistent orientations of a pocset in lexicographic order
 * (walls ascending, '+' side first). An orientation is stored as the set of
 * walls oriented to their '-' side. Enumeration stops early once `cap`
 * orientations have been produced.
 */
inline std::vector<Bitset> enumerate_orientations(const Pocset& p, std::size_t cap) {
    const std::uint32_t n = p.wall_count();
    std::vector<Bitset> out;
    if (n == 0) {
        out.push_back(Bitset(0));
        return out;
    }
    std::vector<std::uint32_t> chosen(n); // halfspace codes of walls 0..depth-1
    // Pre-derive the pairwise "disjoint" predicate on halfspace codes.
    auto incompatible = [&](std::uint32_t a, std::uint32_t b) {
        return p.less(Halfspace{a}, Halfspace{b}.complement());
    };
    struct Frame { std::uint32_t wall; int side; };
    std::vector<Frame> stack;
    stack.push_back({0, 0});
    while (!stack.empty()) {
        auto [wall, side] = stack.back();
        stack.pop_back();
        if (side > 1) continue;
        stack.push_back({wall, side + 1});
        std::uint32_t code = wall * 2 + static_cast<std::uint32_t>(side);
        bool ok = true;
        for (std::uint32_t j = 0; j < wall; ++j)
            if (incompatible(chosen[j], code) || incompatible(code, chosen[j])) {
                ok = false;
                break;
            }
        if (!ok) continue;
        chosen[wall] = code;
        if (wall + 1 == n) {
            Bitset o(n);
            for (std::uint32_t j = 0; j < n; ++j)
                if (chosen[j] & 1) o.set(j);
            out.push_back(std::move(o));
            if (out.size() >= cap) return out;
        } else {
            stack.push_back({wall + 1, 0});
        }
    }
    return out;
}

} // namespace detail

/**
 * Sageev's dual cube complex of a finite pocset. Vertices are the consistent
 * orientations (one halfspace per wall, no two chosen halfspaces disjoint),
 * edges join orientations differing on a single wall, and square/cube
 * records are filled in up to dimension 3.
 *
 * Vertex ids follow the lexicographic enumeration order (walls ascending,
 * '+' first), so the construction is deterministic.
 */
inline CubeWindow dual_complex(const Pocset& p, std::size_t vertex_cap = 1u << 22) {
    p.require_valid();
    auto orientations = detail::enumerate_orientations(p, vertex_cap + 1);
    if (orientations.size() > vertex_cap)
        throw PocsetError("dual complex exceeds vertex cap (" + std::to_string(vertex_cap) + ")");

    CubeWindow w;
    w.nv = static_cast<std::uint32_t>(orientations.size());
    w.nwalls = p.wall_count();
    std::unordered_map<Bitset, VertexId, BitsetHash> index;
    index.reserve(orientations.size());
    for (VertexId v = 0; v < w.nv; ++v) index.emplace(orientations[v], v);

    auto flip = [&](Bitset o, std::uint32_t wall) {
        o.test(wall) ? o.reset(wall) : o.set(wall);
        return o;
    };
    auto lookup = [&](const Bitset& o) -> std::optional<VertexId> {
        auto it = index.find(o);
        if (it == index.end()) return std::nullopt;
        return it->second;
    };

    for (VertexId v = 0; v < w.nv; ++v)
        for (std::uint32_t wall = 0; wall < w.nwalls; ++wall) {
            auto u = lookup(flip(orientations[v], wall));
            if (u && v < *u) w.edges.push_back({v, *u, wall});
        }

    // squares: pairs of walls flippable together
    for (VertexId v = 0; v < w.nv; ++v)
        for (std::uint32_t w1 = 0; w1 < w.nwalls; ++w1) {
            auto a = lookup(flip(orientations[v], w1));
            if (!a) continue;
            for (std::uint32_t w2 = w1 + 1; w2 < w.nwalls; ++w2) {
                auto b = lookup(flip(orientations[v], w2));
                if (!b) continue;
                auto c = lookup(flip(flip(orientations[v], w1), w2));
                if (!c) continue;
                if (v < *a && v < *b && v < *c) w.squares.push_back({v, *a, *c, *b});
            }
        }

    // cubes: triples of walls flippable together
    for (VertexId v = 0; v < w.nv; ++v)
        for (std::uint32_t w1 = 0; w1 < w.nwalls; ++w1)
            for (std::uint32_t w2 = w1 + 1; w2 < w.nwalls; ++w2)
                for (std::uint32_t w3 = w2 + 1; w3 < w.nwalls; ++w3) {
                    std::array<std::optional<VertexId>, 8> c;
                    bool all = true;
                    for (int mask = 0; mask < 8 && all; ++mask) {
                        Bitset o = orientations[v];
                        if (mask & 1) o = flip(o, w1);
                        if (mask & 2) o = flip(o, w2);
                        if (mask & 4) o = flip(o, w3);
                        c[static_cast<std::size_t>(mask)] = lookup(o);
                        if (!c[static_cast<std::size_t>(mask)]) all = false;
                    }
                    if (!all) continue;
                    bool minimal = true;
                    for (int mask = 1; mask < 8; ++mask)
                        if (*c[static_cast<std::size_t>(mask)] < v) minimal = false;
                    if (!minimal) continue;
                    std::array<VertexId, 8> cube{};
                    for (int mask = 0; mask < 8; ++mask) cube[static_cast<std::size_t>(mask)] = *c[static_cast<std::size_t>(mask)];
                    w.cubes.push_back(cube);
                }

    // wall sides relative to vertex 0's orientation
    w.wall_side.assign(w.nwalls, Bitset(w.nv));
    if (w.nv > 0) {
        const Bitset& base = orientations[0];
        for (VertexId v = 0; v < w.nv; ++v)
            for (std::uint32_t wall = 0; wall < w.nwalls; ++wall)
                if (orientations[v].test(wall) != base.test(wall)) w.wall_side[wall].set(v);
    }
    w.default_labels();
    return w;
}

/**
 * Exact median-graph test. A graph is median iff every vertex triple has a
 * unique median for the graph metric. The implementation goes through the
 * halfspace structure: a median graph is a partial cube whose vertex set
 * realises every consistent orientation of its wall pocset, and both of
 * those conditions are checked directly. Disconnected input is an error.
 */
inline bool is_median_graph(std::uint32_t nv, const std::vector<std::pair<VertexId, VertexId>>& edge_list,
                            std::string* why = nullptr) {
    auto reject = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (nv == 0) throw WindowError("is_median_graph: empty graph");
    std::vector<std::vector<VertexId>> adj(nv);
    for (auto [u, v] : edge_list) {
        if (u >= nv || v >= nv) throw WindowError("is_median_graph: vertex id out of range");
        adj[u].push_back(v);
        adj[v].push_back(u);
    }

    // all-pairs BFS
    std::vector<std::vector<std::uint16_t>> dist(nv, std::vector<std::uint16_t>(nv, 0xffff));
    for (VertexId s = 0; s < nv; ++s) {
        std::queue<VertexId> q;
        q.push(s);
        dist[s][s] = 0;
        while (!q.empty()) {
            VertexId x = q.front();
            q.pop();
            for (VertexId y : adj[x])
                if (dist[s][y] == 0xffff) {
                    dist[s][y] = static_cast<std::uint16_t>(dist[s][x] + 1);
                    q.push(y);
                }
        }
        for (VertexId t = 0; t < nv; ++t)
            if (dist[s][t] == 0xffff) throw WindowError("is_median_graph: graph not connected");
    }

    // bipartite?
    for (auto [u, v] : edge_list)
        if ((dist[0][u] & 1) == (dist[0][v] & 1)) return reject("graph contains an odd cycle");

    // candidate walls from edge bipartitions W(u,v) = {z : d(z,u) < d(z,v)}
    std::unordered_map<Bitset, std::uint32_t, BitsetHash> wall_of;
    std::vector<Bitset> walls;
    for (auto [u, v] : edge_list) {
        Bitset side(nv);
        for (VertexId z = 0; z < nv; ++z)
            if (dist[z][u] < dist[z][v]) side.set(z);
        if (side.test(0)) side = side.complement(); // canonical: vertex 0 on side false
        if (wall_of.emplace(side, static_cast<std::uint32_t>(walls.size())).second) walls.push_back(side);
    }

    // partial cube: graph distance must equal wall-disagreement count
    std::vector<Bitset> sig(nv, Bitset(walls.size()));
    for (std::uint32_t w = 0; w < walls.size(); ++w)
        walls[w].for_each([&](std::size_t v) { sig[v].set(w); });
    for (VertexId u = 0; u < nv; ++u)
        for (VertexId v = u + 1; v < nv; ++v)
            if (sig[u].count_xor(sig[v]) != dist[u][v])
                return reject("not a partial cube: distance/halfspace mismatch at (" +
                              std::to_string(u) + "," + std::to_string(v) + ")");

    // median <=> every consistent orientation of the wall pocset is realised
    Pocset p(static_cast<std::uint32_t>(walls.size()));
    for (std::uint32_t a = 0; a < walls.size(); ++a)
        for (std::uint32_t b = 0; b < walls.size(); ++b) {
            if (a == b) continue;
            const Bitset& sa = walls[a];
            const Bitset& sb = walls[b];
            Bitset ca = sa.complement(), cb = sb.complement();
            if (sa != sb && sa.is_subset_of(sb)) p.add_nesting(Halfspace::make(a, true), Halfspace::make(b, true));
            if (sa != cb && sa.is_subset_of(cb)) p.add_nesting(Halfspace::make(a, true), Halfspace::make(b, false));
            if (ca != sb && ca.is_subset_of(sb)) p.add_nesting(Halfspace::make(a, false), Halfspace::make(b, true));
            if (ca != cb && ca.is_subset_of(cb)) p.add_nesting(Halfspace::make(a, false), Halfspace::make(b, false));
        }
    p.close();
    auto orientations = detail::enumerate_orientations(p, nv + 1);
    if (orientations.size() != nv)
        return reject("pocset admits " + std::to_string(orientations.size()) +
                      "+ orientations but graph has " + std::to_string(nv) + " vertices");
    if (why) why->clear();
    return true;
}

inline bool is_median_graph(const CubeWindow& w, std::string* why = nullptr) {
    std::vector<std::pair<VertexId, VertexId>> es;
    es.reserve(w.edges.size());
    for (const auto& e : w.edges) es.push_back({e.u, e.v});
    return is_median_graph(w.nv, es, why);
}

/// Crossing graph on walls: walls cross iff all four corner sets are nonempty.
inline std::vector<Bitset> crossing_graph(const CubeWindow& w) {
    std::vector<Bitset> cross(w.nwalls, Bitset(w.nwalls));
    for (WallId a = 0; a < w.nwalls; ++a)
        for (WallId b = a + 1; b < w.nwalls; ++b) {
            const Bitset& sa = w.wall_side[a];
            const Bitset& sb = w.wall_side[b];
            Bitset ca = sa.complement(), cb = sb.complement();
            if (sa.intersects(sb) && sa.intersects(cb) && ca.intersects(sb) && ca.intersects(cb)) {
                cross[a].set(b);
                cross[b].set(a);
            }
        }
    return cross;
}

namespace detail {
inline void max_clique_rec(const std::vector<Bitset>& adj, Bitset cand, std::size_t size,
                           std::size_t& best) {
    if (size + cand.count() <= best) return;
    if (cand.none()) {
        best = std::max(best, size);
        return;
    }
    while (cand.any()) {
        std::size_t v = cand.first();
        cand.reset(v);
        if (size + 1 + cand.count() <= best) return;
        max_clique_rec(adj, cand & adj[v], size + 1, best);
    }
    best = std::max(best, size);
}
} // namespace detail

/// Dimension of the window: the size of the largest family of pairwise
/// crossing walls (equals the top cube dimension).
inline std::uint32_t dimension(const CubeWindow& w) {
    auto cross = crossing_graph(w);
    Bitset all(w.nwalls);
    for (WallId i = 0; i < w.nwalls; ++i) all.set(i);
    std::size_t best = 0;
    detail::max_clique_rec(cross, all, 0, best);
    if (w.nv > 1 && best == 0) best = 1; // edges exist but nothing crosses
    return static_cast<std::uint32_t>(best);
}

inline std::vector<std::string> CubeWindow::validate(bool check_median) const {
    std::vector<std::string> bad;
    if (nv == 0) {
        bad.push_back("window has no vertices");
        return bad;
    }
    for (const auto& e : edges) {
        if (e.u >= nv || e.v >= nv) bad.push_back("edge endpoint out of range");
        if (e.u == e.v) bad.push_back("self-loop at vertex " + std::to_string(e.u));
        if (e.wall >= nwalls) bad.push_back("edge wall label out of range");
    }
    if (!bad.empty()) return bad;
    if (wall_side.size() != nwalls) {
        bad.push_back("wall_side table missing");
        return bad;
    }

    // connectivity
    {
        std::vector<char> seen(nv, 0);
        std::queue<VertexId> q;
        q.push(0);
        seen[0] = 1;
        std::uint32_t cnt = 1;
        const auto& adj = adjacency();
        while (!q.empty()) {
            VertexId x = q.front();
            q.pop();
            for (auto [y, wy] : adj[x])
                if (!seen[y]) {
                    seen[y] = 1;
                    ++cnt;
                    q.push(y);
                }
        }
        if (cnt != nv) {
            bad.push_back("window not connected");
            return bad;
        }
    }

    // each wall: labelled edges are exactly the edges crossing the bipartition,
    // both sides nonempty, vertex 0 on side false
    for (WallId w = 0; w < nwalls; ++w) {
        const Bitset& side = wall_side[w];
        if (side.size() != nv) {
            bad.push_back("wall_side size mismatch at wall " + std::to_string(w));
            return bad;
        }
        if (side.test(0)) bad.push_back("wall " + std::to_string(w) + ": vertex 0 must lie on side false");
        std::size_t cnt = side.count();
        if (cnt == 0 || cnt == nv)
            bad.push_back("wall " + std::to_string(w) + ": halfspace empty");
    }
    std::size_t cross_edges = 0;
    for (const auto& e : edges) {
        bool crosses = wall_side[e.wall].test(e.u) != wall_side[e.wall].test(e.v);
        if (!crosses)
            bad.push_back("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                          ") does not cross its wall " + std::to_string(e.wall));
        for (WallId w = 0; w < nwalls; ++w)
            if (w != e.wall && wall_side[w].test(e.u) != wall_side[w].test(e.v))
                bad.push_back("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                              ") crosses foreign wall " + std::to_string(w));
        ++cross_edges;
    }
    (void)cross_edges;
    if (!bad.empty()) return bad;

    // partial cube: BFS distance == signature disagreement, per vertex
    {
        const auto& adj = adjacency();
        const auto& sig = signatures();
        std::vector<std::uint32_t> d(nv);
        for (VertexId s = 0; s < nv; ++s) {
            std::fill(d.begin(), d.end(), 0xffffffffu);
            std::queue<VertexId> q;
            q.push(s);
            d[s] = 0;
            while (!q.empty()) {
                VertexId x = q.front();
                q.pop();
                for (auto [y, wy] : adj[x])
                    if (d[y] == 0xffffffffu) {
                        d[y] = d[x] + 1;
                        q.push(y);
                    }
            }
            for (VertexId t = 0; t < nv; ++t)
                if (d[t] != sig[s].count_xor(sig[t])) {
                    bad.push_back("distance(" + std::to_string(s) + "," + std::to_string(t) +
                                  ") != separating wall count");
                    return bad;
                }
        }
    }

    // every alternating 4-cycle bounds a recorded square
    {
        std::unordered_map<std::uint64_t, char> have;
        auto key4 = [&](std::array<VertexId, 4> c) {
            std::sort(c.begin(), c.end());
            std::uint64_t k = 0;
            for (auto x : c) k = k * 0x100000001b3ull + x;
            return k;
        };
        for (const auto& s : squares) have[key4(s)] = 1;
        const auto& adj = adjacency();
        std::unordered_map<std::uint64_t, VertexId> edge_to;
        auto ekey = [&](VertexId a, WallId w) { return (std::uint64_t(a) << 32) | w; };
        for (const auto& e : edges) {
            edge_to[ekey(e.u, e.wall)] = e.v;
            edge_to[ekey(e.v, e.wall)] = e.u;
        }
        for (VertexId v = 0; v < nv; ++v)
            for (auto [a, w1] : adj[v])
                for (auto [b, w2] : adj[v]) {
                    if (w1 >= w2) continue;
                    auto it1 = edge_to.find(ekey(a, w2));
                    auto it2 = edge_to.find(ekey(b, w1));
                    if (it1 == edge_to.end() || it2 == edge_to.end()) continue;
                    if (it1->second != it2->second) continue;
                    std::array<VertexId, 4> c{v, a, it1->second, b};
                    if (!have.count(key4(c)))
                        bad.push_back("4-cycle at vertex " + std::to_string(v) +
                                      " (walls " + std::to_string(w1) + "," + std::to_string(w2) +
                                      ") has no recorded square");
                }
        for (const auto& s : squares) {
            // corners must form a genuine alternating cycle
            auto find_wall = [&](VertexId x, VertexId y) -> std::optional<WallId> {
                for (auto [z, wz] : adj[x])
                    if (z == y) return wz;
                return std::nullopt;
            };
            auto w01 = find_wall(s[0], s[1]);
            auto w12 = find_wall(s[1], s[2]);
            auto w23 = find_wall(s[2], s[3]);
            auto w30 = find_wall(s[3], s[0]);
            if (!w01 || !w12 || !w23 || !w30 || *w01 != *w23 || *w12 != *w30 || *w01 == *w12)
                bad.push_back("recorded square is not an alternating 4-cycle");
        }
        if (!bad.empty()) return bad;
    }

    if (check_median) {
        std::string why;
        if (!is_median_graph(*this, &why)) bad.push_back("1-skeleton not median: " + why);
    }
    return bad;
}

} // namespace cubical
