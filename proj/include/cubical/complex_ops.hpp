#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "cubical/cube_window.hpp"

namespace cubical {

/// A subcomplex cut out of a parent window, with the vertex map back into it.
struct SubWindow {
    CubeWindow window;
    std::vector<VertexId> to_parent;
};

/// Walls separating A from B: A entirely on one side, B entirely on the other.
inline std::vector<WallId> separating_hyperplanes(const CubeWindow& w, const Bitset& A, const Bitset& B) {
    if (A.none() || B.none()) throw WindowError("separating_hyperplanes: empty vertex set");
    if (A.size() != w.nv || B.size() != w.nv) throw WindowError("separating_hyperplanes: vertex set size mismatch");
    std::vector<WallId> out;
    for (WallId h = 0; h < w.nwalls; ++h) {
        const Bitset& side = w.wall_side[h];
        Bitset other = side.complement();
        bool a_in = A.is_subset_of(side), a_out = A.is_subset_of(other);
        bool b_in = B.is_subset_of(side), b_out = B.is_subset_of(other);
        if ((a_in && b_out) || (a_out && b_in)) out.push_back(h);
    }
    return out;
}

inline std::vector<WallId> separating_hyperplanes(const CubeWindow& w, VertexId a, VertexId b) {
    Bitset A(w.nv), B(w.nv);
    A.set(a);
    B.set(b);
    return separating_hyperplanes(w, A, B);
}

/// Walls cutting A, i.e. separating some pair of its vertices.
inline std::vector<WallId> walls_cutting(const CubeWindow& w, const Bitset& A) {
    std::vector<WallId> out;
    for (WallId h = 0; h < w.nwalls; ++h) {
        const Bitset& side = w.wall_side[h];
        if (A.intersects(side) && A.intersects(side.complement())) out.push_back(h);
    }
    return out;
}

/// Vertex set of the cubical convex hull of A: every vertex that agrees with
/// A on each wall not cutting A.
inline Bitset convex_hull_vertices(const CubeWindow& w, const Bitset& A) {
    if (A.none()) throw WindowError("convex_hull: empty vertex set");
    Bitset hull(w.nv);
    for (VertexId v = 0; v < w.nv; ++v) hull.set(v);
    for (WallId h = 0; h < w.nwalls; ++h) {
        const Bitset& side = w.wall_side[h];
        if (A.is_subset_of(side)) {
            hull &= side;
        } else {
            Bitset other = side.complement();
            if (A.is_subset_of(other)) hull &= other;
        }
    }
    return hull;
}

/// Induced subwindow on a hull-closed vertex set.
inline SubWindow induced_subwindow(const CubeWindow& w, const Bitset& verts) {
    SubWindow out;
    std::vector<VertexId> map_new(w.nv, 0xffffffffu);
    verts.for_each([&](std::size_t v) {
        map_new[v] = static_cast<VertexId>(out.to_parent.size());
        out.to_parent.push_back(static_cast<VertexId>(v));
    });
    CubeWindow& t = out.window;
    t.nv = static_cast<std::uint32_t>(out.to_parent.size());
    if (t.nv == 0) throw WindowError("induced_subwindow: empty vertex set");

    std::vector<WallId> kept = walls_cutting(w, verts);
    std::vector<WallId> wall_new(w.nwalls, 0xffffffffu);
    t.nwalls = static_cast<std::uint32_t>(kept.size());
    t.wall_side.assign(t.nwalls, Bitset(t.nv));
    t.wall_label.resize(t.nwalls);
    for (std::uint32_t i = 0; i < kept.size(); ++i) {
        wall_new[kept[i]] = i;
        t.wall_label[i] = w.wall_label.empty() ? kept[i] : w.wall_label[kept[i]];
        Bitset side(t.nv);
        for (VertexId nv2 = 0; nv2 < t.nv; ++nv2)
            if (w.wall_side[kept[i]].test(out.to_parent[nv2])) side.set(nv2);
        if (side.test(0)) side = side.complement();
        t.wall_side[i] = side;
    }
    for (const auto& e : w.edges)
        if (verts.test(e.u) && verts.test(e.v))
            t.edges.push_back({map_new[e.u], map_new[e.v], wall_new[e.wall]});
    for (const auto& s : w.squares)
        if (verts.test(s[0]) && verts.test(s[1]) && verts.test(s[2]) && verts.test(s[3]))
            t.squares.push_back({map_new[s[0]], map_new[s[1]], map_new[s[2]], map_new[s[3]]});
    for (const auto& c : w.cubes) {
        bool all = true;
        for (auto x : c)
            if (!verts.test(x)) all = false;
        if (all) {
            std::array<VertexId, 8> cc{};
            for (int i = 0; i < 8; ++i) cc[static_cast<std::size_t>(i)] = map_new[c[static_cast<std::size_t>(i)]];
            t.cubes.push_back(cc);
        }
    }
    t.vertex_label.resize(t.nv);
    for (VertexId v = 0; v < t.nv; ++v)
        t.vertex_label[v] = w.vertex_label.empty() ? out.to_parent[v] : w.vertex_label[out.to_parent[v]];
    return out;
}

/// Cubical convex hull of a vertex set, as a subwindow.
inline SubWindow convex_hull(const CubeWindow& w, const Bitset& A) {
    return induced_subwindow(w, convex_hull_vertices(w, A));
}

/**
 * Combinatorial geodesic from u to v: vertex sequence of a minimum-length
 * path in the 1-skeleton. Deterministic: at each step the smallest-id
 * neighbour closer to the target is taken. u == v yields the single-vertex
 * path (length 0).
 */
inline std::vector<VertexId> combinatorial_geodesic(const CubeWindow& w, VertexId u, VertexId v) {
    if (u >= w.nv || v >= w.nv) throw WindowError("combinatorial_geodesic: vertex out of range");
    // distances to v via BFS
    std::vector<std::uint32_t> d(w.nv, 0xffffffffu);
    const auto& adj = w.adjacency();
    std::queue<VertexId> q;
    q.push(v);
    d[v] = 0;
    while (!q.empty()) {
        VertexId x = q.front();
        q.pop();
        for (auto [y, wy] : adj[x])
            if (d[y] == 0xffffffffu) {
                d[y] = d[x] + 1;
                q.push(y);
            }
    }
    if (d[u] == 0xffffffffu) throw WindowError("combinatorial_geodesic: vertices not connected");
    std::vector<VertexId> path{u};
    VertexId cur = u;
    while (cur != v) {
        VertexId next = 0xffffffffu;
        for (auto [y, wy] : adj[cur])
            if (d[y] + 1 == d[cur] && y < next) next = y;
        path.push_back(next);
        cur = next;
    }
    return path;
}

struct ParallelReport {
    bool parallel = false;
    bool equal = false;
};

/// Find an interval-closure violation of A: a pair x,y in A plus a vertex m
/// on a geodesic between them outside A. Returns {x, y, m} or nullopt.
inline std::optional<std::array<VertexId, 3>> convexity_violation(const CubeWindow& w, const Bitset& A) {
    Bitset hull = convex_hull_vertices(w, A);
    if (hull == A) return std::nullopt;
    const auto& sig = w.signatures();
    std::vector<VertexId> in;
    A.for_each([&](std::size_t v) { in.push_back(static_cast<VertexId>(v)); });
    Bitset extra = hull;
    extra &= A.complement();
    std::optional<std::array<VertexId, 3>> found;
    extra.for_each([&](std::size_t m) {
        if (found) return;
        for (VertexId x : in) {
            for (VertexId y : in) {
                // m between x and y iff separating walls of (x,m) and (m,y) are disjoint
                std::size_t dxm = sig[x].count_xor(sig[static_cast<VertexId>(m)]);
                std::size_t dmy = sig[static_cast<VertexId>(m)].count_xor(sig[y]);
                std::size_t dxy = sig[x].count_xor(sig[y]);
                if (dxm + dmy == dxy) {
                    found = std::array<VertexId, 3>{x, y, static_cast<VertexId>(m)};
                    return;
                }
            }
        }
    });
    return found;
}

/**
 * Parallelism test for convex subcomplexes A, B of w (given as vertex sets):
 * they are parallel iff they are cut by the same walls, and equal iff in
 * addition no wall separates them. Non-convex input is an error naming an
 * interval violation.
 */
inline ParallelReport are_parallel(const CubeWindow& w, const Bitset& A, const Bitset& B) {
    if (A.none() || B.none()) throw WindowError("are_parallel: empty vertex set");
    for (const Bitset* S : {&A, &B})
        if (auto viol = convexity_violation(w, *S))
            throw WindowError("are_parallel: input not convex; vertices " + std::to_string((*viol)[0]) +
                              "," + std::to_string((*viol)[1]) + " have median-path vertex " +
                              std::to_string((*viol)[2]) + " outside the set");
    ParallelReport r;
    r.parallel = walls_cutting(w, A) == walls_cutting(w, B);
    r.equal = r.parallel && separating_hyperplanes(w, A, B).empty();
    return r;
}

namespace detail {

struct CellComplex {
    // cell ids: [0,nv) vertices, then edges, then squares, then cubes
    const CubeWindow& w;
    std::uint32_t nv, ne, ns, nc;
    std::map<std::pair<VertexId, VertexId>, std::uint32_t> edge_ix;
    std::map<std::array<VertexId, 4>, std::uint32_t> square_ix;

    explicit CellComplex(const CubeWindow& win) : w(win) {
        nv = w.nv;
        ne = static_cast<std::uint32_t>(w.edges.size());
        ns = static_cast<std::uint32_t>(w.squares.size());
        nc = static_cast<std::uint32_t>(w.cubes.size());
        for (std::uint32_t i = 0; i < ne; ++i) {
            auto [u, v] = std::minmax(w.edges[i].u, w.edges[i].v);
            edge_ix[{u, v}] = i;
        }
        for (std::uint32_t i = 0; i < ns; ++i) {
            auto c = w.squares[i];
            std::sort(c.begin(), c.end());
            square_ix[c] = i;
        }
    }
    std::uint32_t cell_count() const { return nv + ne + ns + nc; }
    std::uint32_t edge_cell(std::uint32_t e) const { return nv + e; }
    std::uint32_t square_cell(std::uint32_t s) const { return nv + ne + s; }
    std::uint32_t cube_cell(std::uint32_t c) const { return nv + ne + ns + c; }

    std::uint32_t edge_index(VertexId a, VertexId b) const {
        auto [u, v] = std::minmax(a, b);
        auto it = edge_ix.find({u, v});
        if (it == edge_ix.end()) throw WindowError("subdivide: square/cube references a missing edge");
        return it->second;
    }
    std::uint32_t square_index(std::array<VertexId, 4> c) const {
        std::sort(c.begin(), c.end());
        auto it = square_ix.find(c);
        if (it == square_ix.end()) throw WindowError("subdivide: cube references a missing square");
        return it->second;
    }
    // walls spanned by a square: of edges c0c1 and c1c2
    std::pair<WallId, WallId> square_walls(std::uint32_t s) const {
        const auto& q = w.squares[s];
        return {w.edges[edge_index(q[0], q[1])].wall, w.edges[edge_index(q[1], q[2])].wall};
    }
    // side of wall h a cell lies in entirely; nullopt if the cell crosses h
    std::optional<bool> cell_side(std::uint32_t cell, WallId h) const {
        auto side_of = [&](VertexId v) { return w.wall_side[h].test(v); };
        std::vector<VertexId> corners = cell_corners(cell);
        bool s0 = side_of(corners[0]);
        for (VertexId v : corners)
            if (side_of(v) != s0) return std::nullopt;
        return s0;
    }
    std::vector<VertexId> cell_corners(std::uint32_t cell) const {
        if (cell < nv) return {cell};
        if (cell < nv + ne) {
            const auto& e = w.edges[cell - nv];
            return {e.u, e.v};
        }
        if (cell < nv + ne + ns) {
            const auto& s = w.squares[cell - nv - ne];
            return {s[0], s[1], s[2], s[3]};
        }
        const auto& c = w.cubes[cell - nv - ne - ns];
        return std::vector<VertexId>(c.begin(), c.end());
    }
};

} // namespace detail

/**
 * Single cubical subdivision. Vertices of the result are the cells of the
 * input (original vertices first, then edge, square and cube midpoints);
 * each d-cube becomes 2^d d-cubes and each wall splits into two. No isometry
 * of the result inverts a wall that arose from a cube-centre reflection.
 */
inline CubeWindow subdivide(const CubeWindow& w) {
    detail::CellComplex cx(w);
    CubeWindow t;
    t.nv = cx.cell_count();
    t.nwalls = 2 * w.nwalls;

    auto new_wall = [&](WallId h, bool side) { return static_cast<WallId>(2 * h + (side ? 1 : 0)); };

    // edges: incident cell pairs with dimension difference one
    auto emit_edge = [&](std::uint32_t small, std::uint32_t big, WallId h, bool side_of_small) {
        t.edges.push_back({small, big, new_wall(h, side_of_small)});
    };
    // vertex - edge midpoint
    for (std::uint32_t e = 0; e < cx.ne; ++e) {
        const auto& ed = w.edges[e];
        emit_edge(ed.u, cx.edge_cell(e), ed.wall, w.wall_side[ed.wall].test(ed.u));
        emit_edge(ed.v, cx.edge_cell(e), ed.wall, w.wall_side[ed.wall].test(ed.v));
    }
    // edge midpoint - square centre
    for (std::uint32_t s = 0; s < cx.ns; ++s) {
        const auto& q = w.squares[s];
        for (int i = 0; i < 4; ++i) {
            std::uint32_t e = cx.edge_index(q[static_cast<std::size_t>(i)], q[static_cast<std::size_t>((i + 1) % 4)]);
            auto [w1, w2] = cx.square_walls(s);
            WallId across = (w.edges[e].wall == w1) ? w2 : w1;
            auto side = cx.cell_side(cx.edge_cell(e), across);
            emit_edge(cx.edge_cell(e), cx.square_cell(s), across, *side);
        }
    }
    // square centre - cube centre
    for (std::uint32_t c = 0; c < cx.nc; ++c) {
        const auto& cu = w.cubes[c];
        for (int bit = 0; bit < 3; ++bit)
            for (int val = 0; val < 2; ++val) {
                std::array<VertexId, 4> face{};
                int k = 0;
                for (int mask = 0; mask < 8; ++mask)
                    if (((mask >> bit) & 1) == val) face[static_cast<std::size_t>(k++)] = cu[static_cast<std::size_t>(mask)];
                std::uint32_t s = cx.square_index(face);
                // the wall across: direction `bit` of the cube
                VertexId a = cu[0];
                VertexId b = cu[static_cast<std::size_t>(1 << bit)];
                WallId across = w.edges[cx.edge_index(a, b)].wall;
                auto side = cx.cell_side(cx.square_cell(s), across);
                emit_edge(cx.square_cell(s), cx.cube_cell(c), across, *side);
            }
    }

    // squares: one per (corner, square) flag and per (edge, cube) flag
    for (std::uint32_t s = 0; s < cx.ns; ++s) {
        const auto& q = w.squares[s];
        for (int i = 0; i < 4; ++i) {
            VertexId v = q[static_cast<std::size_t>(i)];
            std::uint32_t e1 = cx.edge_index(v, q[static_cast<std::size_t>((i + 3) % 4)]);
            std::uint32_t e2 = cx.edge_index(v, q[static_cast<std::size_t>((i + 1) % 4)]);
            t.squares.push_back({v, cx.edge_cell(e1), cx.square_cell(s), cx.edge_cell(e2)});
        }
    }
    for (std::uint32_t c = 0; c < cx.nc; ++c) {
        const auto& cu = w.cubes[c];
        for (int bit1 = 0; bit1 < 3; ++bit1)
            for (int mask = 0; mask < 8; ++mask) {
                if ((mask >> bit1) & 1) continue;
                int other = mask | (1 << bit1);
                std::uint32_t e = cx.edge_index(cu[static_cast<std::size_t>(mask)], cu[static_cast<std::size_t>(other)]);
                // the two cube faces containing this edge
                std::vector<std::uint32_t> fs;
                for (int bit2 = 0; bit2 < 3; ++bit2) {
                    if (bit2 == bit1) continue;
                    int val = (mask >> bit2) & 1;
                    std::array<VertexId, 4> face{};
                    int k = 0;
                    for (int m2 = 0; m2 < 8; ++m2)
                        if (((m2 >> bit2) & 1) == val) face[static_cast<std::size_t>(k++)] = cu[static_cast<std::size_t>(m2)];
                    fs.push_back(cx.square_index(face));
                }
                t.squares.push_back({cx.edge_cell(e), cx.square_cell(fs[0]), cx.cube_cell(c), cx.square_cell(fs[1])});
            }
    }

    // cubes: one per (corner, cube) flag
    for (std::uint32_t c = 0; c < cx.nc; ++c) {
        const auto& cu = w.cubes[c];
        for (int mask = 0; mask < 8; ++mask) {
            VertexId v = cu[static_cast<std::size_t>(mask)];
            std::array<std::uint32_t, 8> cc{};
            for (int sub = 0; sub < 8; ++sub) {
                int target = mask ^ sub; // flip the chosen directions
                int popcnt = __builtin_popcount(static_cast<unsigned>(sub));
                if (popcnt == 0) {
                    cc[static_cast<std::size_t>(sub)] = v;
                } else if (popcnt == 1) {
                    cc[static_cast<std::size_t>(sub)] = cx.edge_cell(cx.edge_index(v, cu[static_cast<std::size_t>(target)]));
                } else if (popcnt == 2) {
                    std::array<VertexId, 4> face{};
                    int k = 0;
                    int fixed_bit = 0;
                    for (int b = 0; b < 3; ++b)
                        if (!((sub >> b) & 1)) fixed_bit = b;
                    int val = (mask >> fixed_bit) & 1;
                    for (int m2 = 0; m2 < 8; ++m2)
                        if (((m2 >> fixed_bit) & 1) == val) face[static_cast<std::size_t>(k++)] = cu[static_cast<std::size_t>(m2)];
                    cc[static_cast<std::size_t>(sub)] = cx.square_cell(cx.square_index(face));
                } else {
                    cc[static_cast<std::size_t>(sub)] = cx.cube_cell(c);
                }
            }
            t.cubes.push_back(cc);
        }
    }

    // wall bipartitions: wall (h, j) cuts off the cells lying entirely in side j of h
    t.wall_side.assign(t.nwalls, Bitset(t.nv));
    for (WallId h = 0; h < w.nwalls; ++h)
        for (int j = 0; j < 2; ++j) {
            Bitset inside(t.nv);
            for (std::uint32_t cell = 0; cell < t.nv; ++cell) {
                auto side = cx.cell_side(cell, h);
                if (side && *side == static_cast<bool>(j)) inside.set(cell);
            }
            if (inside.test(0)) inside = inside.complement();
            t.wall_side[new_wall(h, static_cast<bool>(j))] = inside;
        }
    t.default_labels();
    return t;
}

} // namespace cubical
