#pragma once

// Brute-force reference computations used as independent oracles in the test
// suites. Everything here recomputes results from first definitions and must
// stay independent of the library's implementation paths.

#include <algorithm>
#include <array>
#include <optional>
#include <queue>
#include <vector>

#include "cubical/complex_ops.hpp"
#include "cubical/cube_window.hpp"
#include "cubical/pocset.hpp"

namespace oracles {

using namespace cubical;

// all 2^n side assignments, filtered by the ultrafilter condition: no two
// chosen halfspaces disjoint (a < b*)
inline std::vector<Bitset> orientations_by_filter(const Pocset& p) {
    const std::uint32_t n = p.wall_count();
    std::vector<Bitset> out;
    for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
        std::vector<Halfspace> chosen;
        for (std::uint32_t i = 0; i < n; ++i)
            chosen.push_back(Halfspace::make(i, (mask >> i) & 1));
        bool ok = true;
        for (std::uint32_t i = 0; i < n && ok; ++i)
            for (std::uint32_t j = 0; j < n && ok; ++j)
                if (i != j && p.less(chosen[i], chosen[j].complement())) ok = false;
        if (ok) {
            Bitset o(n);
            for (std::uint32_t i = 0; i < n; ++i)
                if ((mask >> i) & 1) o.set(i);
            out.push_back(o);
        }
    }
    return out;
}

inline std::vector<std::vector<std::uint32_t>> all_pairs_dist(std::uint32_t nv,
                                                              const std::vector<std::pair<VertexId, VertexId>>& edges) {
    std::vector<std::vector<VertexId>> adj(nv);
    for (auto [u, v] : edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    std::vector<std::vector<std::uint32_t>> d(nv, std::vector<std::uint32_t>(nv, 0xffffffffu));
    for (VertexId s = 0; s < nv; ++s) {
        std::queue<VertexId> q;
        q.push(s);
        d[s][s] = 0;
        while (!q.empty()) {
            VertexId x = q.front();
            q.pop();
            for (VertexId y : adj[x])
                if (d[s][y] == 0xffffffffu) {
                    d[s][y] = d[s][x] + 1;
                    q.push(y);
                }
        }
    }
    return d;
}

// the definition, verbatim: every vertex triple has exactly one median
inline bool median_by_triples(std::uint32_t nv, const std::vector<std::pair<VertexId, VertexId>>& edges) {
    auto d = all_pairs_dist(nv, edges);
    for (VertexId u = 0; u < nv; ++u)
        for (VertexId v = u; v < nv; ++v)
            for (VertexId w = v; w < nv; ++w) {
                int medians = 0;
                for (VertexId x = 0; x < nv; ++x)
                    if (d[u][x] + d[x][v] == d[u][v] && d[u][x] + d[x][w] == d[u][w] &&
                        d[v][x] + d[x][w] == d[v][w])
                        ++medians;
                if (medians != 1) return false;
            }
    return true;
}

inline std::vector<std::pair<VertexId, VertexId>> edge_pairs(const CubeWindow& w) {
    std::vector<std::pair<VertexId, VertexId>> es;
    for (const auto& e : w.edges) es.push_back({e.u, e.v});
    return es;
}

// dimension oracle: largest wall subset that pairwise crosses, by subset scan
inline std::uint32_t dimension_by_subsets(const CubeWindow& w) {
    std::uint32_t best = w.nv > 1 ? 1 : 0;
    auto crosses = [&](WallId a, WallId b) {
        const Bitset &sa = w.wall_side[a], &sb = w.wall_side[b];
        Bitset ca = sa.complement(), cb = sb.complement();
        return sa.intersects(sb) && sa.intersects(cb) && ca.intersects(sb) && ca.intersects(cb);
    };
    if (w.nwalls > 22) throw std::runtime_error("dimension oracle limited to 22 walls");
    for (std::uint64_t mask = 1; mask < (1ull << w.nwalls); ++mask) {
        std::vector<WallId> sel;
        for (WallId i = 0; i < w.nwalls; ++i)
            if ((mask >> i) & 1) sel.push_back(i);
        bool ok = true;
        for (std::size_t i = 0; i < sel.size() && ok; ++i)
            for (std::size_t j = i + 1; j < sel.size() && ok; ++j)
                if (!crosses(sel[i], sel[j])) ok = false;
        if (ok) best = std::max<std::uint32_t>(best, static_cast<std::uint32_t>(sel.size()));
    }
    return best;
}

// hull oracle: close under medians m(x, y, z) with x, y in the set and z
// ranging over the whole window (majority vote of wall signatures)
inline Bitset hull_by_median_closure(const CubeWindow& w, Bitset A) {
    const auto& sig = w.signatures();
    std::map<std::vector<std::uint64_t>, VertexId> by_sig;
    auto sig_key = [&](VertexId v) {
        std::vector<std::uint64_t> k;
        for (WallId h = 0; h < w.nwalls; ++h)
            if (sig[v].test(h)) k.push_back(h);
        return k;
    };
    for (VertexId v = 0; v < w.nv; ++v) by_sig[sig_key(v)] = v;
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<VertexId> in;
        A.for_each([&](std::size_t v) { in.push_back(static_cast<VertexId>(v)); });
        for (VertexId x : in)
            for (VertexId y : in)
                for (VertexId z = 0; z < w.nv; ++z) {
                    std::vector<std::uint64_t> mk;
                    for (WallId h = 0; h < w.nwalls; ++h) {
                        int c = (sig[x].test(h) ? 1 : 0) + (sig[y].test(h) ? 1 : 0) + (sig[z].test(h) ? 1 : 0);
                        if (c >= 2) mk.push_back(h);
                    }
                    auto it = by_sig.find(mk);
                    if (it != by_sig.end() && !A.test(it->second)) {
                        A.set(it->second);
                        grew = true;
                    }
                }
    }
    return A;
}

// interval closure: all vertices on geodesics between members, to a fixpoint
inline Bitset hull_by_interval_closure(const CubeWindow& w, Bitset A) {
    auto d = all_pairs_dist(w.nv, edge_pairs(w));
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<VertexId> in;
        A.for_each([&](std::size_t v) { in.push_back(static_cast<VertexId>(v)); });
        for (VertexId x : in)
            for (VertexId y : in)
                for (VertexId m = 0; m < w.nv; ++m)
                    if (!A.test(m) && d[x][m] + d[m][y] == d[x][y]) {
                        A.set(m);
                        grew = true;
                    }
    }
    return A;
}

// separating hyperplanes by definition, straight over the bipartitions
inline std::vector<WallId> separating_by_scan(const CubeWindow& w, const Bitset& A, const Bitset& B) {
    std::vector<WallId> out;
    for (WallId h = 0; h < w.nwalls; ++h) {
        bool a0 = false, a1 = false, b0 = false, b1 = false;
        A.for_each([&](std::size_t v) { (w.wall_side[h].test(v) ? a1 : a0) = true; });
        B.for_each([&](std::size_t v) { (w.wall_side[h].test(v) ? b1 : b0) = true; });
        if ((a0 && !a1 && b1 && !b0) || (a1 && !a0 && b0 && !b1)) out.push_back(h);
    }
    return out;
}

} // namespace oracles
