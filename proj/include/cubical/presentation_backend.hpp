#pragma once

#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cubical/backend.hpp"
#include "cubical/complex_ops.hpp"
#include "cubical/rewriting.hpp"

namespace cubical {

/**
 * Rewriting backend: a group given by a square presentation (all relators of
 * length 4), acting on the universal cover of its presentation complex. The
 * word problem runs through a confluent shortlex rewriting system produced
 * by Knuth-Bendix completion; if completion hits its limits the backend is
 * still usable for nothing but reporting that fact - normal forms throw and
 * window() raises the incomplete-KB error.
 *
 * Geometry is window-bounded: windows are hull-closed balls computed inside
 * a larger exploration, walls are square-opposite classes of edges within
 * the exploration, and halfspace verdicts are only issued when both walls
 * cross the convex window (which makes them globally sound); otherwise the
 * verdict is Unknown.
 */
class PresentationBackend final : public ActionBackend {
public:
    explicit PresentationBackend(const Presentation& p, KBLimits limits = {})
        : presentation_(p), kb_(knuth_bendix(p, limits)) {
        square_presentation_ = !p.relators.empty();
        for (const auto& r : p.relators)
            if (r.size() != 4) square_presentation_ = false;
        if (usable()) vertex_id(kb_.system.reduce(Word{}));
        if (usable() && square_presentation_) check_links();
    }

    bool usable() const { return kb_.complete; }
    const KBResult& completion() const { return kb_; }
    bool geometric() const { return usable() && square_presentation_; }

    std::string kind() const override { return "npc-square-presentation"; }
    const Alphabet& alphabet() const override { return presentation_.alphabet; }
    std::uint32_t complex_dimension() const override { return 2; }
    bool global_oracle() const override { return false; }

    Word normal_form(const Word& w) const override {
        require_usable();
        presentation_.alphabet.check_word(w);
        return kb_.system.reduce(w);
    }

    std::uint64_t vertex_image(const Word& w, std::uint64_t v) override {
        require_usable();
        return vertex_id(kb_.system.reduce(normal_form(w) + word_of(v)));
    }

    std::string describe_vertex(std::uint64_t v) const override {
        const Word& w = word_of(v);
        return w.empty() ? "1" : w;
    }
    std::string describe_wall(std::uint64_t wall) const override {
        const auto& k = wkey_of(wall);
        return "edge(" + (k.first.empty() ? std::string("1") : k.first) + "," + std::string(1, k.second) + ")";
    }

    CubeWindow window(std::uint32_t radius) override {
        require_geometric();
        auto cached = window_cache_.find(radius);
        if (cached != window_cache_.end()) return cached->second;
        Exploration ex = explore(2 * radius + 2);
        // hull-close the radius ball inside the exploration
        Bitset ball_set(ex.win.nv);
        for (VertexId v = 0; v < ex.win.nv; ++v)
            if (ex.depth[v] <= radius) ball_set.set(v);
        Bitset hull = convex_hull_vertices(ex.win, ball_set);
        std::uint32_t max_depth = 0;
        hull.for_each([&](std::size_t v) { max_depth = std::max(max_depth, ex.depth[v]); });
        if (max_depth > 2 * radius)
            throw BackendError("window hull escapes the exploration; raise the radius");
        SubWindow sw = induced_subwindow(ex.win, hull);
        window_cache_.emplace(radius, sw.window);
        return sw.window;
    }

    SignedWall image_halfspace(const Word& w, SignedWall h) override {
        require_usable();
        const auto& k = wkey_of(h.wall);
        Word tail = kb_.system.reduce(normal_form(w) + k.first);
        // left translation preserves the edge letter
        return SignedWall{wall_id(tail, k.second), h.side};
    }

    HalfspaceRelation halfspace_relation(SignedWall a, SignedWall b, const Budget& budget) override {
        require_geometric();
        HalfspaceRelation rel;
        rel.verdict = HsRel::Unknown;
        if (budget.max_radius == 0) {
            rel.witness = "no exploration budget";
            return rel;
        }
        CubeWindow w = window(budget.max_radius);
        rel.radius_used = budget.max_radius;
        auto ha = locate_halfspace(w, a);
        auto hb = locate_halfspace(w, b);
        if (!ha || !hb) {
            rel.witness = "wall not crossing the explored window";
            return rel;
        }
        Bitset sa = w.halfspace_set(*ha);
        Bitset sb = w.halfspace_set(*hb);
        // both walls cross the convex window, so the restricted relation is
        // the global one (Helly for convex subcomplexes)
        if (ha->wall == hb->wall) {
            rel.verdict = (sa == sb) ? HsRel::Equal : HsRel::Complement;
        } else if (sa == sb) {
            rel.verdict = HsRel::Equal;
        } else if (sa.is_subset_of(sb)) {
            rel.verdict = HsRel::FirstInsideSecond;
        } else if (sb.is_subset_of(sa)) {
            rel.verdict = HsRel::SecondInsideFirst;
        } else if (!sa.intersects(sb)) {
            rel.verdict = HsRel::FacingDisjoint;
        } else if ((sa | sb).count() == w.nv) {
            rel.verdict = HsRel::Codisjoint;
        } else {
            rel.verdict = HsRel::Transverse;
        }
        rel.witness = "window radius " + std::to_string(budget.max_radius);
        return rel;
    }

    /// Side resolution goes through the defining edge's head vertex, since
    /// window-relative walls carry no global base-side information.
    std::optional<WindowHalfspace> locate_halfspace(const CubeWindow& w, SignedWall h) const override {
        const auto& k = wkey_of(h.wall);
        auto tail_id = vreg_.find(k.first);
        if (tail_id == vreg_.end()) return std::nullopt;
        auto tail_local = w.vertex_by_label(tail_id->second);
        if (!tail_local) return std::nullopt;
        // find the incident window edge with this letter
        const auto& adj = w.adjacency();
        Word head_word = kb_.system.reduce(k.first + k.second);
        auto head_id = vreg_.find(head_word);
        if (head_id == vreg_.end()) return std::nullopt;
        auto head_local = w.vertex_by_label(head_id->second);
        if (!head_local) return std::nullopt;
        for (auto [y, wy] : adj[*tail_local])
            if (y == *head_local) {
                // h.side true = side containing the head vertex
                bool head_on_true = w.wall_side[wy].test(*head_local);
                return WindowHalfspace{wy, h.side == true ? head_on_true : !head_on_true};
            }
        return std::nullopt;
    }

    std::uint64_t vertex_id(const Word& nf) {
        auto it = vreg_.find(nf);
        if (it != vreg_.end()) return it->second;
        std::uint64_t id = vwords_.size();
        vreg_.emplace(nf, id);
        vwords_.push_back(nf);
        return id;
    }
    std::uint64_t wall_id(const Word& tail_nf, char letter) {
        // canonicalise the defining edge: use the lexicographically smaller
        // endpoint as the tail
        Word head = kb_.system.reduce(tail_nf + letter);
        Word t = tail_nf;
        char l = letter;
        if (presentation_.alphabet.shortlex_less(head, t)) {
            t = head;
            l = inverse_letter(letter);
        }
        std::string key = t + "|" + l;
        auto it = wreg_.find(key);
        if (it != wreg_.end()) return it->second;
        std::uint64_t id = wkeys_.size();
        wreg_.emplace(key, id);
        wkeys_.push_back({t, l});
        return id;
    }

private:
    struct Exploration {
        CubeWindow win;
        std::vector<std::uint32_t> depth;
    };

    void require_usable() const {
        if (!usable())
            throw BackendError("rewriting system incomplete (" + kb_.message + "); backend unusable for normal forms");
    }
    void require_geometric() const {
        require_usable();
        if (!square_presentation_)
            throw BackendError("presentation is not a square presentation; no geometric model");
    }

    const Word& word_of(std::uint64_t v) const {
        if (v >= vwords_.size()) throw BackendError("unknown vertex id");
        return vwords_[v];
    }
    const std::pair<Word, char>& wkey_of(std::uint64_t w) const {
        if (w >= wkeys_.size()) throw BackendError("unknown wall id");
        return wkeys_[w];
    }

    Exploration explore(std::uint32_t radius) {
        // BFS ball of normal forms
        std::vector<Word> verts{kb_.system.reduce(Word{})};
        std::unordered_map<std::string, VertexId> local{{verts[0], 0}};
        std::vector<std::uint32_t> depth{0};
        for (std::size_t head = 0; head < verts.size(); ++head) {
            if (depth[head] == radius) continue;
            for (char c : presentation_.alphabet.letters()) {
                Word n = kb_.system.reduce(verts[head] + c);
                if (local.emplace(n, static_cast<VertexId>(verts.size())).second) {
                    verts.push_back(n);
                    depth.push_back(depth[head] + 1);
                }
            }
        }
        // order by global id
        std::vector<std::pair<std::uint64_t, VertexId>> order;
        for (VertexId i = 0; i < verts.size(); ++i) order.push_back({vertex_id(verts[i]), i});
        std::sort(order.begin(), order.end());
        std::vector<VertexId> newpos(verts.size());
        Exploration ex;
        ex.win.nv = static_cast<std::uint32_t>(verts.size());
        for (VertexId i = 0; i < ex.win.nv; ++i) {
            newpos[order[i].second] = i;
            ex.win.vertex_label.push_back(order[i].first);
            ex.depth.push_back(depth[order[i].second]);
        }
        // edges, recording the letter of each
        struct E { VertexId u, v; char letter; };
        std::vector<E> raw_edges;
        for (VertexId i = 0; i < verts.size(); ++i)
            for (char c : presentation_.alphabet.letters()) {
                Word n = kb_.system.reduce(verts[i] + c);
                auto it = local.find(n);
                if (it == local.end()) continue;
                VertexId a = newpos[i], b = newpos[it->second];
                if (a < b) raw_edges.push_back({a, b, c});
            }
        // wall classes: edges opposite in a 4-cycle are equivalent
        std::vector<std::uint32_t> dsu(raw_edges.size());
        for (std::uint32_t i = 0; i < dsu.size(); ++i) dsu[i] = i;
        std::function<std::uint32_t(std::uint32_t)> find = [&](std::uint32_t x) {
            while (dsu[x] != x) x = dsu[x] = dsu[dsu[x]];
            return x;
        };
        auto unite = [&](std::uint32_t a, std::uint32_t b) { dsu[find(a)] = find(b); };
        std::map<std::pair<VertexId, VertexId>, std::uint32_t> edge_ix;
        for (std::uint32_t i = 0; i < raw_edges.size(); ++i)
            edge_ix[{raw_edges[i].u, raw_edges[i].v}] = i;
        auto eix = [&](VertexId a, VertexId b) -> std::optional<std::uint32_t> {
            auto [u, v] = std::minmax(a, b);
            auto it = edge_ix.find({u, v});
            if (it == edge_ix.end()) return std::nullopt;
            return it->second;
        };
        // adjacency for 4-cycle detection
        std::vector<std::vector<VertexId>> adj(ex.win.nv);
        for (const auto& e : raw_edges) {
            adj[e.u].push_back(e.v);
            adj[e.v].push_back(e.u);
        }
        for (VertexId g = 0; g < ex.win.nv; ++g)
            for (VertexId x : adj[g])
                for (VertexId y : adj[g]) {
                    if (x >= y) continue;
                    // common neighbour z != g completes a square
                    for (VertexId z : adj[x]) {
                        if (z == g) continue;
                        bool zy = false;
                        for (VertexId t : adj[y])
                            if (t == z) zy = true;
                        if (!zy) continue;
                        auto e1 = eix(g, x), e2 = eix(y, z), e3 = eix(g, y), e4 = eix(x, z);
                        if (e1 && e2) unite(*e1, *e2);
                        if (e3 && e4) unite(*e3, *e4);
                        if (g < x && g < y && g < z) ex.win.squares.push_back({g, x, z, y});
                    }
                }
        // wall ids per class, 2-colouring the pieces left by removing a class
        std::map<std::uint32_t, WallId> class_wall;
        for (std::uint32_t i = 0; i < raw_edges.size(); ++i) {
            std::uint32_t c = find(i);
            if (!class_wall.count(c)) {
                WallId wid = static_cast<WallId>(class_wall.size());
                class_wall[c] = wid;
            }
        }
        ex.win.nwalls = static_cast<std::uint32_t>(class_wall.size());
        for (const auto& e : raw_edges)
            ex.win.edges.push_back({e.u, e.v, class_wall[find(eix(e.u, e.v).value())]});
        // global wall labels from the minimal edge of each class
        std::vector<std::pair<Word, char>> wall_min_edge(ex.win.nwalls, {Word{}, 0});
        std::vector<bool> has_min(ex.win.nwalls, false);
        for (const auto& e : raw_edges) {
            WallId wid = class_wall[find(eix(e.u, e.v).value())];
            Word tw = word_of(ex.win.vertex_label[e.u]);
            auto cand = std::make_pair(tw, e.letter);
            if (!has_min[wid] || presentation_.alphabet.shortlex_less(cand.first, wall_min_edge[wid].first) ||
                (cand.first == wall_min_edge[wid].first && cand.second < wall_min_edge[wid].second)) {
                wall_min_edge[wid] = cand;
                has_min[wid] = true;
            }
        }
        ex.win.wall_label.resize(ex.win.nwalls);
        for (WallId wv = 0; wv < ex.win.nwalls; ++wv)
            ex.win.wall_label[wv] = wall_id(wall_min_edge[wv].first, wall_min_edge[wv].second);
        // bipartitions: 2-colour components of (graph minus class edges)
        ex.win.wall_side.assign(ex.win.nwalls, Bitset(ex.win.nv));
        for (WallId wv = 0; wv < ex.win.nwalls; ++wv) {
            std::vector<int> comp(ex.win.nv, -1);
            int ncomp = 0;
            for (VertexId s = 0; s < ex.win.nv; ++s) {
                if (comp[s] != -1) continue;
                std::queue<VertexId> q;
                q.push(s);
                comp[s] = ncomp;
                while (!q.empty()) {
                    VertexId x = q.front();
                    q.pop();
                    for (const auto& e : ex.win.edges) {
                        if (e.wall == wv) continue;
                        VertexId other = 0xffffffffu;
                        if (e.u == x) other = e.v;
                        if (e.v == x) other = e.u;
                        if (other != 0xffffffffu && comp[other] == -1) {
                            comp[other] = ncomp;
                            q.push(other);
                        }
                    }
                }
                ++ncomp;
            }
            // constraint graph: class edges force opposite colours
            std::vector<int> colour(static_cast<std::size_t>(ncomp), -1);
            std::vector<std::vector<int>> cadj(static_cast<std::size_t>(ncomp));
            for (const auto& e : ex.win.edges)
                if (e.wall == wv) {
                    cadj[static_cast<std::size_t>(comp[e.u])].push_back(comp[e.v]);
                    cadj[static_cast<std::size_t>(comp[e.v])].push_back(comp[e.u]);
                }
            std::queue<int> cq;
            colour[static_cast<std::size_t>(comp[0])] = 0;
            cq.push(comp[0]);
            while (!cq.empty()) {
                int c = cq.front();
                cq.pop();
                for (int d : cadj[static_cast<std::size_t>(c)])
                    if (colour[static_cast<std::size_t>(d)] == -1) {
                        colour[static_cast<std::size_t>(d)] = 1 - colour[static_cast<std::size_t>(c)];
                        cq.push(d);
                    } else if (colour[static_cast<std::size_t>(d)] == colour[static_cast<std::size_t>(c)]) {
                        throw BackendError("wall class does not induce a bipartition; complex not NPC?");
                    }
            }
            for (VertexId v = 0; v < ex.win.nv; ++v)
                if (colour[static_cast<std::size_t>(comp[v])] == 1) ex.win.wall_side[wv].set(v);
        }
        // adjacency is rebuilt lazily; fill cubes via signature flips
        fill_cubes(ex.win);
        return ex;
    }

    void fill_cubes(CubeWindow& w) const {
        const auto& sig = w.signatures();
        std::unordered_map<Bitset, VertexId, BitsetHash> by_sig;
        for (VertexId v = 0; v < w.nv; ++v) by_sig.emplace(sig[v], v);
        auto flip = [&](Bitset s, WallId h) {
            s.test(h) ? s.reset(h) : s.set(h);
            return s;
        };
        const auto& adj = w.adjacency();
        for (VertexId v = 0; v < w.nv; ++v) {
            std::vector<WallId> dirs;
            for (auto [y, wy] : adj[v]) dirs.push_back(wy);
            for (std::size_t i = 0; i < dirs.size(); ++i)
                for (std::size_t j = i + 1; j < dirs.size(); ++j)
                    for (std::size_t k = j + 1; k < dirs.size(); ++k) {
                        std::array<VertexId, 8> c{};
                        bool all = true;
                        for (int mask = 0; mask < 8 && all; ++mask) {
                            Bitset s = sig[v];
                            if (mask & 1) s = flip(s, dirs[i]);
                            if (mask & 2) s = flip(s, dirs[j]);
                            if (mask & 4) s = flip(s, dirs[k]);
                            auto it = by_sig.find(s);
                            if (it == by_sig.end()) all = false;
                            else c[static_cast<std::size_t>(mask)] = it->second;
                        }
                        if (!all) continue;
                        bool minimal = true;
                        for (int mask = 1; mask < 8; ++mask)
                            if (c[static_cast<std::size_t>(mask)] < v) minimal = false;
                        if (minimal) w.cubes.push_back(c);
                    }
        }
    }

    void check_links() {
        // NPC link condition on the Cayley complex: the link of each vertex
        // must have girth >= 4 (no double corners, no triangles). The cover
        // is vertex-transitive, so interior vertices of a small ball suffice.
        Exploration ex = explore(3);
        const auto& adj = ex.win.adjacency();
        for (VertexId v = 0; v < ex.win.nv; ++v) {
            if (ex.depth[v] > 1) continue;
            // corner multigraph on incident edges
            std::map<std::pair<VertexId, VertexId>, int> corners;
            for (const auto& s : ex.win.squares) {
                for (int i = 0; i < 4; ++i)
                    if (s[static_cast<std::size_t>(i)] == v) {
                        VertexId a = s[static_cast<std::size_t>((i + 1) % 4)];
                        VertexId b = s[static_cast<std::size_t>((i + 3) % 4)];
                        auto [x, y] = std::minmax(a, b);
                        if (++corners[{x, y}] > 1)
                            throw BackendError("link has a double corner: presentation complex not NPC");
                    }
            }
            // triangles in the link
            for (const auto& [e1, c1] : corners)
                for (const auto& [e2, c2] : corners) {
                    if (e1 >= e2) continue;
                    VertexId shared = 0xffffffffu;
                    for (VertexId a : {e1.first, e1.second})
                        for (VertexId b : {e2.first, e2.second})
                            if (a == b) shared = a;
                    if (shared == 0xffffffffu) continue;
                    VertexId o1 = e1.first == shared ? e1.second : e1.first;
                    VertexId o2 = e2.first == shared ? e2.second : e2.first;
                    auto [x, y] = std::minmax(o1, o2);
                    if (corners.count({x, y}))
                        throw BackendError("link contains a triangle: presentation complex not NPC");
                }
        }
        (void)adj;
    }

    Presentation presentation_;
    KBResult kb_;
    bool square_presentation_ = false;
    std::unordered_map<std::string, std::uint64_t> vreg_;
    std::vector<Word> vwords_;
    std::unordered_map<std::string, std::uint64_t> wreg_;
    std::vector<std::pair<Word, char>> wkeys_;
    std::map<std::uint32_t, CubeWindow> window_cache_;
};

} // namespace cubical
