#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <vector>

#include "cubical/backend.hpp"
#include "cubical/complex_ops.hpp"

namespace cubical {

/// All label-free automorphisms of the 1-skeleton, as vertex permutations.
/// On median graphs these automatically preserve the cubical structure.
inline std::vector<std::vector<VertexId>> graph_automorphisms(const CubeWindow& w,
                                                              std::size_t cap = 200000) {
    std::vector<Bitset> adj(w.nv, Bitset(w.nv));
    std::vector<std::uint32_t> deg(w.nv, 0);
    for (const auto& e : w.edges) {
        adj[e.u].set(e.v);
        adj[e.v].set(e.u);
        ++deg[e.u];
        ++deg[e.v];
    }
    // map vertices in BFS order from vertex 0 so each new vertex has a mapped neighbour
    std::vector<VertexId> order;
    {
        std::vector<char> seen(w.nv, 0);
        std::queue<VertexId> q;
        q.push(0);
        seen[0] = 1;
        while (!q.empty()) {
            VertexId x = q.front();
            q.pop();
            order.push_back(x);
            adj[x].for_each([&](std::size_t y) {
                if (!seen[y]) {
                    seen[y] = 1;
                    q.push(static_cast<VertexId>(y));
                }
            });
        }
    }
    std::vector<std::vector<VertexId>> out;
    std::vector<VertexId> img(w.nv, 0xffffffffu);
    std::vector<char> used(w.nv, 0);
    std::function<void(std::size_t)> rec = [&](std::size_t pos) {
        if (out.size() >= cap) return;
        if (pos == order.size()) {
            out.push_back(img);
            return;
        }
        VertexId u = order[pos];
        for (VertexId c = 0; c < w.nv; ++c) {
            if (used[c] || deg[c] != deg[u]) continue;
            bool ok = true;
            for (std::size_t j = 0; j < pos && ok; ++j) {
                VertexId m = order[j];
                if (adj[u].test(m) != adj[c].test(img[m])) ok = false;
            }
            if (!ok) continue;
            img[u] = c;
            used[c] = 1;
            rec(pos + 1);
            used[c] = 0;
            img[u] = 0xffffffffu;
        }
    };
    rec(0);
    return out;
}

/**
 * Backend for the automorphism group of a finite CAT(0) (median) square or
 * cube complex. The complex is subdivided once at construction so the action
 * never inverts a hyperplane; automorphisms are extended cell-wise. Windows
 * are the whole subdivided complex, so every query is exact.
 */
class FiniteComplexBackend final : public ActionBackend {
public:
    explicit FiniteComplexBackend(const CubeWindow& original, std::size_t max_generators = 8)
        : original_(original) {
        original_.require_valid(original_.nv <= 512);
        sub_ = subdivide(original_);
        sub_.require_valid(false);
        build_cell_index();
        auto autos = graph_automorphisms(original_);
        // extend to the subdivision
        std::vector<Perm> ext;
        for (const auto& p : autos) ext.push_back(extend(p));
        // choose a small generating set
        std::vector<Perm> gens = pick_generators(ext, max_generators);
        std::string letters;
        for (std::size_t i = 0; i < gens.size(); ++i) {
            char c = static_cast<char>('a' + i);
            letters.push_back(c);
            gen_[c] = gens[i];
            gen_[inverse_letter(c)] = invert(gens[i]);
        }
        if (letters.empty()) {
            letters = "a"; // trivial group still needs an alphabet
            gen_['a'] = identity();
            gen_['A'] = identity();
        }
        alphabet_ = Alphabet(letters);
        enumerate_group();
        dim_ = dimension(sub_);
    }

    const CubeWindow& complex() const { return sub_; }
    const CubeWindow& original() const { return original_; }
    std::size_t group_order() const { return elements_.size(); }

    std::string kind() const override { return "finite-complex-aut"; }
    const Alphabet& alphabet() const override { return alphabet_; }
    std::uint32_t complex_dimension() const override { return dim_; }
    bool global_oracle() const override { return true; }

    using Perm = std::vector<VertexId>;

    Perm evaluate(const Word& w) const {
        Perm p = identity();
        for (char c : w) {
            auto it = gen_.find(c);
            if (it == gen_.end()) throw BackendError(std::string("unknown generator '") + c + "'");
            p = compose(p, it->second);
        }
        return p;
    }

    std::string element_key(const Word& w) const override { return key_of(evaluate(w)); }

    Word normal_form(const Word& w) const override {
        auto it = nf_.find(key_of(evaluate(w)));
        if (it == nf_.end()) throw BackendError("element outside the enumerated group");
        return it->second;
    }

    std::uint64_t vertex_image(const Word& w, std::uint64_t v) override {
        if (v >= sub_.nv) throw BackendError("vertex id out of range");
        return evaluate(w)[static_cast<std::size_t>(v)];
    }

    std::string describe_vertex(std::uint64_t v) const override { return "v" + std::to_string(v); }
    std::string describe_wall(std::uint64_t wall) const override { return "w" + std::to_string(wall); }

    CubeWindow window(std::uint32_t) override { return sub_; }

    SignedWall image_halfspace(const Word& w, SignedWall h) override {
        Perm p = evaluate(w);
        // image wall: map any edge of the wall
        const auto& e = sub_.edges[wall_edge_[h.wall]];
        VertexId iu = p[e.u], iv = p[e.v];
        auto wall2 = edge_wall_.find(ekey(iu, iv));
        if (wall2 == edge_wall_.end()) throw BackendError("automorphism does not preserve the edge set");
        // side: image side contains the image of a sample vertex of h's side
        VertexId sample = sub_.wall_side[h.wall].test(e.u) == h.side ? e.u : e.v;
        bool side2 = sub_.wall_side[wall2->second].test(p[sample]);
        return SignedWall{wall2->second, side2};
    }

    HalfspaceRelation halfspace_relation(SignedWall a, SignedWall b, const Budget&) override {
        HalfspaceRelation rel;
        Bitset sa = sub_.halfspace_set(WindowHalfspace{static_cast<WallId>(a.wall), a.side});
        Bitset sb = sub_.halfspace_set(WindowHalfspace{static_cast<WallId>(b.wall), b.side});
        if (a.wall == b.wall)
            rel.verdict = a.side == b.side ? HsRel::Equal : HsRel::Complement;
        else if (sa.is_subset_of(sb))
            rel.verdict = HsRel::FirstInsideSecond;
        else if (sb.is_subset_of(sa))
            rel.verdict = HsRel::SecondInsideFirst;
        else if (!sa.intersects(sb))
            rel.verdict = HsRel::FacingDisjoint;
        else if ((sa | sb).count() == sub_.nv)
            rel.verdict = HsRel::Codisjoint;
        else
            rel.verdict = HsRel::Transverse;
        rel.witness = "finite complex, exact";
        return rel;
    }

    std::optional<std::uint64_t> translation_length(const Word&) const override { return 0; }
    std::optional<std::uint64_t> min_displacement_vertex(const Word& w) override {
        Perm p = evaluate(w);
        for (VertexId v = 0; v < sub_.nv; ++v)
            if (p[v] == v) return v;
        throw BackendError("automorphism of a finite median complex must fix a subdivision vertex");
    }

    /// every group element, as its shortlex-minimal word
    const std::vector<Word>& element_words() const { return element_words_; }

private:
    Perm identity() const {
        Perm p(sub_.nv);
        for (VertexId v = 0; v < sub_.nv; ++v) p[v] = v;
        return p;
    }
    static Perm compose(const Perm& a, const Perm& b) {
        // apply b first? words act left-to-right as maps applied right-to-left:
        // (ab)(v) = a(b(v))
        Perm r(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[b[i]];
        return r;
    }
    static Perm invert(const Perm& a) {
        Perm r(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) r[a[i]] = static_cast<VertexId>(i);
        return r;
    }
    static std::string key_of(const Perm& p) {
        std::string s;
        s.reserve(p.size() * 3);
        for (VertexId v : p) {
            s += std::to_string(v);
            s.push_back(',');
        }
        return s;
    }

    void build_cell_index() {
        for (std::uint32_t i = 0; i < original_.edges.size(); ++i) {
            auto [u, v] = std::minmax(original_.edges[i].u, original_.edges[i].v);
            oedge_ix_[{u, v}] = i;
        }
        for (std::uint32_t i = 0; i < original_.squares.size(); ++i) {
            auto c = original_.squares[i];
            std::sort(c.begin(), c.end());
            osquare_ix_[c] = i;
        }
        for (std::uint32_t i = 0; i < original_.cubes.size(); ++i) {
            auto c = original_.cubes[i];
            std::sort(c.begin(), c.end());
            ocube_ix_[std::vector<VertexId>(c.begin(), c.end())] = i;
        }
        for (std::uint32_t i = 0; i < sub_.edges.size(); ++i) {
            edge_wall_[ekey(sub_.edges[i].u, sub_.edges[i].v)] = sub_.edges[i].wall;
            if (wall_edge_.size() <= sub_.edges[i].wall) wall_edge_.resize(sub_.edges[i].wall + 1);
            wall_edge_[sub_.edges[i].wall] = i;
        }
    }
    static std::uint64_t ekey(VertexId a, VertexId b) {
        auto [u, v] = std::minmax(a, b);
        return (static_cast<std::uint64_t>(u) << 32) | v;
    }

    // extend an automorphism of the original complex to the subdivision,
    // cell by cell (vertices, then edge/square/cube midpoints)
    Perm extend(const std::vector<VertexId>& p) const {
        Perm q(sub_.nv);
        std::uint32_t nv = original_.nv;
        std::uint32_t ne = static_cast<std::uint32_t>(original_.edges.size());
        std::uint32_t ns = static_cast<std::uint32_t>(original_.squares.size());
        for (VertexId v = 0; v < nv; ++v) q[v] = p[v];
        for (std::uint32_t e = 0; e < ne; ++e) {
            auto [u, v] = std::minmax(p[original_.edges[e].u], p[original_.edges[e].v]);
            auto it = oedge_ix_.find({u, v});
            if (it == oedge_ix_.end()) throw BackendError("automorphism does not preserve edges");
            q[nv + e] = nv + it->second;
        }
        for (std::uint32_t s = 0; s < ns; ++s) {
            std::array<VertexId, 4> c;
            for (int i = 0; i < 4; ++i) c[static_cast<std::size_t>(i)] = p[original_.squares[s][static_cast<std::size_t>(i)]];
            std::sort(c.begin(), c.end());
            auto it = osquare_ix_.find(c);
            if (it == osquare_ix_.end()) throw BackendError("automorphism does not preserve squares");
            q[nv + ne + s] = nv + ne + it->second;
        }
        for (std::uint32_t cu = 0; cu < original_.cubes.size(); ++cu) {
            std::vector<VertexId> c;
            for (auto x : original_.cubes[cu]) c.push_back(p[x]);
            std::sort(c.begin(), c.end());
            auto it = ocube_ix_.find(c);
            if (it == ocube_ix_.end()) throw BackendError("automorphism does not preserve cubes");
            q[nv + ne + ns + cu] = nv + ne + ns + it->second;
        }
        return q;
    }

    std::vector<Perm> pick_generators(const std::vector<Perm>& all, std::size_t cap) const {
        std::vector<Perm> gens;
        std::set<std::string> closure{key_of(identity())};
        auto close = [&]() {
            bool grew = true;
            std::vector<Perm> elems{identity()};
            std::set<std::string> keys{key_of(identity())};
            while (grew) {
                grew = false;
                std::vector<Perm> add;
                for (const auto& e : elems)
                    for (const auto& g : gens) {
                        Perm p = compose(e, g);
                        if (keys.insert(key_of(p)).second) {
                            add.push_back(p);
                            grew = true;
                        }
                    }
                for (auto& p : add) elems.push_back(std::move(p));
            }
            closure = std::move(keys);
        };
        for (const auto& cand : all) {
            if (gens.size() >= cap) break;
            if (closure.count(key_of(cand))) continue;
            gens.push_back(cand);
            close();
            if (closure.size() == all.size()) break;
        }
        if (closure.size() != all.size())
            throw BackendError("generator cap too small to generate the automorphism group");
        return gens;
    }

    void enumerate_group() {
        // BFS over the Cayley graph: shortlex-minimal word per element
        std::queue<Word> q;
        Word empty;
        nf_.emplace(key_of(identity()), empty);
        element_words_.push_back(empty);
        elements_.push_back(identity());
        q.push(empty);
        while (!q.empty()) {
            Word w = q.front();
            q.pop();
            Perm pw = evaluate(w);
            for (char c : alphabet_.letters()) {
                Perm p = compose(pw, gen_.at(c));
                auto [it, fresh] = nf_.emplace(key_of(p), w + c);
                if (fresh) {
                    element_words_.push_back(w + c);
                    elements_.push_back(p);
                    q.push(w + c);
                }
            }
        }
    }

    CubeWindow original_, sub_;
    Alphabet alphabet_;
    std::map<char, Perm> gen_;
    std::map<std::pair<VertexId, VertexId>, std::uint32_t> oedge_ix_;
    std::map<std::array<VertexId, 4>, std::uint32_t> osquare_ix_;
    std::map<std::vector<VertexId>, std::uint32_t> ocube_ix_;
    std::unordered_map<std::uint64_t, WallId> edge_wall_;
    std::vector<std::uint32_t> wall_edge_;
    std::unordered_map<std::string, Word> nf_;
    std::vector<Word> element_words_;
    std::vector<Perm> elements_;
    std::uint32_t dim_ = 0;
};

} // namespace cubical
