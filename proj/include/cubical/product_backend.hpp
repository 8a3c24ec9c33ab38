#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cubical/backend.hpp"
#include "cubical/free_group_backend.hpp"

namespace cubical {

/**
 * Product backend: F_k x Z acting on (Cayley tree of F_k) x R. The line
 * generator is the letter 'z'; it is central. Windows are products of a tree
 * ball and an integer interval, which are the hulls of the l^1 balls. Walls
 * split into the tree family and the line family; the two families cross
 * completely, giving a square complex of dimension 2.
 */
class ProductBackend final : public ActionBackend {
public:
    explicit ProductBackend(const std::string& tree_generators)
        : tree_(tree_generators), alphabet_(tree_generators + "z") {
        vertex_id(Word{}, 0);
    }

    std::string kind() const override { return "product(tree,line)"; }
    const Alphabet& alphabet() const override { return alphabet_; }
    std::uint32_t complex_dimension() const override { return 2; }
    bool global_oracle() const override { return true; }

    struct Element {
        Word tree; // reduced
        long long line = 0;
    };

    Element evaluate(const Word& w) const {
        alphabet_.check_word(w);
        Element g;
        for (char c : w) {
            if (c == 'z') ++g.line;
            else if (c == 'Z') --g.line;
            else g.tree.push_back(c);
        }
        g.tree = free_reduce(g.tree);
        return g;
    }

    Word normal_form(const Word& w) const override {
        Element g = evaluate(w);
        Word out = g.tree;
        for (long long i = 0; i < std::llabs(g.line); ++i) out.push_back(g.line < 0 ? 'Z' : 'z');
        return out;
    }

    std::uint64_t vertex_image(const Word& w, std::uint64_t v) override {
        Element g = evaluate(w);
        auto [tw, lvl] = vkey_of(v);
        return vertex_id(free_reduce(g.tree + tw), lvl + g.line);
    }

    std::string describe_vertex(std::uint64_t v) const override {
        auto [tw, lvl] = vkey_of(v);
        return "(" + (tw.empty() ? std::string("1") : tw) + ", " + std::to_string(lvl) + ")";
    }
    std::string describe_wall(std::uint64_t wall) const override {
        const auto& k = wkey_of(wall);
        if (k.is_tree) return "tree-" + tree_.describe_wall(k.tree_wall);
        return "line: x=" + std::to_string(k.line_c) + "-1/2";
    }

    CubeWindow window(std::uint32_t radius) override {
        auto cached = wcache_.find(radius);
        if (cached != wcache_.end()) return cached->second;
        CubeWindow tw = tree_.window(radius);
        long long r = radius;
        CubeWindow w;
        std::uint32_t levels = static_cast<std::uint32_t>(2 * r + 1);
        // product vertex (tree local i, level l); order by global id
        std::vector<std::pair<std::uint64_t, std::pair<VertexId, long long>>> order;
        for (VertexId i = 0; i < tw.nv; ++i)
            for (long long l = -r; l <= r; ++l)
                order.push_back({vertex_id(tree_word_of_label(tw.vertex_label[i]), l), {i, l}});
        std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        w.nv = static_cast<std::uint32_t>(order.size());
        std::unordered_map<std::uint64_t, VertexId> local; // global id -> local
        for (VertexId i = 0; i < w.nv; ++i) {
            local[order[i].first] = i;
            w.vertex_label.push_back(order[i].first);
        }
        auto local_of = [&](VertexId tree_local, long long l) -> VertexId {
            std::uint64_t g = vertex_id(tree_word_of_label(tw.vertex_label[tree_local]), l);
            return local.at(g);
        };
        // walls: tree walls then line walls
        std::unordered_map<std::uint64_t, WallId> wlocal;
        auto wall_local = [&](std::uint64_t gw) -> WallId {
            auto it = wlocal.find(gw);
            if (it != wlocal.end()) return it->second;
            WallId id = static_cast<WallId>(w.wall_label.size());
            wlocal.emplace(gw, id);
            w.wall_label.push_back(gw);
            return id;
        };
        // edges
        for (const auto& e : tw.edges)
            for (long long l = -r; l <= r; ++l)
                w.edges.push_back({local_of(e.u, l), local_of(e.v, l),
                                   wall_local(wall_id_tree(tw.wall_label[e.wall]))});
        for (VertexId i = 0; i < tw.nv; ++i)
            for (long long l = -r; l < r; ++l)
                w.edges.push_back({local_of(i, l), local_of(i, l + 1), wall_local(wall_id_line(l + 1))});
        // squares: tree edge x line edge
        for (const auto& e : tw.edges)
            for (long long l = -r; l < r; ++l)
                w.squares.push_back({local_of(e.u, l), local_of(e.v, l), local_of(e.v, l + 1), local_of(e.u, l + 1)});
        w.nwalls = static_cast<std::uint32_t>(w.wall_label.size());
        w.wall_side.assign(w.nwalls, Bitset(w.nv));
        for (WallId wi = 0; wi < w.nwalls; ++wi) {
            const auto& k = wkey_of(w.wall_label[wi]);
            for (VertexId vi = 0; vi < w.nv; ++vi) {
                auto [ti, lvl] = order[vi].second;
                bool in;
                if (k.is_tree) {
                    auto lw = tw.wall_by_label(k.tree_wall);
                    in = tw.wall_side[*lw].test(ti);
                } else {
                    in = lvl >= k.line_c;
                }
                if (in) w.wall_side[wi].set(vi);
            }
            if (w.wall_side[wi].test(0)) w.wall_side[wi] = w.wall_side[wi].complement();
        }
        wcache_.emplace(radius, w);
        return w;
    }

    SignedWall image_halfspace(const Word& w, SignedWall h) override {
        Element g = evaluate(w);
        const auto k = wkey_of(h.wall);
        if (k.is_tree) {
            SignedWall th{k.tree_wall, h.side};
            SignedWall im = tree_.image_halfspace(g.tree, th);
            return SignedWall{wall_id_tree(im.wall), im.side};
        }
        // line halfspaces: side false contains level 0
        long long c = k.line_c;
        bool ge_contains_base = (c <= 0);
        bool ge = h.side ? !ge_contains_base : ge_contains_base;
        long long c2 = c + g.line;
        bool ge2_contains_base = (c2 <= 0);
        return SignedWall{wall_id_line(c2), ge != ge2_contains_base ? true : false};
    }

    HalfspaceRelation halfspace_relation(SignedWall a, SignedWall b, const Budget& budget) override {
        const auto ka = wkey_of(a.wall);
        const auto kb = wkey_of(b.wall);
        HalfspaceRelation rel;
        if (ka.is_tree != kb.is_tree) {
            rel.verdict = HsRel::Transverse;
            rel.witness = "tree wall vs line wall";
            return rel;
        }
        if (ka.is_tree) {
            rel = tree_.halfspace_relation({ka.tree_wall, a.side}, {kb.tree_wall, b.side}, budget);
            return rel;
        }
        long long c1 = ka.line_c, c2 = kb.line_c;
        bool ge1 = a.side ? !(c1 <= 0) : (c1 <= 0);
        bool ge2 = b.side ? !(c2 <= 0) : (c2 <= 0);
        if (c1 == c2) rel.verdict = ge1 == ge2 ? HsRel::Equal : HsRel::Complement;
        else if (ge1 && ge2) rel.verdict = c1 > c2 ? HsRel::FirstInsideSecond : HsRel::SecondInsideFirst;
        else if (!ge1 && !ge2) rel.verdict = c1 < c2 ? HsRel::FirstInsideSecond : HsRel::SecondInsideFirst;
        else if (ge1 && !ge2) rel.verdict = c1 >= c2 ? HsRel::FacingDisjoint : HsRel::Codisjoint;
        else rel.verdict = c1 <= c2 ? HsRel::FacingDisjoint : HsRel::Codisjoint;
        return rel;
    }

    std::optional<std::uint64_t> translation_length(const Word& w) const override {
        Element g = evaluate(w);
        return cyclic_reduce(g.tree).first.size() + static_cast<std::uint64_t>(std::llabs(g.line));
    }
    std::optional<std::uint64_t> min_displacement_vertex(const Word& w) override {
        Element g = evaluate(w);
        auto [core, conj] = cyclic_reduce(g.tree);
        return vertex_id(free_reduce(conj), 0);
    }

    std::uint64_t vertex_id(const Word& tree_reduced, long long level) {
        std::string key = tree_reduced + "|" + std::to_string(level);
        auto it = vreg_.find(key);
        if (it != vreg_.end()) return it->second;
        std::uint64_t id = vkeys_.size();
        vreg_.emplace(key, id);
        vkeys_.push_back({tree_reduced, level});
        return id;
    }

private:
    struct WKey {
        bool is_tree = true;
        std::uint64_t tree_wall = 0;
        long long line_c = 0;
    };

    std::pair<Word, long long> vkey_of(std::uint64_t v) const {
        if (v >= vkeys_.size()) throw BackendError("unknown vertex id");
        return vkeys_[v];
    }
    const WKey& wkey_of(std::uint64_t w) const {
        if (w >= wkeys_.size()) throw BackendError("unknown wall id");
        return wkeys_[w];
    }
public:
    std::uint64_t tree_wall_id(const Word& longer_endpoint) { return wall_id_tree(tree_.wall_id(longer_endpoint)); }
    std::uint64_t line_wall_id(long long c) { return wall_id_line(c); }

private:
    std::uint64_t wall_id_tree(std::uint64_t tree_wall) {
        std::string key = "T" + std::to_string(tree_wall);
        return wall_id(key, WKey{true, tree_wall, 0});
    }
    std::uint64_t wall_id_line(long long c) {
        std::string key = "L" + std::to_string(c);
        return wall_id(key, WKey{false, 0, c});
    }
    std::uint64_t wall_id(const std::string& key, const WKey& k) {
        auto it = wreg_.find(key);
        if (it != wreg_.end()) return it->second;
        std::uint64_t id = wkeys_.size();
        wreg_.emplace(key, id);
        wkeys_.push_back(k);
        return id;
    }
    Word tree_word_of_label(std::uint64_t tree_vertex_label) const {
        return tree_.vertex_word(tree_vertex_label);
    }

public:
    // expose the tree factor for window labelling
    FreeGroupBackend& tree_factor() { return tree_; }

private:
    FreeGroupBackend tree_;
    Alphabet alphabet_;
    std::unordered_map<std::string, std::uint64_t> vreg_;
    std::vector<std::pair<Word, long long>> vkeys_;
    std::unordered_map<std::string, std::uint64_t> wreg_;
    std::vector<WKey> wkeys_;
    std::map<std::uint32_t, CubeWindow> wcache_;
};

} // namespace cubical
