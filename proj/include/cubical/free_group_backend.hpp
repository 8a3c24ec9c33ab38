#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cubical/backend.hpp"

namespace cubical {

/**
 * Free group F_k acting on its Cayley tree (the 2k-regular tree). Vertices
 * are reduced words, walls are edges keyed by their longer endpoint, and all
 * halfspace queries reduce to prefix logic on cones.
 */
class FreeGroupBackend final : public ActionBackend {
public:
    explicit FreeGroupBackend(const std::string& generators) : alphabet_(generators) {
        vertex_id(Word{});
    }

    std::string kind() const override { return "tree-free-F" + std::to_string(alphabet_.generator_count()); }
    const Alphabet& alphabet() const override { return alphabet_; }
    std::uint32_t complex_dimension() const override { return 1; }
    bool global_oracle() const override { return true; }

    Word normal_form(const Word& w) const override {
        alphabet_.check_word(w);
        return free_reduce(w);
    }

    std::uint64_t vertex_image(const Word& w, std::uint64_t v) override {
        return vertex_id(free_reduce(normal_form(w) + word_of(v)));
    }

    std::string describe_vertex(std::uint64_t v) const override {
        const Word& w = word_of(v);
        return w.empty() ? "1" : w;
    }
    std::string describe_wall(std::uint64_t wall) const override {
        return "edge(" + wall_word_of(wall) + ")";
    }

    CubeWindow window(std::uint32_t radius) override {
        auto cached = wcache_.find(radius);
        if (cached != wcache_.end()) return cached->second;
        CubeWindow w;
        std::vector<Word> verts{Word{}};
        std::vector<Word> frontier{Word{}};
        for (std::uint32_t l = 1; l <= radius; ++l) {
            std::vector<Word> next;
            for (const auto& p : frontier)
                for (char c : alphabet_.letters()) {
                    if (!p.empty() && p.back() == inverse_letter(c)) continue;
                    next.push_back(p + c);
                }
            for (const auto& v : next) verts.push_back(v);
            frontier = std::move(next);
        }
        std::vector<std::pair<std::uint64_t, Word>> order;
        for (auto& v : verts) order.push_back({vertex_id(v), v});
        std::sort(order.begin(), order.end());
        w.nv = static_cast<std::uint32_t>(order.size());
        std::unordered_map<std::string, VertexId> local;
        for (VertexId i = 0; i < w.nv; ++i) {
            local[order[i].second] = i;
            w.vertex_label.push_back(order[i].first);
        }
        std::unordered_map<std::uint64_t, WallId> wlocal;
        for (VertexId i = 0; i < w.nv; ++i) {
            const Word& v = order[i].second;
            if (v.empty()) continue;
            Word parent = v.substr(0, v.size() - 1);
            std::uint64_t gw = wall_id(v);
            WallId lw;
            auto it = wlocal.find(gw);
            if (it == wlocal.end()) {
                lw = static_cast<WallId>(w.wall_label.size());
                wlocal.emplace(gw, lw);
                w.wall_label.push_back(gw);
            } else {
                lw = it->second;
            }
            w.edges.push_back({local[parent], i, lw});
        }
        w.nwalls = static_cast<std::uint32_t>(w.wall_label.size());
        w.wall_side.assign(w.nwalls, Bitset(w.nv));
        // each vertex lies in the cones of exactly its word prefixes, and the
        // base lies in none, so the cone is already the canonical side
        for (VertexId vi = 0; vi < w.nv; ++vi) {
            const Word& v = order[vi].second;
            for (std::size_t l = 1; l <= v.size(); ++l)
                w.wall_side[wlocal.at(wall_id(v.substr(0, l)))].set(vi);
        }
        wcache_.emplace(radius, w);
        return w;
    }

    SignedWall image_halfspace(const Word& g, SignedWall h) override {
        const Word& m = wall_word_of(h.wall);
        Word gm = free_reduce(normal_form(g) + m);
        Word gp = free_reduce(normal_form(g) + m.substr(0, m.size() - 1));
        bool longer_is_image_of_cone_tip = gm.size() > gp.size();
        std::uint64_t wall = wall_id(longer_is_image_of_cone_tip ? gm : gp);
        // side true of h is the cone side; its image is the side containing g*m
        bool image_cone_side = longer_is_image_of_cone_tip;
        return SignedWall{wall, h.side ? image_cone_side : !image_cone_side};
    }

    HalfspaceRelation halfspace_relation(SignedWall a, SignedWall b, const Budget&) override {
        const Word& p = wall_word_of(a.wall);
        const Word& q = wall_word_of(b.wall);
        bool inP = a.side, inQ = b.side; // side true = cone side
        HalfspaceRelation rel;
        rel.witness = "cones(" + p + "," + q + ")";
        auto prefix = [](const Word& x, const Word& y) { // x prefix of y
            return x.size() <= y.size() && y.compare(0, x.size(), x) == 0;
        };
        if (p == q) {
            rel.verdict = (inP == inQ) ? HsRel::Equal : HsRel::Complement;
            return rel;
        }
        bool qp = prefix(q, p); // cone(p) inside cone(q)
        bool pq = prefix(p, q);
        if (inP && inQ)
            rel.verdict = qp ? HsRel::FirstInsideSecond : pq ? HsRel::SecondInsideFirst : HsRel::FacingDisjoint;
        else if (inP && !inQ)
            rel.verdict = qp ? HsRel::FacingDisjoint : pq ? HsRel::Codisjoint : HsRel::FirstInsideSecond;
        else if (!inP && inQ)
            rel.verdict = pq ? HsRel::FacingDisjoint : qp ? HsRel::Codisjoint : HsRel::SecondInsideFirst;
        else
            rel.verdict = qp ? HsRel::SecondInsideFirst : pq ? HsRel::FirstInsideSecond : HsRel::Codisjoint;
        return rel;
    }

    std::optional<std::uint64_t> translation_length(const Word& w) const override {
        return cyclic_reduce(normal_form(w)).first.size();
    }
    std::optional<std::uint64_t> min_displacement_vertex(const Word& w) override {
        auto [core, conj] = cyclic_reduce(normal_form(w));
        return vertex_id(free_reduce(conj));
    }

    std::uint64_t vertex_id(const Word& reduced) {
        auto it = vreg_.find(reduced);
        if (it != vreg_.end()) return it->second;
        std::uint64_t id = vwords_.size();
        vreg_.emplace(reduced, id);
        vwords_.push_back(reduced);
        return id;
    }
    std::uint64_t wall_id(const Word& longer_endpoint) {
        auto it = wreg_.find(longer_endpoint);
        if (it != wreg_.end()) return it->second;
        std::uint64_t id = wwords_.size();
        wreg_.emplace(longer_endpoint, id);
        wwords_.push_back(longer_endpoint);
        return id;
    }
    const Word& vertex_word(std::uint64_t v) const { return word_of(v); }

private:
    const Word& word_of(std::uint64_t v) const {
        if (v >= vwords_.size()) throw BackendError("unknown vertex id");
        return vwords_[v];
    }
    const Word& wall_word_of(std::uint64_t w) const {
        if (w >= wwords_.size()) throw BackendError("unknown wall id");
        return wwords_[w];
    }

    Alphabet alphabet_;
    std::unordered_map<std::string, std::uint64_t> vreg_, wreg_;
    std::vector<Word> vwords_, wwords_;
    std::map<std::uint32_t, CubeWindow> wcache_;
};

} // namespace cubical
