#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cubical/backend.hpp"

namespace cubical {

/// A per-axis signed affine map on Z^d: x_i -> sign_i * x_i + offset_i.
struct AffineMap {
    std::uint32_t dims = 0;
    std::array<int, 3> sign{1, 1, 1};
    std::array<long long, 3> offset{0, 0, 0};

    static AffineMap identity(std::uint32_t d) {
        AffineMap m;
        m.dims = d;
        return m;
    }
    // composition acting on points: (a * b)(x) = a(b(x))
    friend AffineMap operator*(const AffineMap& a, const AffineMap& b) {
        AffineMap r = AffineMap::identity(a.dims);
        for (std::uint32_t i = 0; i < a.dims; ++i) {
            r.sign[i] = a.sign[i] * b.sign[i];
            r.offset[i] = a.sign[i] * b.offset[i] + a.offset[i];
        }
        return r;
    }
    AffineMap inverse() const {
        AffineMap r = AffineMap::identity(dims);
        for (std::uint32_t i = 0; i < dims; ++i) {
            r.sign[i] = sign[i];
            r.offset[i] = -sign[i] * offset[i];
        }
        return r;
    }
    std::array<long long, 3> apply(const std::array<long long, 3>& x) const {
        std::array<long long, 3> y{0, 0, 0};
        for (std::uint32_t i = 0; i < dims; ++i) y[i] = sign[i] * x[i] + offset[i];
        return y;
    }
    std::string key() const {
        std::string s;
        for (std::uint32_t i = 0; i < dims; ++i)
            s += std::to_string(sign[i]) + "," + std::to_string(offset[i]) + ";";
        return s;
    }
    bool is_identity() const {
        for (std::uint32_t i = 0; i < dims; ++i)
            if (sign[i] != 1 || offset[i] != 0) return false;
        return true;
    }
};

/**
 * Euclidean backend: a group of per-axis signed affine maps acting on the
 * standard cubulation of Z^d (d <= 3). Covers lattice translation groups,
 * infinite dihedral actions on the subdivided line, and products thereof on
 * the subdivided grid. All halfspace queries are answered in closed form.
 *
 * Construction rejects generator sets whose group would invert an edge
 * (a reflected axis with an odd offset somewhere in the group).
 */
class GridBackend final : public ActionBackend {
public:
    GridBackend(std::uint32_t dims, const std::vector<std::pair<char, AffineMap>>& generators)
        : dims_(dims) {
        if (dims_ < 1 || dims_ > 3) throw BackendError("grid backend supports dimensions 1..3");
        std::string gens;
        for (auto& [c, m] : generators) {
            if (m.dims != dims_) throw BackendError("generator dimension mismatch");
            gens.push_back(c);
            gen_[c] = m;
            gen_[inverse_letter(c)] = m.inverse();
        }
        alphabet_ = Alphabet(gens);
        check_no_inversions(generators);
        build_spelling_basis();
        vertex_id({0, 0, 0});
    }

    std::string kind() const override { return "grid-Z" + std::to_string(dims_); }
    const Alphabet& alphabet() const override { return alphabet_; }
    std::uint32_t complex_dimension() const override { return dims_; }
    bool global_oracle() const override { return true; }

    AffineMap evaluate(const Word& w) const {
        AffineMap m = AffineMap::identity(dims_);
        for (char c : w) {
            auto it = gen_.find(c);
            if (it == gen_.end()) throw BackendError(std::string("unknown generator '") + c + "'");
            m = m * it->second;
        }
        return m;
    }

    std::string element_key(const Word& w) const override { return evaluate(w).key(); }

    Word normal_form(const Word& w) const override { return spell(evaluate(w)); }

    std::uint64_t vertex_image(const Word& w, std::uint64_t v) override {
        return vertex_id(evaluate(w).apply(coords_of(v)));
    }

    std::string describe_vertex(std::uint64_t v) const override {
        auto x = coords_of(v);
        std::string s = "(";
        for (std::uint32_t i = 0; i < dims_; ++i) s += (i ? "," : "") + std::to_string(x[i]);
        return s + ")";
    }
    std::string describe_wall(std::uint64_t wall) const override {
        auto [axis, c] = wall_key_of(wall);
        return "x" + std::to_string(axis) + "=" + std::to_string(c) + "-1/2";
    }

    CubeWindow window(std::uint32_t radius) override {
        auto cached = wcache_.find(radius);
        if (cached != wcache_.end()) return cached->second;
        long long r = radius;
        CubeWindow w;
        std::vector<std::array<long long, 3>> pts;
        std::map<std::array<long long, 3>, VertexId> local;
        // enumerate the box [-r, r]^d, sorted by global id
        std::vector<std::pair<std::uint64_t, std::array<long long, 3>>> order;
        iterate_box(r, [&](const std::array<long long, 3>& x) { order.push_back({vertex_id(x), x}); });
        std::sort(order.begin(), order.end());
        w.nv = static_cast<std::uint32_t>(order.size());
        for (VertexId i = 0; i < w.nv; ++i) {
            local[order[i].second] = i;
            w.vertex_label.push_back(order[i].first);
            pts.push_back(order[i].second);
        }
        // walls
        std::vector<std::pair<std::uint32_t, long long>> wall_keys;
        for (std::uint32_t i = 0; i < dims_; ++i)
            for (long long c = -r + 1; c <= r; ++c) wall_keys.push_back({i, c});
        std::map<std::pair<std::uint32_t, long long>, WallId> wlocal;
        w.nwalls = static_cast<std::uint32_t>(wall_keys.size());
        for (WallId i = 0; i < w.nwalls; ++i) {
            wlocal[wall_keys[i]] = i;
            w.wall_label.push_back(wall_id(wall_keys[i].first, wall_keys[i].second));
        }
        // edges
        for (VertexId vi = 0; vi < w.nv; ++vi) {
            auto x = pts[vi];
            for (std::uint32_t i = 0; i < dims_; ++i) {
                auto y = x;
                y[i] += 1;
                auto it = local.find(y);
                if (it != local.end()) w.edges.push_back({vi, it->second, wlocal[{i, y[i]}]});
            }
        }
        // squares
        for (VertexId vi = 0; vi < w.nv; ++vi) {
            auto x = pts[vi];
            for (std::uint32_t i = 0; i < dims_; ++i)
                for (std::uint32_t j = i + 1; j < dims_; ++j) {
                    auto a = x, b = x, c2 = x;
                    a[i] += 1;
                    b[j] += 1;
                    c2[i] += 1;
                    c2[j] += 1;
                    auto ia = local.find(a), ib = local.find(b), ic = local.find(c2);
                    if (ia != local.end() && ib != local.end() && ic != local.end())
                        w.squares.push_back({vi, ia->second, ic->second, ib->second});
                }
        }
        // cubes
        if (dims_ == 3) {
            for (VertexId vi = 0; vi < w.nv; ++vi) {
                auto x = pts[vi];
                std::array<VertexId, 8> c{};
                bool ok = true;
                for (int mask = 0; mask < 8 && ok; ++mask) {
                    auto y = x;
                    for (int b = 0; b < 3; ++b)
                        if ((mask >> b) & 1) y[static_cast<std::size_t>(b)] += 1;
                    auto it = local.find(y);
                    if (it == local.end())
                        ok = false;
                    else
                        c[static_cast<std::size_t>(mask)] = it->second;
                }
                if (ok) w.cubes.push_back(c);
            }
        }
        // wall sides: side true = the side not containing the smallest vertex
        w.wall_side.assign(w.nwalls, Bitset(w.nv));
        auto base = pts[0];
        for (WallId wi = 0; wi < w.nwalls; ++wi) {
            auto [axis, c] = wall_keys[wi];
            bool base_ge = base[axis] >= c;
            for (VertexId vi = 0; vi < w.nv; ++vi)
                if ((pts[vi][axis] >= c) != base_ge) w.wall_side[wi].set(vi);
        }
        wcache_.emplace(radius, w);
        return w;
    }

    SignedWall image_halfspace(const Word& w, SignedWall h) override {
        auto hs = decode(h);
        AffineMap g = evaluate(w);
        Hs out;
        out.axis = hs.axis;
        if (g.sign[hs.axis] == 1) {
            out.c = hs.c + g.offset[hs.axis];
            out.ge = hs.ge;
        } else {
            out.c = g.offset[hs.axis] - hs.c + 1;
            out.ge = !hs.ge;
        }
        return encode(out);
    }

    HalfspaceRelation halfspace_relation(SignedWall a, SignedWall b, const Budget&) override {
        Hs x = decode(a), y = decode(b);
        HalfspaceRelation rel;
        rel.radius_used = 0;
        if (x.axis != y.axis) {
            rel.verdict = HsRel::Transverse;
            rel.witness = "distinct axes";
            return rel;
        }
        if (x.c == y.c && x.ge == y.ge) rel.verdict = HsRel::Equal;
        else if (x.c == y.c) rel.verdict = HsRel::Complement;
        else if (x.ge && y.ge) rel.verdict = x.c > y.c ? HsRel::FirstInsideSecond : HsRel::SecondInsideFirst;
        else if (!x.ge && !y.ge) rel.verdict = x.c < y.c ? HsRel::FirstInsideSecond : HsRel::SecondInsideFirst;
        else if (x.ge && !y.ge) rel.verdict = x.c >= y.c ? HsRel::FacingDisjoint : HsRel::Codisjoint;
        else rel.verdict = x.c <= y.c ? HsRel::FacingDisjoint : HsRel::Codisjoint;
        rel.witness = describe(x) + " vs " + describe(y);
        return rel;
    }

    std::optional<std::uint64_t> translation_length(const Word& w) const override {
        AffineMap g = evaluate(w);
        std::uint64_t t = 0;
        for (std::uint32_t i = 0; i < dims_; ++i)
            if (g.sign[i] == 1) t += static_cast<std::uint64_t>(std::llabs(g.offset[i]));
        return t;
    }

    std::optional<std::uint64_t> min_displacement_vertex(const Word& w) override {
        AffineMap g = evaluate(w);
        std::array<long long, 3> x{0, 0, 0};
        for (std::uint32_t i = 0; i < dims_; ++i)
            if (g.sign[i] == -1) x[i] = g.offset[i] / 2;
        return vertex_id(x);
    }

    std::uint64_t vertex_id(const std::array<long long, 3>& x) {
        std::string k;
        for (std::uint32_t i = 0; i < dims_; ++i) k += std::to_string(x[i]) + ",";
        auto it = vreg_.find(k);
        if (it != vreg_.end()) return it->second;
        std::uint64_t id = vcoords_.size();
        vreg_.emplace(k, id);
        vcoords_.push_back(x);
        return id;
    }
    std::uint64_t wall_id(std::uint32_t axis, long long c) {
        auto key = std::make_pair(axis, c);
        auto it = wreg_.find(key);
        if (it != wreg_.end()) return it->second;
        std::uint64_t id = wkeys_.size();
        wreg_.emplace(key, id);
        wkeys_.push_back(key);
        return id;
    }

private:
    struct Hs {
        std::uint32_t axis = 0;
        long long c = 0;
        bool ge = true; // {x >= c} if true, {x < c} otherwise
    };

    std::array<long long, 3> coords_of(std::uint64_t v) const {
        if (v >= vcoords_.size()) throw BackendError("unknown vertex id");
        return vcoords_[v];
    }
    std::pair<std::uint32_t, long long> wall_key_of(std::uint64_t w) const {
        if (w >= wkeys_.size()) throw BackendError("unknown wall id");
        return wkeys_[w];
    }

    Hs decode(SignedWall h) {
        auto [axis, c] = wall_key_of(h.wall);
        bool ge_contains_origin = (c <= 0);
        Hs out;
        out.axis = axis;
        out.c = c;
        out.ge = h.side ? !ge_contains_origin : ge_contains_origin;
        return out;
    }
    SignedWall encode(const Hs& hs) {
        bool ge_contains_origin = (hs.c <= 0);
        SignedWall h;
        h.wall = wall_id(hs.axis, hs.c);
        h.side = (hs.ge != ge_contains_origin);
        return h;
    }
    static std::string describe(const Hs& h) {
        return "{x" + std::to_string(h.axis) + (h.ge ? " >= " : " < ") + std::to_string(h.c) + "}";
    }

    template <typename F>
    void iterate_box(long long r, F&& f) const {
        std::array<long long, 3> x{0, 0, 0};
        // shells by chebyshev radius keep vertex ids stable across window sizes
        for (long long shell = 0; shell <= r; ++shell) {
            std::vector<std::array<long long, 3>> pts;
            iterate_rect(shell, x, 0, [&](const std::array<long long, 3>& p) {
                long long m = 0;
                for (std::uint32_t i = 0; i < dims_; ++i) m = std::max(m, std::llabs(p[i]));
                if (m == shell) pts.push_back(p);
            });
            std::sort(pts.begin(), pts.end());
            for (auto& p : pts) f(p);
        }
    }
    template <typename F>
    void iterate_rect(long long r, std::array<long long, 3>& x, std::uint32_t axis, F&& f) const {
        if (axis == dims_) {
            f(x);
            return;
        }
        for (long long c = -r; c <= r; ++c) {
            x[axis] = c;
            iterate_rect(r, x, axis + 1, f);
        }
        x[axis] = 0;
    }

    void check_no_inversions(const std::vector<std::pair<char, AffineMap>>& generators) const {
        // per axis, close the set of (sign, offset parity) pairs under the
        // group operation and reject if the group reaches a reflection with
        // odd offset: such an element swaps the endpoints of an edge
        for (std::uint32_t i = 0; i < dims_; ++i) {
            std::set<std::pair<int, int>> got{{1, 0}};
            bool grew = true;
            std::vector<std::pair<int, int>> gens;
            for (auto& [c, m] : generators)
                gens.push_back({m.sign[i], static_cast<int>(((m.offset[i] % 2) + 2) % 2)});
            while (grew) {
                grew = false;
                for (auto a : got)
                    for (auto g : gens) {
                        std::pair<int, int> p{a.first * g.first, (a.first * g.second + a.second + 4) % 2};
                        if (got.insert(p).second) grew = true;
                    }
            }
            if (got.count({-1, 1}))
                throw BackendError("generator group inverts an edge on axis " + std::to_string(i) +
                                   "; act on the subdivided complex (double all offsets)");
        }
    }

    void build_spelling_basis() {
        // breadth-first search over short words for per-axis pure translations
        // and pure reflections, used to spell canonical words
        std::vector<std::pair<Word, AffineMap>> frontier{{Word{}, AffineMap::identity(dims_)}};
        std::set<std::string> seen{AffineMap::identity(dims_).key()};
        for (int len = 1; len <= 4; ++len) {
            std::vector<std::pair<Word, AffineMap>> next;
            for (auto& [w, m] : frontier)
                for (char c : alphabet_.letters()) {
                    Word nw = w + c;
                    AffineMap nm = m * gen_.at(c);
                    if (!seen.insert(nm.key()).second) continue;
                    next.push_back({nw, nm});
                    examine_for_basis(nw, nm);
                }
            frontier = std::move(next);
        }
    }
    void examine_for_basis(const Word& w, const AffineMap& m) {
        for (std::uint32_t i = 0; i < dims_; ++i) {
            bool pure = true;
            for (std::uint32_t j = 0; j < dims_; ++j)
                if (j != i && (m.sign[j] != 1 || m.offset[j] != 0)) pure = false;
            if (!pure) continue;
            if (m.sign[i] == 1 && m.offset[i] > 0) {
                if (!trans_[i] || m.offset[i] < trans_[i]->second) trans_[i] = {w, m.offset[i]};
            } else if (m.sign[i] == -1) {
                long long a = std::llabs(m.offset[i]);
                if (!refl_[i] || a < std::llabs(refl_[i]->second)) refl_[i] = {w, m.offset[i]};
            }
        }
    }

    // canonical spelling: reflection words (axes ascending) followed by
    // translation words (axes ascending); words compose left-to-right as
    // maps applied right-to-left, i.e. evaluate(uv) = evaluate(u) o evaluate(v)
    Word spell(const AffineMap& g) const {
        AffineMap rest = g;
        Word out;
        for (std::uint32_t i = 0; i < dims_; ++i) {
            if (rest.sign[i] != -1) continue;
            if (!refl_[i]) return spell_fallback(g);
            AffineMap r = evaluate(refl_[i]->first);
            out += refl_[i]->first;
            rest = r.inverse() * rest;
        }
        for (std::uint32_t i = 0; i < dims_; ++i) {
            long long c = rest.offset[i];
            if (rest.sign[i] != 1) return spell_fallback(g);
            if (c == 0) continue;
            if (!trans_[i] || c % trans_[i]->second != 0) return spell_fallback(g);
            long long k = c / trans_[i]->second;
            Word step = k > 0 ? trans_[i]->first : invert_word(trans_[i]->first);
            for (long long n = 0; n < std::llabs(k); ++n) out += step;
        }
        return out;
    }

    // shortlex search over short words; last resort for generator sets
    // without a translation/reflection basis
    Word spell_fallback(const AffineMap& g) const {
        std::string target = g.key();
        std::vector<Word> frontier{Word{}};
        std::set<std::string> seen{AffineMap::identity(dims_).key()};
        if (g.is_identity()) return Word{};
        for (int len = 1; len <= 12; ++len) {
            std::vector<Word> next;
            for (auto& w : frontier)
                for (char c : alphabet_.letters()) {
                    Word nw = w + c;
                    std::string k = evaluate(nw).key();
                    if (!seen.insert(k).second) continue;
                    if (k == target) return nw;
                    next.push_back(nw);
                }
            frontier = std::move(next);
        }
        throw BackendError("grid element has no spelling within search bounds; key " + target);
    }

    std::uint32_t dims_;
    Alphabet alphabet_;
    std::map<char, AffineMap> gen_;
    std::unordered_map<std::string, std::uint64_t> vreg_;
    std::vector<std::array<long long, 3>> vcoords_;
    std::map<std::pair<std::uint32_t, long long>, std::uint64_t> wreg_;
    std::vector<std::pair<std::uint32_t, long long>> wkeys_;
    std::array<std::optional<std::pair<Word, long long>>, 3> trans_;
    std::array<std::optional<std::pair<Word, long long>>, 3> refl_;
    std::map<std::uint32_t, CubeWindow> wcache_;
};

} // namespace cubical
