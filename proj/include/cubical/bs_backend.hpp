#pragma once

#include <algorithm>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cubical/backend.hpp"

namespace cubical {

namespace detail {

inline std::string int128_to_string(__int128 x) {
    if (x == 0) return "0";
    bool neg = x < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-x) : static_cast<unsigned __int128>(x);
    std::string s;
    while (u) {
        s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    if (neg) s.push_back('-');
    std::reverse(s.begin(), s.end());
    return s;
}

/// Shared tree logic: relation of two halfspaces given as (wall, side) where
/// the "positive" side of each wall is a subtree/cone c_i, from the
/// containment pattern of c_1, c_2. Complements of subtrees never nest into
/// subtrees in an infinite tree, which this table relies on.
inline HsRel tree_side_relation(bool pos1, bool pos2, bool c1_in_c2, bool c2_in_c1) {
    if (pos1 && pos2) return c1_in_c2 ? HsRel::FirstInsideSecond : c2_in_c1 ? HsRel::SecondInsideFirst : HsRel::FacingDisjoint;
    if (pos1 && !pos2) return c1_in_c2 ? HsRel::FacingDisjoint : c2_in_c1 ? HsRel::Codisjoint : HsRel::FirstInsideSecond;
    if (!pos1 && pos2) return c2_in_c1 ? HsRel::FacingDisjoint : c1_in_c2 ? HsRel::Codisjoint : HsRel::SecondInsideFirst;
    return c1_in_c2 ? HsRel::SecondInsideFirst : c2_in_c1 ? HsRel::FirstInsideSecond : HsRel::Codisjoint;
}

} // namespace detail

/**
 * Solvable Baumslag-Solitar group BS(1,m) = <a,t | t a t^-1 = a^m>, m >= 2,
 * in its affine model: a is x -> x+1 and t is x -> m*x on Z[1/m]. The group
 * acts on its Bass-Serre tree, whose vertices at level k are the cosets
 * r + m^k Z; level shifts by t make the tree (m+1)-regular. Everything is
 * answered in closed form with exact m-adic rationals.
 */
class BsBackend final : public ActionBackend {
public:
    explicit BsBackend(std::uint32_t m) : m_(m), alphabet_("at") {
        if (m_ < 2) throw BackendError("BS(1,m) backend requires m >= 2");
        vertex_id(VKey{0, MAdic{}});
    }

    std::string kind() const override { return "bass-serre-BS(1," + std::to_string(m_) + ")"; }
    const Alphabet& alphabet() const override { return alphabet_; }
    std::uint32_t complex_dimension() const override { return 1; }
    bool global_oracle() const override { return true; }
    std::uint32_t multiplier() const { return m_; }

    struct MAdic {
        __int128 num = 0;
        std::uint32_t e = 0; // value num / m^e, normalized: e == 0 or m does not divide num
    };

    /// x -> m^level_shift * x + shift
    struct Element {
        int level_shift = 0;
        MAdic shift;
    };

    MAdic madic_normalize(__int128 num, long long e) const {
        if (num == 0) return MAdic{0, 0};
        while (e > 0 && num % static_cast<__int128>(m_) == 0) {
            num /= static_cast<__int128>(m_);
            --e;
        }
        while (e < 0) {
            num = checked_mul(num, m_);
            ++e;
        }
        return MAdic{num, static_cast<std::uint32_t>(e)};
    }
    MAdic madic_add(const MAdic& a, const MAdic& b) const {
        std::uint32_t e = std::max(a.e, b.e);
        __int128 na = checked_mul_pow(a.num, e - a.e);
        __int128 nb = checked_mul_pow(b.num, e - b.e);
        return madic_normalize(na + nb, e);
    }
    MAdic madic_neg(const MAdic& a) const { return MAdic{-a.num, a.e}; }
    MAdic madic_shift(const MAdic& a, int k) const { // multiply by m^k
        return madic_normalize(a.num, static_cast<long long>(a.e) - k);
    }
    // valuation v_m; only valid for nonzero values
    long long madic_val(const MAdic& a) const {
        __int128 n = a.num;
        long long v = -static_cast<long long>(a.e);
        while (n % static_cast<__int128>(m_) == 0) {
            n /= static_cast<__int128>(m_);
            ++v;
        }
        return v;
    }
    // representative of a mod m^k Z in [0, m^k)
    MAdic madic_mod_level(const MAdic& a, int k) const {
        long long ke = static_cast<long long>(k) + static_cast<long long>(a.e);
        if (ke <= 0) return MAdic{0, 0};
        __int128 mod = pow_m(static_cast<std::uint32_t>(ke));
        __int128 y = a.num % mod;
        if (y < 0) y += mod;
        return madic_normalize(y, a.e);
    }
    bool madic_eq(const MAdic& a, const MAdic& b) const { return a.num == b.num && a.e == b.e; }

    Element evaluate(const Word& w) const {
        // word letters act left-to-right as maps applied right-to-left
        Element g; // identity
        for (char c : w) {
            Element h;
            switch (c) {
                case 'a': h.level_shift = 0; h.shift = {1, 0}; break;
                case 'A': h.level_shift = 0; h.shift = {-1, 0}; break;
                case 't': h.level_shift = 1; h.shift = {0, 0}; break;
                case 'T': h.level_shift = -1; h.shift = {0, 0}; break;
                default: throw BackendError(std::string("unknown generator '") + c + "'");
            }
            g = compose(g, h);
        }
        return g;
    }
    Element compose(const Element& g, const Element& h) const {
        // (g o h)(x) = m^qg (m^qh x + rh) + rg
        Element r;
        r.level_shift = g.level_shift + h.level_shift;
        MAdic rh{h.shift.num, h.shift.e};
        MAdic rg{g.shift.num, g.shift.e};
        MAdic s = madic_add(madic_shift(rh, g.level_shift), rg);
        r.shift = {s.num, s.e};
        return r;
    }
    Element inverse(const Element& g) const {
        // y = m^q x + r  =>  x = m^-q y - m^-q r
        Element r;
        r.level_shift = -g.level_shift;
        MAdic s = madic_shift(madic_neg(MAdic{g.shift.num, g.shift.e}), -g.level_shift);
        r.shift = {s.num, s.e};
        return r;
    }

    std::string element_key(const Word& w) const override {
        Element g = evaluate(w);
        return std::to_string(g.level_shift) + "|" + detail::int128_to_string(g.shift.num) + "|" +
               std::to_string(g.shift.e);
    }

    /// Canonical word T^e a^c t^(e+q) for the element x -> m^q x + c/m^e.
    Word normal_form(const Word& w) const override {
        Element g = evaluate(w);
        __int128 c = g.shift.num;
        long long e = g.shift.e;
        long long tail = e + g.level_shift;
        __int128 ac = c < 0 ? -c : c;
        if (ac > 2'000'000) throw BackendError("normal form word too long to materialise; use element keys");
        Word out;
        for (long long i = 0; i < e; ++i) out.push_back('T');
        for (__int128 i = 0; i < ac; ++i) out.push_back(c < 0 ? 'A' : 'a');
        for (long long i = 0; i < std::abs(tail); ++i) out.push_back(tail < 0 ? 'T' : 't');
        return out;
    }

    struct VKey {
        int level = 0;
        MAdic rep; // in [0, m^level)
    };
    std::string vkey_str(const VKey& v) const {
        return std::to_string(v.level) + "|" + detail::int128_to_string(v.rep.num) + "|" + std::to_string(v.rep.e);
    }

    VKey apply(const Element& g, const VKey& v) const {
        VKey out;
        out.level = v.level + g.level_shift;
        out.rep = madic_mod_level(madic_add(madic_shift(v.rep, g.level_shift), MAdic{g.shift.num, g.shift.e}),
                                  out.level);
        return out;
    }

    std::uint64_t vertex_image(const Word& w, std::uint64_t v) override {
        return vertex_id(apply(evaluate(w), vkey_of(v)));
    }

    std::string describe_vertex(std::uint64_t v) const override {
        const VKey& k = vkey_of(v);
        return "(level " + std::to_string(k.level) + ", " + detail::int128_to_string(k.rep.num) +
               (k.rep.e ? "/" + std::to_string(m_) + "^" + std::to_string(k.rep.e) : "") + ")";
    }
    std::string describe_wall(std::uint64_t wall) const override {
        return "edge-below" + describe_vertex(wall_vertex_of(wall));
    }

    std::uint32_t tree_distance(const VKey& a, const VKey& b) const {
        long long j = std::min(a.level, b.level);
        MAdic diff = madic_add(a.rep, madic_neg(b.rep));
        if (diff.num != 0) j = std::min(j, madic_val(diff));
        return static_cast<std::uint32_t>((a.level - j) + (b.level - j));
    }

    CubeWindow window(std::uint32_t radius) override {
        auto cached = wcache_.find(radius);
        if (cached != wcache_.end()) return cached->second;
        // BFS ball around the base vertex; deterministic neighbour order
        std::vector<VKey> verts{VKey{0, MAdic{}}};
        std::unordered_map<std::string, std::uint32_t> seen{{vkey_str(verts[0]), 0}};
        std::vector<std::uint32_t> depth{0};
        for (std::size_t head = 0; head < verts.size(); ++head) {
            if (depth[head] == radius) continue;
            VKey v = verts[head];
            std::vector<VKey> nbrs;
            nbrs.push_back(VKey{v.level - 1, madic_mod_level(v.rep, v.level - 1)});
            for (std::uint32_t j = 0; j < m_; ++j) {
                MAdic step = madic_normalize(static_cast<__int128>(j), -static_cast<long long>(v.level));
                nbrs.push_back(VKey{v.level + 1, madic_mod_level(madic_add(v.rep, step), v.level + 1)});
            }
            for (const auto& n : nbrs) {
                auto key = vkey_str(n);
                if (seen.emplace(key, verts.size()).second) {
                    verts.push_back(n);
                    depth.push_back(depth[head] + 1);
                }
            }
        }
        std::vector<std::pair<std::uint64_t, VKey>> order;
        for (auto& v : verts) order.push_back({vertex_id(v), v});
        std::sort(order.begin(), order.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });

        CubeWindow w;
        w.nv = static_cast<std::uint32_t>(order.size());
        std::unordered_map<std::string, VertexId> local;
        for (VertexId i = 0; i < w.nv; ++i) {
            local[vkey_str(order[i].second)] = i;
            w.vertex_label.push_back(order[i].first);
        }
        std::unordered_map<std::uint64_t, WallId> wlocal;
        for (VertexId i = 0; i < w.nv; ++i) {
            const VKey& v = order[i].second;
            VKey parent{v.level - 1, madic_mod_level(v.rep, v.level - 1)};
            auto it = local.find(vkey_str(parent));
            if (it == local.end()) continue;
            std::uint64_t gw = wall_id(order[i].first);
            WallId lw;
            auto wit = wlocal.find(gw);
            if (wit == wlocal.end()) {
                lw = static_cast<WallId>(w.wall_label.size());
                wlocal.emplace(gw, lw);
                w.wall_label.push_back(gw);
            } else {
                lw = wit->second;
            }
            w.edges.push_back({it->second, i, lw});
        }
        w.nwalls = static_cast<std::uint32_t>(w.wall_label.size());
        w.wall_side.assign(w.nwalls, Bitset(w.nv));
        for (WallId wi = 0; wi < w.nwalls; ++wi) {
            VKey root = vkey_of(wall_vertex_of(w.wall_label[wi]));
            bool base_in = subtree_contains(root, VKey{0, MAdic{}});
            for (VertexId vi = 0; vi < w.nv; ++vi) {
                bool in = subtree_contains(root, order[vi].second);
                if (in != base_in) w.wall_side[wi].set(vi);
            }
        }
        wcache_.emplace(radius, w);
        return w;
    }

    bool subtree_contains(const VKey& root, const VKey& v) const {
        if (v.level < root.level) return false;
        return madic_eq(madic_mod_level(v.rep, root.level), root.rep);
    }

    SignedWall image_halfspace(const Word& w, SignedWall h) override {
        Element g = evaluate(w);
        VKey root = vkey_of(wall_vertex_of(h.wall));
        VKey imroot = apply(g, root);
        std::uint64_t wall = wall_id(vertex_id(imroot));
        // h.side true = side away from base; the positive side of a wall is its subtree
        bool sub_contains_base_old = subtree_contains(root, VKey{0, MAdic{}});
        bool queried_is_subtree = (h.side == !sub_contains_base_old) ? true : false;
        // image of the subtree side is the subtree of the image root
        bool sub_contains_base_new = subtree_contains(imroot, VKey{0, MAdic{}});
        bool image_is_subtree = queried_is_subtree;
        bool side = image_is_subtree ? !sub_contains_base_new : sub_contains_base_new;
        return SignedWall{wall, side};
    }

    HalfspaceRelation halfspace_relation(SignedWall a, SignedWall b, const Budget&) override {
        VKey r1 = vkey_of(wall_vertex_of(a.wall));
        VKey r2 = vkey_of(wall_vertex_of(b.wall));
        HalfspaceRelation rel;
        bool same = r1.level == r2.level && madic_eq(r1.rep, r2.rep);
        bool base1 = subtree_contains(r1, VKey{0, MAdic{}});
        bool base2 = subtree_contains(r2, VKey{0, MAdic{}});
        bool pos1 = (a.side == !base1);
        bool pos2 = (b.side == !base2);
        if (same) {
            rel.verdict = (pos1 == pos2) ? HsRel::Equal : HsRel::Complement;
            return rel;
        }
        rel.verdict = detail::tree_side_relation(pos1, pos2, subtree_contains(r2, r1), subtree_contains(r1, r2));
        rel.witness = "subtrees at " + describe_vertex(wall_vertex_of(a.wall)) + ", " +
                      describe_vertex(wall_vertex_of(b.wall));
        return rel;
    }

    std::optional<std::uint64_t> translation_length(const Word& w) const override {
        return static_cast<std::uint64_t>(std::abs(evaluate(w).level_shift));
    }

    std::optional<std::uint64_t> min_displacement_vertex(const Word& w) override {
        Element g = evaluate(w);
        if (g.level_shift == 0) {
            // elliptic x -> x + r: fixes all levels k <= v(r)
            MAdic r{g.shift.num, g.shift.e};
            int k = 0;
            if (r.num != 0) k = static_cast<int>(std::min<long long>(0, madic_val(r)));
            return vertex_id(VKey{k, MAdic{}});
        }
        if (g.level_shift < 0) g = inverse(g);
        // axis vertex at level 0: rep y/m^f with (m^q - 1) y = -c mod m^f
        std::uint32_t f = g.shift.e;
        __int128 mod = pow_m(f);
        __int128 mq1 = pow_m(static_cast<std::uint32_t>(g.level_shift)) - 1;
        __int128 y = 0;
        if (mod > 1) {
            __int128 inv = mod_inverse(((mq1 % mod) + mod) % mod, mod);
            __int128 c = ((-g.shift.num) % mod + mod) % mod;
            y = (mul_mod(inv, c, mod));
        }
        return vertex_id(VKey{0, madic_normalize(y, f)});
    }

    std::uint64_t vertex_id(const VKey& v) {
        auto key = vkey_str(v);
        auto it = vreg_.find(key);
        if (it != vreg_.end()) return it->second;
        std::uint64_t id = vkeys_.size();
        vreg_.emplace(key, id);
        vkeys_.push_back(v);
        return id;
    }
    std::uint64_t wall_id(std::uint64_t finer_vertex) {
        auto it = wreg_.find(finer_vertex);
        if (it != wreg_.end()) return it->second;
        std::uint64_t id = wverts_.size();
        wreg_.emplace(finer_vertex, id);
        wverts_.push_back(finer_vertex);
        return id;
    }

private:
    const VKey& vkey_of(std::uint64_t v) const {
        if (v >= vkeys_.size()) throw BackendError("unknown vertex id");
        return vkeys_[v];
    }
    std::uint64_t wall_vertex_of(std::uint64_t w) const {
        if (w >= wverts_.size()) throw BackendError("unknown wall id");
        return wverts_[w];
    }

    __int128 checked_mul(__int128 a, std::uint32_t b) const {
        __int128 r = a * static_cast<__int128>(b);
        constexpr __int128 lim = (static_cast<__int128>(1) << 100);
        if (r > lim || r < -lim) throw BackendError("m-adic coefficient overflow");
        return r;
    }
    __int128 checked_mul_pow(__int128 a, std::uint32_t k) const {
        for (std::uint32_t i = 0; i < k; ++i) a = checked_mul(a, m_);
        return a;
    }
    __int128 pow_m(std::uint32_t k) const { return checked_mul_pow(1, k); }
    static __int128 mul_mod(__int128 a, __int128 b, __int128 mod) { return (a * b) % mod; }
    static __int128 mod_inverse(__int128 a, __int128 mod) {
        __int128 t = 0, newt = 1, r = mod, newr = a;
        while (newr != 0) {
            __int128 q = r / newr;
            __int128 tmp = t - q * newt;
            t = newt;
            newt = tmp;
            tmp = r - q * newr;
            r = newr;
            newr = tmp;
        }
        if (r != 1) throw BackendError("mod_inverse: not invertible");
        if (t < 0) t += mod;
        return t;
    }

    std::uint32_t m_;
    Alphabet alphabet_;
    std::unordered_map<std::string, std::uint64_t> vreg_;
    std::vector<VKey> vkeys_;
    std::unordered_map<std::uint64_t, std::uint64_t> wreg_;
    std::vector<std::uint64_t> wverts_;
    std::map<std::uint32_t, CubeWindow> wcache_;
};

} // namespace cubical
