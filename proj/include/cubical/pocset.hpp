#pragma once

#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cubical/bits.hpp"

namespace cubical {

/**
 * A halfspace is one of the two sides of a hyperplane (wall). Halfspaces of a
 * pocset with n walls are encoded as integers in [0, 2n): wall w contributes
 * the halfspaces 2w ('+') and 2w+1 ('-'). Complementation flips the low bit.
 */
struct Halfspace {
    std::uint32_t code = 0;

    static Halfspace make(std::uint32_t wall, bool minus_side) {
        return Halfspace{wall * 2 + (minus_side ? 1u : 0u)};
    }
    std::uint32_t wall() const { return code / 2; }
    bool minus_side() const { return code & 1; }
    Halfspace complement() const { return Halfspace{code ^ 1u}; }

    bool operator==(const Halfspace& o) const { return code == o.code; }
    bool operator!=(const Halfspace& o) const { return code != o.code; }
    bool operator<(const Halfspace& o) const { return code < o.code; }
};

/// How two halfspaces of a pocset sit relative to each other.
enum class PairRel {
    Equal,
    Complementary,    // same wall, opposite sides
    FirstInsideSecond,  // a < b
    SecondInsideFirst,  // b < a
    Transverse,         // the two walls cross
    FacingDisjoint,     // a and b are disjoint (a < b*)
    Codisjoint          // a* and b* are disjoint (a* < b, i.e. a and b cover everything)
};

inline const char* to_string(PairRel r) {
    switch (r) {
        case PairRel::Equal: return "equal";
        case PairRel::Complementary: return "complementary";
        case PairRel::FirstInsideSecond: return "nested(first-inside-second)";
        case PairRel::SecondInsideFirst: return "nested(second-inside-first)";
        case PairRel::Transverse: return "transverse";
        case PairRel::FacingDisjoint: return "facing-disjoint";
        case PairRel::Codisjoint: return "codisjoint";
    }
    return "?";
}

struct PocsetError : std::runtime_error {
    explicit PocsetError(const std::string& msg) : std::runtime_error(msg) {}
};

/**
 * Finite pocset: a set of 2n halfspaces carrying a strict nesting order that
 * is transitive and complement-reversing, with every halfspace incomparable
 * to its own complement. The strict order is the single stored relation;
 * transversality and disjointness are derived from it.
 */
class Pocset {
public:
    Pocset() = default;
    explicit Pocset(std::uint32_t walls)
        : nwalls_(walls), less_(2 * walls, Bitset(2 * walls)) {}

    std::uint32_t wall_count() const { return nwalls_; }
    std::uint32_t halfspace_count() const { return 2 * nwalls_; }

    /// Declare a < b (strict nesting). The complement-reversed relation is
    /// added automatically; call close() before querying.
    void add_nesting(Halfspace a, Halfspace b) {
        check_code(a);
        check_code(b);
        less_[a.code].set(b.code);
        less_[b.complement().code].set(a.complement().code);
        closed_ = false;
    }

    bool less(Halfspace a, Halfspace b) const { return less_[a.code].test(b.code); }

    /// Transitive closure of the declared relations.
    void close() {
        const std::uint32_t n = halfspace_count();
        // Floyd-Warshall over bit rows: if a < k then a inherits k's row.
        for (std::uint32_t k = 0; k < n; ++k)
            for (std::uint32_t a = 0; a < n; ++a)
                if (less_[a].test(k)) less_[a] |= less_[k];
        closed_ = true;
    }

    /**
     * Validate the pocset axioms. Returns the list of offending pairs as
     * human-readable strings (empty means valid).
     */
    std::vector<std::string> validate() const {
        std::vector<std::string> bad;
        const std::uint32_t n = halfspace_count();
        if (!closed_) bad.push_back("pocset not transitively closed; call close()");
        for (std::uint32_t a = 0; a < n; ++a) {
            Halfspace ha{a};
            if (less_[a].test(a))
                bad.push_back("irreflexivity violated: " + name(ha) + " < " + name(ha));
            if (less_[a].test(a ^ 1u))
                bad.push_back("halfspace nested in its own complement: " + name(ha) + " < " +
                              name(ha.complement()));
            for (std::uint32_t b = a + 1; b < n; ++b)
                if (less_[a].test(b) && less_[b].test(a))
                    bad.push_back("antisymmetry violated: " + name(ha) + " <> " + name(Halfspace{b}));
        }
        return bad;
    }

    void require_valid() const {
        auto bad = validate();
        if (!bad.empty()) {
            std::string msg = "invalid pocset:";
            for (const auto& s : bad) msg += "\n  " + s;
            throw PocsetError(msg);
        }
    }

    /// Pair classification, derived from the stored order and complementation.
    PairRel relation(Halfspace a, Halfspace b) const {
        if (a == b) return PairRel::Equal;
        if (a.wall() == b.wall()) return PairRel::Complementary;
        if (less(a, b)) return PairRel::FirstInsideSecond;
        if (less(b, a)) return PairRel::SecondInsideFirst;
        if (less(a, b.complement())) return PairRel::FacingDisjoint;
        if (less(a.complement(), b)) return PairRel::Codisjoint;
        return PairRel::Transverse;
    }

    bool walls_cross(std::uint32_t w1, std::uint32_t w2) const {
        if (w1 == w2) return false;
        return relation(Halfspace::make(w1, false), Halfspace::make(w2, false)) == PairRel::Transverse;
    }

    static std::string name(Halfspace h) {
        return "H" + std::to_string(h.wall()) + (h.minus_side() ? "-" : "+");
    }

    /**
     * Parse the pocset text format: a header line `hyperplanes N` followed by
     * one nesting relation per line, e.g. `H3+ < H7-`. Blank lines and lines
     * starting with '#' are skipped. Errors carry 1-based line numbers.
     */
    static Pocset parse(const std::string& text) {
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        std::optional<Pocset> p;
        auto fail = [&](const std::string& what) {
            throw PocsetError("line " + std::to_string(lineno) + ": " + what);
        };
        while (std::getline(in, line)) {
            ++lineno;
            std::string s = strip(line);
            if (s.empty() || s[0] == '#') continue;
            std::istringstream ls(s);
            std::string tok;
            ls >> tok;
            if (tok == "hyperplanes") {
                if (p) fail("duplicate header");
                long n = -1;
                if (!(ls >> n) || n < 0) fail("expected `hyperplanes N` with N >= 0");
                p = Pocset(static_cast<std::uint32_t>(n));
                continue;
            }
            if (!p) fail("missing `hyperplanes N` header before relations");
            std::string lt, rhs;
            if (!(ls >> lt >> rhs) || lt != "<")
                fail("expected `Ha+/- < Hb+/-`, got `" + s + "`");
            std::string extra;
            if (ls >> extra) fail("trailing tokens after relation");
            Halfspace a = parse_halfspace(tok, p->wall_count(), lineno);
            Halfspace b = parse_halfspace(rhs, p->wall_count(), lineno);
            if (a.wall() == b.wall()) fail("relation between halfspaces of the same hyperplane");
            p->add_nesting(a, b);
        }
        if (!p) throw PocsetError("empty input: missing `hyperplanes N` header");
        p->close();
        auto bad = p->validate();
        if (!bad.empty()) {
            std::string msg = "contradictory declarations:";
            for (const auto& s : bad) msg += "\n  " + s;
            throw PocsetError(msg);
        }
        return *p;
    }

    std::string format() const {
        std::ostringstream out;
        out << "hyperplanes " << nwalls_ << "\n";
        const std::uint32_t n = halfspace_count();
        for (std::uint32_t a = 0; a < n; ++a)
            less_[a].for_each([&](std::size_t b) {
                // emit a generating set: skip pairs implied by complement-reversal
                Halfspace ha{a}, hb{static_cast<std::uint32_t>(b)};
                if (ha.code < hb.complement().code)
                    out << name(ha) << " < " << name(hb) << "\n";
            });
        return out.str();
    }

private:
    void check_code(Halfspace h) const {
        if (h.code >= halfspace_count()) throw PocsetError("halfspace id out of range: " + name(h));
    }
    static std::string strip(const std::string& s) {
        std::size_t b = s.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) return "";
        std::size_t e = s.find_last_not_of(" \t\r\n");
        return s.substr(b, e - b + 1);
    }
    static Halfspace parse_halfspace(const std::string& tok, std::uint32_t nwalls, int lineno) {
        auto fail = [&](const std::string& what) {
            throw PocsetError("line " + std::to_string(lineno) + ": " + what);
        };
        if (tok.size() < 3 || tok[0] != 'H') fail("bad halfspace token `" + tok + "`");
        char sign = tok.back();
        if (sign != '+' && sign != '-') fail("halfspace token must end in + or -: `" + tok + "`");
        long w = -1;
        try {
            w = std::stol(tok.substr(1, tok.size() - 2));
        } catch (...) {
            fail("bad hyperplane index in `" + tok + "`");
        }
        if (w < 0 || static_cast<std::uint32_t>(w) >= nwalls)
            fail("hyperplane index out of declared range: `" + tok + "`");
        return Halfspace::make(static_cast<std::uint32_t>(w), sign == '-');
    }

    std::uint32_t nwalls_ = 0;
    std::vector<Bitset> less_;
    bool closed_ = true;
};

} // namespace cubical
