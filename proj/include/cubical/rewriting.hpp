#pragma once

#include <algorithm>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "cubical/word.hpp"

namespace cubical {

struct RewriteRule {
    Word lhs, rhs;
};

struct KBLimits {
    std::size_t max_rules = 500;
    std::size_t max_lhs_len = 20;
    std::size_t max_passes = 100000;
};

struct KBStats {
    std::size_t rules = 0;
    std::size_t equations_processed = 0;
    std::size_t critical_pairs = 0;
};

/**
 * A string rewriting system over an alphabet, reduced with respect to the
 * shortlex order induced by the alphabet's generator precedence. A system is
 * usable for normal forms only when `confluent` is set (completion finished
 * and every critical pair resolves).
 */
class RewritingSystem {
public:
    Alphabet alphabet;
    std::vector<RewriteRule> rules;
    bool confluent = false;
    KBStats stats;

    /// Reduce a word to an irreducible descendant (normal form iff confluent).
    /// Replacement text is fed back through the scanner so redexes created
    /// inside a right-hand side are caught.
    Word reduce(const Word& w) const {
        Word out;
        out.reserve(w.size());
        std::vector<char> todo(w.rbegin(), w.rend());
        while (!todo.empty()) {
            out.push_back(todo.back());
            todo.pop_back();
            bool changed = true;
            while (changed) {
                changed = false;
                for (const auto& r : rules) {
                    if (r.lhs.size() > out.size()) continue;
                    if (std::equal(r.lhs.begin(), r.lhs.end(), out.end() - static_cast<long>(r.lhs.size()))) {
                        out.erase(out.size() - r.lhs.size());
                        todo.insert(todo.end(), r.rhs.rbegin(), r.rhs.rend());
                        changed = true;
                        break;
                    }
                }
            }
        }
        return out;
    }

    /// Exhaustive local-confluence check: every overlap of two left-hand
    /// sides must resolve to a common descendant.
    bool verify_critical_pairs(std::vector<std::pair<Word, Word>>* failures = nullptr) const {
        bool ok = true;
        auto consider = [&](const Word& t, const Word& u, const Word& v) {
            Word a = reduce(u), b = reduce(v);
            (void)t;
            if (a != b) {
                ok = false;
                if (failures) failures->push_back({a, b});
            }
        };
        for (const auto& r1 : rules)
            for (const auto& r2 : rules) {
                // overlap: proper suffix of r1.lhs equals proper prefix of r2.lhs
                for (std::size_t k = 1; k < r1.lhs.size() && k < r2.lhs.size(); ++k) {
                    if (r1.lhs.compare(r1.lhs.size() - k, k, r2.lhs, 0, k) != 0) continue;
                    Word t = r1.lhs + r2.lhs.substr(k);
                    Word u = r1.rhs + r2.lhs.substr(k);
                    Word v = r1.lhs.substr(0, r1.lhs.size() - k) + r2.rhs;
                    consider(t, u, v);
                }
                // containment: r2.lhs inside r1.lhs
                if (&r1 != &r2 && r2.lhs.size() <= r1.lhs.size()) {
                    for (std::size_t pos = 0; pos + r2.lhs.size() <= r1.lhs.size(); ++pos) {
                        if (r1.lhs.compare(pos, r2.lhs.size(), r2.lhs) != 0) continue;
                        Word v = r1.lhs.substr(0, pos) + r2.rhs + r1.lhs.substr(pos + r2.lhs.size());
                        consider(r1.lhs, r1.rhs, v);
                    }
                }
            }
        return ok;
    }
};

struct KBResult {
    RewritingSystem system;
    bool complete = false; // false: limits exhausted, system unusable for normal forms
    std::string message;
};

/**
 * Knuth-Bendix completion for group presentations under shortlex. The free
 * inversion rules x x^-1 -> 1 are seeded automatically. On success the
 * returned system is interreduced, terminating (every rule shortlex
 * decreasing) and confluent; hitting a limit yields complete=false.
 */
inline KBResult knuth_bendix(const Presentation& p, KBLimits limits = {}) {
    KBResult res;
    RewritingSystem& rs = res.system;
    rs.alphabet = p.alphabet;

    std::deque<std::pair<Word, Word>> pending;
    for (char g : rs.alphabet.letters()) {
        Word w;
        w.push_back(g);
        w.push_back(inverse_letter(g));
        pending.push_back({w, Word{}});
    }
    for (const auto& r : p.relators) pending.push_back({r, Word{}});

    auto enqueue_overlaps = [&](std::size_t idx) {
        const Word& L = rs.rules[idx].lhs;
        for (std::size_t j = 0; j < rs.rules.size(); ++j) {
            const Word& M = rs.rules[j].lhs;
            for (std::size_t k = 1; k < L.size() && k < M.size(); ++k)
                if (L.compare(L.size() - k, k, M, 0, k) == 0) {
                    Word u = rs.rules[idx].rhs + M.substr(k);
                    Word v = L.substr(0, L.size() - k) + rs.rules[j].rhs;
                    pending.push_back({u, v});
                    ++rs.stats.critical_pairs;
                }
            for (std::size_t k = 1; k < M.size() && k < L.size(); ++k)
                if (M.compare(M.size() - k, k, L, 0, k) == 0) {
                    Word u = rs.rules[j].rhs + L.substr(k);
                    Word v = M.substr(0, M.size() - k) + rs.rules[idx].rhs;
                    pending.push_back({u, v});
                    ++rs.stats.critical_pairs;
                }
            // containments
            if (j != idx) {
                const Word &big = L.size() >= M.size() ? L : M;
                const Word &small = L.size() >= M.size() ? M : L;
                const Word &big_rhs = L.size() >= M.size() ? rs.rules[idx].rhs : rs.rules[j].rhs;
                const Word &small_rhs = L.size() >= M.size() ? rs.rules[j].rhs : rs.rules[idx].rhs;
                for (std::size_t pos = 0; pos + small.size() <= big.size(); ++pos)
                    if (big.compare(pos, small.size(), small) == 0) {
                        Word v = big.substr(0, pos) + small_rhs + big.substr(pos + small.size());
                        pending.push_back({big_rhs, v});
                        ++rs.stats.critical_pairs;
                    }
            }
        }
        // self-overlap
        for (std::size_t k = 1; k < L.size(); ++k)
            if (L.compare(L.size() - k, k, L, 0, k) == 0) {
                Word u = rs.rules[idx].rhs + L.substr(k);
                Word v = L.substr(0, L.size() - k) + rs.rules[idx].rhs;
                pending.push_back({u, v});
                ++rs.stats.critical_pairs;
            }
    };

    std::size_t passes = 0;
    while (!pending.empty()) {
        if (++passes > limits.max_passes) {
            res.message = "pass limit exhausted";
            return res;
        }
        auto [lw, rw] = pending.front();
        pending.pop_front();
        ++rs.stats.equations_processed;
        Word a = rs.reduce(lw), b = rs.reduce(rw);
        if (a == b) continue;
        if (rs.alphabet.shortlex_less(a, b)) std::swap(a, b);
        if (a.size() > limits.max_lhs_len) {
            res.message = "lhs length limit exceeded (" + std::to_string(a.size()) + " > " +
                          std::to_string(limits.max_lhs_len) + ")";
            rs.stats.rules = rs.rules.size();
            return res;
        }
        // interreduce: existing rules touched by the new one go back to the queue
        std::vector<RewriteRule> kept;
        RewritingSystem probe;
        probe.alphabet = rs.alphabet;
        probe.rules = {{a, b}};
        for (auto& r : rs.rules) {
            if (probe.reduce(r.lhs) != r.lhs)
                pending.push_back({r.lhs, r.rhs});
            else
                kept.push_back({r.lhs, probe.reduce(r.rhs)});
        }
        rs.rules = std::move(kept);
        rs.rules.push_back({a, b});
        if (rs.rules.size() > limits.max_rules) {
            res.message = "rule limit exceeded";
            rs.stats.rules = rs.rules.size();
            return res;
        }
        enqueue_overlaps(rs.rules.size() - 1);
    }

    std::sort(rs.rules.begin(), rs.rules.end(), [&](const RewriteRule& x, const RewriteRule& y) {
        return rs.alphabet.shortlex_less(x.lhs, y.lhs);
    });
    rs.stats.rules = rs.rules.size();
    if (!rs.verify_critical_pairs()) {
        res.message = "internal error: completion finished but a critical pair does not resolve";
        return res;
    }
    rs.confluent = true;
    res.complete = true;
    res.message = "confluent (" + std::to_string(rs.rules.size()) + " rules)";
    return res;
}

} // namespace cubical
