#pragma once

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace cubical {

/**
 * Group words are strings over single-letter generators; a lowercase letter
 * is a generator and the matching uppercase letter its inverse ('a' vs 'A').
 */
using Word = std::string;

struct WordError : std::runtime_error {
    explicit WordError(const std::string& msg) : std::runtime_error(msg) {}
};

inline char inverse_letter(char c) {
    if (std::islower(static_cast<unsigned char>(c))) return static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (std::isupper(static_cast<unsigned char>(c))) return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    throw WordError(std::string("not a generator letter: '") + c + "'");
}

inline Word invert_word(const Word& w) {
    Word r;
    r.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it) r.push_back(inverse_letter(*it));
    return r;
}

inline Word free_reduce(const Word& w) {
    Word out;
    out.reserve(w.size());
    for (char c : w) {
        if (!out.empty() && out.back() == inverse_letter(c))
            out.pop_back();
        else
            out.push_back(c);
    }
    return out;
}

inline Word word_power(const Word& w, int n) {
    Word base = n >= 0 ? w : invert_word(w);
    Word out;
    for (int i = 0; i < std::abs(n); ++i) out += base;
    return out;
}

/// Cyclic reduction: returns (core, conjugator) with w = conjugator core conjugator^-1 freely.
inline std::pair<Word, Word> cyclic_reduce(const Word& w) {
    Word core = free_reduce(w);
    Word conj;
    while (core.size() >= 2 && core.front() == inverse_letter(core.back())) {
        conj.push_back(core.front());
        core = core.substr(1, core.size() - 2);
    }
    return {core, conj};
}

/// Alphabet of a presentation: generator letters in precedence order,
/// immediately followed by their inverses.
class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(const std::string& generators) {
        for (char g : generators) {
            if (!std::islower(static_cast<unsigned char>(g)))
                throw WordError(std::string("generator must be a lowercase letter: '") + g + "'");
            if (rank_.count(g)) throw WordError(std::string("duplicate generator '") + g + "'");
            letters_.push_back(g);
            letters_.push_back(inverse_letter(g));
            rank_[g] = static_cast<int>(rank_.size());
            rank_[inverse_letter(g)] = static_cast<int>(rank_.size());
        }
    }

    std::size_t generator_count() const { return letters_.size() / 2; }
    const std::string& letters() const { return letters_; }
    bool contains(char c) const { return rank_.count(c) != 0; }
    int rank(char c) const {
        auto it = rank_.find(c);
        if (it == rank_.end()) throw WordError(std::string("letter outside alphabet: '") + c + "'");
        return it->second;
    }
    void check_word(const Word& w) const {
        for (char c : w)
            if (!contains(c)) throw WordError(std::string("letter outside alphabet: '") + c + "' in \"" + w + "\"");
    }

    /// shortlex comparison: length first, then letter precedence.
    bool shortlex_less(const Word& a, const Word& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i] != b[i]) return rank(a[i]) < rank(b[i]);
        return false;
    }

private:
    std::string letters_;
    std::map<char, int> rank_;
};

struct Presentation {
    Alphabet alphabet;
    std::vector<Word> relators;

    Presentation() = default;
    Presentation(const std::string& generators, std::vector<Word> rels)
        : alphabet(generators), relators(std::move(rels)) {
        for (auto& r : relators) {
            alphabet.check_word(r);
            Word reduced = free_reduce(r);
            if (reduced != r) throw WordError("relator not freely reduced: \"" + r + "\"");
        }
    }
};

} // namespace cubical
