#include "braidwork/words.hpp"

#include <algorithm>
#include <cassert>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace braidwork::words {

Word word_identity() { return Word{}; }

Word word_gen(int gen, std::int64_t exp) {
    assert(gen >= 0);
    if (exp == 0) return Word{};
    return Word{{Syllable{gen, exp}}};
}

namespace {

// Append one syllable to a reduced prefix, keeping it reduced.
void push_syllable(std::vector<Syllable>& out, int gen, std::int64_t exp) {
    if (exp == 0) return;
    if (!out.empty() && out.back().gen == gen) {
        out.back().exp += exp;
        if (out.back().exp == 0) out.pop_back();
    } else {
        out.push_back(Syllable{gen, exp});
    }
}

} // namespace

Word from_syllables(const std::vector<Syllable>& raw) {
    Word w;
    for (const auto& s : raw) push_syllable(w.syl, s.gen, s.exp);
    return w;
}

Word mul(const Word& a, const Word& b) {
    Word r = a;
    for (const auto& s : b.syl) push_syllable(r.syl, s.gen, s.exp);
    return r;
}

Word inverse(const Word& a) {
    Word r;
    r.syl.reserve(a.syl.size());
    for (auto it = a.syl.rbegin(); it != a.syl.rend(); ++it)
        r.syl.push_back(Syllable{it->gen, -it->exp});
    return r;
}

Word power(const Word& a, std::int64_t k) {
    if (k == 0 || a.is_identity()) return Word{};
    if (k < 0) return power(inverse(a), -k);
    // Single-syllable fast path.
    if (a.syl.size() == 1) return word_gen(a.syl[0].gen, a.syl[0].exp * k);
    Word acc, base = a;
    while (k > 0) {
        if (k & 1) acc = mul(acc, base);
        k >>= 1;
        if (k) base = mul(base, base);
    }
    return acc;
}

Word conjugate(const Word& a, const Word& g) { return mul(mul(g, a), inverse(g)); }

Word commutator(const Word& a, const Word& b) {
    return mul(mul(inverse(a), inverse(b)), mul(a, b));
}

std::int64_t word_length(const Word& a) {
    std::int64_t n = 0;
    for (const auto& s : a.syl) n += std::llabs(s.exp);
    return n;
}

int max_gen_index(const Word& a) {
    int m = -1;
    for (const auto& s : a.syl)
        if (s.gen > m) m = s.gen;
    return m;
}

std::uint64_t word_hash(const Word& a) {
    // FNV-1a over the syllable stream.
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= 1099511628211ull;
        }
    };
    for (const auto& s : a.syl) {
        mix(static_cast<std::uint64_t>(s.gen));
        mix(static_cast<std::uint64_t>(s.exp));
    }
    return h;
}

GenMap identity_map(int m) {
    GenMap f;
    f.src_gens = f.dst_gens = m;
    f.img.reserve(m);
    for (int i = 0; i < m; ++i) f.img.push_back(word_gen(i));
    return f;
}

Word apply_map(const GenMap& f, const Word& w) {
    Word r;
    for (const auto& s : w.syl) {
        if (s.gen >= f.src_gens) throw std::invalid_argument("apply_map: generator out of range");
        Word piece = power(f.img[s.gen], s.exp);
        for (const auto& t : piece.syl) push_syllable(r.syl, t.gen, t.exp);
    }
    return r;
}

GenMap compose(const GenMap& f, const GenMap& g) {
    if (g.dst_gens != f.src_gens) throw std::invalid_argument("compose: rank mismatch");
    GenMap r;
    r.src_gens = g.src_gens;
    r.dst_gens = f.dst_gens;
    r.img.reserve(g.img.size());
    for (const auto& w : g.img) r.img.push_back(apply_map(f, w));
    return r;
}

namespace {

// Depth-first extension by single letters in the fixed deterministic order
// (y_0, y_0^-1, y_1, y_1^-1, ...), skipping letters that would cancel.
void enumerate_rec(int num_gens, int remaining, Word& cur, std::vector<Word>& out) {
    if (remaining == 0) return;
    for (int g = 0; g < num_gens; ++g) {
        for (int e : {+1, -1}) {
            if (!cur.syl.empty()) {
                const auto& last = cur.syl.back();
                if (last.gen == g && (last.exp > 0) != (e > 0)) continue; // would cancel
            }
            push_syllable(cur.syl, g, e);
            out.push_back(cur);
            enumerate_rec(num_gens, remaining - 1, cur, out);
            // undo
            if (cur.syl.back().exp == e) cur.syl.pop_back();
            else cur.syl.back().exp -= e;
        }
    }
}

} // namespace

std::vector<Word> enumerate_words(int num_gens, int max_len) {
    std::vector<Word> out;
    out.push_back(word_identity());
    Word cur;
    enumerate_rec(num_gens, max_len, cur, out);
    // Depth-first emits prefix order; re-sort by (length, emission index is
    // already lexicographic per length via stable_sort on length).
    std::stable_sort(out.begin(), out.end(), [](const Word& a, const Word& b) {
        return word_length(a) < word_length(b);
    });
    return out;
}

std::int64_t count_words(int num_gens, int max_len) {
    // 1 + sum_{l=1..L} 2n (2n-1)^(l-1)
    std::int64_t total = 1, layer = 2 * num_gens;
    for (int l = 1; l <= max_len; ++l) {
        total += layer;
        layer *= (2 * num_gens - 1);
    }
    return total;
}

std::string format_word(const Word& w) {
    if (w.is_identity()) return "1";
    std::ostringstream os;
    bool first = true;
    for (const auto& s : w.syl) {
        if (!first) os << ' ';
        first = false;
        os << 'y' << s.gen;
        if (s.exp != 1) os << '^' << s.exp;
    }
    return os.str();
}

Word parse_word(const std::string& text) {
    std::istringstream is(text);
    std::vector<Syllable> raw;
    std::string tok;
    bool any = false, identity_tok = false;
    while (is >> tok) {
        any = true;
        if (tok == "1") {
            identity_tok = true;
            continue;
        }
        if (tok.size() < 2 || tok[0] != 'y')
            throw std::invalid_argument("parse_word: bad token '" + tok + "'");
        std::size_t caret = tok.find('^');
        std::string gen_part = tok.substr(1, caret == std::string::npos ? std::string::npos : caret - 1);
        std::int64_t exp = 1;
        if (caret != std::string::npos) {
            std::string exp_part = tok.substr(caret + 1);
            if (exp_part.empty()) throw std::invalid_argument("parse_word: empty exponent in '" + tok + "'");
            std::size_t pos = 0;
            try {
                exp = std::stoll(exp_part, &pos);
            } catch (const std::exception&) {
                throw std::invalid_argument("parse_word: bad exponent in '" + tok + "'");
            }
            if (pos != exp_part.size()) throw std::invalid_argument("parse_word: bad exponent in '" + tok + "'");
            if (exp == 0) throw std::invalid_argument("parse_word: zero exponent in '" + tok + "'");
        }
        if (gen_part.empty()) throw std::invalid_argument("parse_word: missing generator index in '" + tok + "'");
        std::size_t pos = 0;
        int gen = 0;
        try {
            gen = std::stoi(gen_part, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("parse_word: bad generator in '" + tok + "'");
        }
        if (pos != gen_part.size() || gen < 0)
            throw std::invalid_argument("parse_word: bad generator in '" + tok + "'");
        raw.push_back(Syllable{gen, exp});
    }
    if (!any) throw std::invalid_argument("parse_word: empty input");
    if (identity_tok && !raw.empty())
        throw std::invalid_argument("parse_word: '1' mixed with letters");
    return from_syllables(raw);
}

} // namespace braidwork::words
