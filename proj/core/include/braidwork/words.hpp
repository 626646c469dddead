#pragma once

// Reduced words in finitely generated free groups F(y_0, ..., y_{m-1}) and
// homomorphisms between them given by generator images.

#include <cstdint>
#include <string>
#include <vector>

namespace braidwork::words {

// One syllable y_gen^exp of a reduced word; gen >= 0, exp != 0.
struct Syllable {
    int gen;
    std::int64_t exp;
    friend bool operator==(const Syllable&, const Syllable&) = default;
};

// Reduced word: adjacent syllables have distinct generators, all exponents
// nonzero. The empty word is the identity.
struct Word {
    std::vector<Syllable> syl;

    bool is_identity() const { return syl.empty(); }
    friend bool operator==(const Word&, const Word&) = default;
};

Word word_identity();
Word word_gen(int gen, std::int64_t exp = 1);

// Reduce an arbitrary syllable sequence (merging/cancelling) into a Word.
Word from_syllables(const std::vector<Syllable>& raw);

Word mul(const Word& a, const Word& b);
Word inverse(const Word& a);
Word power(const Word& a, std::int64_t k);
// g a g^-1
Word conjugate(const Word& a, const Word& g);
// [a, b] = a^-1 b^-1 a b
Word commutator(const Word& a, const Word& b);

// Number of letters (sum of |exp|).
std::int64_t word_length(const Word& a);
// Largest generator index used; -1 for the identity.
int max_gen_index(const Word& a);

std::uint64_t word_hash(const Word& a);

// Homomorphism F(src_gens) -> F(dst_gens), y_i |-> img[i].
struct GenMap {
    int src_gens = 0;
    int dst_gens = 0;
    std::vector<Word> img;

    friend bool operator==(const GenMap&, const GenMap&) = default;
};

GenMap identity_map(int m);
Word apply_map(const GenMap& f, const Word& w);
// (f o g): apply g first, then f. Requires g.dst_gens == f.src_gens.
GenMap compose(const GenMap& f, const GenMap& g);

// All reduced words on num_gens generators with at most max_len letters,
// ordered by length, then lexicographically in generation order
// (y_0, y_0^-1, y_1, y_1^-1, ...). Includes the identity.
std::vector<Word> enumerate_words(int num_gens, int max_len);

// Count of the above without materializing.
std::int64_t count_words(int num_gens, int max_len);

// Text grammar: syllables separated by single spaces, e.g. "y0 y1^-1 y0^2";
// the identity is "1". parse accepts unreduced input and reduces.
std::string format_word(const Word& w);
Word parse_word(const std::string& text); // throws std::invalid_argument

} // namespace braidwork::words
