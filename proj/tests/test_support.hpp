#pragma once

// Shared helpers for the unit suites: seeded random words and elements.

#include "braidwork/milnor.hpp"
#include "braidwork/rng.hpp"
#include "braidwork/words.hpp"

namespace braidwork::testing {

inline words::Word random_word(SplitMix64& rng, int num_gens, int max_letters) {
    std::vector<words::Syllable> raw;
    int len = static_cast<int>(rng.below(static_cast<std::uint64_t>(max_letters) + 1));
    for (int i = 0; i < len; ++i) {
        int gen = static_cast<int>(rng.below(static_cast<std::uint64_t>(num_gens)));
        raw.push_back(words::Syllable{gen, rng.coin() ? 1 : -1});
    }
    return words::from_syllables(raw);
}

inline milnor::SimplicialElement random_element(SplitMix64& rng, int dim, int max_letters) {
    return milnor::SimplicialElement{dim, random_word(rng, dim, max_letters)};
}

// A Moore element: the normalization of a random element.
inline milnor::SimplicialElement random_moore(SplitMix64& rng, int dim, int max_letters) {
    return milnor::moore_normalize(random_element(rng, dim, max_letters));
}

// A Moore cycle: for Moore m with c = d_0(m), the commutator [m, s_0(c)]
// kills every face (the trivial side of each bracket wins), and conjugating
// a cycle by anything keeps it a cycle.
inline milnor::SimplicialElement random_cycle(SplitMix64& rng, int dim, int max_letters) {
    auto m = random_moore(rng, dim, max_letters);
    auto s = milnor::degeneracy(0, milnor::face(0, m));
    milnor::SimplicialElement z{dim, words::commutator(m.w, s.w)};
    auto g = random_element(rng, dim, max_letters / 2);
    return milnor::SimplicialElement{dim, words::conjugate(z.w, g.w)};
}

} // namespace braidwork::testing
