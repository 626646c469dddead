#include "braidwork/words.hpp"

#include "braidwork/rng.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <stdexcept>

using namespace braidwork;
using namespace braidwork::words;

TEST_CASE("reduction and basic laws") {
    // y0 y0^-1 collapses; merged syllables stay canonical.
    Word w = from_syllables({{0, 1}, {0, -1}, {1, 2}, {1, 1}});
    CHECK(w == word_gen(1, 3));
    CHECK(from_syllables({{0, 1}, {1, 1}, {1, -1}, {0, -1}}).is_identity());

    Word a = parse_word("y0 y1^-1 y0^2");
    CHECK(word_length(a) == 4);
    CHECK(max_gen_index(a) == 1);
    CHECK(mul(a, inverse(a)).is_identity());
    CHECK(format_word(a) == "y0 y1^-1 y0^2");
}

TEST_CASE("group laws on random words") {
    SplitMix64 rng(2024);
    for (int it = 0; it < 200; ++it) {
        Word u = testing::random_word(rng, 3, 8);
        Word v = testing::random_word(rng, 3, 8);
        Word w = testing::random_word(rng, 3, 8);
        CHECK(mul(mul(u, v), w) == mul(u, mul(v, w)));
        CHECK(inverse(mul(u, v)) == mul(inverse(v), inverse(u)));
        CHECK(mul(u, inverse(u)).is_identity());
        CHECK(power(u, 3) == mul(u, mul(u, u)));
        CHECK(power(u, -2) == inverse(mul(u, u)));
        CHECK(commutator(u, v) == mul(mul(inverse(u), inverse(v)), mul(u, v)));
        CHECK(conjugate(u, v) == mul(v, mul(u, inverse(v))));
    }
}

TEST_CASE("enumerate_words matches the closed count") {
    // 1 + sum_{l=1..L} 2n(2n-1)^(l-1); for n=2, L=2: 1 + 4 + 12 = 17.
    auto ws = enumerate_words(2, 2);
    CHECK(ws.size() == 17);
    CHECK(count_words(2, 2) == 17);
    for (const auto& w : ws) CHECK(word_length(w) <= 2);
    // All distinct.
    for (std::size_t i = 0; i < ws.size(); ++i)
        for (std::size_t j = i + 1; j < ws.size(); ++j) CHECK(!(ws[i] == ws[j]));

    CHECK(enumerate_words(1, 3).size() == static_cast<std::size_t>(count_words(1, 3)));
    CHECK(enumerate_words(3, 3).size() == static_cast<std::size_t>(count_words(3, 3)));
    // (n=1, len<=6) and (n=2, len<=4) fixed-scan universes.
    CHECK(count_words(2, 6) == 1457);
    CHECK(count_words(3, 4) == 937);
}

TEST_CASE("apply_map and compose") {
    // f: y0 -> y1, y1 -> y1^-1 y0 y1 (a braid-type substitution).
    GenMap f;
    f.src_gens = f.dst_gens = 2;
    f.img = {parse_word("y1"), parse_word("y1^-1 y0 y1")};

    CHECK(apply_map(f, parse_word("y0 y1")) == parse_word("y0 y1"));
    Word comm = commutator(word_gen(0), word_gen(1));
    CHECK(apply_map(f, comm) == parse_word("y1^-2 y0^-1 y1 y0 y1"));

    SplitMix64 rng(7);
    GenMap g;
    g.src_gens = 3;
    g.dst_gens = 2;
    g.img = {testing::random_word(rng, 2, 5), testing::random_word(rng, 2, 5),
             testing::random_word(rng, 2, 5)};
    for (int it = 0; it < 100; ++it) {
        Word u = testing::random_word(rng, 3, 6);
        Word v = testing::random_word(rng, 3, 6);
        CHECK(apply_map(g, mul(u, v)) == mul(apply_map(g, u), apply_map(g, v)));
        CHECK(apply_map(g, inverse(u)) == inverse(apply_map(g, u)));
        CHECK(apply_map(compose(f, g), u) == apply_map(f, apply_map(g, u)));
    }
}

TEST_CASE("text grammar") {
    CHECK(format_word(word_identity()) == "1");
    CHECK(parse_word("1").is_identity());
    CHECK(parse_word("y0 y0") == word_gen(0, 2));
    CHECK(parse_word("y2^-3") == word_gen(2, -3));
    CHECK(parse_word("  y0   y1^2 ") == from_syllables({{0, 1}, {1, 2}}));
    CHECK_THROWS_AS((void)parse_word(""), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_word("x0"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_word("y"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_word("y0^0"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_word("y0^"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_word("y-1"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_word("1 y0"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_word("y0^2x"), std::invalid_argument);

    SplitMix64 rng(99);
    for (int it = 0; it < 100; ++it) {
        Word u = testing::random_word(rng, 4, 10);
        CHECK(parse_word(format_word(u)) == u);
    }
}

TEST_CASE("splitmix64 reference stream") {
    // First outputs for seed 1234567 (frozen; report determinism depends on it).
    SplitMix64 rng(1234567);
    CHECK(rng.next() == 6457827717110365317ull);
    CHECK(rng.next() == 3203168211198807973ull);
    CHECK(rng.next() == 9817491932198370423ull);
}
