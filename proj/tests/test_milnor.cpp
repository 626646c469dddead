#include "braidwork/milnor.hpp"

#include "braidwork/rng.hpp"
#include "test_support.hpp"

#include <doctest.h>

using namespace braidwork;
using namespace braidwork::milnor;
using words::parse_word;
using words::word_gen;

TEST_CASE("generator tables") {
    CHECK(y_neg1(0) == words::word_identity());
    CHECK(y_neg1(1) == parse_word("y0^-1"));
    CHECK(y_neg1(3) == parse_word("y2^-1 y1^-1 y0^-1"));

    // d_0 at q=2: y0 -> y0^-1, y1 -> y0.
    auto d0 = face_genmap(2, 0);
    CHECK(d0.img[0] == parse_word("y0^-1"));
    CHECK(d0.img[1] == parse_word("y0"));
    // d_1 at q=2: y0 -> 1, y1 -> y0.
    auto d1 = face_genmap(2, 1);
    CHECK(d1.img[0].is_identity());
    CHECK(d1.img[1] == parse_word("y0"));
    // s_1 at q=2: y0 -> y0 y1 (j = k+1 case), y1 -> y2 (j <= k case).
    auto s1 = degeneracy_genmap(2, 1);
    CHECK(s1.img[0] == parse_word("y0 y1"));
    CHECK(s1.img[1] == parse_word("y2"));
    auto s0 = degeneracy_genmap(1, 0);
    CHECK(s0.img[0] == parse_word("y1"));
}

TEST_CASE("simplicial identities hold through dimension 6") {
    auto failure = verify_simplicial_identities(6);
    if (failure) FAIL(*failure);
}

TEST_CASE("identities on random elements") {
    SplitMix64 rng(31337);
    for (int dim = 2; dim <= 5; ++dim) {
        for (int it = 0; it < 40; ++it) {
            auto e = testing::random_element(rng, dim, 10);
            // d_i d_j = d_{j-1} d_i for i < j.
            for (int j = 1; j <= dim; ++j)
                for (int i = 0; i < j; ++i)
                    CHECK(face(i, face(j, e)) == face(j - 1, face(i, e)));
            // d_j s_j = d_{j+1} s_j = id.
            for (int j = 0; j <= dim; ++j) {
                CHECK(face(j, degeneracy(j, e)) == e);
                CHECK(face(j + 1, degeneracy(j, e)) == e);
            }
        }
    }
}

TEST_CASE("moore membership and normalization") {
    SplitMix64 rng(4242);

    // Non-degenerate commutators in dimension 2 are cycles.
    SimplicialElement c2{2, words::commutator(word_gen(0), word_gen(1))};
    CHECK(is_moore(c2));
    CHECK(is_cycle(c2));

    // [y0, [y1, y2]] is Moore but not a cycle; its d_0 is a frozen value.
    SimplicialElement c3{3, words::commutator(word_gen(0), words::commutator(word_gen(1), word_gen(2)))};
    CHECK(is_moore(c3));
    CHECK(!is_cycle(c3));
    auto d0c3 = face(0, c3);
    auto expect = words::commutator(parse_word("y1^-1 y0^-1"),
                                    words::commutator(word_gen(0), word_gen(1)));
    CHECK(d0c3.w == expect);

    for (int dim = 1; dim <= 5; ++dim) {
        for (int it = 0; it < 30; ++it) {
            auto e = testing::random_element(rng, dim, 8);
            auto m = moore_normalize(e);
            CHECK(is_moore(m));
            // Normalization is idempotent.
            CHECK(moore_normalize(m) == m);
            // Constructed cycles really are cycles.
            auto z = testing::random_cycle(rng, dim, 8);
            CHECK(is_cycle(z));
        }
    }
}

TEST_CASE("boundaries of Moore elements are Moore") {
    SplitMix64 rng(555);
    for (int dim = 2; dim <= 5; ++dim)
        for (int it = 0; it < 30; ++it) {
            auto m = testing::random_moore(rng, dim, 8);
            auto b = face(0, m);
            CHECK(is_moore(b));
            // d_0 restricted to Moore elements squares to zero.
            if (dim >= 2) CHECK(face(0, b).w.is_identity());
        }
}

TEST_CASE("R filtration") {
    SplitMix64 rng(808);
    for (int dim = 2; dim <= 4; ++dim) {
        auto z = testing::random_cycle(rng, dim, 6);
        CHECK(in_R(dim, z));
        CHECK(in_R(dim - 1, z));     // single faces vanish
        if (dim >= 2) CHECK(in_R(dim - 2, z));
        auto e = SimplicialElement{dim, word_gen(0)};
        CHECK(!in_R(dim - 1, e));    // d_{1}(y_0) = 1 but d_0(y_0) != 1 in dim >= 2
    }
    // y_1^3 in dimension 2: d_0 = y_0^3 is nontrivial, so not in R_1,
    // while R_2 contains all of dimension 2 by convention.
    auto e2 = SimplicialElement{2, word_gen(1, 3)};
    CHECK(!in_R(1, e2));
    CHECK(in_R(2, e2));
}

TEST_CASE("homotopy certificates") {
    SplitMix64 rng(1001);
    for (int dim = 1; dim <= 4; ++dim) {
        for (int it = 0; it < 25; ++it) {
            auto u = testing::random_moore(rng, dim + 1, 8);
            SimplicialElement x = face(0, u);
            SimplicialElement y{dim, words::word_identity()};
            CHECK(certify_homotopy(x, y, u).valid);
            // Witness normalization happens inside: a raw element whose
            // normalization has the right boundary also certifies.
            auto raw = testing::random_element(rng, dim + 1, 8);
            auto m = moore_normalize(raw);
            CHECK(certify_homotopy(face(0, m), y, raw).valid);
            // Perturbing one side breaks the certificate.
            SimplicialElement xg{dim, words::mul(word_gen(0), x.w)};
            CHECK(!certify_homotopy(xg, y, u).valid);
        }
    }
    // Dimension guards.
    SimplicialElement a{2, word_gen(0)}, w{2, word_gen(0)};
    CHECK(!certify_homotopy(a, a, w).valid);
}
