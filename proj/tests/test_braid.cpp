#include "braidwork/braid.hpp"

#include "braidwork/rng.hpp"
#include "test_support.hpp"

#include <doctest.h>

using namespace braidwork;
using namespace braidwork::braid;
using milnor::SimplicialElement;
using milnor::face;
using words::parse_word;
using words::word_gen;

TEST_CASE("sigma generator images") {
    // n = 1 (dimension 2): sigma_0 and sigma_{-1}.
    auto s0 = sigma_genmap(0, 1);
    CHECK(s0.img[0] == parse_word("y1"));
    CHECK(s0.img[1] == parse_word("y1^-1 y0 y1"));
    auto sm1 = sigma_genmap(-1, 1);
    CHECK(sm1.img[0] == parse_word("y0^-1 y1^-1"));
    CHECK(sm1.img[1] == parse_word("y1"));
    // n = 2: sigma_{-1} sends y0 to y0^-1 y2^-1 y1^-1.
    auto sm1b = sigma_genmap(-1, 2);
    CHECK(sm1b.img[0] == parse_word("y0^-1 y2^-1 y1^-1"));

    // The frozen substitution example, as a braid action.
    BraidWord b{1, {BraidLetter{0, +1}}};
    CHECK(act(b, words::commutator(word_gen(0), word_gen(1))) ==
          parse_word("y1^-2 y0^-1 y1 y0 y1"));
}

TEST_CASE("braid relations and inverses") {
    for (int n = 0; n <= 6; ++n) {
        auto fail = verify_braid_relations(n);
        if (fail) FAIL(*fail);
    }
    // sigma_{-1}^{-1}(y_0) = (y_0 y_1 ... y_n)^{-1}.
    auto inv = sigma_inv_genmap(-1, 2);
    CHECK(inv.img[0] == parse_word("y2^-1 y1^-1 y0^-1"));
}

TEST_CASE("face and degeneracy exchange rules") {
    for (int n = 0; n <= 5; ++n) {
        auto fail = verify_exchange_rules(n);
        if (fail) FAIL(*fail);
    }
}

TEST_CASE("braid action preserves cycles and composes") {
    SplitMix64 rng(90210);
    for (int dim = 2; dim <= 4; ++dim) {
        int n = dim - 1;
        for (int it = 0; it < 25; ++it) {
            auto z = testing::random_cycle(rng, dim, 6);
            BraidWord b{n, {}};
            int len = 1 + static_cast<int>(rng.below(4));
            for (int i = 0; i < len; ++i)
                b.letters.push_back(BraidLetter{static_cast<int>(rng.below(n + 1)) - 1,
                                                rng.coin() ? 1 : -1});
            auto bz = act(b, z);
            CHECK(milnor::is_cycle(bz));
            // act agrees with the composite generator map.
            CHECK(words::apply_map(braid_genmap(b), z.w) == bz.w);
            // b then b^{-1} is the identity action.
            CHECK(act(braid_inverse(b), bz).w == z.w);
        }
    }
}

TEST_CASE("twist witness face table") {
    // dim 2, x = [y0, y1]: witness sigma_{k+1} s_{k+1} x.
    SimplicialElement x{2, words::commutator(word_gen(0), word_gen(1))};
    BraidWord bm1{1, {BraidLetter{-1, +1}}};
    BraidWord b0{1, {BraidLetter{0, +1}}};

    SUBCASE("k = -1: faces (sigma_{-1} x, 1, x, 1)") {
        auto w = twist_witness(-1, x);
        CHECK(face(0, w).w == act(bm1, x).w);
        CHECK(face(1, w).w.is_identity());
        CHECK(face(2, w).w == x.w);
        CHECK(face(3, w).w.is_identity());
    }
    SUBCASE("k = 0: faces (1, sigma_0 x, 1, x)") {
        auto w = twist_witness(0, x);
        CHECK(face(0, w).w.is_identity());
        CHECK(face(1, w).w == act(b0, x).w);
        CHECK(face(2, w).w.is_identity());
        CHECK(face(3, w).w == x.w);
    }
}

TEST_CASE("twist witness face table on random cycles") {
    SplitMix64 rng(777);
    for (int dim = 2; dim <= 4; ++dim)
        for (int k = -1; k <= dim - 2; ++k)
            for (int it = 0; it < 10; ++it) {
                auto x = testing::random_cycle(rng, dim, 6);
                auto w = twist_witness(k, x);
                BraidWord bk{dim - 1, {BraidLetter{k, +1}}};
                for (int j = 0; j <= dim + 1; ++j) {
                    auto fj = face(j, w);
                    if (j == k + 1) CHECK(fj.w == act(bk, x).w);
                    else if (j == k + 3) CHECK(fj.w == x.w);
                    else CHECK(fj.w.is_identity());
                }
            }
}

TEST_CASE("twist and square certificates") {
    SplitMix64 rng(12);
    for (int dim = 2; dim <= 4; ++dim)
        for (int k = -1; k <= dim - 2; ++k)
            for (int it = 0; it < 8; ++it) {
                auto x = testing::random_cycle(rng, dim, 6);
                auto h = twist_homotopy(k, x);
                REQUIRE(h.has_value());
                CHECK(milnor::is_moore(h->u));
                CHECK(milnor::certify_homotopy(h->a, h->b, h->u).valid);
                // sigma_k(x) ~ x^{-1} endpoints.
                BraidWord bk{dim - 1, {BraidLetter{k, +1}}};
                CHECK(h->a.w == act(bk, x).w);
                CHECK(h->b.w == words::inverse(x.w));

                for (int sign : {+1, -1}) {
                    auto sq = square_homotopy(k, sign, x);
                    REQUIRE(sq.has_value());
                    CHECK(milnor::certify_homotopy(sq->a, sq->b, sq->u).valid);
                    CHECK(sq->b.w == x.w);
                    BraidWord b2{dim - 1, {BraidLetter{k, sign}, BraidLetter{k, sign}}};
                    CHECK(sq->a.w == act(b2, x).w);
                }
            }
}

TEST_CASE("certificate combinators keep the invariant") {
    SplitMix64 rng(34);
    int dim = 3;
    auto x = testing::random_cycle(rng, dim, 6);
    auto y = testing::random_cycle(rng, dim, 6);
    auto h1 = twist_homotopy(0, x);
    auto h2 = twist_homotopy(1, y);
    REQUIRE(h1.has_value());
    REQUIRE(h2.has_value());

    auto sym = hom_sym(*h1);
    CHECK(milnor::certify_homotopy(sym.a, sym.b, sym.u).valid);
    auto inv = hom_inv(*h1);
    CHECK(milnor::certify_homotopy(inv.a, inv.b, inv.u).valid);
    CHECK(milnor::is_moore(inv.u));
    auto prod = hom_mul(*h1, *h2);
    CHECK(milnor::certify_homotopy(prod.a, prod.b, prod.u).valid);
    CHECK(milnor::is_moore(prod.u));
    auto tr = hom_trans(*h1, hom_sym(*h1));
    CHECK(milnor::certify_homotopy(tr.a, tr.b, tr.u).valid);
    for (int k = -1; k <= dim - 2; ++k)
        for (int sign : {+1, -1}) {
            auto mv = hom_transport(k, sign, *h1);
            CHECK(milnor::certify_homotopy(mv.a, mv.b, mv.u).valid);
            CHECK(milnor::is_moore(mv.u));
        }
}

TEST_CASE("pure braid generators and fixed check") {
    SplitMix64 rng(56);
    for (int dim = 2; dim <= 4; ++dim) {
        int n = dim - 1;
        auto gens = pure_braid_generators(n);
        // (n+1 choose 2) pairs over -1 <= i < j <= n-1.
        CHECK(gens.size() == static_cast<std::size_t>((n + 1) * n / 2));
        auto x = testing::random_cycle(rng, dim, 5);
        for (const auto& g : gens) {
            auto res = homotopy_fixed_check(g, x);
            CHECK(res.status == FixedCheckResult::Status::valid);
        }
    }
}

TEST_CASE("fixed check handles products and rejects non-products") {
    SplitMix64 rng(78);
    int dim = 3, n = 2;
    auto x = testing::random_cycle(rng, dim, 5);

    // Product of two conjugated squares.
    BraidWord b{n, {BraidLetter{1, +1}, BraidLetter{0, +1}, BraidLetter{0, +1},
                    BraidLetter{1, -1}, BraidLetter{-1, -1}, BraidLetter{-1, -1}}};
    auto res = homotopy_fixed_check(b, x);
    CHECK(res.status == FixedCheckResult::Status::valid);
    REQUIRE(res.certificate.has_value());
    CHECK(res.certificate->a.w == act(b, x).w);

    // A single sigma is not a product of squares.
    BraidWord s{n, {BraidLetter{0, +1}}};
    CHECK(homotopy_fixed_check(s, x).status == FixedCheckResult::Status::unsupported);

    // Non-cycle input is rejected.
    SimplicialElement notc{dim, word_gen(0)};
    CHECK(homotopy_fixed_check(b, notc).status == FixedCheckResult::Status::invalid);

    // Empty braid word certifies trivially.
    BraidWord empty{n, {}};
    CHECK(homotopy_fixed_check(empty, x).status == FixedCheckResult::Status::valid);
}

TEST_CASE("brute force fixed scan (small)") {
    auto rep = brute_force_fixed_scan(1, 2, 4);
    CHECK(rep.words_scanned == 161);        // 1 + 4 + 12 + 36 + 108
    CHECK(rep.violations.empty());
    CHECK(rep.fixed_count == 5);            // (y0 y1)^m for m in {-2..2}
}

TEST_CASE("cycle criterion: cycles are exactly Moore elements with Moore twist") {
    // Hand-checked witnesses on both sides of the equivalence.
    SplitMix64 rng(31);
    BraidWord neg{2, {BraidLetter{-1, +1}}};
    auto z = testing::random_cycle(rng, 3, 5);
    CHECK(milnor::is_moore(z));
    CHECK(milnor::is_moore(act(neg, z)));
    auto m = testing::random_moore(rng, 3, 6);
    if (!milnor::is_cycle(m)) CHECK_FALSE(milnor::is_moore(act(neg, m)));

    for (int dim = 1; dim <= 4; ++dim) {
        auto rep = cycle_criterion_scan(dim, 240, 1000 + static_cast<std::uint64_t>(dim));
        CHECK(rep.samples == 240);
        CHECK(rep.mismatches == 0);
        CHECK(rep.cycles_seen > 0);
        if (dim == 1)
            CHECK(rep.cycles_seen == 240); // both faces kill everything in F(y_0)
        else if (dim == 2)
            CHECK(rep.moore_seen == rep.cycles_seen); // the Moore boundary out of N_2 is trivial
        else
            CHECK(rep.moore_seen > rep.cycles_seen); // normalized non-cycles occur
        CHECK(rep.ok());
    }
}
