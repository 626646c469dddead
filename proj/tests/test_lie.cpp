#include "braidwork/lie.hpp"

#include "braidwork/exactla.hpp"
#include "braidwork/magnus.hpp"
#include "braidwork/milnor.hpp"
#include "braidwork/rng.hpp"
#include "braidwork/words.hpp"

#include "doctest.h"
#include "test_support.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

using namespace braidwork;
using lie::BasisSymbol;
using lie::LieElement;
using magnus::mono_from_letters;
using magnus::Series;

namespace {

std::uint64_t W(std::initializer_list<int> letters) {
    return mono_from_letters(std::vector<int>(letters));
}

// Number of Lyndon words of the given length: (1/n) sum_{d|n} mu(d) k^{n/d}.
long long necklace_count(int k, int n) {
    auto mobius = [](int m) {
        int r = 1;
        for (int q = 2; q * q <= m; ++q) {
            if (m % q) continue;
            m /= q;
            if (m % q == 0) return 0;
            r = -r;
        }
        if (m > 1) r = -r;
        return r;
    };
    long long total = 0;
    for (int d = 1; d <= n; ++d) {
        if (n % d) continue;
        long long pw = 1;
        for (int i = 0; i < n / d; ++i) pw *= k;
        total += mobius(d) * pw;
    }
    return total / n;
}

// Full-support count by inclusion-exclusion over missing letters.
long long full_support_count(int q, int t) {
    long long total = 0;
    long long binom = 1;
    for (int i = 0; i <= q; ++i) {
        if (q - i >= 1)
            total += (i % 2 ? -1 : 1) * binom * necklace_count(q - i, t);
        binom = binom * (q - i) / (i + 1);
    }
    return total;
}

LieElement random_element(SplitMix64& rng, int n_vars, int t_max, std::uint32_t p) {
    std::vector<BasisSymbol> pool;
    for (int t = 1; t <= t_max; ++t)
        for (std::uint64_t w : lie::lyndon_words(n_vars, t)) pool.push_back(BasisSymbol{w, 0});
    LieElement a = lie::lie_zero(n_vars, p);
    std::int64_t picks = 1 + rng.below(3);
    for (std::int64_t i = 0; i < picks; ++i)
        lie::lie_add_term(a, pool[static_cast<std::size_t>(rng.below((std::int64_t)pool.size()))],
                          rng.range(-3, 3));
    return a;
}

} // namespace

TEST_CASE("Lyndon words: membership, enumeration, standard factorization") {
    CHECK(lie::is_lyndon(W({0})));
    CHECK(lie::is_lyndon(W({0, 1})));
    CHECK(lie::is_lyndon(W({0, 0, 1, 1})));
    CHECK(lie::is_lyndon(W({0, 1, 2})));
    CHECK(lie::is_lyndon(W({0, 2, 1})));
    CHECK_FALSE(lie::is_lyndon(W({1, 0})));
    CHECK_FALSE(lie::is_lyndon(W({0, 0})));
    CHECK_FALSE(lie::is_lyndon(W({0, 1, 0, 1})));
    CHECK_FALSE(lie::is_lyndon(W({0, 1, 0})));
    CHECK_FALSE(lie::is_lyndon(magnus::mono_one()));

    CHECK(lie::lyndon_words(2, 2) == std::vector<std::uint64_t>{W({0, 1})});
    CHECK(lie::lyndon_words(2, 4) ==
          std::vector<std::uint64_t>{W({0, 0, 0, 1}), W({0, 0, 1, 1}), W({0, 1, 1, 1})});
    CHECK(lie::lyndon_words(1, 1) == std::vector<std::uint64_t>{W({0})});
    CHECK(lie::lyndon_words(1, 3).empty());

    for (auto [k, n] : {std::pair{2, 6}, {3, 4}, {4, 3}, {5, 5}}) {
        auto words = lie::lyndon_words(k, n);
        CHECK((long long)words.size() == necklace_count(k, n));
        for (std::size_t i = 0; i + 1 < words.size(); ++i) CHECK(words[i] < words[i + 1]);
        for (std::uint64_t w : words) CHECK(lie::is_lyndon(w));
    }

    CHECK(lie::standard_factorization(W({0, 1, 2})) == std::pair{W({0}), W({1, 2})});
    CHECK(lie::standard_factorization(W({0, 2, 1})) == std::pair{W({0, 2}), W({1})});
    CHECK(lie::standard_factorization(W({0, 0, 1})) == std::pair{W({0}), W({0, 1})});
    CHECK(lie::standard_factorization(W({0, 1, 1})) == std::pair{W({0, 1}), W({1})});
    for (std::uint64_t w : lie::lyndon_words(3, 5)) {
        auto [u, v] = lie::standard_factorization(w);
        CHECK(lie::is_lyndon(u));
        CHECK(lie::is_lyndon(v));
        std::vector<int> lu = magnus::mono_letters(u);
        std::vector<int> lv = magnus::mono_letters(v);
        CHECK(std::lexicographical_compare(lu.begin(), lu.end(), lv.begin(), lv.end()));
        CHECK(magnus::mono_concat(u, v) == w);
    }
    CHECK_THROWS_AS(lie::standard_factorization(W({0})), std::invalid_argument);
    CHECK_THROWS_AS(lie::standard_factorization(W({1, 0})), std::invalid_argument);
}

TEST_CASE("Lie elements: construction, arithmetic, formatting") {
    LieElement g0 = lie::lie_generator(3, 0, 0);
    CHECK(lie::format_lie(g0) == "x0");
    CHECK(lie::lie_top_weight(g0) == 1);

    CHECK(lie::format_symbol(BasisSymbol{W({0, 0, 1}), 0}, 0) == "[x0,[x0,x1]]");
    CHECK(lie::format_symbol(BasisSymbol{W({0, 1, 1}), 0}, 0) == "[[x0,x1],x1]");
    CHECK(lie::format_symbol(BasisSymbol{W({0, 1, 2}), 0}, 0) == "[x0,[x1,x2]]");
    CHECK(lie::format_symbol(BasisSymbol{W({0, 2, 1}), 0}, 0) == "[[x0,x2],x1]");
    CHECK(lie::format_symbol(BasisSymbol{W({0}), 2}, 2) == "x0^4");
    CHECK(lie::format_symbol(BasisSymbol{W({0, 1}), 1}, 3) == "[x0,x1]^3");

    LieElement a = lie::lie_zero(2, 0);
    lie::lie_add_term(a, BasisSymbol{W({0, 0, 1}), 0}, -1);
    lie::lie_add_term(a, BasisSymbol{W({0, 1, 1}), 0}, 1);
    CHECK(lie::format_lie(a) == "-[x0,[x0,x1]] + [[x0,x1],x1]");
    CHECK(lie::format_lie(lie::lie_scale(a, -2)) == "2*[x0,[x0,x1]] - 2*[[x0,x1],x1]");
    CHECK(lie::lie_sub(a, a).is_zero());
    CHECK(lie::format_lie(lie::lie_zero(2, 0)) == "0");

    // Coefficients are normalized mod p.
    LieElement b = lie::lie_zero(2, 3);
    lie::lie_add_term(b, BasisSymbol{W({0, 1}), 0}, 5);
    CHECK(lie::format_lie(b) == "2*[x0,x1]");
    lie::lie_add_term(b, BasisSymbol{W({0, 1}), 0}, 1);
    CHECK(b.is_zero());

    LieElement c = lie::lie_zero(2, 0);
    CHECK_THROWS_AS(lie::lie_add_term(c, BasisSymbol{W({1, 0}), 0}, 1), std::invalid_argument);
    CHECK_THROWS_AS(lie::lie_add_term(c, BasisSymbol{W({0, 2}), 0}, 1), std::invalid_argument);
    CHECK_THROWS_AS(lie::lie_add_term(c, BasisSymbol{W({0}), 1}, 1), std::invalid_argument);
    CHECK_THROWS_AS(lie::lie_generator(2, 0, 2), std::invalid_argument);
}

TEST_CASE("tensor expansion: frozen values and unitriangular leading terms") {
    Series e01 = lie::tensor_expand_symbol(BasisSymbol{W({0, 1}), 0}, 2, 2, 0);
    CHECK(e01 == magnus::parse_series("x0*x1 - x1*x0", 2, 2, 0));

    Series e001 = lie::tensor_expand_symbol(BasisSymbol{W({0, 0, 1}), 0}, 2, 3, 0);
    CHECK(e001 == magnus::parse_series("x0*x0*x1 - 2*x0*x1*x0 + x1*x0*x0", 2, 3, 0));

    // Restricted powers expand to literal powers of the expansion.
    Series sq = lie::tensor_expand_symbol(BasisSymbol{W({0}), 1}, 1, 2, 2);
    CHECK(sq == magnus::parse_series("x0*x0", 1, 2, 2));
    Series br2 = lie::tensor_expand_symbol(BasisSymbol{W({0, 1}), 1}, 2, 4, 2);
    Series e01p = lie::tensor_expand_symbol(BasisSymbol{W({0, 1}), 0}, 2, 4, 2);
    CHECK(br2 == magnus::mul(e01p, e01p));

    // The least monomial of tau(w)'s expansion is w itself with coefficient 1.
    for (std::uint64_t w : lie::lyndon_words(3, 4)) {
        Series e = lie::tensor_expand_symbol(BasisSymbol{w, 0}, 3, 4, 0);
        auto it = e.terms.begin();
        CHECK(it->first == w);
        CHECK(it->second == 1);
    }

    CHECK_THROWS_AS(lie::tensor_expand_symbol(BasisSymbol{W({0, 1}), 0}, 2, 1, 0),
                    std::invalid_argument);
}

TEST_CASE("lie_recognize: solves for coordinates and rejects non-Lie series") {
    Series f = magnus::parse_series("x0*x1 - x1*x0", 2, 2, 0);
    LieElement a = lie::lie_recognize(f);
    CHECK(a == lie::lie_basis_element(2, 0, BasisSymbol{W({0, 1}), 0}));

    CHECK_THROWS_AS(lie::lie_recognize(magnus::parse_series("x0*x1 + x1*x0", 2, 2, 0)),
                    std::domain_error);
    CHECK_THROWS_AS(lie::lie_recognize(magnus::parse_series("1 + x0", 1, 2, 0)),
                    std::domain_error);
    CHECK_THROWS_AS(lie::lie_recognize(magnus::parse_series("x0*x0", 1, 2, 0)),
                    std::domain_error);
    CHECK(lie::lie_recognize(magnus::series_zero(2, 3, 0)).is_zero());

    // Over Z/2 the symmetrized product is the bracket, and squares are basis
    // symbols rather than errors.
    LieElement b = lie::lie_recognize(magnus::parse_series("x0*x1 + x1*x0", 2, 2, 2));
    CHECK(b == lie::lie_basis_element(2, 2, BasisSymbol{W({0, 1}), 0}));
    LieElement s = lie::lie_recognize(magnus::parse_series("x0*x0", 1, 2, 2));
    CHECK(s == lie::lie_basis_element(1, 2, BasisSymbol{W({0}), 1}));
    // x0^2 is not a 3rd power, so it is rejected over Z/3.
    CHECK_THROWS_AS(lie::lie_recognize(magnus::parse_series("x0*x0", 1, 2, 3)),
                    std::domain_error);

    // Round trip through the tensor algebra on random elements.
    SplitMix64 rng(2026);
    for (int it = 0; it < 40; ++it) {
        std::uint32_t p = it % 3 == 2 ? 5 : 0;
        LieElement x = random_element(rng, 3, 4, p);
        CHECK(lie::lie_recognize(lie::tensor_expand(x, lie::lie_top_weight(x))) == x);
    }
}

TEST_CASE("bracket: frozen values, antisymmetry, Jacobi, restricted powers") {
    LieElement x0 = lie::lie_generator(2, 0, 0);
    LieElement x1 = lie::lie_generator(2, 0, 1);
    CHECK(lie::bracket(x0, x1) == lie::lie_basis_element(2, 0, BasisSymbol{W({0, 1}), 0}));
    CHECK(lie::bracket(x1, x0) ==
          lie::lie_scale(lie::lie_basis_element(2, 0, BasisSymbol{W({0, 1}), 0}), -1));
    CHECK(lie::bracket(x0, lie::bracket(x0, x1)) ==
          lie::lie_basis_element(2, 0, BasisSymbol{W({0, 0, 1}), 0}));
    CHECK(lie::bracket(x0, x0).is_zero());

    SplitMix64 rng(77);
    for (int it = 0; it < 12; ++it) {
        std::uint32_t p = it % 2 ? 3 : 0;
        LieElement a = random_element(rng, 3, 2, p);
        LieElement b = random_element(rng, 3, 2, p);
        LieElement c = random_element(rng, 3, 2, p);
        CHECK(lie::lie_add(lie::bracket(a, b), lie::bracket(b, a)).is_zero());
        CHECK(lie::bracket(lie::lie_add(a, b), c) ==
              lie::lie_add(lie::bracket(a, c), lie::bracket(b, c)));
        LieElement jac = lie::lie_add(
            lie::lie_add(lie::bracket(lie::bracket(a, b), c), lie::bracket(lie::bracket(b, c), a)),
            lie::bracket(lie::bracket(c, a), b));
        CHECK(jac.is_zero());
    }

    // [x0^2, x0] = 0 and [x0^2, x1] = [x0,[x0,x1]] over Z/2.
    LieElement sq = lie::lie_basis_element(2, 2, BasisSymbol{W({0}), 1});
    CHECK(lie::bracket(sq, lie::lie_generator(2, 2, 0)).is_zero());
    CHECK(lie::bracket(sq, lie::lie_generator(2, 2, 1)) ==
          lie::lie_basis_element(2, 2, BasisSymbol{W({0, 0, 1}), 0}));
}

TEST_CASE("simplicial structure: frozen faces, identities, Moore property") {
    // d_0 [x0,[x1,x2]] = [-(x0+x1), [x0,x1]] = -[x0,[x0,x1]] + [[x0,x1],x1].
    LieElement a = lie::lie_basis_element(3, 0, BasisSymbol{W({0, 1, 2}), 0});
    LieElement d0a = lie::lie_face(0, a);
    LieElement expected = lie::lie_zero(2, 0);
    lie::lie_add_term(expected, BasisSymbol{W({0, 0, 1}), 0}, -1);
    lie::lie_add_term(expected, BasisSymbol{W({0, 1, 1}), 0}, 1);
    CHECK(d0a == expected);
    CHECK(lie::format_lie(d0a) == "-[x0,[x0,x1]] + [[x0,x1],x1]");

    LieElement b = lie::lie_basis_element(3, 0, BasisSymbol{W({0, 2, 1}), 0});
    CHECK(lie::lie_face(0, b) == lie::lie_basis_element(2, 0, BasisSymbol{W({0, 0, 1}), 0}));

    // Higher faces renumber; killing any used letter kills the bracket.
    CHECK(lie::lie_face(1, a).is_zero());
    CHECK(lie::lie_face(2, a).is_zero());
    CHECK(lie::lie_face(3, a).is_zero());
    LieElement c = lie::lie_basis_element(3, 0, BasisSymbol{W({1, 2}), 0});
    CHECK(lie::lie_face(1, c) == lie::lie_basis_element(2, 0, BasisSymbol{W({0, 1}), 0}));

    // Degeneracies: s_0 x0 = x1 and s_1 x0 = x0 + x1 in dimension 1 -> 2.
    LieElement g = lie::lie_generator(1, 0, 0);
    CHECK(lie::lie_degeneracy(0, g) == lie::lie_generator(2, 0, 1));
    CHECK(lie::lie_degeneracy(1, g) ==
          lie::lie_add(lie::lie_generator(2, 0, 0), lie::lie_generator(2, 0, 1)));

    // Simplicial identities on random elements in dimension 3.
    SplitMix64 rng(5150);
    for (int it = 0; it < 10; ++it) {
        std::uint32_t p = it % 2 ? 2 : 0;
        LieElement x = random_element(rng, 3, 3, p);
        for (int i = 0; i <= 2; ++i)
            for (int j = i + 1; j <= 3; ++j)
                CHECK(lie::lie_face(i, lie::lie_face(j, x)) ==
                      lie::lie_face(j - 1, lie::lie_face(i, x)));
        for (int i = 0; i <= 3; ++i)
            for (int j = i; j <= 3; ++j)
                CHECK(lie::lie_degeneracy(i, lie::lie_degeneracy(j, x)) ==
                      lie::lie_degeneracy(j + 1, lie::lie_degeneracy(i, x)));
        for (int i = 0; i <= 4; ++i)
            for (int j = 0; j <= 3; ++j) {
                LieElement sj = lie::lie_degeneracy(j, x);
                if (i == j || i == j + 1)
                    CHECK(lie::lie_face(i, sj) == x);
                else if (i < j)
                    CHECK(lie::lie_face(i, sj) ==
                          lie::lie_degeneracy(j - 1, lie::lie_face(i, x)));
                else
                    CHECK(lie::lie_face(i, sj) ==
                          lie::lie_degeneracy(j, lie::lie_face(i - 1, x)));
            }
    }

    // Full-support symbols span the Moore complex: faces j >= 1 all vanish.
    for (int q = 2; q <= 4; ++q)
        for (int t = q; t <= 5; ++t)
            for (const BasisSymbol& s : lie::nondegenerate_basis(t, q, 0)) {
                LieElement e = lie::lie_basis_element(q, 0, s);
                for (int j = 1; j <= q; ++j) CHECK(lie::lie_face(j, e).is_zero());
            }
}

TEST_CASE("graded compatibility with the series-level simplicial structure") {
    CHECK(lie::verify_graded_compatibility(6, 6, 0).ok());
    CHECK(lie::verify_graded_compatibility(4, 4, 2).ok());
}

TEST_CASE("nondegenerate bases: census against inclusion-exclusion") {
    CHECK(lie::nondegenerate_basis(1, 1, 0) ==
          std::vector<BasisSymbol>{BasisSymbol{W({0}), 0}});
    CHECK(lie::nondegenerate_basis(4, 2, 0).size() == 3);
    CHECK(lie::nondegenerate_basis(4, 3, 0).size() == 9);
    CHECK(lie::nondegenerate_basis(4, 4, 0).size() == 6);
    CHECK(lie::nondegenerate_basis(5, 2, 0).size() == 6);
    CHECK(lie::nondegenerate_basis(5, 3, 0).size() == 30);
    std::vector<std::size_t> t6;
    for (int q = 2; q <= 6; ++q) t6.push_back(lie::nondegenerate_basis(6, q, 0).size());
    CHECK(t6 == std::vector<std::size_t>{9, 89, 260, 300, 120});
    for (int q = 2; q <= 6; ++q)
        CHECK((long long)lie::nondegenerate_basis(6, q, 0).size() == full_support_count(q, 6));
    CHECK(lie::nondegenerate_basis(8, 2, 0).size() == 30);
    CHECK(lie::nondegenerate_basis(3, 4, 0).empty()); // q > t forces a missing letter
    CHECK(lie::nondegenerate_basis(2, 3, 0).empty());

    // Restricted mod-p symbols join the basis at p-power weights.
    CHECK(lie::nondegenerate_basis(4, 1, 2) ==
          std::vector<BasisSymbol>{BasisSymbol{W({0}), 2}});
    CHECK(lie::nondegenerate_basis(2, 1, 2) ==
          std::vector<BasisSymbol>{BasisSymbol{W({0}), 1}});
    CHECK(lie::nondegenerate_basis(3, 1, 3) ==
          std::vector<BasisSymbol>{BasisSymbol{W({0}), 1}});
    CHECK(lie::nondegenerate_basis(3, 1, 2).empty());
    CHECK(lie::nondegenerate_basis(4, 2, 2).size() == 4); // 3 plain + [x0,x1]^2
    CHECK(lie::nondegenerate_basis(4, 2, 3).size() == 3);
}

TEST_CASE("Moore boundary matrices: frozen t=3 matrix, homology, d^2 = 0") {
    exactla::IntMatrix m33 = lie::moore_boundary_matrix(3, 3, 0);
    CHECK(m33 == exactla::IntMatrix::from_dense({{-1, 1}, {1, 0}}));
    exactla::SnfResult snf = exactla::smith_normal_form(m33);
    CHECK(snf.diag == std::vector<Int>{1, 1});

    exactla::IntMatrix m32 = lie::moore_boundary_matrix(3, 2, 0);
    CHECK(m32.rows == 0);
    CHECK(m32.cols == 2);
    CHECK(exactla::homology_at(m33, m32).trivial());

    for (int t = 2; t <= 6; ++t)
        for (int q = 2; q <= t; ++q) {
            exactla::IntMatrix outer = lie::moore_boundary_matrix(t, q, 0);
            exactla::IntMatrix inner = lie::moore_boundary_matrix(t, q - 1, 0);
            CHECK(exactla::is_zero(exactla::matmul(inner, outer)));
        }

    // Restricted mod-2 boundaries: squares of brackets die under d_0 here.
    exactla::IntMatrix m42p2 = lie::moore_boundary_matrix(4, 2, 2);
    CHECK(m42p2.rows == 1);
    CHECK(m42p2.cols == 4);
    CHECK(exactla::is_zero(m42p2));
}

TEST_CASE("group brackets: commutator words realizing the standard bracketing") {
    CHECK(lie::group_bracket(BasisSymbol{W({0, 1}), 0}, 0) ==
          words::commutator(words::word_gen(0), words::word_gen(1)));
    CHECK(lie::group_bracket(BasisSymbol{W({0}), 1}, 2) == words::power(words::word_gen(0), 2));
    CHECK(lie::group_bracket(BasisSymbol{W({0, 1, 2}), 0}, 0) ==
          words::commutator(words::word_gen(0),
                            words::commutator(words::word_gen(1), words::word_gen(2))));

    // Full-support bracket words are Moore, and their Magnus image starts with
    // the tensor expansion of the symbol in the lowest degree.
    for (int q = 2; q <= 3; ++q)
        for (int t = q; t <= 4; ++t)
            for (const BasisSymbol& b : lie::nondegenerate_basis(t, q, 0)) {
                words::Word g = lie::group_bracket(b, 0);
                CHECK(milnor::is_moore(milnor::SimplicialElement{q, g}));
                Series emb = magnus::magnus_embed(g, q, t, 0);
                CHECK(magnus::q_component(t, emb) == lie::tensor_expand_symbol(b, q, t, 0));
            }

    // Restricted power words embed with the literal power as lowest term mod p.
    BasisSymbol sq{W({0, 1}), 1};
    words::Word g = lie::group_bracket(sq, 2);
    CHECK(milnor::is_moore(milnor::SimplicialElement{2, g}));
    Series emb = magnus::magnus_embed(g, 2, 4, 2);
    CHECK(magnus::q_component(4, emb) == lie::tensor_expand_symbol(sq, 2, 4, 2));
}
