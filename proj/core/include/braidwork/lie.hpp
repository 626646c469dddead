#pragma once

// Free Lie algebras on the series generators with Lyndon-word bases: the
// graded pieces L_t(S^1)_q of the lower-central associated graded of F(S^1),
// their simplicial structure, restricted p^s-power symbols over Z/p,
// non-degenerate Moore bases, tensor-algebra expansion with recognition of
// Lie elements inside Series, and the boundary matrices of the Moore complex.

#include "braidwork/exactla.hpp"
#include "braidwork/ints.hpp"
#include "braidwork/magnus.hpp"
#include "braidwork/words.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace braidwork::lie {

using magnus::CheckCounts;

// Lyndon words are packed like series monomials (see magnus.hpp); the packed
// integer order restricted to a fixed length is exactly lexicographic.
using LyndonWord = std::uint64_t;

bool is_lyndon(LyndonWord w);
// All Lyndon words of the given exact length, lexicographic order (Duval).
std::vector<LyndonWord> lyndon_words(int n_vars, int length);
// w = u*v with v the lexicographically least proper suffix; u, v Lyndon and
// u < v. The standard bracketing is tau(w) = [tau(u), tau(v)].
std::pair<LyndonWord, LyndonWord> standard_factorization(LyndonWord w);

// Basis symbol: a Lyndon word w and a power exponent s. s = 0 denotes the
// standard bracketing tau(w); s >= 1 (only over Z/p) its restricted p^s-th
// power tau(w)^{p^s}. The weight |w| * p^s must stay within the monomial cap.
struct BasisSymbol {
    LyndonWord word = 0;
    int s = 0;
    friend auto operator<=>(const BasisSymbol&, const BasisSymbol&) = default;
};

int symbol_weight(const BasisSymbol& b, std::uint32_t p);
std::string format_symbol(const BasisSymbol& b, std::uint32_t p); // "[x0,[x0,x1]]", "[x0,x1]^4"

// Group-word realization: nested group commutators along the standard
// factorization, raised to the p^s-th power for restricted symbols. For a
// full-support word the result is Moore in every dimension containing it.
words::Word group_bracket(const BasisSymbol& b, std::uint32_t p);

struct LieElement {
    int n_vars = 0;
    std::uint32_t p = 0; // 0 = Z; else Z/p with restricted powers admitted
    std::map<BasisSymbol, Int> terms;

    bool is_zero() const { return terms.empty(); }
    friend bool operator==(const LieElement&, const LieElement&) = default;
};

LieElement lie_zero(int n_vars, std::uint32_t p);
LieElement lie_generator(int n_vars, std::uint32_t p, int j);
LieElement lie_basis_element(int n_vars, std::uint32_t p, const BasisSymbol& b);
void lie_add_term(LieElement& a, const BasisSymbol& b, const Int& c);
LieElement lie_add(const LieElement& a, const LieElement& b);
LieElement lie_sub(const LieElement& a, const LieElement& b);
LieElement lie_scale(const LieElement& a, const Int& c);
// Largest symbol weight present; 0 for the zero element.
int lie_top_weight(const LieElement& a);
// Bracket form in the series-coefficient style, e.g. "-[x0,[x0,x1]] + 2*[x0,x1]^2".
std::string format_lie(const LieElement& a);

// Expansion into the tensor algebra A(S^1)_q truncated at max_deg, which must
// cover every weight present. Expansions are unitriangular: the least monomial
// of tau(w)^{p^s} is w repeated p^s times, with coefficient 1.
magnus::Series tensor_expand_symbol(const BasisSymbol& b, int n_vars, int max_deg,
                                    std::uint32_t p);
magnus::Series tensor_expand(const LieElement& a, int max_deg);

// Inverse of tensor_expand on its image: peels leading monomials, which are
// basis words (or their p^s-fold repetitions). Throws std::domain_error when
// the series is not a Z-combination (Z/p-combination) of basis expansions.
LieElement lie_recognize(const magnus::Series& f);

LieElement bracket(const LieElement& a, const LieElement& b);

// Simplicial structure: faces/degeneracies are the Lie homomorphisms with
// generator images
//   d_j x_k = x_{k-1} (j <= k; d_0 x_0 = -(x_0+...+x_{m-1})), 0 (j = k+1),
//             x_k (j > k+1)
//   s_j x_k = x_{k+1} (j <= k), x_k + x_{k+1} (j = k+1), x_k (j > k+1),
// the degree-one parts of the A(S^1) structure maps.
LieElement lie_face(int j, const LieElement& a);
LieElement lie_degeneracy(int j, const LieElement& a);

// Basis of the Moore subgroup N L_t(S^1)_q: the full-support symbols of
// weight t on q letters, in symbol order. Empty for q > t.
std::vector<BasisSymbol> nondegenerate_basis(int t, int q, std::uint32_t p);

// Matrix of d_0 : N L_t(S^1)_q -> N L_t(S^1)_{q-1} over the nondegenerate
// bases; consecutive matrices compose to zero.
exactla::IntMatrix moore_boundary_matrix(int t, int q, std::uint32_t p);

// The weight-t component of the A(S^1) face/degeneracy of tensor_expand(b)
// equals the expansion of the Lie face/degeneracy, over every nondegenerate
// basis symbol with weight <= t_max, dimension <= q_max, and every j.
CheckCounts verify_graded_compatibility(int t_max, int q_max, std::uint32_t p);

} // namespace braidwork::lie
