#pragma once

// Truncated noncommutative power series A(S^1) over Z or Z/p: ring
// arithmetic, the simplicial structure maps, the braid action, the word
// representation e (y_j -> 1 + x_j), the signed-reversal map chi, the
// twisted face dbar0, the Delta/delta data with its formal P-operations,
// graded components, and filtration weights.
//
// A(S^1)_q is the algebra of series in noncommuting variables x_0..x_{q-1},
// truncated beyond a fixed total degree. Operations require equal
// (n_vars, max_deg, modulus) on both operands; nothing re-truncates silently.

#include "braidwork/ints.hpp"
#include "braidwork/words.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace braidwork {
namespace braid {
struct BraidWord;
}

namespace magnus {

using words::Word;

// ---------------------------------------------------------------- monomials
//
// A monomial is a word of up to 14 letters over x_0..x_15, packed into a
// uint64: bits 63..60 hold the length, letter i sits at bits (59-4i)..(56-4i).
// The packed integer order is exactly (degree, then lexicographic), which
// keeps std::map iteration in canonical print order.

inline constexpr int kMaxMonoLen = 14;
inline constexpr int kMaxVars = 16;

inline std::uint64_t mono_one() { return 0; }

inline int mono_length(std::uint64_t m) { return static_cast<int>(m >> 60); }

inline int mono_letter(std::uint64_t m, int i) {
    return static_cast<int>((m >> (56 - 4 * i)) & 0xf);
}

std::uint64_t mono_from_letters(const std::vector<int>& letters);
std::vector<int> mono_letters(std::uint64_t m);
std::uint64_t mono_concat(std::uint64_t a, std::uint64_t b); // throws past kMaxMonoLen
std::uint64_t mono_reverse(std::uint64_t m);
// Drop the last letter (for recursions over m = m' * x_last).
std::uint64_t mono_prefix(std::uint64_t m);
// True iff every letter 0..q-1 occurs at least once.
bool mono_uses_all(std::uint64_t m, int q);
std::string mono_to_string(std::uint64_t m); // "x0*x1*x0"; "" for the empty monomial

// ------------------------------------------------------------------- series

struct Series {
    int n_vars = 0;
    int max_deg = 0;   // truncation degree, inclusive
    std::uint32_t p = 0; // 0 = Z; else Z/p with canonical representatives 0..p-1
    std::map<std::uint64_t, Int> terms; // monomial -> nonzero coefficient

    bool is_zero_series() const { return terms.empty(); }
    friend bool operator==(const Series&, const Series&) = default;
};

Series series_zero(int n_vars, int max_deg, std::uint32_t p);
Series series_const(int n_vars, int max_deg, std::uint32_t p, const Int& c);
Series series_one(int n_vars, int max_deg, std::uint32_t p);
Series series_var(int n_vars, int max_deg, std::uint32_t p, int j);

// Accumulate c * m into s (normalizing mod p, erasing zeros).
void add_term(Series& s, std::uint64_t m, const Int& c);

Series add(const Series& a, const Series& b);
Series sub(const Series& a, const Series& b);
Series neg(const Series& a);
Series mul(const Series& a, const Series& b);
Series scale(const Series& a, const Int& c);
Series pow_series(const Series& a, long e); // e >= 0

// (1 + f)^{-1} for f with zero constant term; includes the leading 1.
Series inv_one_plus(const Series& f);

// Degree-i homogeneous component.
Series q_component(int i, const Series& f);
// Least degree >= 1 carrying a nonzero term; -1 if none within truncation.
int low_degree(const Series& f);

// Grammar: "1 + x0*x1 - x1*x0"; zero series is "0"; terms in (degree, lex)
// order; coefficient magnitudes printed with '*' only when != 1; repeated
// letters written out. parse_series round-trips format_series exactly.
std::string format_series(const Series& f);
Series parse_series(const std::string& text, int n_vars, int max_deg, std::uint32_t p);

// Apply the (anti-)homomorphism sending x_j to images[j]; images must agree
// in (n_vars, max_deg, p) among themselves (they live in the target algebra).
Series substitute(const Series& f, const std::vector<Series>& images, bool anti);

// ------------------------------------------------- simplicial structure on A
//
// Faces d_j : A_q -> A_{q-1} (0 <= j <= q) and degeneracies
// s_j : A_q -> A_{q+1} (0 <= j <= q) are algebra homomorphisms with
//   d_j x_k = x_{k-1} (j <= k; d_0 x_0 = x_{-1}), 0 (j = k+1), x_k (j > k+1)
//   s_j x_k = x_{k+1} (j <= k), x_k + x_{k+1} + x_k x_{k+1} (j = k+1),
//             x_k (j > k+1)
// where x_{-1} in m variables is (1+x_{m-1})^{-1} ... (1+x_0)^{-1} - 1.

Series x_neg1(int m, int max_deg, std::uint32_t p);
std::vector<Series> face_images(int q, int j, int max_deg, std::uint32_t p);
std::vector<Series> degeneracy_images(int q, int j, int max_deg, std::uint32_t p);
Series face_series(int j, const Series& f);
Series degeneracy_series(int j, const Series& f);

// ------------------------------------------------------------- braid action
//
// sigma_k on A_{n+1} (variables x_0..x_n), -1 <= k <= n-1, sign = +-1:
//   sigma_k(x_k) = x_{k+1},
//   sigma_k(x_{k+1}) = (1+x_{k+1})^{-1} (1+x_k) (1+x_{k+1}) - 1,
//   sigma_{-1}(x_0) = (1+x_0)^{-1} (1+x_n)^{-1} ... (1+x_1)^{-1} - 1,
// fixing all other variables; inverses mirror the word-level action.

std::vector<Series> sigma_images(int n, int k, int sign, int max_deg, std::uint32_t p);
Series act_series(const braid::BraidWord& b, const Series& f);

// -------------------------------------------------------------- embedding e

// e(y_j) = 1 + x_j, e(y_j^{-1}) = (1 + x_j)^{-1}, multiplicative, truncated.
Series magnus_embed(const Word& w, int n_vars, int max_deg, std::uint32_t p);

struct GammaWeight {
    enum class Kind { identity, exceeded, finite } kind = Kind::identity;
    int value = 0; // meaningful when kind == finite
    friend bool operator==(const GammaWeight&, const GammaWeight&) = default;
};

// Least t >= 1 with q_t(e(w)) != 0, searched up to degree cap.
GammaWeight gamma_weight(const Word& w, int n_vars, int cap, std::uint32_t p);

// ----------------------------------------------------------- chi and dbar0

// Linear map reversing each monomial and scaling by (-1)^degree; chi^2 = id.
Series chi(const Series& f);

// Algebra anti-homomorphism A_q -> A_{q-1} with dbar0(x_j) = x_{j-1} (j > 0)
// and dbar0(x_0) = (1+x_0)(1+x_1)...(1+x_{m-1}) - 1, m = q-1.
Series dbar0(const Series& f);

// ------------------------------------------------------ Delta / P operations

// Data of the twisted-face decomposition for a target algebra on m variables:
// Delta_{s-1} = sum over 0 <= l_1 < ... < l_s <= m-1 of x_{l_1}...x_{l_s}.
struct DeltaData {
    int m = 0;
    int max_deg = 0;
    std::uint32_t p = 0;
    std::vector<Series> delta; // delta[i] = Delta_i, 0 <= i <= m (zero past m-1)
};

DeltaData build_delta_data(int m, int max_deg, std::uint32_t p);

// Formal operations P^t : A_q -> A_{q-1} raising degree by exactly t, defined
// on letters by P^0(x_j) = x_{j-1} (j > 0), P^0(x_0) = Delta_0,
// P^t(x_0) = Delta_t, P^t(x_j) = 0 (j > 0, t > 0), and extended to monomials
// by the reversed-order product rule P^t(m' x_l) = sum_{a+b=t} P^a(x_l) P^b(m').
// The sum over all t reassembles dbar0.
class PDelta {
  public:
    PDelta(int source_vars, int max_deg, std::uint32_t p);

    int source_vars() const { return q_; }
    const Series& delta(int i) const; // Delta_i in the target algebra
    Series apply(int t, const Series& f) const;

  private:
    Series mono_apply(int t, std::uint64_t m) const;
    Series letter_apply(int t, int letter) const;

    int q_;
    DeltaData dd_;
    mutable std::map<std::pair<std::uint64_t, int>, Series> memo_;
};

// ------------------------------------------------------------ verifications

struct CheckCounts {
    int checks = 0;
    int failures = 0;
    bool ok() const { return failures == 0 && checks > 0; }
};

// Simplicial identities (d_i d_j, s_i s_j, d_i s_j) as equalities of
// composite substitutions on every generator, for all dimensions <= q_max.
CheckCounts verify_ring_simplicial_identities(int q_max, int max_deg, std::uint32_t p);

// Braid relations (inverse, adjacent, far-commutation) as composite
// substitution equalities on generators, dims n+1 <= n_max+1.
CheckCounts verify_braid_ring_relations(int n_max, int max_deg, std::uint32_t p);

// e is simplicial and braided: e(d_j w) = d_j e(w), e(s_j w) = s_j e(w),
// e(sigma w) = sigma e(w) on seeded random words.
CheckCounts verify_embed_naturality(int q_max, int max_deg, std::uint32_t p, int samples,
                                    std::uint64_t seed);

// dbar0(f) = sum_{i=0..max_deg} P^i(f) on seeded random series in q variables.
CheckCounts verify_dbar0_decomposition(int q, int max_deg, std::uint32_t p, int samples,
                                       std::uint64_t seed);

// Word-level cycle/Moore conditions match their series counterparts on seeded
// random elements (raw, normalized, and cycle samples) of the given dimension.
CheckCounts verify_cycle_series_equivalence(int dim, int len_cap, int max_deg, int samples,
                                            std::uint64_t seed);

// Every sampled nontrivial word has finite filtration weight at cap = its
// length (embedding faithfulness probe), and weight([u,v]) >= wt(u) + wt(v).
CheckCounts verify_gamma_probes(int dim_max, int len_max, int samples, std::uint64_t seed);

// Exact kernel of the stacked faces (d_1..d_q) on the degree-d monomial
// basis of A_q equals the span of the full-support monomials, for d <= max_deg.
struct NondegDegreeRow {
    int degree = 0;
    int kernel_dim = 0;
    int nondeg_count = 0;
    bool ok = false;
};

struct NondegReport {
    int q = 0;
    int max_deg = 0;
    std::vector<NondegDegreeRow> rows;
    bool ok() const {
        if (rows.empty()) return false;
        for (const auto& r : rows)
            if (!r.ok) return false;
        return true;
    }
};

NondegReport nondegenerate_moore_check(int q, int max_deg);

} // namespace magnus
} // namespace braidwork
