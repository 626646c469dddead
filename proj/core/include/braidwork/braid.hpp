#pragma once

// Braid-group action on F[S^1]. In dimension n+1 the generators
// sigma_{-1}, sigma_0, ..., sigma_{n-1} act on F(y_0..y_n) by
//   sigma_k:  y_k -> y_{k+1},  y_{k+1} -> y_{k+1}^{-1} y_k y_{k+1}   (k >= 0)
//   sigma_{-1}: y_0 -> y_0^{-1} y_n^{-1} ... y_1^{-1}
// fixing the remaining generators. These generate an action of the braid
// group B_{n+2} compatible with faces and degeneracies (exchange rules
// verified by verify_exchange_rules).

#include "braidwork/milnor.hpp"
#include "braidwork/words.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace braidwork::braid {

using milnor::SimplicialElement;
using words::GenMap;
using words::Word;

struct BraidLetter {
    int k = 0;
    int sign = +1; // +1 or -1
    friend bool operator==(const BraidLetter&, const BraidLetter&) = default;
};

// A word in the braid generators acting on F[S^1]_{n+1}; letters admit
// -1 <= k <= n-1. act() applies the rightmost letter first, so that
// act(concat(b1, b2), x) = act(b1, act(b2, x)).
struct BraidWord {
    int n = 0;
    std::vector<BraidLetter> letters;
};

GenMap sigma_genmap(int k, int n);     // on n+1 generators, -1 <= k <= n-1
GenMap sigma_inv_genmap(int k, int n); // exact inverse automorphism
GenMap letter_genmap(const BraidLetter& l, int n);
GenMap braid_genmap(const BraidWord& b);

Word act(const BraidWord& b, const Word& w);
// Requires e.dim == b.n + 1.
SimplicialElement act(const BraidWord& b, const SimplicialElement& e);

BraidWord braid_inverse(const BraidWord& b);
BraidWord braid_concat(const BraidWord& a, const BraidWord& b);

// Braid relations (adjacent/commuting/inverse) at level n; nullopt = all hold.
std::optional<std::string> verify_braid_relations(int n);
// Exchange rules between faces/degeneracies and sigma_k at level n
// (maps out of dimension n+1), over every admissible (j, k).
std::optional<std::string> verify_exchange_rules(int n);

// --- Homotopy certificates -------------------------------------------------
// A Homotopy holds Moore witness u with d_0(u) = a * b^{-1}, certifying that
// a and b become equal in pi_*(F[S^1]). Combinators keep that invariant.

struct Homotopy {
    SimplicialElement a, b; // dim q
    SimplicialElement u;    // dim q+1, Moore
};

Homotopy hom_trans(const Homotopy& x, const Homotopy& y); // a~b, b~c => a~c
Homotopy hom_sym(const Homotopy& h);                      // a~b => b~a
Homotopy hom_inv(const Homotopy& h);                      // a~b => a^{-1}~b^{-1}
Homotopy hom_mul(const Homotopy& x, const Homotopy& y);   // a~b, c~d => ac~bd
// a~b => sigma_k^{sign}(a) ~ sigma_k^{sign}(b); admissible -1 <= k <= dim-2.
Homotopy hom_transport(int k, int sign, const Homotopy& h);

// sigma_{k+1}(s_{k+1}(x)) for a cycle x: the element whose faces are all
// trivial except d_{k+1} = sigma_k(x) and d_{k+3} = x.
SimplicialElement twist_witness(int k, const SimplicialElement& x);
// Certificate that sigma_k(x) ~ x^{-1} for a cycle x, -1 <= k <= dim-2.
std::optional<Homotopy> twist_homotopy(int k, const SimplicialElement& x);
// Certificate that sigma_k^{2 sign}(z) ~ z for a cycle z.
std::optional<Homotopy> square_homotopy(int k, int sign, const SimplicialElement& z);

// Generators A_{ij} = (sigma_{j-1}...sigma_{i+1}) sigma_i^2 (...)^{-1} of the
// pure braid subgroup, -1 <= i < j <= n-1.
std::vector<BraidWord> pure_braid_generators(int n);

// Parse b as a product of conjugates g sigma_k^{+-2} g^{-1} (greedy
// left-to-right scan for adjacent equal letters) and build a composite
// certificate that act(b, x) ~ x for a cycle x.
struct FixedCheckResult {
    enum class Status { valid, invalid, unsupported } status = Status::unsupported;
    std::string detail;
    std::optional<Homotopy> certificate;
};

FixedCheckResult homotopy_fixed_check(const BraidWord& b, const SimplicialElement& x);

// Seeded scan confirming the cycle criterion in a fixed dimension: an element
// is a cycle iff both it and its sigma_{-1}-image are Moore. Samples cycle raw
// words, Moore normalizations, and conjugated commutator cycles so both truth
// values occur.
struct CycleCriterionReport {
    std::int64_t samples = 0;
    std::int64_t cycles_seen = 0;
    std::int64_t moore_seen = 0;
    std::int64_t mismatches = 0;
    bool ok() const { return samples > 0 && cycles_seen > 0 && mismatches == 0; }
};

CycleCriterionReport cycle_criterion_scan(int dim, std::int64_t samples, std::uint64_t seed);

// Scan all reduced words of length <= max_len in F(y_0..y_n); count words
// fixed by every sigma_j^{kpow} (0 <= j <= n-1) and collect any fixed word
// that is not a power of y_0...y_n.
struct FixedScanReport {
    std::int64_t words_scanned = 0;
    std::int64_t fixed_count = 0;
    std::vector<Word> violations;
};

FixedScanReport brute_force_fixed_scan(int n, int kpow, int max_len);

} // namespace braidwork::braid
