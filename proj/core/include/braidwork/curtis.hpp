#pragma once

// The lower-central-series spectral sequence of F(S^1): E^1 entries from the
// Moore homology of N L(S^1), Moore representatives in the group, the
// power-series differential engine (P_delta sums of embedded representatives),
// page bookkeeping over finitely generated abelian groups, vanishing/exponent
// reports, and the assembly of pi_{*+1}(S^2) stem data against a configured
// reference table.

#include "braidwork/exactla.hpp"
#include "braidwork/ints.hpp"
#include "braidwork/lie.hpp"
#include "braidwork/words.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace braidwork::curtis {

struct Bidegree {
    int t = 1; // weight (filtration); t >= 1
    int n = 0; // homotopy degree; stem n reports pi_{n+1}(S^2)
    friend auto operator<=>(const Bidegree&, const Bidegree&) = default;
};

// Cached access to the Moore boundary machinery (shared across commands; safe
// for concurrent readers, deterministic regardless of call order).
const exactla::IntMatrix& boundary_matrix(int t, int q, std::uint32_t p);
const exactla::SnfResult& boundary_snf(int t, int q, std::uint32_t p);

struct E1Entry {
    Bidegree bidegree;
    exactla::AbelianGroup group;
    std::vector<lie::BasisSymbol> basis;      // nondegenerate basis of N L_t(S^1)_n
    std::vector<lie::LieElement> cycle_basis; // homology generator lifts (cycles)
    std::vector<Int> cycle_orders;            // parallel orders; 0 = free generator
    bool generators_omitted = false;          // true when lattice too large to lift
};

// E^1_{t,n} = pi_n(L_t(S^1)): homology of the nondegenerate complex at n.
// Over Z (p = 0) the group carries lifted homology generators when the
// matrices are small enough for dense transforms; over Z/p the restricted
// complex is used and the group is an F_p vector space (rank shortcut).
E1Entry e1_entry(int t, int n, std::uint32_t p);
exactla::AbelianGroup e1_group(int t, int n, std::uint32_t p); // no generator lift

// Homology dimension over F_q of the weight-t complex (integral complex
// reduced mod q when p = 0, restricted complex when p = q).
std::int64_t e1_modp_dim(int t, int n, std::uint32_t p, std::uint32_t q);

struct MooreRepresentative {
    lie::LieElement alpha; // the weight-t class the word represents
    words::Word word;      // in F(S^1)_n, n = alpha.n_vars; Moore, gamma-weight >= t
    int weight = 0;
};

// Product of group commutator words realizing a nondegenerate Lie element:
// bracket -> commutator, coefficient c -> c-th power, p^s-power symbol ->
// p^s-th word power. Verifies is_moore, gamma weight >= t, and
// q_t(e(word)) == tensor_expand(z) exactly; failure is a bug (logic_error).
MooreRepresentative lift_to_moore_representative(const lie::LieElement& z, int t);

// Sign twist tied to the P_delta engine: the coefficient of each basis
// symbol is scaled by (-1)^(t + 1 + #zero-letters). P^0 of a tensor
// expansion equals the expansion of the Moore boundary of the twisted
// element, so the engine lifts twist(alpha) in order that its sums S_j
// compute the differentials of alpha itself (and S_0 = boundary(alpha)).
lie::LieElement engine_twist(const lie::LieElement& a, int t);

enum class DiffStatus { hit, survives, undetermined };

struct DifferentialResult {
    DiffStatus status = DiffStatus::survives;
    int r = 0;                 // first page with nonzero value (hit); pages
                               // exhausted (survives); failing page (undetermined)
    lie::LieElement target;    // cycle representing d^r(alpha), dimension n-1
    int adjustments = 0;       // representative adjustments performed
    std::string obstruction;   // set when undetermined
    std::vector<std::string> certificate; // per-page evidence lines
};

// Differentials of a cycle alpha at (t, n) by the truncated power-series
// sums S_j = sum_{i<=j} P_delta^i(w_{t+j-i}) of a lifted representative.
// S_0 must vanish (cycle sanity); the first nonzero S_j whose class is not
// already a boundary yields d^j(alpha) = [-S_j]; boundary classes trigger a
// depth-1 representative adjustment (coefficients solved exactly) and the
// page continues. Requires r_max >= 1 and t + r_max <= D_budget.
DifferentialResult differential(const lie::LieElement& alpha, int t, int r_max, int D_budget);

struct D1Line {
    std::string generator;
    std::string thm_value;    // engine value of d^1 (class representative)
    std::string matrix_value; // -[q_{t+1}(e(d_0 w))] via the word-level face
    bool equal = false;
};

struct D1Report {
    Bidegree source;
    std::vector<D1Line> lines;
    bool ok() const {
        for (const auto& l : lines)
            if (!l.equal) return false;
        return true;
    }
};

// Two independent pipelines for d^1 on every homology generator at (t, n).
D1Report d1_crosscheck(int t, int n);

enum class DiffEvidence { trivial_source, trivial_target, coprime, connectivity, engine };
enum class RecordStatus { zero, nonzero, undetermined };

struct DifferentialRecord {
    Bidegree source;
    int r = 1;
    Bidegree target;
    DiffEvidence evidence = DiffEvidence::trivial_target;
    RecordStatus status = RecordStatus::zero;
    exactla::IntMatrix matrix; // induced map on presentation generators
    std::string note;
};

// d^r records for every nonzero source within caps. Targets beyond t_max
// are resolved by the connectivity bound E^1_{T,m} = 0 for T > 2^(m-1)
// where applicable; unresolved records carry status = undetermined with
// evidence = engine (none arise over Z within t <= 8).
std::vector<DifferentialRecord> differential_records(int t_max, int n_max, int r,
                                                     std::uint32_t p);

struct PresentedGroup {
    int gens = 0;
    exactla::IntMatrix rels; // gens rows; columns are relation vectors
    exactla::AbelianGroup group() const;
};

struct SpectralPage {
    int r = 1;
    int t_max = 0;
    int n_max = 0;
    std::uint32_t p = 0;
    std::map<std::pair<int, int>, PresentedGroup> entries; // key (t, n), nonzero only
    std::vector<DifferentialRecord> records;               // d^r at this page
    std::vector<Bidegree> undetermined;                    // sources with unresolved d^r
};

SpectralPage e1_page(int t_max, int n_max, std::uint32_t p);
// Consumes the d^r records, errors (runtime_error) on undetermined records
// unless assume_zero, and produces page r+1 with fresh records.
SpectralPage page_advance(const SpectralPage& page, bool assume_zero);

// Reference orders of pi_{n+1}(S^2) for stems 0..5 — external literature
// oracle shipped as configuration data, never derived from this build.
const std::vector<std::string>& reference_stem_orders();

struct StemRow {
    int n = 0;
    std::vector<std::pair<int, std::string>> graded_orders; // nontrivial (t, order)
    std::string total_order; // "1", "inf", exact order, or "N*k" when partial
    bool complete = false;   // caps cover the stem (t_max >= 2^(n-1))
    std::string reference;
    std::string match; // "yes" | "no" | "consistent (partial)" | "undetermined"
};

struct StemReport {
    int stem_max = 0;
    int t_max = 0;
    std::vector<StemRow> rows;
    bool ok() const {
        for (const auto& r : rows)
            if (r.match == "no" || r.match == "undetermined") return false;
        return true;
    }
};

// Surviving graded orders per stem n <= stem_max across t <= t_max, with
// in/out differentials resolved by records (and the connectivity bound);
// partial columns report an explicit interval, never a silent zero.
StemReport assemble_pi(int stem_max, int t_max, std::uint32_t p, bool assume_zero);

struct VanishingRow {
    int t = 0;
    int n = 0;
    std::string group;
    bool allowed_nonzero = false; // t in {1, 2, 2p^s}, plus p^s over Z/p
    bool ok = true;
};

struct VanishingReport {
    std::vector<VanishingRow> rows;
    std::vector<std::string> flagged; // nonzero differentials off the 2p^u - 2p^s pattern
    bool ok() const {
        for (const auto& r : rows)
            if (!r.ok) return false;
        return flagged.empty();
    }
};

// Whether t = 2 p^s for a prime p and s >= 1 (outputs p, s when so).
bool is_twice_prime_power(int t, int* p_out = nullptr, int* s_out = nullptr);

// Tabulates E^1_{t,n}, asserts vanishing off {1} and {2p^s}, asserts every
// invariant factor of E^1_{2p^s, n} equals p, and flags nonzero differential
// records whose page is not 2p^u - 2p^s.
VanishingReport vanishing_report(int t_max, int n_max, std::uint32_t p);

} // namespace braidwork::curtis
