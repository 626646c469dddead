#pragma once

// Exact integer linear algebra: sparse matrices over Z, Smith/Hermite normal
// forms, integer solves, kernels, mod-p ranks, and finitely generated abelian
// groups. Everything is deterministic; elimination pivots are chosen by
// minimal absolute value with a Markowitz (fill-in) tie-break, preferring
// unit pivots.

#include "braidwork/ints.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace braidwork::exactla {

struct IntMatrix {
    int rows = 0;
    int cols = 0;
    // Row-major sparse storage; each row sorted by column, values nonzero.
    std::vector<std::vector<std::pair<int, Int>>> row;

    static IntMatrix zero(int r, int c);
    static IntMatrix identity(int n);
    static IntMatrix from_dense(const std::vector<std::vector<long long>>& d);

    // Build helper: add v to entry (i, j).
    void add(int i, int j, const Int& v);
    Int get(int i, int j) const;
    std::int64_t nnz() const;

    friend bool operator==(const IntMatrix&, const IntMatrix&) = default;
};

IntMatrix transpose(const IntMatrix& a);
IntMatrix matmul(const IntMatrix& a, const IntMatrix& b);
bool is_zero(const IntMatrix& a);
std::vector<Int> matvec(const IntMatrix& a, const std::vector<Int>& x);

struct SnfOptions {
    bool want_transforms = false;    // dense path; asserts modest dimensions
    std::int64_t budget_ms = 0;      // 0 = unlimited; else abort politely
};

struct SnfResult {
    std::vector<Int> diag; // positive invariant factors d_1 | d_2 | ...
    int rank = 0;
    bool completed = true; // false iff the time budget ran out
    std::optional<IntMatrix> U, V;           // U*A*V = diag(diag)
    std::optional<IntMatrix> U_inv, V_inv;   // exact inverses of the above
};

SnfResult smith_normal_form(const IntMatrix& a, const SnfOptions& opts = {});

// Rank of a mod p (p prime, p < 2^31). p = 2 uses packed bit rows.
std::int64_t modp_rank(const IntMatrix& a, std::uint32_t p);

// Hermite-based exact solve of A x = b over Z.
std::optional<std::vector<Int>> solve_integer(const IntMatrix& a, const std::vector<Int>& b);

// Columns form a basis of { x : A x = 0 }; the lattice is saturated.
IntMatrix kernel_basis(const IntMatrix& a);

struct AbelianGroup {
    std::int64_t free_rank = 0;
    std::vector<Int> torsion; // invariant factors > 1, ascending divisibility

    bool trivial() const { return free_rank == 0 && torsion.empty(); }
    // Order as a string: "1", "inf", or the product of torsion factors.
    std::string order_string() const;
    std::string to_string() const; // e.g. "0", "Z", "Z^2 + Z/2 + Z/4"
    friend bool operator==(const AbelianGroup&, const AbelianGroup&) = default;
};

// Homology ker B / im A of Z^a -A-> Z^b -B-> Z^c; requires B*A = 0 (checked
// exactly for small inputs, by seeded random probes for large ones).
AbelianGroup homology_at(const IntMatrix& a, const IntMatrix& b);

// Same computation when the SNFs are already known; middle_dim is b.
AbelianGroup homology_from_snf(int middle_dim, const SnfResult& snf_in, const SnfResult& snf_out);

// Presentation of ker(outer) / im(inner) with explicit generators: returns
// kernel-coordinate columns (as vectors in the ambient Z^b) paired with
// orders (0 = infinite). Dense transforms inside: small matrices only.
struct QuotientPresentation {
    std::vector<std::vector<Int>> gens; // each of length b
    std::vector<Int> orders;            // 0 = free generator, else order > 1
};

QuotientPresentation quotient_presentation(const IntMatrix& inner, const IntMatrix& outer);

} // namespace braidwork::exactla
