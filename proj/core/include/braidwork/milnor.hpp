#pragma once

// Milnor's free simplicial group F[S^1]: dimension q carries the free group
// F(y_0, ..., y_{q-1}); its geometric realization has the homotopy type of
// Omega S^2. Faces/degeneracies act on generators by the closed formulas
//   d_j y_k = y_{k-1} (j <= k),  1 (j = k+1),  y_k (j > k+1)
//   s_j y_k = y_{k+1} (j <= k),  y_k y_{k+1} (j = k+1),  y_k (j > k+1)
// where y_{-1} denotes (y_0 ... y_{m-1})^{-1} in the target group.

#include "braidwork/words.hpp"

#include <optional>
#include <string>

namespace braidwork::milnor {

using words::GenMap;
using words::Word;

// An element of F[S^1]_dim; w uses generators y_0..y_{dim-1}.
struct SimplicialElement {
    int dim = 0;
    Word w;
    friend bool operator==(const SimplicialElement&, const SimplicialElement&) = default;
};

// (y_0 ... y_{m-1})^{-1} as a word on m generators (identity for m = 0).
Word y_neg1(int m);

// Face d_j: dim q -> q-1 (0 <= j <= q, q >= 1) as a generator map.
GenMap face_genmap(int q, int j);
// Degeneracy s_j: dim q -> q+1 (0 <= j <= q).
GenMap degeneracy_genmap(int q, int j);

SimplicialElement face(int j, const SimplicialElement& e);
SimplicialElement degeneracy(int j, const SimplicialElement& e);

SimplicialElement mul(const SimplicialElement& a, const SimplicialElement& b);
SimplicialElement inverse(const SimplicialElement& a);

// Moore complex N_q = {x : d_j x = 1 for 1 <= j <= q}; cycles also kill d_0.
bool is_moore(const SimplicialElement& e);
bool is_cycle(const SimplicialElement& e);

// Multiply by degeneracy corrections s_{j-1}(d_j .)^{-1}, j descending from
// q to 1; the result is Moore and represents the same class.
SimplicialElement moore_normalize(const SimplicialElement& e);

// Simplicial-subgroup filtration R_n: in dimension dim <= n everything
// qualifies; for dim > n membership means every composite of (dim - n)
// faces is trivial. Memoized; requires dim - n <= 6.
bool in_R(int n, const SimplicialElement& e);

// Check all simplicial identities between generator maps up to dimension
// q_max; returns a human-readable failure or nullopt on success.
std::optional<std::string> verify_simplicial_identities(int q_max);

// A homotopy certificate: a witness u one dimension up whose Moore
// normalization has d_0 equal to x y^{-1}, proving x ~ y in pi_*.
struct CertificateResult {
    bool valid = false;
    std::string reason;
};

CertificateResult certify_homotopy(const SimplicialElement& x, const SimplicialElement& y,
                                   const SimplicialElement& witness);

} // namespace braidwork::milnor
