#pragma once

// Arbitrary-precision integers. All exact linear algebra and series
// coefficients ultimately live in mpz; hot paths keep int64 with overflow
// checks and escalate when needed.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace braidwork {

using Int = mpz_class;

inline std::string to_string(const Int& a) { return a.get_str(); }

inline bool fits_int64(const Int& a) {
    return a.fits_slong_p(); // LP64: long == int64_t
}

inline std::int64_t to_int64(const Int& a) {
    if (!a.fits_slong_p()) throw std::overflow_error("Int does not fit in int64");
    return static_cast<std::int64_t>(a.get_si());
}

inline Int int_gcd(const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

// g = gcd(a, b) together with u, v such that u*a + v*b = g.
inline Int int_gcdext(const Int& a, const Int& b, Int& u, Int& v) {
    Int g;
    mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Int int_abs(const Int& a) {
    Int r;
    mpz_abs(r.get_mpz_t(), a.get_mpz_t());
    return r;
}

// Exact division; throws if b does not divide a.
inline Int int_divexact(const Int& a, const Int& b) {
    if (b == 0) throw std::domain_error("division by zero");
    Int q, r;
    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    if (r != 0) throw std::domain_error("int_divexact: inexact division");
    return q;
}

} // namespace braidwork
