#include "braidwork/milnor.hpp"

#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace braidwork::milnor {

using words::apply_map;
using words::word_gen;
using words::word_identity;

Word y_neg1(int m) {
    Word p;
    for (int i = 0; i < m; ++i) p = words::mul(p, word_gen(i));
    return words::inverse(p);
}

GenMap face_genmap(int q, int j) {
    if (q < 1 || j < 0 || j > q) throw std::invalid_argument("face_genmap: bad (q, j)");
    GenMap f;
    f.src_gens = q;
    f.dst_gens = q - 1;
    f.img.reserve(q);
    for (int k = 0; k < q; ++k) {
        if (j <= k) {
            f.img.push_back(k == 0 ? y_neg1(q - 1) : word_gen(k - 1));
        } else if (j == k + 1) {
            f.img.push_back(word_identity());
        } else {
            f.img.push_back(word_gen(k));
        }
    }
    return f;
}

GenMap degeneracy_genmap(int q, int j) {
    if (q < 0 || j < 0 || j > q) throw std::invalid_argument("degeneracy_genmap: bad (q, j)");
    GenMap f;
    f.src_gens = q;
    f.dst_gens = q + 1;
    f.img.reserve(q);
    for (int k = 0; k < q; ++k) {
        if (j <= k) {
            f.img.push_back(word_gen(k + 1));
        } else if (j == k + 1) {
            f.img.push_back(words::mul(word_gen(k), word_gen(k + 1)));
        } else {
            f.img.push_back(word_gen(k));
        }
    }
    return f;
}

SimplicialElement face(int j, const SimplicialElement& e) {
    return SimplicialElement{e.dim - 1, apply_map(face_genmap(e.dim, j), e.w)};
}

SimplicialElement degeneracy(int j, const SimplicialElement& e) {
    return SimplicialElement{e.dim + 1, apply_map(degeneracy_genmap(e.dim, j), e.w)};
}

SimplicialElement mul(const SimplicialElement& a, const SimplicialElement& b) {
    if (a.dim != b.dim) throw std::invalid_argument("mul: dimension mismatch");
    return SimplicialElement{a.dim, words::mul(a.w, b.w)};
}

SimplicialElement inverse(const SimplicialElement& a) {
    return SimplicialElement{a.dim, words::inverse(a.w)};
}

bool is_moore(const SimplicialElement& e) {
    for (int j = 1; j <= e.dim; ++j)
        if (!face(j, e).w.is_identity()) return false;
    return true;
}

bool is_cycle(const SimplicialElement& e) {
    if (!face(0, e).w.is_identity()) return false;
    return is_moore(e);
}

SimplicialElement moore_normalize(const SimplicialElement& e) {
    // Kill faces from the top down: the correction s_{j-1}(d_j u)^{-1}
    // cancels d_j and, because d_{i-1} d_j = d_j d_i for i > j, leaves
    // already-trivial higher faces trivial.
    SimplicialElement u = e;
    for (int j = u.dim; j >= 1; --j) {
        SimplicialElement c = face(j, u);
        if (c.w.is_identity()) continue;
        u = mul(u, inverse(degeneracy(j - 1, c)));
    }
    return u;
}

namespace {

struct RKey {
    int n;
    int dim;
    std::uint64_t h;
    bool operator==(const RKey&) const = default;
};

struct RKeyHash {
    std::size_t operator()(const RKey& k) const {
        return std::hash<std::uint64_t>()(k.h ^ (static_cast<std::uint64_t>(k.n) << 48) ^
                                          (static_cast<std::uint64_t>(k.dim) << 32));
    }
};

} // namespace

bool in_R(int n, const SimplicialElement& e) {
    if (e.dim <= n) return true;
    if (e.dim - n > 6) throw std::invalid_argument("in_R: dim - n > 6 not supported");
    static std::unordered_map<RKey, bool, RKeyHash> memo;
    static std::mutex memo_mutex;
    RKey key{n, e.dim, words::word_hash(e.w)};
    {
        std::lock_guard<std::mutex> lock(memo_mutex);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
    }
    bool ok = true;
    if (e.dim == n + 1) {
        // Base: single faces must all vanish.
        for (int j = 0; j <= e.dim && ok; ++j) ok = face(j, e).w.is_identity();
    } else {
        for (int j = 0; j <= e.dim && ok; ++j) ok = in_R(n, face(j, e));
    }
    std::lock_guard<std::mutex> lock(memo_mutex);
    memo.emplace(key, ok);
    return ok;
}

std::optional<std::string> verify_simplicial_identities(int q_max) {
    using words::compose;
    for (int q = 0; q <= q_max; ++q) {
        // d_i d_j = d_{j-1} d_i for i < j (maps from dim q, q >= 2).
        if (q >= 2) {
            for (int j = 1; j <= q; ++j)
                for (int i = 0; i < j; ++i) {
                    auto lhs = compose(face_genmap(q - 1, i), face_genmap(q, j));
                    auto rhs = compose(face_genmap(q - 1, j - 1), face_genmap(q, i));
                    if (!(lhs == rhs))
                        return "d_" + std::to_string(i) + " d_" + std::to_string(j) +
                               " != d_" + std::to_string(j - 1) + " d_" + std::to_string(i) +
                               " at q=" + std::to_string(q);
                }
        }
        // s_i s_j = s_{j+1} s_i for i <= j.
        for (int j = 0; j <= q; ++j)
            for (int i = 0; i <= j; ++i) {
                auto lhs = compose(degeneracy_genmap(q + 1, i), degeneracy_genmap(q, j));
                auto rhs = compose(degeneracy_genmap(q + 1, j + 1), degeneracy_genmap(q, i));
                if (!(lhs == rhs))
                    return "s_" + std::to_string(i) + " s_" + std::to_string(j) +
                           " != s_" + std::to_string(j + 1) + " s_" + std::to_string(i) +
                           " at q=" + std::to_string(q);
            }
        // d_i s_j relations (maps from dim q).
        for (int j = 0; j <= q; ++j)
            for (int i = 0; i <= q + 1; ++i) {
                auto lhs = compose(face_genmap(q + 1, i), degeneracy_genmap(q, j));
                words::GenMap rhs;
                if (i < j) {
                    rhs = compose(degeneracy_genmap(q - 1, j - 1), face_genmap(q, i));
                } else if (i == j || i == j + 1) {
                    rhs = words::identity_map(q);
                } else {
                    rhs = compose(degeneracy_genmap(q - 1, j), face_genmap(q, i - 1));
                }
                if (!(lhs == rhs))
                    return "d_" + std::to_string(i) + " s_" + std::to_string(j) +
                           " mismatch at q=" + std::to_string(q);
            }
    }
    return std::nullopt;
}

CertificateResult certify_homotopy(const SimplicialElement& x, const SimplicialElement& y,
                                   const SimplicialElement& witness) {
    if (x.dim != y.dim) return {false, "operands in different dimensions"};
    if (witness.dim != x.dim + 1) return {false, "witness must live one dimension up"};
    SimplicialElement u = moore_normalize(witness);
    Word boundary = face(0, u).w;
    Word target = words::mul(x.w, words::inverse(y.w));
    if (boundary == target) return {true, ""};
    return {false, "normalized witness boundary " + words::format_word(boundary) +
                       " != x y^-1 = " + words::format_word(target)};
}

} // namespace braidwork::milnor
