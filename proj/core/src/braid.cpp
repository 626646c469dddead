#include "braidwork/braid.hpp"

#include "braidwork/rng.hpp"

#include <stdexcept>

namespace braidwork::braid {

using milnor::certify_homotopy;
using milnor::degeneracy;
using milnor::face;
using milnor::is_cycle;
using milnor::is_moore;
using milnor::moore_normalize;
using words::apply_map;
using words::compose;
using words::identity_map;
using words::word_gen;
using words::word_identity;

GenMap sigma_genmap(int k, int n) {
    if (n < 0 || k < -1 || k > n - 1) throw std::invalid_argument("sigma_genmap: bad (k, n)");
    GenMap f = identity_map(n + 1);
    if (k == -1) {
        // y_0 -> y_0^{-1} y_n^{-1} ... y_1^{-1}
        Word img = words::inverse(word_gen(0));
        for (int i = n; i >= 1; --i) img = words::mul(img, words::inverse(word_gen(i)));
        f.img[0] = img;
    } else {
        f.img[k] = word_gen(k + 1);
        f.img[k + 1] = words::mul(words::mul(words::inverse(word_gen(k + 1)), word_gen(k)),
                                  word_gen(k + 1));
    }
    return f;
}

GenMap sigma_inv_genmap(int k, int n) {
    if (n < 0 || k < -1 || k > n - 1) throw std::invalid_argument("sigma_inv_genmap: bad (k, n)");
    GenMap f = identity_map(n + 1);
    if (k == -1) {
        // y_0 -> (y_0 y_1 ... y_n)^{-1}
        f.img[0] = milnor::y_neg1(n + 1);
    } else {
        f.img[k] = words::mul(words::mul(word_gen(k), word_gen(k + 1)),
                              words::inverse(word_gen(k)));
        f.img[k + 1] = word_gen(k);
    }
    return f;
}

GenMap letter_genmap(const BraidLetter& l, int n) {
    return l.sign > 0 ? sigma_genmap(l.k, n) : sigma_inv_genmap(l.k, n);
}

GenMap braid_genmap(const BraidWord& b) {
    GenMap f = identity_map(b.n + 1);
    // act applies the rightmost letter first: compose left-to-right.
    for (const auto& l : b.letters) f = compose(f, letter_genmap(l, b.n));
    return f;
}

Word act(const BraidWord& b, const Word& w) {
    Word r = w;
    for (auto it = b.letters.rbegin(); it != b.letters.rend(); ++it)
        r = apply_map(letter_genmap(*it, b.n), r);
    return r;
}

SimplicialElement act(const BraidWord& b, const SimplicialElement& e) {
    if (e.dim != b.n + 1) throw std::invalid_argument("act: dimension mismatch");
    return SimplicialElement{e.dim, act(b, e.w)};
}

BraidWord braid_inverse(const BraidWord& b) {
    BraidWord r{b.n, {}};
    r.letters.reserve(b.letters.size());
    for (auto it = b.letters.rbegin(); it != b.letters.rend(); ++it)
        r.letters.push_back(BraidLetter{it->k, -it->sign});
    return r;
}

BraidWord braid_concat(const BraidWord& a, const BraidWord& b) {
    if (a.n != b.n) throw std::invalid_argument("braid_concat: level mismatch");
    BraidWord r = a;
    r.letters.insert(r.letters.end(), b.letters.begin(), b.letters.end());
    return r;
}

std::optional<std::string> verify_braid_relations(int n) {
    auto id = identity_map(n + 1);
    for (int i = -1; i <= n - 1; ++i) {
        if (!(compose(sigma_genmap(i, n), sigma_inv_genmap(i, n)) == id) ||
            !(compose(sigma_inv_genmap(i, n), sigma_genmap(i, n)) == id))
            return "sigma_" + std::to_string(i) + " inverse fails at n=" + std::to_string(n);
    }
    for (int i = -1; i <= n - 2; ++i) {
        auto a = sigma_genmap(i, n), b = sigma_genmap(i + 1, n);
        auto lhs = compose(a, compose(b, a));
        auto rhs = compose(b, compose(a, b));
        if (!(lhs == rhs))
            return "braid relation fails for (" + std::to_string(i) + "," +
                   std::to_string(i + 1) + ") at n=" + std::to_string(n);
    }
    for (int i = -1; i <= n - 1; ++i)
        for (int j = i + 2; j <= n - 1; ++j) {
            auto a = sigma_genmap(i, n), b = sigma_genmap(j, n);
            if (!(compose(a, b) == compose(b, a)))
                return "far commutation fails for (" + std::to_string(i) + "," +
                       std::to_string(j) + ") at n=" + std::to_string(n);
        }
    return std::nullopt;
}

std::optional<std::string> verify_exchange_rules(int n) {
    using milnor::degeneracy_genmap;
    using milnor::face_genmap;
    const int q = n + 1; // maps act out of dimension q
    for (int k = -1; k <= n - 1; ++k) {
        auto sig = sigma_genmap(k, n);
        // Faces d_j: dim q -> q-1.
        for (int j = 0; j <= q; ++j) {
            auto lhs = compose(face_genmap(q, j), sig);
            GenMap rhs;
            if (j <= k) {
                rhs = compose(sigma_genmap(k - 1, n - 1), face_genmap(q, j));
            } else if (j == k + 1) {
                rhs = face_genmap(q, k + 2);
            } else if (j == k + 2) {
                rhs = face_genmap(q, k + 1);
            } else {
                if (k > n - 2) continue; // sigma_k undefined one level down
                rhs = compose(sigma_genmap(k, n - 1), face_genmap(q, j));
            }
            if (!(lhs == rhs))
                return "face exchange fails at n=" + std::to_string(n) +
                       " j=" + std::to_string(j) + " k=" + std::to_string(k);
        }
        // Degeneracies s_j: dim q -> q+1.
        for (int j = 0; j <= q; ++j) {
            auto lhs = compose(degeneracy_genmap(q, j), sig);
            GenMap rhs;
            if (j <= k) {
                rhs = compose(sigma_genmap(k + 1, n + 1), degeneracy_genmap(q, j));
            } else if (j == k + 1) {
                rhs = compose(sigma_genmap(k + 1, n + 1),
                              compose(sigma_genmap(k, n + 1), degeneracy_genmap(q, k + 2)));
            } else if (j == k + 2) {
                rhs = compose(sigma_genmap(k, n + 1),
                              compose(sigma_genmap(k + 1, n + 1), degeneracy_genmap(q, k + 1)));
            } else {
                rhs = compose(sigma_genmap(k, n + 1), degeneracy_genmap(q, j));
            }
            if (!(lhs == rhs))
                return "degeneracy exchange fails at n=" + std::to_string(n) +
                       " j=" + std::to_string(j) + " k=" + std::to_string(k);
        }
    }
    return std::nullopt;
}

namespace {

void check_homotopy_invariant(const Homotopy& h, const char* where) {
    // Cheap structural guards; full d_0 checks live in certify_homotopy.
    if (h.a.dim != h.b.dim || h.u.dim != h.a.dim + 1)
        throw std::logic_error(std::string("homotopy dimension invariant broken in ") + where);
}

} // namespace

Homotopy hom_trans(const Homotopy& x, const Homotopy& y) {
    if (!(x.b == y.a)) throw std::invalid_argument("hom_trans: middle terms differ");
    Homotopy r{x.a, y.b, milnor::mul(x.u, y.u)};
    check_homotopy_invariant(r, "hom_trans");
    return r;
}

Homotopy hom_sym(const Homotopy& h) { return Homotopy{h.b, h.a, milnor::inverse(h.u)}; }

Homotopy hom_inv(const Homotopy& h) {
    // d_0(s_0(a^{-1}) u^{-1} s_0(a^{-1})^{-1}) = a^{-1} (a b^{-1})^{-1} a = a^{-1} b.
    SimplicialElement s = degeneracy(0, milnor::inverse(h.a));
    SimplicialElement u = milnor::mul(milnor::mul(s, milnor::inverse(h.u)), milnor::inverse(s));
    return Homotopy{milnor::inverse(h.a), milnor::inverse(h.b), u};
}

Homotopy hom_mul(const Homotopy& x, const Homotopy& y) {
    // d_0(s_0(a) v s_0(a)^{-1} u) = a c d^{-1} a^{-1} a b^{-1} = (ac)(bd)^{-1}.
    SimplicialElement s = degeneracy(0, x.a);
    SimplicialElement u = milnor::mul(milnor::mul(milnor::mul(s, y.u), milnor::inverse(s)), x.u);
    return Homotopy{milnor::mul(x.a, y.a), milnor::mul(x.b, y.b), u};
}

Homotopy hom_transport(int k, int sign, const Homotopy& h) {
    const int q = h.a.dim;
    if (k < -1 || k > q - 2) throw std::invalid_argument("hom_transport: k out of range");
    BraidWord at_q{q - 1, {BraidLetter{k, sign}}};
    BraidWord up{q, {BraidLetter{k + 1, sign}}};
    Homotopy r{act(at_q, h.a), act(at_q, h.b), act(up, h.u)};
    check_homotopy_invariant(r, "hom_transport");
    return r;
}

SimplicialElement twist_witness(int k, const SimplicialElement& x) {
    if (k < -1 || k > x.dim - 2) throw std::invalid_argument("twist_witness: k out of range");
    SimplicialElement s = degeneracy(k + 1, x);
    BraidWord b{x.dim, {BraidLetter{k + 1, +1}}};
    return act(b, s);
}

std::optional<Homotopy> twist_homotopy(int k, const SimplicialElement& x) {
    if (!is_cycle(x)) return std::nullopt;
    SimplicialElement u = moore_normalize(twist_witness(k, x));
    BraidWord bk{x.dim - 1, {BraidLetter{k, +1}}};
    SimplicialElement sx = act(bk, x);
    Word target = words::mul(sx.w, x.w); // sigma_k(x) * (x^{-1})^{-1}
    if (face(0, u).w == target) return Homotopy{sx, milnor::inverse(x), u};
    SimplicialElement ui = milnor::inverse(u);
    if (face(0, ui).w == target) return Homotopy{sx, milnor::inverse(x), ui};
    return std::nullopt;
}

std::optional<Homotopy> square_homotopy(int k, int sign, const SimplicialElement& z) {
    if (sign < 0) {
        BraidWord b{z.dim - 1, {BraidLetter{k, -1}, BraidLetter{k, -1}}};
        SimplicialElement z3 = act(b, z);
        auto pos = square_homotopy(k, +1, z3);
        if (!pos) return std::nullopt;
        // pos: sigma_k^2(z3) ~ z3 with sigma_k^2(z3) == z; flip it.
        if (!(pos->a == z)) return std::nullopt;
        return hom_sym(*pos);
    }
    auto h1 = twist_homotopy(k, z); // sigma_k(z) ~ z^{-1}
    if (!h1) return std::nullopt;
    Homotopy h3 = hom_transport(k, +1, *h1); // sigma_k^2(z) ~ sigma_k(z^{-1})
    Homotopy h2 = hom_inv(*h1);              // sigma_k(z)^{-1} ~ z
    if (!(h3.b == h2.a)) return std::nullopt;
    return hom_trans(h3, h2); // sigma_k^2(z) ~ z
}

std::vector<BraidWord> pure_braid_generators(int n) {
    std::vector<BraidWord> out;
    for (int i = -1; i <= n - 1; ++i)
        for (int j = i + 1; j <= n - 1; ++j) {
            BraidWord b{n, {}};
            for (int t = j - 1; t >= i + 1; --t) b.letters.push_back(BraidLetter{t, +1});
            b.letters.push_back(BraidLetter{i, +1});
            b.letters.push_back(BraidLetter{i, +1});
            for (int t = i + 1; t <= j - 1; ++t) b.letters.push_back(BraidLetter{t, -1});
            out.push_back(std::move(b));
        }
    return out;
}

namespace {

struct Block {
    std::vector<BraidLetter> conj; // g
    int k = 0;
    int sign = +1; // sigma_k^{2*sign}
};

// Greedy left-to-right factorization into g sigma^{+-2} g^{-1} blocks.
std::optional<std::vector<Block>> parse_blocks(const std::vector<BraidLetter>& letters) {
    std::vector<Block> blocks;
    std::size_t p = 0;
    while (p < letters.size()) {
        // Find the first adjacent equal pair at or after p.
        std::size_t i = p;
        while (i + 1 < letters.size() && !(letters[i] == letters[i + 1])) ++i;
        if (i + 1 >= letters.size()) return std::nullopt;
        Block blk;
        blk.conj.assign(letters.begin() + p, letters.begin() + i);
        blk.k = letters[i].k;
        blk.sign = letters[i].sign;
        // The conjugator must close: expect reverse-inverse of conj next.
        std::size_t close = i + 2;
        if (close + blk.conj.size() > letters.size()) return std::nullopt;
        for (std::size_t t = 0; t < blk.conj.size(); ++t) {
            const BraidLetter& expect = blk.conj[blk.conj.size() - 1 - t];
            const BraidLetter& got = letters[close + t];
            if (got.k != expect.k || got.sign != -expect.sign) return std::nullopt;
        }
        p = close + blk.conj.size();
        blocks.push_back(std::move(blk));
    }
    return blocks;
}

} // namespace

FixedCheckResult homotopy_fixed_check(const BraidWord& b, const SimplicialElement& x) {
    FixedCheckResult res;
    if (x.dim != b.n + 1) {
        res.status = FixedCheckResult::Status::invalid;
        res.detail = "element dimension does not match braid level";
        return res;
    }
    if (!is_cycle(x)) {
        res.status = FixedCheckResult::Status::invalid;
        res.detail = "input element is not a Moore cycle";
        return res;
    }
    auto blocks = parse_blocks(b.letters);
    if (!blocks) {
        res.status = FixedCheckResult::Status::unsupported;
        res.detail = "braid word does not factor as conjugated squares under the greedy scan";
        return res;
    }
    // Fold right-to-left: x_{m+1} = x, x_i = B_i(x_{i+1}).
    std::optional<Homotopy> total;
    SimplicialElement cur = x;
    for (auto it = blocks->rbegin(); it != blocks->rend(); ++it) {
        BraidWord g{b.n, it->conj};
        SimplicialElement z2 = act(braid_inverse(g), cur);
        auto h = square_homotopy(it->k, it->sign, z2);
        if (!h) {
            res.status = FixedCheckResult::Status::unsupported;
            res.detail = "square certificate construction failed";
            return res;
        }
        // Transport through g (rightmost conjugator letter first).
        Homotopy carried = *h;
        for (auto lt = it->conj.rbegin(); lt != it->conj.rend(); ++lt)
            carried = hom_transport(lt->k, lt->sign, carried);
        if (!(carried.b == cur)) {
            res.status = FixedCheckResult::Status::unsupported;
            res.detail = "block certificate endpoint mismatch";
            return res;
        }
        total = total ? hom_trans(carried, *total) : carried;
        cur = carried.a;
    }
    if (!total) {
        // Empty braid word: trivial certificate.
        total = Homotopy{x, x, SimplicialElement{x.dim + 1, word_identity()}};
    }
    SimplicialElement bx = act(b, x);
    if (!(total->a == bx && total->b == x)) {
        res.status = FixedCheckResult::Status::invalid;
        res.detail = "assembled certificate endpoints do not match act(b, x) and x";
        return res;
    }
    auto cert = certify_homotopy(total->a, total->b, total->u);
    if (!cert.valid) {
        res.status = FixedCheckResult::Status::invalid;
        res.detail = "certificate rejected: " + cert.reason;
        return res;
    }
    if (!is_moore(total->u)) {
        res.status = FixedCheckResult::Status::invalid;
        res.detail = "assembled witness is not Moore";
        return res;
    }
    res.status = FixedCheckResult::Status::valid;
    res.certificate = total;
    return res;
}

CycleCriterionReport cycle_criterion_scan(int dim, std::int64_t samples, std::uint64_t seed) {
    if (dim < 1) throw std::invalid_argument("cycle_criterion_scan: dimension must be positive");
    if (samples < 1) throw std::invalid_argument("cycle_criterion_scan: samples must be positive");
    CycleCriterionReport rep;
    SplitMix64 rng{seed};
    BraidWord neg{dim - 1, {BraidLetter{-1, +1}}};
    auto random_elem = [&](int max_letters) {
        std::vector<words::Syllable> raw;
        int len = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_letters)));
        for (int i = 0; i < len; ++i)
            raw.push_back(words::Syllable{static_cast<int>(rng.below(static_cast<std::uint64_t>(dim))),
                                          rng.coin() ? 1 : -1});
        return SimplicialElement{dim, words::from_syllables(raw)};
    };
    for (std::int64_t s = 0; s < samples; ++s) {
        SimplicialElement x = random_elem(6);
        switch (s % 3) {
        case 1:
            x = milnor::moore_normalize(x);
            break;
        case 2: {
            SimplicialElement m = milnor::moore_normalize(x);
            SimplicialElement sm = milnor::degeneracy(0, milnor::face(0, m));
            x.w = words::conjugate(words::commutator(m.w, sm.w), random_elem(2).w);
            break;
        }
        default:
            break;
        }
        bool cyc = milnor::is_cycle(x);
        bool moore = milnor::is_moore(x);
        bool crit = moore && milnor::is_moore(act(neg, x));
        ++rep.samples;
        if (cyc) ++rep.cycles_seen;
        if (moore) ++rep.moore_seen;
        if (cyc != crit) ++rep.mismatches;
    }
    return rep;
}

FixedScanReport brute_force_fixed_scan(int n, int kpow, int max_len) {
    FixedScanReport rep;
    // sigma_j^{kpow} as generator maps on F(y_0..y_n).
    std::vector<GenMap> powers;
    for (int j = 0; j <= n - 1; ++j) {
        GenMap m = identity_map(n + 1);
        GenMap s = sigma_genmap(j, n);
        for (int t = 0; t < kpow; ++t) m = compose(s, m);
        powers.push_back(std::move(m));
    }
    Word base;
    for (int i = 0; i <= n; ++i) base = words::mul(base, word_gen(i));
    auto all = words::enumerate_words(n + 1, max_len);
    rep.words_scanned = static_cast<std::int64_t>(all.size());
    for (const auto& w : all) {
        bool fixed = true;
        for (const auto& m : powers)
            if (!(apply_map(m, w) == w)) {
                fixed = false;
                break;
            }
        if (!fixed) continue;
        ++rep.fixed_count;
        // Fixed words must be powers of y_0...y_n.
        std::int64_t len = words::word_length(w);
        bool ok = false;
        if (w.is_identity()) {
            ok = true;
        } else if (len % (n + 1) == 0) {
            std::int64_t m = len / (n + 1);
            ok = (w == words::power(base, m)) || (w == words::power(base, -m));
        }
        if (!ok) rep.violations.push_back(w);
    }
    return rep;
}

} // namespace braidwork::braid
