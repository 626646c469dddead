#include "braidwork/lie.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <utility>

namespace braidwork::lie {

namespace {

using magnus::kMaxMonoLen;
using magnus::kMaxVars;
using magnus::Series;

Int norm_coeff(Int c, std::uint32_t p) {
    if (p == 0) return c;
    c %= static_cast<long>(p);
    if (c < 0) c += static_cast<long>(p);
    return c;
}

void check_ring(std::uint32_t p) {
    if (p == 1) throw std::invalid_argument("lie: modulus 1 is not a coefficient ring");
}

void check_vars(int n_vars) {
    if (n_vars < 0 || n_vars > kMaxVars)
        throw std::invalid_argument("lie: variable count out of range");
}

// Lexicographic comparison of the suffixes starting at i and j.
int compare_suffixes(const std::vector<int>& l, std::size_t i, std::size_t j) {
    while (i < l.size() && j < l.size()) {
        if (l[i] != l[j]) return l[i] < l[j] ? -1 : 1;
        ++i;
        ++j;
    }
    if (i < l.size()) return 1;  // j exhausted first: j is a proper prefix of i
    if (j < l.size()) return -1; // i is a proper prefix of j
    return 0;
}

long long pow_ll(std::uint32_t p, int s) {
    long long r = 1;
    for (int i = 0; i < s; ++i) {
        r *= static_cast<long long>(p);
        if (r > (1LL << 40)) throw std::invalid_argument("lie: power exponent overflow");
    }
    return r;
}

void validate_symbol(const BasisSymbol& b, int n_vars, std::uint32_t p) {
    int len = magnus::mono_length(b.word);
    if (len == 0) throw std::invalid_argument("lie: empty basis word");
    for (int i = 0; i < len; ++i)
        if (magnus::mono_letter(b.word, i) >= n_vars)
            throw std::invalid_argument("lie: basis word letter out of range");
    if (!is_lyndon(b.word)) throw std::invalid_argument("lie: basis word is not Lyndon");
    if (b.s < 0) throw std::invalid_argument("lie: negative power exponent");
    if (b.s > 0 && p < 2)
        throw std::invalid_argument("lie: restricted powers require a modulus");
    long long w = static_cast<long long>(len) * (b.s > 0 ? pow_ll(p, b.s) : 1);
    if (w > kMaxMonoLen)
        throw std::invalid_argument("lie: symbol weight exceeds the monomial cap");
}

void check_compat(const LieElement& a, const LieElement& b) {
    if (a.n_vars != b.n_vars || a.p != b.p)
        throw std::invalid_argument("lie: mismatched variable counts or moduli");
}

// Leading-monomial shape of a basis expansion: a Lyndon word (s = 0), or the
// p^s-fold repetition of one (s >= 1, only over Z/p). Throws otherwise.
BasisSymbol leading_symbol(std::uint64_t m, std::uint32_t p) {
    if (is_lyndon(m)) return BasisSymbol{m, 0};
    if (p >= 2) {
        std::vector<int> l = magnus::mono_letters(m);
        int L = static_cast<int>(l.size());
        for (int d = 1; d < L; ++d) {
            if (L % d != 0) continue;
            bool periodic = true;
            for (int i = d; i < L && periodic; ++i) periodic = l[i] == l[i % d];
            if (!periodic) continue;
            // d is the least period; the repetition count must be a p-power.
            long long k = L / d;
            int s = 0;
            while (k % p == 0) {
                k /= p;
                ++s;
            }
            if (k != 1 || s == 0) break;
            std::uint64_t root =
                magnus::mono_from_letters(std::vector<int>(l.begin(), l.begin() + d));
            if (!is_lyndon(root)) break;
            return BasisSymbol{root, s};
        }
    }
    throw std::domain_error("lie_recognize: not a Lie element");
}

using ExpansionCache = std::map<BasisSymbol, Series>;

const Series& cached_expansion(ExpansionCache& cache, const BasisSymbol& b, int n_vars,
                               int max_deg, std::uint32_t p) {
    auto it = cache.find(b);
    if (it == cache.end())
        it = cache.emplace(b, tensor_expand_symbol(b, n_vars, max_deg, p)).first;
    return it->second;
}

LieElement recognize_impl(const Series& f, ExpansionCache& cache) {
    LieElement out{f.n_vars, f.p, {}};
    Series rest = f;
    while (!rest.terms.empty()) {
        std::uint64_t m = rest.terms.begin()->first;
        Int c = rest.terms.begin()->second;
        if (magnus::mono_length(m) == 0)
            throw std::domain_error("lie_recognize: not a Lie element");
        BasisSymbol b = leading_symbol(m, f.p);
        rest = magnus::sub(rest, magnus::scale(cached_expansion(cache, b, f.n_vars,
                                                                f.max_deg, f.p),
                                               c));
        lie_add_term(out, b, c);
        if (!rest.terms.empty() && rest.terms.begin()->first <= m)
            throw std::logic_error("lie_recognize: peeling failed to make progress");
    }
    return out;
}

// Substitution images of d_j (j = 0 only; higher faces renumber directly) and
// of s_j, as degree-one series on the target variable set.
std::vector<Series> face0_images(int q, int max_deg, std::uint32_t p) {
    int m = q - 1;
    std::vector<Series> img;
    img.reserve(static_cast<std::size_t>(q));
    Series x0 = magnus::series_zero(m, max_deg, p);
    for (int i = 0; i < m; ++i) x0 = magnus::sub(x0, magnus::series_var(m, max_deg, p, i));
    img.push_back(x0);
    for (int k = 1; k < q; ++k) img.push_back(magnus::series_var(m, max_deg, p, k - 1));
    return img;
}

std::vector<Series> degeneracy_lie_images(int q, int j, int max_deg, std::uint32_t p) {
    std::vector<Series> img;
    img.reserve(static_cast<std::size_t>(q));
    for (int k = 0; k < q; ++k) {
        if (j <= k) {
            img.push_back(magnus::series_var(q + 1, max_deg, p, k + 1));
        } else if (j == k + 1) {
            img.push_back(magnus::add(magnus::series_var(q + 1, max_deg, p, k),
                                      magnus::series_var(q + 1, max_deg, p, k + 1)));
        } else {
            img.push_back(magnus::series_var(q + 1, max_deg, p, k));
        }
    }
    return img;
}

} // namespace

bool is_lyndon(LyndonWord w) {
    std::vector<int> l = magnus::mono_letters(w);
    if (l.empty()) return false;
    for (std::size_t i = 1; i < l.size(); ++i)
        if (compare_suffixes(l, 0, i) >= 0) return false;
    return true;
}

std::vector<LyndonWord> lyndon_words(int n_vars, int length) {
    check_vars(n_vars);
    if (length < 1 || length > kMaxMonoLen)
        throw std::invalid_argument("lie: Lyndon length out of range");
    std::vector<LyndonWord> out;
    if (n_vars == 0) return out;
    // Duval's generator: visits every Lyndon word of length <= `length` in
    // lexicographic order; keep the ones of exact length.
    std::vector<int> w{0};
    while (true) {
        if (static_cast<int>(w.size()) == length) out.push_back(magnus::mono_from_letters(w));
        std::vector<int> x;
        x.reserve(static_cast<std::size_t>(length));
        for (int i = 0; i < length; ++i) x.push_back(w[static_cast<std::size_t>(i) % w.size()]);
        while (!x.empty() && x.back() == n_vars - 1) x.pop_back();
        if (x.empty()) break;
        ++x.back();
        w = std::move(x);
    }
    return out;
}

std::pair<LyndonWord, LyndonWord> standard_factorization(LyndonWord w) {
    std::vector<int> l = magnus::mono_letters(w);
    if (l.size() < 2 || !is_lyndon(w))
        throw std::invalid_argument("lie: standard factorization needs a Lyndon word of length >= 2");
    std::size_t best = 1;
    for (std::size_t i = 2; i < l.size(); ++i)
        if (compare_suffixes(l, i, best) < 0) best = i;
    std::vector<int> u(l.begin(), l.begin() + static_cast<std::ptrdiff_t>(best));
    std::vector<int> v(l.begin() + static_cast<std::ptrdiff_t>(best), l.end());
    return {magnus::mono_from_letters(u), magnus::mono_from_letters(v)};
}

int symbol_weight(const BasisSymbol& b, std::uint32_t p) {
    long long w = magnus::mono_length(b.word);
    if (b.s > 0) w *= pow_ll(p, b.s);
    return static_cast<int>(w);
}

std::string format_symbol(const BasisSymbol& b, std::uint32_t p) {
    auto bracket_str = [](auto&& self, LyndonWord w) -> std::string {
        if (magnus::mono_length(w) == 1)
            return "x" + std::to_string(magnus::mono_letter(w, 0));
        auto [u, v] = standard_factorization(w);
        return "[" + self(self, u) + "," + self(self, v) + "]";
    };
    std::string s = bracket_str(bracket_str, b.word);
    if (b.s > 0) s += "^" + std::to_string(pow_ll(p, b.s));
    return s;
}

words::Word group_bracket(const BasisSymbol& b, std::uint32_t p) {
    auto build = [](auto&& self, LyndonWord w) -> words::Word {
        if (magnus::mono_length(w) == 1) return words::word_gen(magnus::mono_letter(w, 0));
        auto [u, v] = standard_factorization(w);
        return words::commutator(self(self, u), self(self, v));
    };
    words::Word g = build(build, b.word);
    if (b.s > 0) g = words::power(g, pow_ll(p, b.s));
    return g;
}

LieElement lie_zero(int n_vars, std::uint32_t p) {
    check_vars(n_vars);
    check_ring(p);
    return LieElement{n_vars, p, {}};
}

LieElement lie_generator(int n_vars, std::uint32_t p, int j) {
    if (j < 0 || j >= n_vars) throw std::invalid_argument("lie: generator index out of range");
    return lie_basis_element(n_vars, p, BasisSymbol{magnus::mono_from_letters({j}), 0});
}

LieElement lie_basis_element(int n_vars, std::uint32_t p, const BasisSymbol& b) {
    LieElement a = lie_zero(n_vars, p);
    lie_add_term(a, b, 1);
    return a;
}

void lie_add_term(LieElement& a, const BasisSymbol& b, const Int& c) {
    check_vars(a.n_vars);
    check_ring(a.p);
    validate_symbol(b, a.n_vars, a.p);
    Int v = norm_coeff(a.terms[b] + c, a.p);
    if (v == 0)
        a.terms.erase(b);
    else
        a.terms[b] = v;
}

LieElement lie_add(const LieElement& a, const LieElement& b) {
    check_compat(a, b);
    LieElement out = a;
    for (const auto& [sym, c] : b.terms) lie_add_term(out, sym, c);
    return out;
}

LieElement lie_sub(const LieElement& a, const LieElement& b) {
    return lie_add(a, lie_scale(b, -1));
}

LieElement lie_scale(const LieElement& a, const Int& c) {
    LieElement out = lie_zero(a.n_vars, a.p);
    for (const auto& [sym, v] : a.terms) lie_add_term(out, sym, v * c);
    return out;
}

int lie_top_weight(const LieElement& a) {
    int w = 0;
    for (const auto& [sym, c] : a.terms) w = std::max(w, symbol_weight(sym, a.p));
    return w;
}

std::string format_lie(const LieElement& a) {
    if (a.terms.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [sym, c] : a.terms) {
        Int mag = c < 0 ? Int(-c) : c;
        if (first) {
            if (c < 0) out += "-";
            first = false;
        } else {
            out += c < 0 ? " - " : " + ";
        }
        if (mag != 1) out += mag.get_str() + "*";
        out += format_symbol(sym, a.p);
    }
    return out;
}

magnus::Series tensor_expand_symbol(const BasisSymbol& b, int n_vars, int max_deg,
                                    std::uint32_t p) {
    check_vars(n_vars);
    validate_symbol(b, n_vars, p);
    if (symbol_weight(b, p) > max_deg)
        throw std::invalid_argument("lie: expansion would be truncated away");
    auto expand_word = [&](auto&& self, LyndonWord w) -> Series {
        if (magnus::mono_length(w) == 1)
            return magnus::series_var(n_vars, max_deg, p, magnus::mono_letter(w, 0));
        auto [u, v] = standard_factorization(w);
        Series eu = self(self, u);
        Series ev = self(self, v);
        return magnus::sub(magnus::mul(eu, ev), magnus::mul(ev, eu));
    };
    Series e = expand_word(expand_word, b.word);
    if (b.s > 0) e = magnus::pow_series(e, pow_ll(p, b.s));
    return e;
}

magnus::Series tensor_expand(const LieElement& a, int max_deg) {
    if (max_deg < lie_top_weight(a))
        throw std::invalid_argument("lie: expansion would be truncated away");
    Series out = magnus::series_zero(a.n_vars, max_deg, a.p);
    for (const auto& [sym, c] : a.terms)
        out = magnus::add(out, magnus::scale(tensor_expand_symbol(sym, a.n_vars, max_deg, a.p), c));
    return out;
}

LieElement lie_recognize(const magnus::Series& f) {
    ExpansionCache cache;
    return recognize_impl(f, cache);
}

LieElement bracket(const LieElement& a, const LieElement& b) {
    check_compat(a, b);
    if (a.is_zero() || b.is_zero()) return lie_zero(a.n_vars, a.p);
    int d = lie_top_weight(a) + lie_top_weight(b);
    if (d > kMaxMonoLen) throw std::invalid_argument("lie: bracket exceeds the monomial cap");
    Series ea = tensor_expand(a, d);
    Series eb = tensor_expand(b, d);
    return lie_recognize(magnus::sub(magnus::mul(ea, eb), magnus::mul(eb, ea)));
}

LieElement lie_face(int j, const LieElement& a) {
    int q = a.n_vars;
    if (q < 1) throw std::invalid_argument("lie: face needs dimension >= 1");
    if (j < 0 || j > q) throw std::out_of_range("lie: face index out of range");
    LieElement out = lie_zero(q - 1, a.p);
    if (a.is_zero()) return out;
    if (j == 0) {
        int w = lie_top_weight(a);
        Series img = magnus::substitute(tensor_expand(a, w), face0_images(q, w, a.p), false);
        ExpansionCache cache;
        return recognize_impl(img, cache);
    }
    // d_j for j >= 1 kills the letter j-1 and renumbers the rest preserving
    // order, which sends Lyndon words to Lyndon words and standard
    // factorizations to standard factorizations.
    for (const auto& [sym, c] : a.terms) {
        std::vector<int> l = magnus::mono_letters(sym.word);
        bool killed = false;
        for (int& k : l) {
            if (k == j - 1) {
                killed = true;
                break;
            }
            if (k >= j) --k;
        }
        if (killed) continue;
        LyndonWord w = magnus::mono_from_letters(l);
        if (!is_lyndon(w)) throw std::logic_error("lie: renumbered face word is not Lyndon");
        lie_add_term(out, BasisSymbol{w, sym.s}, c);
    }
    return out;
}

LieElement lie_degeneracy(int j, const LieElement& a) {
    int q = a.n_vars;
    if (j < 0 || j > q) throw std::out_of_range("lie: degeneracy index out of range");
    if (a.is_zero()) return lie_zero(q + 1, a.p);
    int w = lie_top_weight(a);
    Series img =
        magnus::substitute(tensor_expand(a, w), degeneracy_lie_images(q, j, w, a.p), false);
    ExpansionCache cache;
    return recognize_impl(img, cache);
}

std::vector<BasisSymbol> nondegenerate_basis(int t, int q, std::uint32_t p) {
    check_vars(q);
    check_ring(p);
    if (t < 1 || t > kMaxMonoLen)
        throw std::invalid_argument("lie: weight out of range");
    std::vector<BasisSymbol> out;
    if (q == 0) return out;
    auto full_support = [&](int length) {
        std::vector<LyndonWord> keep;
        for (LyndonWord w : lyndon_words(q, length))
            if (magnus::mono_uses_all(w, q)) keep.push_back(w);
        return keep;
    };
    for (LyndonWord w : full_support(t)) out.push_back(BasisSymbol{w, 0});
    if (p >= 2) {
        long long ps = p;
        for (int s = 1; ps <= t; ++s, ps *= p) {
            if (t % ps != 0) continue;
            for (LyndonWord w : full_support(static_cast<int>(t / ps)))
                out.push_back(BasisSymbol{w, s});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

exactla::IntMatrix moore_boundary_matrix(int t, int q, std::uint32_t p) {
    if (q < 1) throw std::invalid_argument("lie: boundary needs dimension >= 1");
    std::vector<BasisSymbol> src = nondegenerate_basis(t, q, p);
    std::vector<BasisSymbol> dst = nondegenerate_basis(t, q - 1, p);
    std::map<BasisSymbol, int> dst_index;
    for (int i = 0; i < static_cast<int>(dst.size()); ++i) dst_index.emplace(dst[i], i);
    exactla::IntMatrix mat =
        exactla::IntMatrix::zero(static_cast<int>(dst.size()), static_cast<int>(src.size()));
    if (src.empty()) return mat;
    std::vector<Series> img = face0_images(q, t, p);
    ExpansionCache dst_cache;
    for (int col = 0; col < static_cast<int>(src.size()); ++col) {
        Series image =
            magnus::substitute(tensor_expand_symbol(src[static_cast<std::size_t>(col)], q, t, p),
                               img, false);
        LieElement rec = recognize_impl(image, dst_cache);
        for (const auto& [sym, c] : rec.terms) {
            auto it = dst_index.find(sym);
            if (it == dst_index.end())
                throw std::logic_error("lie: boundary image leaves the nondegenerate span");
            mat.add(it->second, col, c);
        }
    }
    return mat;
}

CheckCounts verify_graded_compatibility(int t_max, int q_max, std::uint32_t p) {
    CheckCounts cc;
    for (int q = 1; q <= q_max; ++q) {
        for (int t = 1; t <= t_max; ++t) {
            for (const BasisSymbol& b : nondegenerate_basis(t, q, p)) {
                LieElement a = lie_basis_element(q, p, b);
                Series e = tensor_expand(a, t);
                for (int j = 0; j <= q; ++j) {
                    ++cc.checks;
                    if (magnus::q_component(t, magnus::face_series(j, e)) !=
                        tensor_expand(lie_face(j, a), t))
                        ++cc.failures;
                    ++cc.checks;
                    if (magnus::q_component(t, magnus::degeneracy_series(j, e)) !=
                        tensor_expand(lie_degeneracy(j, a), t))
                        ++cc.failures;
                }
            }
        }
    }
    return cc;
}

} // namespace braidwork::lie
