#include "braidwork/magnus.hpp"

#include "braidwork/braid.hpp"
#include "braidwork/exactla.hpp"
#include "braidwork/milnor.hpp"
#include "braidwork/rng.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <stdexcept>
#include <utility>

namespace braidwork::magnus {

namespace {

constexpr std::uint64_t kLetterMask = 0x0FFFFFFFFFFFFFFFull;

void check_params(int n_vars, int max_deg, std::uint32_t p)
{
    if (n_vars < 0 || n_vars > kMaxVars)
        throw std::invalid_argument("series: n_vars out of range");
    if (max_deg < 0 || max_deg > kMaxMonoLen)
        throw std::invalid_argument("series: max_deg out of range");
    if (p == 1) throw std::invalid_argument("series: modulus must be 0 or >= 2");
}

void check_compat(const Series& a, const Series& b)
{
    if (a.n_vars != b.n_vars || a.max_deg != b.max_deg || a.p != b.p)
        throw std::invalid_argument("series: operands live in different algebras");
}

Int normalized(Int c, std::uint32_t p)
{
    if (p != 0) {
        c %= static_cast<unsigned long>(p);
        if (c < 0) c += static_cast<unsigned long>(p);
    }
    return c;
}

Word random_word(SplitMix64& rng, int num_gens, int max_len)
{
    int len = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_len)));
    std::vector<words::Syllable> raw;
    raw.reserve(static_cast<std::size_t>(len));
    for (int i = 0; i < len; ++i) {
        int gen = static_cast<int>(rng.below(static_cast<std::uint64_t>(num_gens)));
        raw.push_back(words::Syllable{gen, rng.coin() ? 1 : -1});
    }
    return words::from_syllables(raw);
}

} // namespace

// ---------------------------------------------------------------- monomials

std::uint64_t mono_from_letters(const std::vector<int>& letters)
{
    if (static_cast<int>(letters.size()) > kMaxMonoLen)
        throw std::invalid_argument("mono_from_letters: monomial too long");
    std::uint64_t m = static_cast<std::uint64_t>(letters.size()) << 60;
    int i = 0;
    for (int l : letters) {
        if (l < 0 || l >= kMaxVars)
            throw std::invalid_argument("mono_from_letters: letter out of range");
        m |= static_cast<std::uint64_t>(l) << (56 - 4 * i);
        ++i;
    }
    return m;
}

std::vector<int> mono_letters(std::uint64_t m)
{
    int len = mono_length(m);
    std::vector<int> out(static_cast<std::size_t>(len));
    for (int i = 0; i < len; ++i) out[static_cast<std::size_t>(i)] = mono_letter(m, i);
    return out;
}

std::uint64_t mono_concat(std::uint64_t a, std::uint64_t b)
{
    int la = mono_length(a), lb = mono_length(b);
    if (la + lb > kMaxMonoLen) throw std::invalid_argument("mono_concat: monomial too long");
    std::uint64_t letters = (a & kLetterMask) | ((b & kLetterMask) >> (4 * la));
    return (static_cast<std::uint64_t>(la + lb) << 60) | letters;
}

std::uint64_t mono_reverse(std::uint64_t m)
{
    int len = mono_length(m);
    std::uint64_t out = static_cast<std::uint64_t>(len) << 60;
    for (int i = 0; i < len; ++i)
        out |= static_cast<std::uint64_t>(mono_letter(m, i)) << (56 - 4 * (len - 1 - i));
    return out;
}

std::uint64_t mono_prefix(std::uint64_t m)
{
    int len = mono_length(m);
    if (len == 0) throw std::invalid_argument("mono_prefix: empty monomial");
    std::uint64_t letters = m & kLetterMask;
    letters &= ~(static_cast<std::uint64_t>(0xf) << (56 - 4 * (len - 1)));
    return (static_cast<std::uint64_t>(len - 1) << 60) | letters;
}

bool mono_uses_all(std::uint64_t m, int q)
{
    unsigned mask = 0;
    int len = mono_length(m);
    for (int i = 0; i < len; ++i) mask |= 1u << mono_letter(m, i);
    return mask == (1u << q) - 1u;
}

std::string mono_to_string(std::uint64_t m)
{
    std::string s;
    int len = mono_length(m);
    for (int i = 0; i < len; ++i) {
        if (i) s += '*';
        s += 'x';
        s += std::to_string(mono_letter(m, i));
    }
    return s;
}

// ------------------------------------------------------------------- series

Series series_zero(int n_vars, int max_deg, std::uint32_t p)
{
    check_params(n_vars, max_deg, p);
    Series s;
    s.n_vars = n_vars;
    s.max_deg = max_deg;
    s.p = p;
    return s;
}

Series series_const(int n_vars, int max_deg, std::uint32_t p, const Int& c)
{
    Series s = series_zero(n_vars, max_deg, p);
    add_term(s, mono_one(), c);
    return s;
}

Series series_one(int n_vars, int max_deg, std::uint32_t p)
{
    return series_const(n_vars, max_deg, p, 1);
}

Series series_var(int n_vars, int max_deg, std::uint32_t p, int j)
{
    if (j < 0 || j >= n_vars) throw std::invalid_argument("series_var: index out of range");
    Series s = series_zero(n_vars, max_deg, p);
    add_term(s, mono_from_letters({j}), 1);
    return s;
}

void add_term(Series& s, std::uint64_t m, const Int& c)
{
    int len = mono_length(m);
    if (len > s.max_deg) return; // truncation happens here, and only here
    for (int i = 0; i < len; ++i)
        if (mono_letter(m, i) >= s.n_vars)
            throw std::invalid_argument("add_term: letter outside the algebra");
    Int v = normalized(c, s.p);
    if (v == 0) return;
    auto it = s.terms.find(m);
    if (it == s.terms.end()) {
        s.terms.emplace(m, std::move(v));
        return;
    }
    it->second = normalized(it->second + v, s.p);
    if (it->second == 0) s.terms.erase(it);
}

Series add(const Series& a, const Series& b)
{
    check_compat(a, b);
    Series out = a;
    for (const auto& [m, c] : b.terms) add_term(out, m, c);
    return out;
}

Series sub(const Series& a, const Series& b)
{
    check_compat(a, b);
    Series out = a;
    for (const auto& [m, c] : b.terms) add_term(out, m, Int(-c));
    return out;
}

Series neg(const Series& a)
{
    Series out = series_zero(a.n_vars, a.max_deg, a.p);
    for (const auto& [m, c] : a.terms) add_term(out, m, Int(-c));
    return out;
}

Series mul(const Series& a, const Series& b)
{
    check_compat(a, b);
    Series out = series_zero(a.n_vars, a.max_deg, a.p);
    for (const auto& [ma, ca] : a.terms) {
        int room = a.max_deg - mono_length(ma);
        for (const auto& [mb, cb] : b.terms) {
            if (mono_length(mb) > room) break; // terms are ordered by degree first
            add_term(out, mono_concat(ma, mb), ca * cb);
        }
    }
    return out;
}

Series scale(const Series& a, const Int& c)
{
    Series out = series_zero(a.n_vars, a.max_deg, a.p);
    for (const auto& [m, v] : a.terms) add_term(out, m, v * c);
    return out;
}

Series pow_series(const Series& a, long e)
{
    if (e < 0) throw std::invalid_argument("pow_series: negative exponent");
    Series r = series_one(a.n_vars, a.max_deg, a.p);
    Series b = a;
    while (e > 0) {
        if (e & 1) r = mul(r, b);
        e >>= 1;
        if (e > 0) b = mul(b, b);
    }
    return r;
}

Series inv_one_plus(const Series& f)
{
    if (f.terms.count(mono_one()))
        throw std::invalid_argument("inv_one_plus: argument must have zero constant term");
    Series one = series_one(f.n_vars, f.max_deg, f.p);
    Series g = one;
    for (int it = 0; it < f.max_deg; ++it) {
        Series next = sub(one, mul(f, g));
        if (next == g) break;
        g = std::move(next);
    }
    return g;
}

Series q_component(int i, const Series& f)
{
    if (i < 0) throw std::invalid_argument("q_component: negative degree");
    Series out = series_zero(f.n_vars, f.max_deg, f.p);
    if (i > f.max_deg) return out;
    auto lo = f.terms.lower_bound(static_cast<std::uint64_t>(i) << 60);
    auto hi = f.terms.lower_bound(static_cast<std::uint64_t>(i + 1) << 60);
    for (auto it = lo; it != hi; ++it) out.terms.emplace(it->first, it->second);
    return out;
}

int low_degree(const Series& f)
{
    auto it = f.terms.lower_bound(static_cast<std::uint64_t>(1) << 60);
    if (it == f.terms.end()) return -1;
    return mono_length(it->first);
}

std::string format_series(const Series& f)
{
    if (f.terms.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [m, c] : f.terms) {
        bool negc = c < 0;
        Int mag = negc ? Int(-c) : c;
        if (first) {
            if (negc) s += '-';
        } else {
            s += negc ? " - " : " + ";
        }
        first = false;
        if (mono_length(m) == 0) {
            s += to_string(mag);
        } else {
            if (mag != 1) {
                s += to_string(mag);
                s += '*';
            }
            s += mono_to_string(m);
        }
    }
    return s;
}

Series parse_series(const std::string& text, int n_vars, int max_deg, std::uint32_t p)
{
    check_params(n_vars, max_deg, p);
    std::size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    auto fail = [&](const std::string& why) {
        return std::invalid_argument("parse_series: " + why + " at position " + std::to_string(i));
    };
    skip_ws();
    if (i >= text.size()) throw fail("empty input");
    Series out = series_zero(n_vars, max_deg, p);
    if (text[i] == '0') { // the zero series is a lone "0"
        std::size_t j = i + 1;
        while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j]))) ++j;
        if (j >= text.size()) return out;
    }
    bool first = true;
    while (true) {
        skip_ws();
        int sign = +1;
        if (first) {
            if (i < text.size() && text[i] == '-') {
                sign = -1;
                ++i;
                skip_ws();
            }
        } else {
            if (i >= text.size()) break;
            if (text[i] == '+') sign = +1;
            else if (text[i] == '-') sign = -1;
            else throw fail("expected '+' or '-'");
            ++i;
            skip_ws();
        }
        first = false;
        if (i >= text.size()) throw fail("missing term");
        Int mag = 1;
        bool have_digits = false;
        if (std::isdigit(static_cast<unsigned char>(text[i]))) {
            std::size_t start = i;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
            mag = Int(text.substr(start, i - start));
            have_digits = true;
            if (mag == 0) throw fail("zero coefficient");
        }
        bool expect_letters = !have_digits;
        if (have_digits && i < text.size() && text[i] == '*') {
            ++i;
            expect_letters = true;
        }
        std::vector<int> letters;
        if (expect_letters) {
            while (true) {
                if (i >= text.size() || text[i] != 'x') throw fail("expected variable");
                ++i;
                if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
                    throw fail("expected variable index");
                int idx = 0;
                while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
                    idx = idx * 10 + (text[i] - '0');
                    if (idx > kMaxVars) throw fail("variable index out of range");
                    ++i;
                }
                if (idx >= n_vars) throw fail("variable index out of range");
                letters.push_back(idx);
                if (static_cast<int>(letters.size()) > max_deg)
                    throw fail("monomial exceeds the truncation degree");
                if (i < text.size() && text[i] == '*') {
                    ++i;
                    continue;
                }
                break;
            }
        }
        add_term(out, mono_from_letters(letters), sign < 0 ? Int(-mag) : mag);
    }
    return out;
}

Series substitute(const Series& f, const std::vector<Series>& images, bool anti)
{
    if (f.n_vars < 1) throw std::invalid_argument("substitute: source algebra has no variables");
    if (static_cast<int>(images.size()) != f.n_vars)
        throw std::invalid_argument("substitute: one image per variable required");
    for (const auto& g : images) {
        check_compat(images[0], g);
        if (g.terms.count(mono_one()))
            throw std::invalid_argument("substitute: images must have zero constant term");
    }
    if (images[0].max_deg != f.max_deg || images[0].p != f.p)
        throw std::invalid_argument("substitute: target algebra truncation mismatch");
    Series out = series_zero(images[0].n_vars, f.max_deg, f.p);
    for (const auto& [m, c] : f.terms) {
        Series img = series_one(out.n_vars, out.max_deg, out.p);
        int len = mono_length(m);
        for (int i = 0; i < len && !img.is_zero_series(); ++i) {
            const Series& gi = images[static_cast<std::size_t>(mono_letter(m, i))];
            img = anti ? mul(gi, img) : mul(img, gi);
        }
        for (const auto& [mm, cc] : img.terms) add_term(out, mm, cc * c);
    }
    return out;
}

// ------------------------------------------------- simplicial structure on A

Series x_neg1(int m, int max_deg, std::uint32_t p)
{
    check_params(m, max_deg, p);
    Series acc = series_one(m, max_deg, p);
    for (int k = m - 1; k >= 0; --k)
        acc = mul(acc, inv_one_plus(series_var(m, max_deg, p, k)));
    return sub(acc, series_one(m, max_deg, p));
}

std::vector<Series> face_images(int q, int j, int max_deg, std::uint32_t p)
{
    if (q < 1) throw std::invalid_argument("face_images: dimension must be positive");
    if (j < 0 || j > q) throw std::invalid_argument("face_images: face index out of range");
    check_params(q, max_deg, p);
    int m = q - 1;
    std::vector<Series> img;
    img.reserve(static_cast<std::size_t>(q));
    for (int k = 0; k < q; ++k) {
        if (j <= k)
            img.push_back(k == 0 && j == 0 ? x_neg1(m, max_deg, p)
                                           : series_var(m, max_deg, p, k - 1));
        else if (j == k + 1)
            img.push_back(series_zero(m, max_deg, p));
        else
            img.push_back(series_var(m, max_deg, p, k));
    }
    return img;
}

std::vector<Series> degeneracy_images(int q, int j, int max_deg, std::uint32_t p)
{
    if (q < 1) throw std::invalid_argument("degeneracy_images: dimension must be positive");
    if (j < 0 || j > q) throw std::invalid_argument("degeneracy_images: index out of range");
    check_params(q + 1, max_deg, p);
    std::vector<Series> img;
    img.reserve(static_cast<std::size_t>(q));
    for (int k = 0; k < q; ++k) {
        if (j <= k) {
            img.push_back(series_var(q + 1, max_deg, p, k + 1));
        } else if (j == k + 1) {
            Series xk = series_var(q + 1, max_deg, p, k);
            Series xk1 = series_var(q + 1, max_deg, p, k + 1);
            img.push_back(add(add(xk, xk1), mul(xk, xk1)));
        } else {
            img.push_back(series_var(q + 1, max_deg, p, k));
        }
    }
    return img;
}

Series face_series(int j, const Series& f)
{
    if (f.n_vars < 1) throw std::invalid_argument("face_series: no faces out of dimension zero");
    return substitute(f, face_images(f.n_vars, j, f.max_deg, f.p), false);
}

Series degeneracy_series(int j, const Series& f)
{
    if (f.n_vars == 0) {
        if (j != 0) throw std::invalid_argument("degeneracy_series: index out of range");
        Series out = f;
        out.n_vars = 1;
        return out;
    }
    return substitute(f, degeneracy_images(f.n_vars, j, f.max_deg, f.p), false);
}

// ------------------------------------------------------------- braid action

std::vector<Series> sigma_images(int n, int k, int sign, int max_deg, std::uint32_t p)
{
    if (n < 0) throw std::invalid_argument("sigma_images: negative braid level");
    if (k < -1 || k > n - 1)
        throw std::invalid_argument("sigma_images: generator index out of range");
    if (sign != 1 && sign != -1) throw std::invalid_argument("sigma_images: sign must be +-1");
    int q = n + 1;
    check_params(q, max_deg, p);
    std::vector<Series> img;
    img.reserve(static_cast<std::size_t>(q));
    for (int i = 0; i < q; ++i) img.push_back(series_var(q, max_deg, p, i));
    Series one = series_one(q, max_deg, p);
    if (k >= 0) {
        Series xk = series_var(q, max_deg, p, k);
        Series xk1 = series_var(q, max_deg, p, k + 1);
        if (sign > 0) {
            img[static_cast<std::size_t>(k)] = xk1;
            Series t = mul(inv_one_plus(xk1), add(one, xk));
            img[static_cast<std::size_t>(k + 1)] = sub(mul(t, add(one, xk1)), one);
        } else {
            Series t = mul(add(one, xk), add(one, xk1));
            img[static_cast<std::size_t>(k)] = sub(mul(t, inv_one_plus(xk)), one);
            img[static_cast<std::size_t>(k + 1)] = xk;
        }
    } else {
        if (sign > 0) {
            Series acc = inv_one_plus(series_var(q, max_deg, p, 0));
            for (int i = n; i >= 1; --i)
                acc = mul(acc, inv_one_plus(series_var(q, max_deg, p, i)));
            img[0] = sub(acc, one);
        } else {
            img[0] = x_neg1(q, max_deg, p);
        }
    }
    return img;
}

Series act_series(const braid::BraidWord& b, const Series& f)
{
    if (f.n_vars != b.n + 1)
        throw std::invalid_argument("act_series: series dimension does not match braid level");
    Series cur = f;
    for (auto it = b.letters.rbegin(); it != b.letters.rend(); ++it)
        cur = substitute(cur, sigma_images(b.n, it->k, it->sign, f.max_deg, f.p), false);
    return cur;
}

// -------------------------------------------------------------- embedding e

Series magnus_embed(const Word& w, int n_vars, int max_deg, std::uint32_t p)
{
    check_params(n_vars, max_deg, p);
    if (words::max_gen_index(w) >= n_vars)
        throw std::invalid_argument("magnus_embed: word uses a generator outside the algebra");
    Series acc = series_one(n_vars, max_deg, p);
    for (const auto& s : w.syl) {
        Series base = s.exp > 0
                          ? add(series_one(n_vars, max_deg, p), series_var(n_vars, max_deg, p, s.gen))
                          : inv_one_plus(series_var(n_vars, max_deg, p, s.gen));
        std::int64_t e = s.exp;
        if (e == std::numeric_limits<std::int64_t>::min())
            throw std::invalid_argument("magnus_embed: exponent overflow");
        if (e < 0) e = -e;
        acc = mul(acc, pow_series(base, static_cast<long>(e)));
    }
    return acc;
}

GammaWeight gamma_weight(const Word& w, int n_vars, int cap, std::uint32_t p)
{
    if (cap < 0) throw std::invalid_argument("gamma_weight: negative cap");
    if (w.is_identity()) return {GammaWeight::Kind::identity, 0};
    Series e = magnus_embed(w, n_vars, cap, p);
    int ld = low_degree(e);
    if (ld >= 1) return {GammaWeight::Kind::finite, ld};
    return {GammaWeight::Kind::exceeded, 0};
}

// ----------------------------------------------------------- chi and dbar0

Series chi(const Series& f)
{
    Series out = series_zero(f.n_vars, f.max_deg, f.p);
    for (const auto& [m, c] : f.terms)
        add_term(out, mono_reverse(m), mono_length(m) % 2 ? Int(-c) : c);
    return out;
}

Series dbar0(const Series& f)
{
    if (f.n_vars < 1) throw std::invalid_argument("dbar0: source algebra has no variables");
    int q = f.n_vars;
    int m = q - 1;
    Series one = series_one(m, f.max_deg, f.p);
    Series acc = one;
    for (int i = 0; i < m; ++i)
        acc = mul(acc, add(one, series_var(m, f.max_deg, f.p, i)));
    std::vector<Series> img;
    img.reserve(static_cast<std::size_t>(q));
    img.push_back(sub(acc, one));
    for (int j = 1; j < q; ++j) img.push_back(series_var(m, f.max_deg, f.p, j - 1));
    return substitute(f, img, true);
}

// ------------------------------------------------------ Delta / P operations

DeltaData build_delta_data(int m, int max_deg, std::uint32_t p)
{
    check_params(m, max_deg, p);
    DeltaData dd;
    dd.m = m;
    dd.max_deg = max_deg;
    dd.p = p;
    dd.delta.assign(static_cast<std::size_t>(m) + 1, series_zero(m, max_deg, p));
    for (unsigned mask = 1; mask < (1u << m); ++mask) {
        int s = __builtin_popcount(mask);
        if (s > max_deg) continue;
        std::vector<int> letters;
        letters.reserve(static_cast<std::size_t>(s));
        for (int l = 0; l < m; ++l)
            if (mask & (1u << l)) letters.push_back(l);
        add_term(dd.delta[static_cast<std::size_t>(s) - 1], mono_from_letters(letters), 1);
    }
    return dd;
}

PDelta::PDelta(int source_vars, int max_deg, std::uint32_t p) : q_(source_vars)
{
    if (source_vars < 1 || source_vars > kMaxVars)
        throw std::invalid_argument("PDelta: source variable count out of range");
    dd_ = build_delta_data(source_vars - 1, max_deg, p);
}

const Series& PDelta::delta(int i) const
{
    if (i < 0) throw std::invalid_argument("PDelta::delta: negative index");
    // Delta_i vanishes past m - 1 and the final slot is identically zero.
    if (i >= static_cast<int>(dd_.delta.size())) return dd_.delta.back();
    return dd_.delta[static_cast<std::size_t>(i)];
}

Series PDelta::letter_apply(int t, int letter) const
{
    if (letter > 0)
        return t == 0 ? series_var(q_ - 1, dd_.max_deg, dd_.p, letter - 1)
                      : series_zero(q_ - 1, dd_.max_deg, dd_.p);
    return delta(t);
}

Series PDelta::mono_apply(int t, std::uint64_t m) const
{
    int len = mono_length(m);
    if (len == 0) {
        Series c = series_zero(q_ - 1, dd_.max_deg, dd_.p);
        if (t == 0) add_term(c, mono_one(), 1);
        return c;
    }
    auto key = std::make_pair(m, t);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    int l = mono_letter(m, len - 1);
    std::uint64_t pre = mono_prefix(m);
    Series out = series_zero(q_ - 1, dd_.max_deg, dd_.p);
    for (int a = 0; a <= t; ++a) {
        Series la = letter_apply(a, l);
        if (la.is_zero_series()) continue;
        Series pb = mono_apply(t - a, pre);
        if (pb.is_zero_series()) continue;
        out = add(out, mul(la, pb));
    }
    memo_.emplace(key, out);
    return out;
}

Series PDelta::apply(int t, const Series& f) const
{
    if (t < 0) throw std::invalid_argument("PDelta::apply: negative degree shift");
    if (f.n_vars != q_ || f.max_deg != dd_.max_deg || f.p != dd_.p)
        throw std::invalid_argument("PDelta::apply: series from a different algebra");
    Series out = series_zero(q_ - 1, dd_.max_deg, dd_.p);
    for (const auto& [m, c] : f.terms) {
        Series pm = mono_apply(t, m);
        for (const auto& [mm, cc] : pm.terms) add_term(out, mm, cc * c);
    }
    return out;
}

// ------------------------------------------------------------ verifications

namespace {

void expect_eq(CheckCounts& cc, const Series& a, const Series& b)
{
    ++cc.checks;
    if (!(a == b)) ++cc.failures;
}

void expect_true(CheckCounts& cc, bool ok)
{
    ++cc.checks;
    if (!ok) ++cc.failures;
}

} // namespace

CheckCounts verify_ring_simplicial_identities(int q_max, int max_deg, std::uint32_t p)
{
    if (q_max < 1) throw std::invalid_argument("verify_ring_simplicial_identities: q_max < 1");
    CheckCounts cc;
    for (int q = 2; q <= q_max; ++q)
        for (int j = 1; j <= q; ++j)
            for (int i = 0; i < j; ++i)
                for (int k = 0; k < q; ++k) {
                    Series x = series_var(q, max_deg, p, k);
                    expect_eq(cc, face_series(i, face_series(j, x)),
                              face_series(j - 1, face_series(i, x)));
                }
    for (int q = 1; q <= q_max; ++q)
        for (int j = 0; j <= q; ++j)
            for (int i = 0; i <= j; ++i)
                for (int k = 0; k < q; ++k) {
                    Series x = series_var(q, max_deg, p, k);
                    expect_eq(cc, degeneracy_series(i, degeneracy_series(j, x)),
                              degeneracy_series(j + 1, degeneracy_series(i, x)));
                }
    for (int q = 1; q <= q_max; ++q)
        for (int j = 0; j <= q; ++j)
            for (int i = 0; i <= q + 1; ++i)
                for (int k = 0; k < q; ++k) {
                    Series x = series_var(q, max_deg, p, k);
                    Series lhs = face_series(i, degeneracy_series(j, x));
                    Series rhs = i < j        ? degeneracy_series(j - 1, face_series(i, x))
                                 : i <= j + 1 ? x
                                              : degeneracy_series(j, face_series(i - 1, x));
                    expect_eq(cc, lhs, rhs);
                }
    return cc;
}

CheckCounts verify_braid_ring_relations(int n_max, int max_deg, std::uint32_t p)
{
    if (n_max < 0) throw std::invalid_argument("verify_braid_ring_relations: n_max < 0");
    CheckCounts cc;
    for (int n = 0; n <= n_max; ++n) {
        int q = n + 1;
        auto gen = [&](int i) { return series_var(q, max_deg, p, i); };
        for (int k = -1; k <= n - 1; ++k)
            for (int sign : {+1, -1}) {
                braid::BraidWord both{n, {{k, sign}, {k, -sign}}};
                for (int i = 0; i < q; ++i) expect_eq(cc, act_series(both, gen(i)), gen(i));
            }
        for (int k = -1; k <= n - 2; ++k) {
            braid::BraidWord lhs{n, {{k, 1}, {k + 1, 1}, {k, 1}}};
            braid::BraidWord rhs{n, {{k + 1, 1}, {k, 1}, {k + 1, 1}}};
            for (int i = 0; i < q; ++i)
                expect_eq(cc, act_series(lhs, gen(i)), act_series(rhs, gen(i)));
        }
        for (int k = -1; k <= n - 1; ++k)
            for (int l = k + 2; l <= n - 1; ++l) {
                braid::BraidWord ab{n, {{k, 1}, {l, 1}}};
                braid::BraidWord ba{n, {{l, 1}, {k, 1}}};
                for (int i = 0; i < q; ++i)
                    expect_eq(cc, act_series(ab, gen(i)), act_series(ba, gen(i)));
            }
    }
    return cc;
}

CheckCounts verify_embed_naturality(int q_max, int max_deg, std::uint32_t p, int samples,
                                    std::uint64_t seed)
{
    if (q_max < 1 || q_max + 1 > kMaxVars)
        throw std::invalid_argument("verify_embed_naturality: q_max out of range");
    if (samples < 1) throw std::invalid_argument("verify_embed_naturality: samples < 1");
    CheckCounts cc;
    SplitMix64 rng{seed};
    for (int s = 0; s < samples; ++s) {
        int q = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(q_max)));
        Word w = random_word(rng, q, 4);
        milnor::SimplicialElement e{q, w};
        Series emb = magnus_embed(w, q, max_deg, p);
        for (int j = 0; j <= q; ++j) {
            expect_eq(cc, magnus_embed(milnor::face(j, e).w, q - 1, max_deg, p),
                      face_series(j, emb));
            expect_eq(cc, magnus_embed(milnor::degeneracy(j, e).w, q + 1, max_deg, p),
                      degeneracy_series(j, emb));
        }
        int n = q - 1;
        for (int k = -1; k <= n - 1; ++k)
            for (int sign : {+1, -1}) {
                braid::BraidWord bw{n, {{k, sign}}};
                expect_eq(cc, magnus_embed(braid::act(bw, e).w, q, max_deg, p),
                          act_series(bw, emb));
            }
    }
    return cc;
}

CheckCounts verify_dbar0_decomposition(int q, int max_deg, std::uint32_t p, int samples,
                                       std::uint64_t seed)
{
    if (q < 1) throw std::invalid_argument("verify_dbar0_decomposition: q < 1");
    if (samples < 0) throw std::invalid_argument("verify_dbar0_decomposition: samples < 0");
    check_params(q, max_deg, p);
    CheckCounts cc;
    PDelta pd(q, max_deg, p);
    std::vector<Series> pool;
    pool.push_back(series_zero(q, max_deg, p));
    for (int j = 0; j < q; ++j) pool.push_back(series_var(q, max_deg, p, j));
    SplitMix64 rng{seed};
    int len_cap = std::min(max_deg, 6);
    for (int s = 0; s < samples; ++s) {
        Series f = series_zero(q, max_deg, p);
        int nterms = 1 + static_cast<int>(rng.below(12));
        for (int t = 0; t < nterms; ++t) {
            int len = static_cast<int>(rng.below(static_cast<std::uint64_t>(len_cap) + 1));
            std::vector<int> letters(static_cast<std::size_t>(len));
            for (auto& l : letters) l = static_cast<int>(rng.below(static_cast<std::uint64_t>(q)));
            std::int64_t c = rng.range(-9, 9);
            if (c == 0) c = 1;
            add_term(f, mono_from_letters(letters), Int(static_cast<long>(c)));
        }
        pool.push_back(std::move(f));
    }
    for (const auto& f : pool) {
        Series rhs = series_zero(q - 1, max_deg, p);
        for (int i = 0; i <= max_deg; ++i) rhs = add(rhs, pd.apply(i, f));
        expect_eq(cc, dbar0(f), rhs);
    }
    return cc;
}

CheckCounts verify_cycle_series_equivalence(int dim, int len_cap, int max_deg, int samples,
                                            std::uint64_t seed)
{
    if (dim < 1 || len_cap < 1 || samples < 1)
        throw std::invalid_argument("verify_cycle_series_equivalence: bad parameters");
    check_params(dim, max_deg, 0);
    CheckCounts cc;
    SplitMix64 rng{seed};
    Series target_one = series_one(dim - 1, max_deg, 0);
    for (int s = 0; s < samples; ++s) {
        milnor::SimplicialElement e{dim, random_word(rng, dim, len_cap)};
        int variant = s % 3;
        if (variant == 1) {
            e = milnor::moore_normalize(e);
        } else if (variant == 2) {
            milnor::SimplicialElement nm = milnor::moore_normalize(e);
            milnor::SimplicialElement sm = milnor::degeneracy(0, milnor::face(0, nm));
            e.w = words::conjugate(words::commutator(nm.w, sm.w), random_word(rng, dim, 2));
        }
        Series emb = magnus_embed(e.w, dim, max_deg, 0);
        bool faces_moore = true;
        for (int j = 1; j <= dim; ++j)
            if (!(face_series(j, emb) == target_one)) {
                faces_moore = false;
                break;
            }
        bool support_moore = true;
        for (const auto& term : emb.terms)
            if (term.first != mono_one() && !mono_uses_all(term.first, dim)) {
                support_moore = false;
                break;
            }
        expect_true(cc, faces_moore == support_moore);
        expect_true(cc, milnor::is_moore(e) == faces_moore);
        bool series_cycle = faces_moore && face_series(0, emb) == target_one;
        expect_true(cc, milnor::is_cycle(e) == series_cycle);
    }
    return cc;
}

CheckCounts verify_gamma_probes(int dim_max, int len_max, int samples, std::uint64_t seed)
{
    if (dim_max < 1 || len_max < 1 || samples < 1)
        throw std::invalid_argument("verify_gamma_probes: bad parameters");
    CheckCounts cc;
    SplitMix64 rng{seed};
    expect_true(cc, gamma_weight(words::word_identity(), 1, 3, 0) ==
                        GammaWeight{GammaWeight::Kind::identity, 0});
    for (int s = 0; s < samples; ++s) {
        int q = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(dim_max)));
        Word w = random_word(rng, q, len_max);
        if (w.is_identity()) w = words::word_gen(0);
        int cap = static_cast<int>(words::word_length(w));
        GammaWeight gw = gamma_weight(w, q, cap, 0);
        expect_true(cc, gw.kind == GammaWeight::Kind::finite && gw.value >= 1 && gw.value <= cap);
        if (q < 2) continue;
        Word u = random_word(rng, q, std::max(1, len_max / 2));
        Word v = random_word(rng, q, std::max(1, len_max / 2));
        Word c = words::commutator(u, v);
        if (u.is_identity() || v.is_identity() || c.is_identity()) continue;
        GammaWeight wu = gamma_weight(u, q, static_cast<int>(words::word_length(u)), 0);
        GammaWeight wv = gamma_weight(v, q, static_cast<int>(words::word_length(v)), 0);
        if (wu.kind != GammaWeight::Kind::finite || wv.kind != GammaWeight::Kind::finite) {
            expect_true(cc, false);
            continue;
        }
        auto cap_c = std::min<std::int64_t>(words::word_length(c), wu.value + wv.value + 2);
        GammaWeight gc = gamma_weight(c, q, static_cast<int>(cap_c), 0);
        // A weight past cap_c >= wt(u) + wt(v) still witnesses superadditivity.
        expect_true(cc, gc.kind == GammaWeight::Kind::exceeded ||
                            (gc.kind == GammaWeight::Kind::finite &&
                             gc.value >= wu.value + wv.value));
    }
    return cc;
}

NondegReport nondegenerate_moore_check(int q, int max_deg)
{
    if (q < 1 || q > kMaxVars)
        throw std::invalid_argument("nondegenerate_moore_check: q out of range");
    if (max_deg < 1 || max_deg > kMaxMonoLen)
        throw std::invalid_argument("nondegenerate_moore_check: max_deg out of range");
    NondegReport rep;
    rep.q = q;
    rep.max_deg = max_deg;
    for (int d = 1; d <= max_deg; ++d) {
        long long cols = 1, rows_per = 1;
        for (int i = 0; i < d; ++i) {
            cols *= q;
            rows_per *= q - 1;
            if (cols > 2'000'000)
                throw std::invalid_argument("nondegenerate_moore_check: census too large");
        }
        exactla::IntMatrix mat =
            exactla::IntMatrix::zero(static_cast<int>(rows_per * q), static_cast<int>(cols));
        std::vector<char> col_hit(static_cast<std::size_t>(cols), 0);
        std::vector<char> col_full(static_cast<std::size_t>(cols), 0);
        std::vector<int> letters(static_cast<std::size_t>(d));
        for (long long idx = 0; idx < cols; ++idx) {
            long long rest = idx;
            unsigned mask = 0;
            for (int i = d - 1; i >= 0; --i) {
                letters[static_cast<std::size_t>(i)] = static_cast<int>(rest % q);
                mask |= 1u << letters[static_cast<std::size_t>(i)];
                rest /= q;
            }
            col_full[static_cast<std::size_t>(idx)] = mask == (1u << q) - 1u;
            Series mono = series_zero(q, max_deg, 0);
            add_term(mono, mono_from_letters(letters), 1);
            for (int j = 1; j <= q; ++j) {
                Series img = face_series(j, mono);
                if (img.is_zero_series()) continue;
                if (img.terms.size() != 1 || img.terms.begin()->second != 1 ||
                    mono_length(img.terms.begin()->first) != d)
                    throw std::logic_error("nondegenerate_moore_check: face image not a monomial");
                std::uint64_t im = img.terms.begin()->first;
                long long ridx = 0;
                for (int i = 0; i < d; ++i) ridx = ridx * (q - 1) + mono_letter(im, i);
                mat.add(static_cast<int>((j - 1) * rows_per + ridx), static_cast<int>(idx), 1);
                col_hit[static_cast<std::size_t>(idx)] = 1;
            }
        }
        exactla::IntMatrix ker = exactla::kernel_basis(mat);
        long long surjections = 0;
        long long binom = 1;
        for (int i = 0; i <= q; ++i) {
            long long pw = 1;
            for (int t = 0; t < d; ++t) pw *= q - i;
            surjections += (i % 2 ? -1 : 1) * binom * pw;
            binom = binom * (q - i) / (i + 1);
        }
        NondegDegreeRow row;
        row.degree = d;
        row.kernel_dim = ker.cols;
        for (long long idx = 0; idx < cols; ++idx)
            if (col_full[static_cast<std::size_t>(idx)]) ++row.nondeg_count;
        bool support_ok = true;
        for (int r = 0; r < ker.rows; ++r)
            if (!ker.row[static_cast<std::size_t>(r)].empty() &&
                !col_full[static_cast<std::size_t>(r)])
                support_ok = false;
        for (long long idx = 0; idx < cols; ++idx)
            if (col_full[static_cast<std::size_t>(idx)] && col_hit[static_cast<std::size_t>(idx)])
                support_ok = false;
        row.ok = support_ok && row.kernel_dim == surjections && row.nondeg_count == surjections;
        rep.rows.push_back(row);
    }
    return rep;
}

} // namespace braidwork::magnus
