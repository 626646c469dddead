#include "braidwork/curtis.hpp"

#include "braidwork/magnus.hpp"
#include "braidwork/milnor.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace braidwork::curtis {

using exactla::AbelianGroup;
using exactla::IntMatrix;
using exactla::SnfResult;
using lie::BasisSymbol;
using lie::LieElement;
using magnus::Series;

namespace {

void check_ring(std::uint32_t p) {
    if (p == 1) throw std::invalid_argument("curtis: modulus must be 0 (Z) or a prime");
}

void check_bidegree(int t, int n) {
    if (t < 1) throw std::invalid_argument("curtis: weight t must be >= 1");
    if (n < 0) throw std::invalid_argument("curtis: degree n must be >= 0");
    if (t > magnus::kMaxMonoLen)
        throw std::invalid_argument("curtis: weight t exceeds the monomial capacity");
    if (n + 1 > magnus::kMaxVars)
        throw std::invalid_argument("curtis: degree n exceeds the variable capacity");
}

using Key = std::tuple<int, int, std::uint32_t>;

struct Caches {
    std::mutex mu;
    std::map<Key, std::unique_ptr<IntMatrix>> mats;
    std::map<Key, std::unique_ptr<SnfResult>> snfs;
    std::map<Key, std::unique_ptr<E1Entry>> entries;
};

Caches& caches() {
    static Caches c;
    return c;
}

// Look up key in cache (under the lock); on a miss compute outside the lock
// and insert, keeping whichever copy got there first. Computations are
// deterministic, so a lost race only costs time, never changes a result.
template <typename MapT, typename Fn>
const typename MapT::mapped_type::element_type& memoized(MapT Caches::* field, const Key& key,
                                                         Fn&& compute) {
    Caches& c = caches();
    {
        std::lock_guard<std::mutex> lock(c.mu);
        auto it = (c.*field).find(key);
        if (it != (c.*field).end()) return *it->second;
    }
    auto fresh = std::make_unique<typename MapT::mapped_type::element_type>(compute());
    std::lock_guard<std::mutex> lock(c.mu);
    auto [it, inserted] = (c.*field).try_emplace(key, std::move(fresh));
    return *it->second;
}

std::vector<Int> lie_coordinates(const LieElement& a, const std::vector<BasisSymbol>& basis,
                                 const char* what) {
    std::map<BasisSymbol, int> index;
    for (int i = 0; i < static_cast<int>(basis.size()); ++i) index.emplace(basis[i], i);
    std::vector<Int> c(basis.size(), 0);
    for (const auto& [sym, coef] : a.terms) {
        auto it = index.find(sym);
        if (it == index.end())
            throw std::invalid_argument(std::string(what) +
                                        ": element leaves the nondegenerate basis span");
        c[it->second] = coef;
    }
    return c;
}

LieElement lie_from_coordinates(const std::vector<Int>& c, const std::vector<BasisSymbol>& basis,
                                int n_vars, std::uint32_t p) {
    if (c.size() != basis.size())
        throw std::logic_error("curtis: coordinate/basis length mismatch");
    LieElement a = lie::lie_zero(n_vars, p);
    for (std::size_t i = 0; i < c.size(); ++i) lie::lie_add_term(a, basis[i], c[i]);
    return a;
}

bool all_zero(const std::vector<Int>& v) {
    for (const Int& x : v)
        if (x != 0) return false;
    return true;
}

// Weight-homogeneous class checks shared by the lift and the engine.
void check_homogeneous_nondeg(const LieElement& z, int t, const char* what) {
    for (const auto& [sym, coef] : z.terms) {
        (void)coef;
        if (lie::symbol_weight(sym, z.p) != t)
            throw std::invalid_argument(std::string(what) + ": element is not homogeneous of weight " +
                                        std::to_string(t));
        if (!magnus::mono_uses_all(sym.word, z.n_vars))
            throw std::invalid_argument(std::string(what) + ": element is not nondegenerate");
    }
}

// Exponent of a finite group as an Int; 0 encodes an infinite exponent.
Int group_exponent(const AbelianGroup& g) {
    if (g.free_rank > 0) return 0;
    if (g.torsion.empty()) return 1;
    return g.torsion.back();
}

// 2^(n-1) with saturation, for the connectivity bound.
long long connectivity_cap(int n) {
    if (n <= 0) return 0;
    if (n - 1 >= 60) return (1LL << 60);
    return 1LL << (n - 1);
}

// Differential evidence for one (source, target) pair of groups. Returns
// true when the differential is provably zero and sets the evidence kind.
bool resolve_zero(const AbelianGroup& src, const AbelianGroup& tgt, DiffEvidence* ev) {
    if (src.trivial()) {
        *ev = DiffEvidence::trivial_source;
        return true;
    }
    if (tgt.trivial()) {
        *ev = DiffEvidence::trivial_target;
        return true;
    }
    Int es = group_exponent(src);
    Int et = group_exponent(tgt);
    if (es != 0 && et != 0 && int_gcd(es, et) == 1) {
        *ev = DiffEvidence::coprime;
        return true;
    }
    return false;
}

std::string bidegree_str(int t, int n) {
    return "(" + std::to_string(t) + "," + std::to_string(n) + ")";
}

// Shared record builder: group_of(t, n) supplies the entry groups of the
// page at hand (E^1 for the record listing; later pages pass their own).
template <typename GroupFn>
std::vector<DifferentialRecord> records_r(int t_max, int n_max, int r, GroupFn&& group_of) {
    std::vector<DifferentialRecord> out;
    for (int t = 1; t <= t_max; ++t) {
        for (int n = 0; n <= n_max; ++n) {
            AbelianGroup src = group_of(t, n);
            if (src.trivial()) continue;
            DifferentialRecord rec;
            rec.source = {t, n};
            rec.r = r;
            rec.target = {t + r, n - 1};
            int gens_src = static_cast<int>(src.free_rank + src.torsion.size());
            if (n == 0) {
                rec.evidence = DiffEvidence::trivial_target;
                rec.status = RecordStatus::zero;
                rec.note = "target column is empty";
                rec.matrix = IntMatrix::zero(0, gens_src);
            } else if (t + r <= t_max) {
                AbelianGroup tgt = group_of(t + r, n - 1);
                DiffEvidence ev;
                if (resolve_zero(src, tgt, &ev)) {
                    rec.evidence = ev;
                    rec.status = RecordStatus::zero;
                    rec.matrix = IntMatrix::zero(
                        static_cast<int>(tgt.free_rank + tgt.torsion.size()), gens_src);
                    rec.note = ev == DiffEvidence::trivial_target ? "target group vanishes"
                               : ev == DiffEvidence::coprime
                                   ? "source and target exponents are coprime"
                                   : "";
                } else {
                    rec.evidence = DiffEvidence::engine;
                    rec.status = RecordStatus::undetermined;
                    rec.note = "undetermined (needs the series engine)";
                }
            } else if (static_cast<long long>(t) + r > connectivity_cap(n - 1)) {
                rec.evidence = DiffEvidence::connectivity;
                rec.status = RecordStatus::zero;
                rec.matrix = IntMatrix::zero(0, gens_src);
                rec.note = "target weight exceeds the connectivity bound";
            } else {
                rec.evidence = DiffEvidence::engine;
                rec.status = RecordStatus::undetermined;
                rec.note = "undetermined (target beyond the weight cap)";
            }
            out.push_back(std::move(rec));
        }
    }
    return out;
}

} // namespace

const IntMatrix& boundary_matrix(int t, int q, std::uint32_t p) {
    check_ring(p);
    check_bidegree(t, q > 0 ? q - 1 : 0);
    if (q < 1) throw std::invalid_argument("curtis: boundary matrix needs q >= 1");
    return memoized(&Caches::mats, Key{t, q, p},
                    [&] { return lie::moore_boundary_matrix(t, q, p); });
}

const SnfResult& boundary_snf(int t, int q, std::uint32_t p) {
    const IntMatrix& m = boundary_matrix(t, q, p);
    return memoized(&Caches::snfs, Key{t, q, p}, [&] { return exactla::smith_normal_form(m); });
}

AbelianGroup e1_group(int t, int n, std::uint32_t p) {
    check_ring(p);
    check_bidegree(t, n);
    if (n == 0 || static_cast<int>(lie::nondegenerate_basis(t, n, p).size()) == 0) return {};
    if (p == 0) {
        int mid = static_cast<int>(lie::nondegenerate_basis(t, n, 0).size());
        return exactla::homology_from_snf(mid, boundary_snf(t, n + 1, 0), boundary_snf(t, n, 0));
    }
    std::int64_t dim = e1_modp_dim(t, n, p, p);
    AbelianGroup g;
    g.torsion.assign(static_cast<std::size_t>(dim), Int(p));
    return g;
}

std::int64_t e1_modp_dim(int t, int n, std::uint32_t p, std::uint32_t q) {
    check_ring(p);
    check_bidegree(t, n);
    if (q < 2) throw std::invalid_argument("curtis: coefficient prime must be >= 2");
    if (p != 0 && p != q)
        throw std::invalid_argument("curtis: restricted complex mod p reduces mod p only");
    if (n == 0) return 0;
    std::int64_t mid = static_cast<std::int64_t>(lie::nondegenerate_basis(t, n, p).size());
    if (mid == 0) return 0;
    std::int64_t rank_out = exactla::modp_rank(boundary_matrix(t, n, p), q);
    std::int64_t rank_in = exactla::modp_rank(boundary_matrix(t, n + 1, p), q);
    return mid - rank_out - rank_in;
}

E1Entry e1_entry(int t, int n, std::uint32_t p) {
    check_ring(p);
    check_bidegree(t, n);
    return memoized(&Caches::entries, Key{t, n, p}, [&] {
        E1Entry e;
        e.bidegree = {t, n};
        e.basis = lie::nondegenerate_basis(t, n, p);
        e.group = e1_group(t, n, p);
        if (p != 0 || e.group.trivial() || n == 0) return e;
        const IntMatrix& inner = boundary_matrix(t, n + 1, 0);
        const IntMatrix& outer = boundary_matrix(t, n, 0);
        // The generator lift runs dense transforms; skip it (with a flag)
        // when the lattice is too large, keeping the group itself exact.
        if (inner.rows > 1500 || inner.cols > 4000) {
            e.generators_omitted = true;
            return e;
        }
        exactla::QuotientPresentation qp = exactla::quotient_presentation(inner, outer);
        std::vector<Int> tors;
        std::int64_t free_count = 0;
        for (std::size_t i = 0; i < qp.gens.size(); ++i) {
            e.cycle_basis.push_back(lie_from_coordinates(qp.gens[i], e.basis, n, 0));
            e.cycle_orders.push_back(qp.orders[i]);
            if (qp.orders[i] == 0)
                ++free_count;
            else
                tors.push_back(qp.orders[i]);
            std::vector<Int> img = exactla::matvec(outer, qp.gens[i]);
            if (!all_zero(img))
                throw std::logic_error("curtis: lifted homology generator is not a cycle");
        }
        std::sort(tors.begin(), tors.end());
        if (free_count != e.group.free_rank || tors != e.group.torsion)
            throw std::logic_error("curtis: generator presentation disagrees with the group");
        return e;
    });
}

MooreRepresentative lift_to_moore_representative(const LieElement& z, int t) {
    check_ring(z.p);
    check_bidegree(t, std::max(z.n_vars - 1, 0));
    check_homogeneous_nondeg(z, t, "lift_to_moore_representative");
    int n = z.n_vars;
    MooreRepresentative rep;
    rep.alpha = z;
    rep.weight = t;
    words::Word w = words::word_identity();
    for (const auto& [sym, coef] : z.terms) {
        if (!fits_int64(coef))
            throw std::invalid_argument("lift_to_moore_representative: coefficient too large");
        w = words::mul(w, words::power(lie::group_bracket(sym, z.p), to_int64(coef)));
    }
    rep.word = w;
    if (!milnor::is_moore({n, rep.word}))
        throw std::logic_error("lift_to_moore_representative: word is not in the Moore subgroup");
    Series emb = magnus::magnus_embed(rep.word, n, t, z.p);
    for (int i = 1; i < t; ++i)
        if (!magnus::q_component(i, emb).is_zero_series())
            throw std::logic_error(
                "lift_to_moore_representative: word has filtration weight below " +
                std::to_string(t));
    if (!(magnus::q_component(t, emb) == lie::tensor_expand(z, t)))
        throw std::logic_error(
            "lift_to_moore_representative: leading series term does not match the class");
    return rep;
}

LieElement engine_twist(const LieElement& a, int t) {
    LieElement out = lie::lie_zero(a.n_vars, a.p);
    for (const auto& [sym, coef] : a.terms) {
        int len = magnus::mono_length(sym.word);
        int weight = lie::symbol_weight(sym, a.p);
        if (weight != t)
            throw std::invalid_argument("engine_twist: element is not homogeneous of weight " +
                                        std::to_string(t));
        int zeros = 0;
        for (int i = 0; i < len; ++i)
            if (magnus::mono_letter(sym.word, i) == 0) ++zeros;
        long long zeros_total = static_cast<long long>(zeros) * (weight / len);
        bool flip = ((t + 1 + zeros_total) % 2) != 0;
        lie::lie_add_term(out, sym, flip ? Int(-coef) : coef);
    }
    return out;
}

DifferentialResult differential(const LieElement& alpha, int t, int r_max, int D_budget) {
    if (alpha.p != 0)
        throw std::invalid_argument("differential: the series engine runs over Z");
    check_bidegree(t, std::max(alpha.n_vars - 1, 0));
    if (r_max < 1) throw std::invalid_argument("differential: r_max must be >= 1");
    if (t + r_max > D_budget)
        throw std::invalid_argument("differential: needs D_budget >= t + r_max");
    if (D_budget > magnus::kMaxMonoLen)
        throw std::invalid_argument("differential: degree budget exceeds the monomial capacity");
    check_homogeneous_nondeg(alpha, t, "differential");

    DifferentialResult res;
    int n = alpha.n_vars;
    if (alpha.is_zero()) {
        res.status = DiffStatus::survives;
        res.r = r_max;
        res.target = lie::lie_zero(std::max(n - 1, 0), 0);
        res.certificate.push_back("zero class; nothing to transgress");
        return res;
    }
    if (n < 1) throw std::invalid_argument("differential: needs degree n >= 1");

    std::vector<BasisSymbol> basis_src = lie::nondegenerate_basis(t, n, 0);
    std::vector<Int> coords = lie_coordinates(alpha, basis_src, "differential");
    if (n >= 2 && !all_zero(exactla::matvec(boundary_matrix(t, n, 0), coords)))
        throw std::invalid_argument("differential: class is not a cycle");

    res.target = lie::lie_zero(n - 1, 0);
    LieElement beta = engine_twist(alpha, t);
    words::Word w = lift_to_moore_representative(beta, t).word;
    magnus::PDelta P(n, D_budget, 0);

    // Graded components w_d = q_d(e(w)) for the page sums
    // S_j = sum_{i=0..j} P^i(w_{t+j-i}); recomputed after each adjustment.
    std::vector<Series> comp(static_cast<std::size_t>(D_budget) + 1,
                             magnus::series_zero(n, D_budget, 0));
    auto refresh = [&] {
        Series emb = magnus::magnus_embed(w, n, D_budget, 0);
        for (int d = t; d <= D_budget; ++d) comp[static_cast<std::size_t>(d)] = magnus::q_component(d, emb);
    };
    auto page_sum = [&](int j) {
        Series s = magnus::series_zero(n - 1, D_budget, 0);
        for (int i = 0; i <= j; ++i)
            s = magnus::add(s, P.apply(i, comp[static_cast<std::size_t>(t + j - i)]));
        return s;
    };
    refresh();

    if (!page_sum(0).is_zero_series())
        throw std::logic_error("differential: cycle sanity failed (S_0 != 0)");
    res.certificate.push_back("r=0: S_0 = 0 (cycle sanity)");

    for (int j = 1; j <= r_max; ++j) {
        Series sj = page_sum(j);
        if (sj.is_zero_series()) {
            res.certificate.push_back("r=" + std::to_string(j) + ": S_" + std::to_string(j) +
                                      " = 0");
            continue;
        }
        LieElement rec;
        try {
            rec = lie::lie_recognize(magnus::neg(sj));
        } catch (const std::domain_error&) {
            throw std::logic_error("differential: page value is not a Lie element");
        }
        check_homogeneous_nondeg(rec, t + j, "differential page value");
        std::vector<BasisSymbol> basis_tgt = lie::nondegenerate_basis(t + j, n - 1, 0);
        std::vector<Int> c_rec = lie_coordinates(rec, basis_tgt, "differential page value");
        if (n - 1 >= 2 &&
            !all_zero(exactla::matvec(boundary_matrix(t + j, n - 1, 0), c_rec)))
            throw std::logic_error("differential: page value is not a cycle");

        auto sol = exactla::solve_integer(boundary_matrix(t + j, n, 0), c_rec);
        if (!sol) {
            res.status = DiffStatus::hit;
            res.r = j;
            res.target = rec;
            res.certificate.push_back("r=" + std::to_string(j) +
                                      ": nonzero class, d^" + std::to_string(j) + " = [" +
                                      lie::format_lie(rec) + "]");
            return res;
        }

        // The class is a boundary: adjust the representative by a lifted
        // correction of weight t+j and re-run the same page, which must now
        // vanish exactly (the correction cancels S_j without touching the
        // lower pages).
        std::vector<BasisSymbol> basis_adj = lie::nondegenerate_basis(t + j, n, 0);
        LieElement eta = lie_from_coordinates(*sol, basis_adj, n, 0);
        LieElement zeta = engine_twist(eta, t + j);
        try {
            w = words::mul(w, lift_to_moore_representative(zeta, t + j).word);
        } catch (const std::invalid_argument& ex) {
            res.status = DiffStatus::undetermined;
            res.r = j;
            res.obstruction = std::string("adjustment exceeded capacity: ") + ex.what();
            res.certificate.push_back("r=" + std::to_string(j) + ": " + res.obstruction);
            return res;
        }
        ++res.adjustments;
        refresh();
        if (!page_sum(j).is_zero_series())
            throw std::logic_error("differential: adjustment failed to clear the page");
        res.certificate.push_back("r=" + std::to_string(j) +
                                  ": boundary class; representative adjusted");
    }
    res.status = DiffStatus::survives;
    res.r = r_max;
    res.certificate.push_back("survives through r = " + std::to_string(r_max));
    return res;
}

D1Report d1_crosscheck(int t, int n) {
    check_bidegree(t, n);
    if (n < 1) throw std::invalid_argument("d1_crosscheck: needs degree n >= 1");
    const E1Entry& entry = e1_entry(t, n, 0);
    D1Report rep;
    rep.source = {t, n};
    if (entry.generators_omitted)
        throw std::invalid_argument("d1_crosscheck: entry too large for generator lifting");
    std::vector<BasisSymbol> basis_tgt = lie::nondegenerate_basis(t + 1, n - 1, 0);
    for (const LieElement& alpha : entry.cycle_basis) {
        D1Line line;
        line.generator = lie::format_lie(alpha);

        DifferentialResult en = differential(alpha, t, 1, t + 1);
        LieElement value_a =
            en.status == DiffStatus::hit ? en.target : lie::lie_zero(n - 1, 0);
        line.thm_value = lie::format_lie(value_a);

        // Independent route: the word-level zeroth face of an (untwisted)
        // representative, embedded and read off in weight t+1, negated.
        words::Word w = lift_to_moore_representative(alpha, t).word;
        milnor::SimplicialElement u = milnor::face(0, {n, w});
        Series emb = magnus::magnus_embed(u.w, n - 1, t + 1, 0);
        for (int i = 1; i <= t; ++i)
            if (!magnus::q_component(i, emb).is_zero_series())
                throw std::logic_error("d1_crosscheck: face image not in filtration t+1");
        LieElement value_b = lie::lie_recognize(magnus::neg(magnus::q_component(t + 1, emb)));
        line.matrix_value = lie::format_lie(value_b);

        LieElement diff = lie::lie_sub(value_a, value_b);
        if (diff.is_zero()) {
            line.equal = true;
        } else {
            std::vector<Int> c = lie_coordinates(diff, basis_tgt, "d1_crosscheck");
            line.equal =
                static_cast<bool>(exactla::solve_integer(boundary_matrix(t + 1, n, 0), c));
        }
        rep.lines.push_back(std::move(line));
    }
    return rep;
}

std::vector<DifferentialRecord> differential_records(int t_max, int n_max, int r,
                                                     std::uint32_t p) {
    check_ring(p);
    if (t_max < 1 || n_max < 0 || r < 1)
        throw std::invalid_argument("differential_records: bad caps");
    return records_r(t_max, n_max, r, [&](int t, int n) { return e1_group(t, n, p); });
}

AbelianGroup PresentedGroup::group() const {
    SnfResult s = exactla::smith_normal_form(rels);
    AbelianGroup g;
    g.free_rank = gens - s.rank;
    for (const Int& d : s.diag)
        if (d > 1) g.torsion.push_back(d);
    return g;
}

SpectralPage e1_page(int t_max, int n_max, std::uint32_t p) {
    check_ring(p);
    SpectralPage page;
    page.r = 1;
    page.t_max = t_max;
    page.n_max = n_max;
    page.p = p;
    for (int t = 1; t <= t_max; ++t) {
        for (int n = 0; n <= n_max; ++n) {
            AbelianGroup g = e1_group(t, n, p);
            if (g.trivial()) continue;
            PresentedGroup pg;
            pg.gens = static_cast<int>(g.free_rank + g.torsion.size());
            pg.rels = IntMatrix::zero(pg.gens, static_cast<int>(g.torsion.size()));
            for (std::size_t i = 0; i < g.torsion.size(); ++i)
                pg.rels.add(static_cast<int>(g.free_rank + i), static_cast<int>(i),
                            g.torsion[i]);
            page.entries.emplace(std::make_pair(t, n), std::move(pg));
        }
    }
    page.records = records_r(t_max, n_max, 1, [&](int t, int n) { return e1_group(t, n, p); });
    for (const auto& rec : page.records)
        if (rec.status == RecordStatus::undetermined) page.undetermined.push_back(rec.source);
    return page;
}

SpectralPage page_advance(const SpectralPage& page, bool assume_zero) {
    if (!page.undetermined.empty() && !assume_zero) {
        std::ostringstream os;
        os << "page_advance: undetermined d^" << page.r << " at";
        for (const Bidegree& b : page.undetermined) os << " " << bidegree_str(b.t, b.n);
        os << " (pass assume-zero to proceed)";
        throw std::runtime_error(os.str());
    }
    auto record_for = [&](int t, int n) -> const DifferentialRecord* {
        for (const auto& rec : page.records)
            if (rec.source.t == t && rec.source.n == n &&
                rec.status != RecordStatus::undetermined)
                return &rec;
        return nullptr;
    };
    auto entry_at = [&](int t, int n) -> const PresentedGroup* {
        auto it = page.entries.find(std::make_pair(t, n));
        return it == page.entries.end() ? nullptr : &it->second;
    };

    SpectralPage next;
    next.r = page.r + 1;
    next.t_max = page.t_max;
    next.n_max = page.n_max;
    next.p = page.p;

    for (const auto& [key, pg] : page.entries) {
        auto [t, n] = key;
        const DifferentialRecord* out_rec = record_for(t, n);
        const PresentedGroup* tgt = entry_at(t + page.r, n - 1);
        // Record matrices act on presentation generators; zero records (and
        // undetermined ones, which assume_zero let through) contribute the
        // zero map. A nonzero record must match the presentation dimensions.
        IntMatrix d_out = IntMatrix::zero(tgt ? tgt->gens : 0, pg.gens);
        if (out_rec && tgt && out_rec->status == RecordStatus::nonzero) {
            if (out_rec->matrix.rows != tgt->gens || out_rec->matrix.cols != pg.gens)
                throw std::logic_error(
                    "page_advance: record matrix does not match the presentations");
            d_out = out_rec->matrix;
        }
        IntMatrix r_tgt = tgt ? tgt->rels : IntMatrix::zero(0, 0);

        // Kernel side: columns x with d_out(x) a relation of the target.
        IntMatrix stacked = IntMatrix::zero(d_out.rows, pg.gens + r_tgt.cols);
        for (int i = 0; i < d_out.rows; ++i) {
            for (const auto& [j, v] : d_out.row[i]) stacked.add(i, j, v);
            for (const auto& [j, v] : r_tgt.row[i]) stacked.add(i, pg.gens + j, v);
        }
        IntMatrix ker = exactla::kernel_basis(stacked);
        std::vector<std::vector<Int>> gens_new;
        for (int c = 0; c < ker.cols; ++c) {
            std::vector<Int> x(pg.gens, 0);
            bool nonzero = false;
            for (int i = 0; i < pg.gens; ++i) {
                x[static_cast<std::size_t>(i)] = ker.get(i, c);
                nonzero = nonzero || x[static_cast<std::size_t>(i)] != 0;
            }
            if (nonzero) gens_new.push_back(std::move(x));
        }
        int k = static_cast<int>(gens_new.size());
        IntMatrix kmat = IntMatrix::zero(pg.gens, k);
        for (int c = 0; c < k; ++c)
            for (int i = 0; i < pg.gens; ++i)
                if (gens_new[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)] != 0)
                    kmat.add(i, c, gens_new[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)]);

        // Relations: dependencies of the new generators modulo the old
        // relations, plus the image of the incoming differential.
        IntMatrix dep = IntMatrix::zero(pg.gens, k + pg.rels.cols);
        for (int i = 0; i < pg.gens; ++i) {
            for (const auto& [j, v] : kmat.row[i]) dep.add(i, j, v);
            for (const auto& [j, v] : pg.rels.row[i]) dep.add(i, k + j, v);
        }
        IntMatrix dep_ker = exactla::kernel_basis(dep);
        std::vector<std::vector<Int>> rel_cols;
        for (int c = 0; c < dep_ker.cols; ++c) {
            std::vector<Int> a(static_cast<std::size_t>(k), 0);
            bool nonzero = false;
            for (int i = 0; i < k; ++i) {
                a[static_cast<std::size_t>(i)] = dep_ker.get(i, c);
                nonzero = nonzero || a[static_cast<std::size_t>(i)] != 0;
            }
            if (nonzero) rel_cols.push_back(std::move(a));
        }
        // Incoming image: express d_in(e_i) over the new generators.
        const PresentedGroup* src = entry_at(t - page.r, n + 1);
        const DifferentialRecord* in_rec = src ? record_for(t - page.r, n + 1) : nullptr;
        if (src && in_rec && in_rec->status == RecordStatus::nonzero) {
            if (in_rec->matrix.cols != src->gens || in_rec->matrix.rows != pg.gens)
                throw std::logic_error(
                    "page_advance: record matrix does not match the presentations");
            IntMatrix solver = IntMatrix::zero(pg.gens, k + pg.rels.cols);
            for (int i = 0; i < pg.gens; ++i) {
                for (const auto& [j, v] : kmat.row[i]) solver.add(i, j, v);
                for (const auto& [j, v] : pg.rels.row[i]) solver.add(i, k + j, v);
            }
            for (int c = 0; c < src->gens; ++c) {
                std::vector<Int> v(static_cast<std::size_t>(pg.gens), 0);
                for (int i = 0; i < pg.gens; ++i) v[static_cast<std::size_t>(i)] = in_rec->matrix.get(i, c);
                auto y = exactla::solve_integer(solver, v);
                if (!y)
                    throw std::logic_error("page_advance: incoming image misses the kernel lattice");
                std::vector<Int> a(y->begin(), y->begin() + k);
                rel_cols.push_back(std::move(a));
            }
        }

        PresentedGroup pg_new;
        pg_new.gens = k;
        pg_new.rels = IntMatrix::zero(k, static_cast<int>(rel_cols.size()));
        for (std::size_t c = 0; c < rel_cols.size(); ++c)
            for (int i = 0; i < k; ++i)
                if (rel_cols[c][static_cast<std::size_t>(i)] != 0)
                    pg_new.rels.add(i, static_cast<int>(c), rel_cols[c][static_cast<std::size_t>(i)]);
        if (!pg_new.group().trivial())
            next.entries.emplace(std::make_pair(t, n), std::move(pg_new));
    }

    next.records = records_r(next.t_max, next.n_max, next.r, [&](int t, int n) {
        auto it = next.entries.find(std::make_pair(t, n));
        return it == next.entries.end() ? AbelianGroup{} : it->second.group();
    });
    for (const auto& rec : next.records)
        if (rec.status == RecordStatus::undetermined) next.undetermined.push_back(rec.source);
    return next;
}

const std::vector<std::string>& reference_stem_orders() {
    static const std::vector<std::string> ref = {"1", "inf", "inf", "2", "2", "12"};
    return ref;
}

StemReport assemble_pi(int stem_max, int t_max, std::uint32_t p, bool assume_zero) {
    if (p != 0) throw std::invalid_argument("assemble_pi: stem assembly runs over Z");
    if (stem_max < 0 || t_max < 1) throw std::invalid_argument("assemble_pi: bad caps");
    StemReport report;
    report.stem_max = stem_max;
    report.t_max = t_max;

    // Whether every differential in or out of (t, n) is provably zero across
    // all pages; evidence on E^1 exponents remains valid on later pages
    // (their entries are subquotients), as does the connectivity bound.
    auto entry_resolved = [&](int t, int n, const AbelianGroup& here) {
        for (int r = 1;; ++r) { // outgoing, target (t + r, n - 1)
            if (n - 1 < 0) break;
            long long tt = static_cast<long long>(t) + r;
            if (tt > connectivity_cap(n - 1)) break; // zero from here on
            DiffEvidence ev;
            if (tt <= t_max && resolve_zero(here, e1_group(static_cast<int>(tt), n - 1, 0), &ev))
                continue;
            if (tt > t_max) return false; // beyond caps, below the bound
            return false;                 // in caps but unresolved
        }
        for (int r = 1; r < t; ++r) { // incoming, source (t - r, n + 1)
            AbelianGroup src = e1_group(t - r, n + 1, 0);
            DiffEvidence ev;
            if (!resolve_zero(src, here, &ev)) return false;
        }
        return true;
    };

    for (int n = 0; n <= stem_max; ++n) {
        StemRow row;
        row.n = n;
        row.complete = n == 0 || t_max >= connectivity_cap(n);
        bool undetermined = false;
        Int known = 1;
        bool infinite = false;
        for (int t = 1; t <= t_max; ++t) {
            AbelianGroup g = e1_group(t, n, 0);
            if (g.trivial()) continue;
            if (!entry_resolved(t, n, g) && !assume_zero) {
                undetermined = true;
                row.graded_orders.emplace_back(t, g.order_string() + " (undetermined)");
                continue;
            }
            row.graded_orders.emplace_back(t, g.order_string());
            if (g.free_rank > 0) infinite = true;
            for (const Int& d : g.torsion) known *= d;
        }
        std::string known_str = infinite ? "inf" : known.get_str();
        if (undetermined)
            row.total_order = "undetermined";
        else if (row.complete || infinite)
            row.total_order = known_str;
        else
            row.total_order = known_str + "*k";

        if (n < static_cast<int>(reference_stem_orders().size()))
            row.reference = reference_stem_orders()[static_cast<std::size_t>(n)];
        if (row.reference.empty()) {
            row.match = "n/a";
        } else if (undetermined) {
            row.match = "undetermined";
        } else if (row.complete || infinite) {
            row.match = row.total_order == row.reference ? "yes" : "no";
        } else if (row.reference == "inf") {
            row.match = "consistent (partial)";
        } else {
            Int ref(row.reference);
            row.match = (known != 0 && ref % known == 0) ? "consistent (partial)" : "no";
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

bool is_twice_prime_power(int t, int* p_out, int* s_out) {
    if (t < 4 || t % 2 != 0) return false;
    int h = t / 2;
    int p = 0;
    for (int d = 2; d * d <= h; ++d) {
        if (h % d == 0) {
            p = d;
            break;
        }
    }
    if (p == 0) p = h; // h itself prime
    int s = 0;
    int rest = h;
    while (rest % p == 0) {
        rest /= p;
        ++s;
    }
    if (rest != 1) return false;
    if (p_out) *p_out = p;
    if (s_out) *s_out = s;
    return true;
}

bool is_restricted_power_weight(int t, std::uint32_t p, int* s_out) {
    if (t < 2 || p < 2) return false;
    int s = 0;
    int rest = t;
    while (rest % static_cast<int>(p) == 0) {
        rest /= static_cast<int>(p);
        ++s;
    }
    if (rest != 1 || s < 1) return false;
    if (s_out) *s_out = s;
    return true;
}

namespace {

// Admissible page indices r = 2p^u - 2p^s (u > s >= 0) for some prime p.
bool admissible_page(int r) {
    if (r < 2 || r % 2 != 0) return false;
    long long half = r / 2; // p^u - p^s = half with u > s forces p^s (p-1) <= half
    auto is_prime = [](long long m) {
        if (m < 2) return false;
        for (long long d = 2; d * d <= m; ++d)
            if (m % d == 0) return false;
        return true;
    };
    for (long long p = 2; p - 1 <= half; ++p) {
        if (!is_prime(p)) continue;
        for (long long ps = 1; ps * (p - 1) <= half; ps *= p) {
            long long pu = half + ps;
            while (pu % p == 0) pu /= p;
            if (pu == 1) return true;
        }
    }
    return false;
}

} // namespace

VanishingReport vanishing_report(int t_max, int n_max, std::uint32_t p) {
    check_ring(p);
    VanishingReport report;
    for (int t = 1; t <= t_max; ++t) {
        for (int n = 0; n <= n_max; ++n) {
            AbelianGroup g = e1_group(t, n, p);
            VanishingRow row;
            row.t = t;
            row.n = n;
            row.group = g.to_string();
            int prime = 0;
            bool twice = is_twice_prime_power(t, &prime, nullptr);
            // Over Z/p the restricted p^s-power symbols populate t = p^s too.
            bool restricted_power = p >= 2 && is_restricted_power_weight(t, p);
            if (restricted_power && !twice) prime = static_cast<int>(p);
            row.allowed_nonzero = t == 1 || t == 2 || twice || restricted_power;
            if (g.trivial()) {
                row.ok = true;
            } else if (!row.allowed_nonzero) {
                row.ok = false;
            } else if (t >= 4 || restricted_power) {
                row.ok = g.free_rank == 0;
                for (const Int& d : g.torsion)
                    if (d != prime) row.ok = false;
            } else {
                row.ok = true;
            }
            report.rows.push_back(row);
        }
    }
    for (int r = 1; r < t_max; ++r) {
        for (const auto& rec : differential_records(t_max, n_max, r, p)) {
            if (rec.status != RecordStatus::nonzero) continue;
            if (!admissible_page(rec.r))
                report.flagged.push_back("d^" + std::to_string(rec.r) + " at " +
                                         bidegree_str(rec.source.t, rec.source.n) +
                                         " off the 2p^u-2p^s page pattern");
        }
    }
    return report;
}

} // namespace braidwork::curtis
