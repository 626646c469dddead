#include "braidwork/exactla.hpp"

#include "braidwork/rng.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cstdlib>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace braidwork::exactla {

// ---------------------------------------------------------------- IntMatrix

IntMatrix IntMatrix::zero(int r, int c) {
    IntMatrix m;
    m.rows = r;
    m.cols = c;
    m.row.resize(r);
    return m;
}

IntMatrix IntMatrix::identity(int n) {
    IntMatrix m = zero(n, n);
    for (int i = 0; i < n; ++i) m.row[i].push_back({i, Int(1)});
    return m;
}

IntMatrix IntMatrix::from_dense(const std::vector<std::vector<long long>>& d) {
    IntMatrix m = zero(static_cast<int>(d.size()), d.empty() ? 0 : static_cast<int>(d[0].size()));
    for (int i = 0; i < m.rows; ++i) {
        if (static_cast<int>(d[i].size()) != m.cols)
            throw std::invalid_argument("from_dense: ragged input");
        for (int j = 0; j < m.cols; ++j)
            if (d[i][j] != 0) m.row[i].push_back({j, Int(static_cast<long>(d[i][j]))});
    }
    return m;
}

void IntMatrix::add(int i, int j, const Int& v) {
    if (v == 0) return;
    auto& r = row.at(i);
    auto it = std::lower_bound(r.begin(), r.end(), j,
                               [](const auto& e, int col) { return e.first < col; });
    if (it != r.end() && it->first == j) {
        it->second += v;
        if (it->second == 0) r.erase(it);
    } else {
        r.insert(it, {j, v});
    }
}

Int IntMatrix::get(int i, int j) const {
    const auto& r = row.at(i);
    auto it = std::lower_bound(r.begin(), r.end(), j,
                               [](const auto& e, int col) { return e.first < col; });
    if (it != r.end() && it->first == j) return it->second;
    return Int(0);
}

std::int64_t IntMatrix::nnz() const {
    std::int64_t n = 0;
    for (const auto& r : row) n += static_cast<std::int64_t>(r.size());
    return n;
}

IntMatrix transpose(const IntMatrix& a) {
    IntMatrix t = IntMatrix::zero(a.cols, a.rows);
    for (int i = 0; i < a.rows; ++i)
        for (const auto& [j, v] : a.row[i]) t.row[j].push_back({i, v});
    return t; // rows come out sorted because i increases
}

IntMatrix matmul(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols != b.rows) throw std::invalid_argument("matmul: shape mismatch");
    IntMatrix c = IntMatrix::zero(a.rows, b.cols);
    std::unordered_map<int, Int> acc;
    for (int i = 0; i < a.rows; ++i) {
        acc.clear();
        for (const auto& [k, va] : a.row[i])
            for (const auto& [j, vb] : b.row[k]) acc[j] += va * vb;
        auto& out = c.row[i];
        for (auto& [j, v] : acc)
            if (v != 0) out.push_back({j, v});
        std::sort(out.begin(), out.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
    }
    return c;
}

bool is_zero(const IntMatrix& a) {
    for (const auto& r : a.row)
        if (!r.empty()) return false;
    return true;
}

std::vector<Int> matvec(const IntMatrix& a, const std::vector<Int>& x) {
    if (static_cast<int>(x.size()) != a.cols) throw std::invalid_argument("matvec: shape mismatch");
    std::vector<Int> y(a.rows, Int(0));
    for (int i = 0; i < a.rows; ++i)
        for (const auto& [j, v] : a.row[i]) y[i] += v * x[j];
    return y;
}

// ------------------------------------------------------ sparse elimination

namespace {

struct EscalateToBig {};

// Coefficient traits: int64 with overflow checks, or mpz.
struct I64 {
    using T = long long;
    static T add(T a, T b) {
        T r;
        if (__builtin_add_overflow(a, b, &r) || std::llabs(r) > (1ll << 62)) throw EscalateToBig{};
        return r;
    }
    static T mul(T a, T b) {
        T r;
        if (__builtin_mul_overflow(a, b, &r) || std::llabs(r) > (1ll << 62)) throw EscalateToBig{};
        return r;
    }
    static bool is_unit(T a) { return a == 1 || a == -1; }
    static Int to_int(T a) { return Int(static_cast<long>(a)); }
};

struct IBig {
    using T = Int;
    static T add(const T& a, const T& b) { return a + b; }
    static T mul(const T& a, const T& b) { return a * b; }
    static bool is_unit(const T& a) { return a == 1 || a == -1; }
    static Int to_int(const T& a) { return a; }
};

// Deadline helper.
struct Budget {
    std::chrono::steady_clock::time_point end;
    bool active = false;
    int counter = 0;
    explicit Budget(std::int64_t ms) {
        if (ms > 0) {
            active = true;
            end = std::chrono::steady_clock::now() + std::chrono::milliseconds(ms);
        }
    }
    bool exceeded() {
        if (!active) return false;
        if (++counter & 0xff) return false;
        return std::chrono::steady_clock::now() > end;
    }
};

template <class Tr>
class SparseElim {
    using T = typename Tr::T;

  public:
    SparseElim(const IntMatrix& a, Budget& budget) : budget_(budget) {
        m_ = a.rows;
        n_ = a.cols;
        R_.resize(m_);
        C_.resize(n_);
        row_gen_.assign(m_, 0);
        for (int i = 0; i < m_; ++i)
            for (const auto& [j, v] : a.row[i]) {
                T t = load(v);
                if (t != T(0)) {
                    R_[i].emplace(j, t);
                    C_[j].insert(i);
                }
            }
    }

    // Run to completion; returns false if the budget ran out.
    bool run(std::vector<Int>& factors) {
        if (!unit_phase(factors)) return false;
        return general_phase(factors);
    }

  private:
    static T load(const Int& v) {
        if constexpr (std::is_same_v<T, long long>) {
            if (!v.fits_slong_p()) throw EscalateToBig{};
            return static_cast<long long>(v.get_si());
        } else {
            return v;
        }
    }

    std::size_t row_nnz(int i) const { return R_[i].size(); }
    std::size_t col_nnz(int j) const { return C_[j].size(); }

    std::int64_t score(int i, int j) const {
        return static_cast<std::int64_t>(row_nnz(i) - 1) *
               static_cast<std::int64_t>(col_nnz(j) - 1);
    }

    void erase_entry(int i, int j) {
        R_[i].erase(j);
        C_[j].erase(i);
    }

    void set_entry(int i, int j, const T& v) {
        auto it = R_[i].find(j);
        if (v == T(0)) {
            if (it != R_[i].end()) erase_entry(i, j);
            return;
        }
        if (it == R_[i].end()) {
            R_[i].emplace(j, v);
            C_[j].insert(i);
        } else {
            it->second = v;
        }
    }

    // rows[i2] -= q * rows[i1]
    void row_op(int i2, int i1, const T& q) {
        ++row_gen_[i2];
        for (const auto& [j, v] : R_[i1]) {
            T delta = Tr::mul(q, v);
            auto it = R_[i2].find(j);
            if (it == R_[i2].end()) {
                T nv = Tr::add(T(0), T(-delta));
                if (nv != T(0)) {
                    R_[i2].emplace(j, nv);
                    C_[j].insert(i2);
                }
            } else {
                it->second = Tr::add(it->second, T(-delta));
                if (it->second == T(0)) {
                    R_[i2].erase(it);
                    C_[j].erase(i2);
                }
            }
        }
    }

    // cols[j2] -= q * cols[j1]
    void col_op(int j2, int j1, const T& q) {
        std::vector<int> rows_of_j1(C_[j1].begin(), C_[j1].end());
        for (int i : rows_of_j1) {
            ++row_gen_[i];
            T delta = Tr::mul(q, R_[i][j1]);
            auto it = R_[i].find(j2);
            if (it == R_[i].end()) {
                T nv = Tr::add(T(0), T(-delta));
                if (nv != T(0)) {
                    R_[i].emplace(j2, nv);
                    C_[j2].insert(i);
                }
            } else {
                it->second = Tr::add(it->second, T(-delta));
                if (it->second == T(0)) {
                    R_[i].erase(it);
                    C_[j2].erase(i);
                }
            }
        }
    }

    // Remove pivot row/col from the working set after recording the factor.
    void retire(int i, int j) {
        for (const auto& [jj, v] : R_[i]) C_[jj].erase(i);
        R_[i].clear();
        // Column j should already only contain row i at this point.
        C_[j].clear();
    }

    bool unit_phase(std::vector<Int>& factors) {
        struct Cand {
            std::int64_t score;
            int i, j;
            std::uint64_t gen;
            bool operator>(const Cand& o) const {
                return std::tie(score, i, j) > std::tie(o.score, o.i, o.j);
            }
        };
        std::priority_queue<Cand, std::vector<Cand>, std::greater<Cand>> heap;
        auto push_row = [&](int i) {
            for (const auto& [j, v] : R_[i])
                if (Tr::is_unit(v)) heap.push({score(i, j), i, j, row_gen_[i]});
        };
        for (int i = 0; i < m_; ++i) push_row(i);
        while (!heap.empty()) {
            if (budget_.exceeded()) return false;
            Cand c = heap.top();
            heap.pop();
            if (c.gen != row_gen_[c.i]) {
                // Stale candidate: refresh the row at most once per generation.
                auto& mark = rescan_mark_[c.i];
                if (!R_[c.i].empty() && mark < row_gen_[c.i]) {
                    mark = row_gen_[c.i];
                    push_row(c.i);
                }
                continue;
            }
            auto it = R_[c.i].find(c.j);
            if (it == R_[c.i].end() || !Tr::is_unit(it->second)) continue;
            eliminate_unit(c.i, c.j, it->second);
            factors.push_back(Int(1));
            // Touched rows may have new unit entries; lazily requeue them on
            // staleness (handled above) plus requeue rows of the pivot column
            // neighborhood now for progress.
        }
        // Second sweep: some rows may hold unit entries whose candidates were
        // dropped as stale; loop until no unit entries remain.
        bool again = true;
        while (again) {
            again = false;
            for (int i = 0; i < m_; ++i) {
                if (budget_.exceeded()) return false;
                for (const auto& [j, v] : R_[i])
                    if (Tr::is_unit(v)) {
                        eliminate_unit(i, j, v);
                        factors.push_back(Int(1));
                        again = true;
                        break;
                    }
            }
        }
        return true;
    }

    void eliminate_unit(int i, int j, T v) {
        // v = +-1: clear column j with row ops, then drop row i and column j.
        std::vector<int> col_rows(C_[j].begin(), C_[j].end());
        std::sort(col_rows.begin(), col_rows.end());
        for (int i2 : col_rows) {
            if (i2 == i) continue;
            // q = R_[i2][j] / v  (v unit)
            T q = (v == T(1)) ? R_[i2][j] : T(-R_[i2][j]);
            row_op(i2, i, q);
        }
        ++row_gen_[i];
        retire(i, j);
    }

    bool general_phase(std::vector<Int>& factors) {
        for (;;) {
            if (budget_.exceeded()) return false;
            // Global minimal |value| pivot, tie-broken by fill score, (i, j).
            int pi = -1, pj = -1;
            T pv{};
            std::int64_t psc = 0;
            for (int i = 0; i < m_; ++i)
                for (const auto& [j, v] : R_[i]) {
                    T a = v < T(0) ? T(-v) : v;
                    if (pi < 0) goto take;
                    {
                        T pa = pv < T(0) ? T(-pv) : pv;
                        if (a < pa) goto take;
                        if (a == pa) {
                            std::int64_t sc = score(i, j);
                            if (sc < psc || (sc == psc && std::tie(i, j) < std::tie(pi, pj)))
                                goto take;
                        }
                    }
                    continue;
                take:
                    pi = i;
                    pj = j;
                    pv = v;
                    psc = score(i, j);
                }
            if (pi < 0) return true; // empty
            if (Tr::is_unit(pv)) {   // can appear after earlier reductions
                eliminate_unit(pi, pj, pv);
                factors.push_back(Int(1));
                continue;
            }
            // Reduce the pivot column and row; restart selection whenever a
            // strictly smaller remainder appears.
            bool reduced = false;
            std::vector<int> col_rows(C_[pj].begin(), C_[pj].end());
            std::sort(col_rows.begin(), col_rows.end());
            for (int i2 : col_rows) {
                if (i2 == pi) continue;
                T a = R_[i2][pj];
                T q = quot(a, pv);
                if (q != T(0)) row_op(i2, pi, q);
                if (R_[i2].count(pj)) reduced = true; // nonzero remainder < |pv|
            }
            if (reduced) continue;
            std::vector<int> row_cols;
            row_cols.reserve(R_[pi].size());
            for (const auto& [j, v] : R_[pi])
                if (j != pj) row_cols.push_back(j);
            std::sort(row_cols.begin(), row_cols.end());
            for (int j2 : row_cols) {
                T a = R_[pi][j2];
                T q = quot(a, pv);
                if (q != T(0)) col_op(j2, pj, q);
                if (R_[pi].count(j2)) reduced = true;
            }
            if (reduced) continue;
            // Lone pivot: record and retire.
            factors.push_back(Tr::to_int(pv < T(0) ? T(-pv) : pv));
            retire(pi, pj);
        }
    }

    // Truncated quotient (remainder has |r| < |b|), exact for int64 and mpz.
    static T quot(const T& a, const T& b) {
        if constexpr (std::is_same_v<T, long long>) {
            return a / b;
        } else {
            Int q;
            mpz_tdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
            return q;
        }
    }

    int m_ = 0, n_ = 0;
    std::vector<std::unordered_map<int, T>> R_;
    std::vector<std::unordered_set<int>> C_;
    std::vector<std::uint64_t> row_gen_;
    std::unordered_map<int, std::uint64_t> rescan_mark_;
    Budget& budget_;
};

// Sort + enforce divisibility d_1 | d_2 | ... (valid for diagonal matrices:
// diag(a, b) ~ diag(gcd, lcm) under unimodular transforms).
void fix_divisibility(std::vector<Int>& d) {
    std::sort(d.begin(), d.end());
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i + 1 < d.size(); ++i) {
            if (d[i] == 0) continue;
            Int r = d[i + 1] % d[i];
            if (r != 0) {
                Int g = int_gcd(d[i], d[i + 1]);
                Int l = int_divexact(d[i] * d[i + 1], g);
                d[i] = g;
                d[i + 1] = l;
                changed = true;
            }
        }
        if (changed) std::sort(d.begin(), d.end());
    }
}

// ------------------------------------------------- dense SNF with transforms

struct DenseSnf {
    std::vector<std::vector<Int>> A, U, V, Ui, Vi;
    int m, n;

    explicit DenseSnf(const IntMatrix& a) : m(a.rows), n(a.cols) {
        A.assign(m, std::vector<Int>(n, Int(0)));
        for (int i = 0; i < m; ++i)
            for (const auto& [j, v] : a.row[i]) A[i][j] = v;
        U.assign(m, std::vector<Int>(m, Int(0)));
        Ui.assign(m, std::vector<Int>(m, Int(0)));
        V.assign(n, std::vector<Int>(n, Int(0)));
        Vi.assign(n, std::vector<Int>(n, Int(0)));
        for (int i = 0; i < m; ++i) U[i][i] = Ui[i][i] = 1;
        for (int j = 0; j < n; ++j) V[j][j] = Vi[j][j] = 1;
    }

    void row_sub(int i2, int i1, const Int& q) { // row i2 -= q row i1
        for (int j = 0; j < n; ++j) A[i2][j] -= q * A[i1][j];
        for (int j = 0; j < m; ++j) U[i2][j] -= q * U[i1][j];
        for (int i = 0; i < m; ++i) Ui[i][i1] += q * Ui[i][i2];
    }
    void col_sub(int j2, int j1, const Int& q) { // col j2 -= q col j1
        for (int i = 0; i < m; ++i) A[i][j2] -= q * A[i][j1];
        for (int i = 0; i < n; ++i) V[i][j2] -= q * V[i][j1];
        for (int j = 0; j < n; ++j) Vi[j1][j] += q * Vi[j2][j];
    }
    void row_swap(int i1, int i2) {
        if (i1 == i2) return;
        std::swap(A[i1], A[i2]);
        std::swap(U[i1], U[i2]);
        for (int i = 0; i < m; ++i) std::swap(Ui[i][i1], Ui[i][i2]);
    }
    void col_swap(int j1, int j2) {
        if (j1 == j2) return;
        for (int i = 0; i < m; ++i) std::swap(A[i][j1], A[i][j2]);
        for (int i = 0; i < n; ++i) std::swap(V[i][j1], V[i][j2]);
        std::swap(Vi[j1], Vi[j2]);
    }
    void row_negate(int i) {
        for (int j = 0; j < n; ++j) A[i][j] = -A[i][j];
        for (int j = 0; j < m; ++j) U[i][j] = -U[i][j];
        for (int k = 0; k < m; ++k) Ui[k][i] = -Ui[k][i];
    }

    void run() {
        int t = 0;
        while (t < m && t < n) {
            // Minimal |value| pivot in the trailing submatrix.
            int pi = -1, pj = -1;
            Int best;
            for (int i = t; i < m; ++i)
                for (int j = t; j < n; ++j)
                    if (A[i][j] != 0) {
                        Int a = int_abs(A[i][j]);
                        if (pi < 0 || a < best) {
                            pi = i;
                            pj = j;
                            best = a;
                        }
                    }
            if (pi < 0) break;
            row_swap(t, pi);
            col_swap(t, pj);
            bool clean = false;
            while (!clean) {
                clean = true;
                for (int i = t + 1; i < m; ++i)
                    if (A[i][t] != 0) {
                        Int q;
                        mpz_tdiv_q(q.get_mpz_t(), A[i][t].get_mpz_t(), A[t][t].get_mpz_t());
                        row_sub(i, t, q);
                        if (A[i][t] != 0) { // remainder became the smaller pivot
                            row_swap(t, i);
                            clean = false;
                        }
                    }
                for (int j = t + 1; j < n; ++j)
                    if (A[t][j] != 0) {
                        Int q;
                        mpz_tdiv_q(q.get_mpz_t(), A[t][j].get_mpz_t(), A[t][t].get_mpz_t());
                        col_sub(j, t, q);
                        if (A[t][j] != 0) {
                            col_swap(t, j);
                            clean = false;
                        }
                    }
                if (!clean) continue;
                // Divisibility: fold in a row containing a non-multiple.
                for (int i = t + 1; i < m && clean; ++i)
                    for (int j = t + 1; j < n; ++j)
                        if (A[i][j] % A[t][t] != 0) {
                            row_sub(t, i, Int(-1)); // row t += row i
                            clean = false;
                            break;
                        }
            }
            if (A[t][t] < 0) row_negate(t);
            ++t;
        }
    }
};

IntMatrix from_dense_int(const std::vector<std::vector<Int>>& d) {
    IntMatrix m = IntMatrix::zero(static_cast<int>(d.size()),
                                  d.empty() ? 0 : static_cast<int>(d[0].size()));
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j)
            if (d[i][j] != 0) m.row[i].push_back({j, d[i][j]});
    return m;
}

} // namespace

SnfResult smith_normal_form(const IntMatrix& a, const SnfOptions& opts) {
    SnfResult res;
    if (opts.want_transforms) {
        if (static_cast<std::int64_t>(a.rows) * a.cols > 16'000'000)
            throw std::invalid_argument("smith_normal_form: transform request too large");
        DenseSnf d(a);
        d.run();
        // The dense algorithm already enforces d_t | d_{t+1}; re-sorting here
        // would break U*A*V = D.
        for (int t = 0; t < std::min(a.rows, a.cols); ++t) {
            if (d.A[t][t] == 0) break;
            res.diag.push_back(d.A[t][t]);
        }
        res.rank = static_cast<int>(res.diag.size());
        res.U = from_dense_int(d.U);
        res.V = from_dense_int(d.V);
        res.U_inv = from_dense_int(d.Ui);
        res.V_inv = from_dense_int(d.Vi);
        return res;
    }
    Budget budget(opts.budget_ms);
    std::vector<Int> factors;
    bool done;
    try {
        SparseElim<I64> e(a, budget);
        done = e.run(factors);
    } catch (const EscalateToBig&) {
        factors.clear();
        Budget budget2(opts.budget_ms);
        SparseElim<IBig> e(a, budget2);
        done = e.run(factors);
    }
    if (!done) {
        res.completed = false;
        return res;
    }
    fix_divisibility(factors);
    res.diag = std::move(factors);
    res.rank = static_cast<int>(res.diag.size());
    return res;
}

std::int64_t modp_rank(const IntMatrix& a, std::uint32_t p) {
    if (p < 2) throw std::invalid_argument("modp_rank: p must be prime");
    if (p == 2) {
        const int words = (a.cols + 63) / 64;
        std::vector<std::vector<std::uint64_t>> pivots; // reduced pivot rows
        std::vector<int> pivot_col;
        std::int64_t rank = 0;
        std::vector<std::uint64_t> cur(words);
        for (int i = 0; i < a.rows; ++i) {
            std::fill(cur.begin(), cur.end(), 0);
            bool nonzero = false;
            for (const auto& [j, v] : a.row[i])
                if (mpz_odd_p(v.get_mpz_t())) {
                    cur[j >> 6] ^= (1ull << (j & 63));
                    nonzero = true;
                }
            if (!nonzero) continue;
            for (std::size_t k = 0; k < pivots.size(); ++k) {
                int pc = pivot_col[k];
                if (cur[pc >> 6] & (1ull << (pc & 63)))
                    for (int w = 0; w < words; ++w) cur[w] ^= pivots[k][w];
            }
            int lead = -1;
            for (int w = 0; w < words && lead < 0; ++w)
                if (cur[w]) lead = w * 64 + __builtin_ctzll(cur[w]);
            if (lead < 0) continue;
            pivots.push_back(cur);
            pivot_col.push_back(lead);
            ++rank;
        }
        return rank;
    }
    // General small prime: dense rows of residues.
    if (a.cols > 70000) throw std::invalid_argument("modp_rank: too wide for dense path");
    const std::uint64_t P = p;
    auto inv_mod = [&](std::uint64_t x) {
        // Fermat: p prime.
        std::uint64_t r = 1, b = x % P, e = P - 2;
        while (e) {
            if (e & 1) r = r * b % P;
            b = b * b % P;
            e >>= 1;
        }
        return r;
    };
    std::vector<std::vector<std::uint32_t>> pivots;
    std::vector<int> pivot_col;
    std::int64_t rank = 0;
    std::vector<std::uint32_t> cur(a.cols);
    for (int i = 0; i < a.rows; ++i) {
        std::fill(cur.begin(), cur.end(), 0);
        bool nonzero = false;
        for (const auto& [j, v] : a.row[i]) {
            Int r = v % static_cast<long>(P);
            long rv = r.get_si();
            if (rv < 0) rv += static_cast<long>(P);
            cur[j] = static_cast<std::uint32_t>(rv);
            if (cur[j]) nonzero = true;
        }
        if (!nonzero) continue;
        for (std::size_t k = 0; k < pivots.size(); ++k) {
            std::uint64_t f = cur[pivot_col[k]];
            if (!f) continue;
            const auto& pr = pivots[k];
            for (int j = 0; j < a.cols; ++j)
                if (pr[j]) cur[j] = static_cast<std::uint32_t>((cur[j] + (P - f % P) * pr[j]) % P);
        }
        int lead = -1;
        for (int j = 0; j < a.cols && lead < 0; ++j)
            if (cur[j]) lead = j;
        if (lead < 0) continue;
        std::uint64_t inv = inv_mod(cur[lead]);
        for (int j = 0; j < a.cols; ++j)
            if (cur[j]) cur[j] = static_cast<std::uint32_t>(cur[j] * inv % P);
        pivots.push_back(cur);
        pivot_col.push_back(lead);
        ++rank;
    }
    return rank;
}

// ------------------------------------------------------------ Hermite solve

namespace {

// Column echelon form H = A * V with V unimodular; pivot bookkeeping for
// forward solves. Dense in mpz: intended for the modest systems that arise
// in representative adjustment and generator extraction.
struct HermiteSolver {
    std::vector<std::vector<Int>> H; // m x n
    std::vector<std::vector<Int>> V; // n x n
    std::vector<std::pair<int, int>> pivots; // (row, col) in echelon order
    int m, n;

    explicit HermiteSolver(const IntMatrix& a) : m(a.rows), n(a.cols) {
        if (static_cast<std::int64_t>(m) * n > 64'000'000)
            throw std::invalid_argument("HermiteSolver: matrix too large for dense path");
        H.assign(m, std::vector<Int>(n, Int(0)));
        for (int i = 0; i < m; ++i)
            for (const auto& [j, v] : a.row[i]) H[i][j] = v;
        V.assign(n, std::vector<Int>(n, Int(0)));
        for (int j = 0; j < n; ++j) V[j][j] = 1;

        int c0 = 0;
        for (int i = 0; i < m && c0 < n; ++i) {
            // Euclid across columns >= c0 on row i.
            for (;;) {
                int jmin = -1;
                for (int j = c0; j < n; ++j)
                    if (H[i][j] != 0 && (jmin < 0 || int_abs(H[i][j]) < int_abs(H[i][jmin])))
                        jmin = j;
                if (jmin < 0) break; // row has no support
                bool others = false;
                for (int j = c0; j < n; ++j) {
                    if (j == jmin || H[i][j] == 0) continue;
                    Int q;
                    mpz_tdiv_q(q.get_mpz_t(), H[i][j].get_mpz_t(), H[i][jmin].get_mpz_t());
                    if (q != 0) col_sub(j, jmin, q);
                    if (H[i][j] != 0) others = true;
                }
                if (!others) {
                    col_swap(c0, jmin);
                    if (H[i][c0] < 0) col_negate(c0);
                    pivots.push_back({i, c0});
                    ++c0;
                    break;
                }
            }
        }
        rank = c0;
    }

    void col_sub(int j2, int j1, const Int& q) {
        for (int i = 0; i < m; ++i) H[i][j2] -= q * H[i][j1];
        for (int i = 0; i < n; ++i) V[i][j2] -= q * V[i][j1];
    }
    void col_swap(int j1, int j2) {
        if (j1 == j2) return;
        for (int i = 0; i < m; ++i) std::swap(H[i][j1], H[i][j2]);
        for (int i = 0; i < n; ++i) std::swap(V[i][j1], V[i][j2]);
    }
    void col_negate(int j) {
        for (int i = 0; i < m; ++i) H[i][j] = -H[i][j];
        for (int i = 0; i < n; ++i) V[i][j] = -V[i][j];
    }

    std::optional<std::vector<Int>> solve(const std::vector<Int>& b) const {
        if (static_cast<int>(b.size()) != m) throw std::invalid_argument("solve: bad rhs size");
        std::vector<Int> r = b, y(n, Int(0));
        for (const auto& [pi, pj] : pivots) {
            if (r[pi] == 0) continue;
            Int q, rem;
            mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), r[pi].get_mpz_t(), H[pi][pj].get_mpz_t());
            if (rem != 0) return std::nullopt;
            y[pj] = q;
            for (int i = 0; i < m; ++i) r[i] -= q * H[i][pj];
        }
        for (int i = 0; i < m; ++i)
            if (r[i] != 0) return std::nullopt;
        // x = V y.
        std::vector<Int> x(n, Int(0));
        for (int jj = 0; jj < n; ++jj) {
            if (y[jj] == 0) continue;
            for (int i = 0; i < n; ++i) x[i] += V[i][jj] * y[jj];
        }
        return x;
    }

    int rank = 0;
};

} // namespace

std::optional<std::vector<Int>> solve_integer(const IntMatrix& a, const std::vector<Int>& b) {
    HermiteSolver hs(a);
    return hs.solve(b);
}

IntMatrix kernel_basis(const IntMatrix& a) {
    HermiteSolver hs(a);
    IntMatrix k = IntMatrix::zero(a.cols, a.cols - hs.rank);
    for (int t = hs.rank; t < a.cols; ++t)
        for (int i = 0; i < a.cols; ++i)
            if (hs.V[i][t] != 0) k.row[i].push_back({t - hs.rank, hs.V[i][t]});
    return k;
}

// ------------------------------------------------------------------- groups

std::string AbelianGroup::order_string() const {
    if (free_rank > 0) return "inf";
    Int o(1);
    for (const auto& d : torsion) o *= d;
    return o.get_str();
}

std::string AbelianGroup::to_string() const {
    if (trivial()) return "0";
    std::ostringstream os;
    bool first = true;
    if (free_rank == 1) {
        os << "Z";
        first = false;
    } else if (free_rank > 1) {
        os << "Z^" << free_rank;
        first = false;
    }
    for (const auto& d : torsion) {
        if (!first) os << " + ";
        os << "Z/" << d.get_str();
        first = false;
    }
    return os.str();
}

AbelianGroup homology_from_snf(int middle_dim, const SnfResult& snf_in, const SnfResult& snf_out) {
    if (!snf_in.completed || !snf_out.completed)
        throw std::invalid_argument("homology_from_snf: incomplete SNF input");
    AbelianGroup g;
    g.free_rank = middle_dim - snf_in.rank - snf_out.rank;
    if (g.free_rank < 0) throw std::logic_error("homology_from_snf: negative free rank");
    for (const auto& d : snf_in.diag)
        if (d > 1) g.torsion.push_back(d);
    return g;
}

AbelianGroup homology_at(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows != b.cols) throw std::invalid_argument("homology_at: shape mismatch");
    // Composition must vanish. Exact product when affordable, else probes.
    if (b.nnz() <= 2'000'000 && a.nnz() <= 2'000'000) {
        if (!is_zero(matmul(b, a))) throw std::invalid_argument("homology_at: B*A != 0");
    } else {
        SplitMix64 rng(0xC0FFEE);
        for (int probe = 0; probe < 8; ++probe) {
            std::vector<Int> v(a.cols);
            for (auto& x : v) x = Int(static_cast<long>(rng.range(-3, 3)));
            auto bav = matvec(b, matvec(a, v));
            for (const auto& x : bav)
                if (x != 0) throw std::invalid_argument("homology_at: B*A != 0 (probe)");
        }
    }
    auto sa = smith_normal_form(a);
    auto sb = smith_normal_form(b);
    return homology_from_snf(a.rows, sa, sb);
}

QuotientPresentation quotient_presentation(const IntMatrix& inner, const IntMatrix& outer) {
    // ker(outer) / im(inner) inside Z^b, b = inner.rows = outer.cols.
    if (inner.rows != outer.cols) throw std::invalid_argument("quotient_presentation: shape mismatch");
    const int b = inner.rows;
    IntMatrix K = kernel_basis(outer); // b x k
    const int k = K.cols;
    HermiteSolver ks(K);
    // Express inner's columns in kernel coordinates: X (k x a).
    IntMatrix innerT = transpose(inner);
    IntMatrix X = IntMatrix::zero(k, inner.cols);
    for (int j = 0; j < inner.cols; ++j) {
        std::vector<Int> col(b, Int(0));
        for (const auto& [i, v] : innerT.row[j]) col[i] = v;
        auto sol = ks.solve(col);
        if (!sol) throw std::invalid_argument("quotient_presentation: image not inside kernel");
        for (int i = 0; i < k; ++i)
            if ((*sol)[i] != 0) X.row[i].push_back({j, (*sol)[i]});
    }
    SnfOptions so;
    so.want_transforms = true;
    auto sx = smith_normal_form(X, so);
    // Quotient Z^k / im(X): generator i is column i of K * U^{-1}, with order
    // diag_i (i < rank) or 0 (free) beyond.
    IntMatrix KU = matmul(K, *sx.U_inv);
    QuotientPresentation pres;
    for (int i = 0; i < k; ++i) {
        Int order = (i < sx.rank) ? sx.diag[i] : Int(0);
        if (order == 1) continue;
        std::vector<Int> gen(b, Int(0));
        for (int r = 0; r < b; ++r) gen[r] = KU.get(r, i);
        pres.gens.push_back(std::move(gen));
        pres.orders.push_back(order);
    }
    return pres;
}

} // namespace braidwork::exactla
