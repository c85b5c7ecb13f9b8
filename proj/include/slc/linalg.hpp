#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "slc/rational.hpp"

namespace slc {

/// Sparse integer row: (column, value) sorted by column, values nonzero.
using SparseRow = std::vector<std::pair<int, Int>>;

inline Int row_content(const SparseRow& r) {
    Int g = 0;
    for (const auto& [c, v] : r) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
        if (g == 1) break;
    }
    return g;
}

/// Divides by the content and makes the first nonzero entry positive.
inline void normalize_row(SparseRow& r) {
    if (r.empty()) return;
    Int g = row_content(r);
    if (sgn(r.front().second) < 0) g = -g;
    if (g != 1)
        for (auto& [c, v] : r) v /= g;
}

/// target := (p/g)*target - (t/g)*pivot_row, where p = pivot value, t =
/// target's value in the pivot column, g = gcd(p, t).  Integer-preserving;
/// the pivot column of the result is zero.
inline SparseRow eliminate_rows(const SparseRow& target, const SparseRow& pivot_row, int pivot_col,
                                std::uint64_t* work_counter = nullptr) {
    Int p, t;
    for (const auto& [c, v] : pivot_row)
        if (c == pivot_col) p = v;
    for (const auto& [c, v] : target)
        if (c == pivot_col) t = v;
    Int g;
    mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), t.get_mpz_t());
    Int a = p / g, b = t / g;
    SparseRow out;
    out.reserve(target.size() + pivot_row.size());
    size_t i = 0, j = 0;
    while (i < target.size() || j < pivot_row.size()) {
        int ci = i < target.size() ? target[i].first : INT32_MAX;
        int cj = j < pivot_row.size() ? pivot_row[j].first : INT32_MAX;
        if (ci < cj) {
            out.emplace_back(ci, a * target[i].second);
            ++i;
        } else if (cj < ci) {
            out.emplace_back(cj, -b * pivot_row[j].second);
            ++j;
        } else {
            Int v = a * target[i].second - b * pivot_row[j].second;
            if (sgn(v) != 0) out.emplace_back(ci, std::move(v));
            ++i, ++j;
        }
    }
    if (work_counter) *work_counter += out.size();
    normalize_row(out);
    return out;
}

struct EchelonResult {
    // pivot column -> index into `rows`
    std::map<int, size_t> pivot_of_col;
    std::vector<SparseRow> rows;  // echelon rows, normalized
    int ncols = 0;
    std::uint64_t work = 0;  // nonzeros touched, for budget accounting

    int rank() const { return static_cast<int>(pivot_of_col.size()); }
};

struct BudgetExceeded {};

/// Fraction-free Gaussian elimination to row echelon form.  Pivot columns
/// are taken in ascending (canonical) order; among candidate rows the
/// sparsest wins, ties broken by insertion order, so the result is
/// deterministic.  Throws BudgetExceeded when `work` passes the budget.
inline EchelonResult echelonize(std::vector<SparseRow> rows, int ncols,
                                std::uint64_t budget = UINT64_MAX) {
    EchelonResult res;
    res.ncols = ncols;
    for (auto& r : rows) normalize_row(r);

    // Bucket active rows by leading column.
    std::map<int, std::vector<size_t>> by_lead;
    std::vector<SparseRow> store = std::move(rows);
    for (size_t i = 0; i < store.size(); ++i)
        if (!store[i].empty()) by_lead[store[i].front().first].push_back(i);

    while (!by_lead.empty()) {
        auto it = by_lead.begin();
        int col = it->first;
        std::vector<size_t> bucket = std::move(it->second);
        by_lead.erase(it);

        size_t best = bucket.front();
        for (size_t idx : bucket)
            if (store[idx].size() < store[best].size() || (store[idx].size() == store[best].size() && idx < best))
                best = idx;

        res.pivot_of_col.emplace(col, res.rows.size());
        res.rows.push_back(store[best]);
        const SparseRow& prow = res.rows.back();

        for (size_t idx : bucket) {
            if (idx == best) continue;
            store[idx] = eliminate_rows(store[idx], prow, col, &res.work);
            if (res.work > budget) throw BudgetExceeded{};
            if (!store[idx].empty()) by_lead[store[idx].front().first].push_back(idx);
        }
    }
    return res;
}

/// Reduces a row against an echelon form; the remainder has no support on
/// pivot columns' leading positions.  Zero remainder <=> row in row span.
inline SparseRow reduce_row(SparseRow row, const EchelonResult& ech) {
    normalize_row(row);
    while (!row.empty()) {
        auto it = ech.pivot_of_col.find(row.front().first);
        if (it == ech.pivot_of_col.end()) break;
        row = eliminate_rows(row, ech.rows[it->second], row.front().first);
    }
    return row;
}

/// Canonical kernel basis (right null space) of the row system.
/// One vector per free column f: entry at f positive, primitive integer,
/// reduced against the pivots; vectors listed by ascending free column.
inline std::vector<std::vector<Rat>> kernel_basis(const EchelonResult& ech) {
    std::vector<std::vector<Rat>> basis;
    std::vector<int> pivot_cols;
    for (const auto& [c, r] : ech.pivot_of_col) pivot_cols.push_back(c);

    for (int f = 0; f < ech.ncols; ++f) {
        if (ech.pivot_of_col.count(f)) continue;
        std::vector<Rat> v(static_cast<size_t>(ech.ncols), Rat(0));
        v[static_cast<size_t>(f)] = 1;
        // Back-substitute pivot columns in descending order.
        for (auto it = pivot_cols.rbegin(); it != pivot_cols.rend(); ++it) {
            int c = *it;
            if (c > f) continue;  // columns beyond f are zero in v
            const SparseRow& row = ech.rows[ech.pivot_of_col.at(c)];
            Rat acc(0);
            Rat pivot;
            for (const auto& [cc, val] : row) {
                if (cc == c)
                    pivot = Rat(val);
                else
                    acc += Rat(val) * v[static_cast<size_t>(cc)];
            }
            v[static_cast<size_t>(c)] = -acc / pivot;
        }
        // Scale to a primitive integer vector with positive entry at f.
        Int lcm = 1;
        for (const auto& x : v)
            if (sgn(x) != 0) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den_mpz_t());
        Int g = 0;
        for (auto& x : v) {
            x *= Rat(lcm);
            x.canonicalize();
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_num_mpz_t());
        }
        if (g != 0 && g != 1)
            for (auto& x : v) {
                x /= Rat(g);
                x.canonicalize();
            }
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Dense rational subspace in reduced row echelon form.  Small-dimension
/// workhorse for the algebra constructors (centers, derived subalgebras,
/// divergence kernels, span membership at zoo scale).
class Subspace {
public:
    explicit Subspace(int ambient) : ambient_(ambient) {}

    int ambient() const { return ambient_; }
    int dim() const { return static_cast<int>(rows_.size()); }
    const std::vector<std::vector<Rat>>& rows() const { return rows_; }
    const std::vector<int>& pivots() const { return pivots_; }

    /// Inserts a vector; returns true when it enlarged the space.
    bool insert(std::vector<Rat> v) {
        reduce(v);
        int p = first_nonzero(v);
        if (p < 0) return false;
        Rat inv = Rat(1) / v[static_cast<size_t>(p)];
        for (auto& x : v) {
            x *= inv;
            x.canonicalize();
        }
        // keep RREF: clear column p in the existing rows
        for (auto& row : rows_) {
            const Rat& c = row[static_cast<size_t>(p)];
            if (sgn(c) == 0) continue;
            Rat f = c;
            for (size_t i = 0; i < row.size(); ++i) {
                row[i] -= f * v[i];
                row[i].canonicalize();
            }
        }
        // insert sorted by pivot for determinism
        size_t at = 0;
        while (at < pivots_.size() && pivots_[at] < p) ++at;
        rows_.insert(rows_.begin() + static_cast<long>(at), std::move(v));
        pivots_.insert(pivots_.begin() + static_cast<long>(at), p);
        return true;
    }

    bool contains(std::vector<Rat> v) const {
        reduce(v);
        return first_nonzero(v) < 0;
    }

    /// Coordinates over the RREF basis rows; nullopt when outside the span.
    std::optional<std::vector<Rat>> coords_of(std::vector<Rat> v) const {
        std::vector<Rat> coords(rows_.size(), Rat(0));
        for (size_t r = 0; r < rows_.size(); ++r) {
            const Rat& c = v[static_cast<size_t>(pivots_[r])];
            if (sgn(c) == 0) continue;
            coords[r] = c;
            Rat f = c;
            for (size_t i = 0; i < v.size(); ++i) {
                v[i] -= f * rows_[r][i];
                v[i].canonicalize();
            }
        }
        if (first_nonzero(v) >= 0) return std::nullopt;
        return coords;
    }

private:
    static int first_nonzero(const std::vector<Rat>& v) {
        for (size_t i = 0; i < v.size(); ++i)
            if (sgn(v[i]) != 0) return static_cast<int>(i);
        return -1;
    }

    void reduce(std::vector<Rat>& v) const {
        for (size_t r = 0; r < rows_.size(); ++r) {
            const Rat& c = v[static_cast<size_t>(pivots_[r])];
            if (sgn(c) == 0) continue;
            Rat f = c;
            for (size_t i = 0; i < v.size(); ++i) {
                v[i] -= f * rows_[r][i];
                v[i].canonicalize();
            }
        }
    }

    int ambient_;
    std::vector<std::vector<Rat>> rows_;
    std::vector<int> pivots_;
};

/// Dense-vector helper: expands a rational vector into a sparse integer row
/// (cleared denominators, primitive).
inline SparseRow to_sparse_row(const std::vector<Rat>& v) {
    Int lcm = 1;
    for (const auto& x : v)
        if (sgn(x) != 0) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den_mpz_t());
    SparseRow row;
    for (size_t i = 0; i < v.size(); ++i) {
        if (sgn(v[i]) == 0) continue;
        Rat y = v[i] * Rat(lcm);
        y.canonicalize();
        row.emplace_back(static_cast<int>(i), Int(y.get_num()));
    }
    normalize_row(row);
    return row;
}

inline SparseRow to_sparse_row(const std::map<int, Rat>& v) {
    Int lcm = 1;
    for (const auto& [i, x] : v)
        if (sgn(x) != 0) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den_mpz_t());
    SparseRow row;
    for (const auto& [i, x] : v) {
        if (sgn(x) == 0) continue;
        Rat y = x * Rat(lcm);
        y.canonicalize();
        row.emplace_back(i, Int(y.get_num()));
    }
    normalize_row(row);
    return row;
}

}  // namespace slc
