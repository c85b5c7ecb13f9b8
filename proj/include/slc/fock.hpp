#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "slc/clifford.hpp"
#include "slc/hpoly.hpp"

namespace slc {

/// The Fock module of Cliff_h: the Grassmann algebra on xi_1..xi_n, with
/// xi_i acting by left multiplication and eta_i by h d/dxi_i.  The basis is
/// the 2^n monomials in canonical order, graded by monomial parity
/// (2^{n-1} even | 2^{n-1} odd).
struct FockRep {
    int n = 0;
    std::vector<std::uint32_t> basis;  // masks, canonical order
    std::vector<int> index_of_mask;
    std::vector<int> parities;

    explicit FockRep(int n_) : n(n_) {
        if (n < 0 || n > 20) throw Error("FockRep: bad n");
        size_t dim = 1ull << n;
        basis.resize(dim);
        for (size_t i = 0; i < dim; ++i) basis[i] = static_cast<std::uint32_t>(i);
        std::sort(basis.begin(), basis.end(), [](std::uint32_t a, std::uint32_t b) {
            int pa = __builtin_popcount(a), pb = __builtin_popcount(b);
            if (pa != pb) return pa < pb;
            if (a == b) return false;
            std::uint32_t diff = a ^ b;
            std::uint32_t low = diff & (~diff + 1);
            return (a & low) != 0;
        });
        index_of_mask.assign(dim, -1);
        parities.resize(dim);
        for (size_t i = 0; i < dim; ++i) {
            index_of_mask[basis[i]] = static_cast<int>(i);
            parities[i] = __builtin_popcount(basis[i]) & 1;
        }
    }

    size_t dim() const { return basis.size(); }

    /// Action of a normal word on a basis monomial: (mask', hpow, sign), or
    /// nullopt when it annihilates the vector.
    std::optional<std::tuple<std::uint32_t, int, int>> word_action(const CliffWord& w,
                                                                   std::uint32_t S) const {
        int hpow = 0, sign = 1;
        // rightmost generator acts first: etas descending, then xis descending
        std::uint32_t rest = w.eta;
        while (rest) {
            int j = 31 - __builtin_clz(rest);
            rest &= ~(1u << j);
            if (!(S & (1u << j))) return std::nullopt;
            if (cnt_below(S, j) & 1) sign = -sign;
            S &= ~(1u << j);
            ++hpow;
        }
        rest = w.xi;
        while (rest) {
            int i = 31 - __builtin_clz(rest);
            rest &= ~(1u << i);
            if (S & (1u << i)) return std::nullopt;
            if (cnt_below(S, i) & 1) sign = -sign;
            S |= 1u << i;
        }
        return std::make_tuple(S, hpow, sign);
    }
};

/// Square parity-graded matrix over the h-polynomial ring.
class SuperMatrix {
public:
    SuperMatrix() = default;
    SuperMatrix(std::vector<int> parities, TablePtr table)
        : parities_(std::move(parities)), table_(std::move(table)) {
        entries_.assign(dim() * dim(), HPoly::zero(table_));
    }

    size_t dim() const { return parities_.size(); }
    const std::vector<int>& parities() const { return parities_; }
    const TablePtr& table() const { return table_; }

    HPoly& at(size_t i, size_t j) { return entries_[i * dim() + j]; }
    const HPoly& at(size_t i, size_t j) const { return entries_[i * dim() + j]; }

    static SuperMatrix identity(std::vector<int> parities, TablePtr table) {
        SuperMatrix m(std::move(parities), table);
        for (size_t i = 0; i < m.dim(); ++i) m.at(i, i) = HPoly::constant(table, Rat(1));
        return m;
    }

    friend SuperMatrix operator*(const SuperMatrix& a, const SuperMatrix& b) {
        if (a.dim() != b.dim()) throw Error("SuperMatrix size mismatch");
        require_same_table(a.table_, b.table_, "SuperMatrix multiplication");
        SuperMatrix r(a.parities_, a.table_);
        for (size_t i = 0; i < a.dim(); ++i)
            for (size_t k = 0; k < a.dim(); ++k) {
                if (a.at(i, k).is_zero_poly()) continue;
                for (size_t j = 0; j < a.dim(); ++j) {
                    if (b.at(k, j).is_zero_poly()) continue;
                    r.at(i, j) += a.at(i, k) * b.at(k, j);
                }
            }
        return r;
    }
    friend SuperMatrix operator+(SuperMatrix a, const SuperMatrix& b) {
        if (a.dim() != b.dim()) throw Error("SuperMatrix size mismatch");
        for (size_t i = 0; i < a.entries_.size(); ++i) a.entries_[i] += b.entries_[i];
        return a;
    }
    friend SuperMatrix operator-(SuperMatrix a, const SuperMatrix& b) {
        if (a.dim() != b.dim()) throw Error("SuperMatrix size mismatch");
        for (size_t i = 0; i < a.entries_.size(); ++i) a.entries_[i] -= b.entries_[i];
        return a;
    }

    bool operator==(const SuperMatrix& o) const {
        return parities_ == o.parities_ && entries_ == o.entries_;
    }
    bool operator!=(const SuperMatrix& o) const { return !(*this == o); }

private:
    std::vector<int> parities_;
    TablePtr table_;
    std::vector<HPoly> entries_;
};

/// Supertrace: sum_i (-1)^{p_i} X_ii.
inline HPoly str(const SuperMatrix& X) {
    HPoly out = HPoly::zero(X.table());
    for (size_t i = 0; i < X.dim(); ++i) {
        const HPoly& d = X.at(i, i);
        if (d.is_zero_poly()) continue;
        out += X.parities()[i] ? -d : d;
    }
    return out;
}

/// Matrix of a Clifford element in the Fock representation.  Odd symbol
/// coefficients pick up a row-parity sign so that operator composition is
/// the plain matrix product; with purely even coefficients the twist is
/// trivial.
inline SuperMatrix fock_matrix(const CliffordElement& x, const FockRep& rep) {
    if (rep.n != x.n()) throw Error("fock_matrix rank mismatch");
    SuperMatrix M(rep.parities, x.table());
    for (const auto& [w, h] : x.terms()) {
        auto [he, ho] = h.parity_split();
        for (size_t t = 0; t < rep.dim(); ++t) {
            auto act = rep.word_action(w, rep.basis[t]);
            if (!act) continue;
            auto [mask, hpow, sign] = *act;
            size_t s = static_cast<size_t>(rep.index_of_mask[mask]);
            Rat c(sign);
            if (!he.is_zero_poly()) M.at(s, t) += (he * c).shifted(hpow);
            if (!ho.is_zero_poly()) {
                Rat co = rep.parities[s] ? -c : c;  // row twist for odd coefficients
                M.at(s, t) += (ho * co).shifted(hpow);
            }
        }
    }
    return M;
}

inline HPoly str_fock(const CliffordElement& x, const FockRep& rep) {
    return str(fock_matrix(x, rep));
}

/// Matrix-route queertrace against the twist element J = xi_n - eta_n:
/// QTR(x) := (1/2) str(fock(x J)).  Proportional to the abstract qtr by a
/// constant times a power of h; the constant is reported, not assumed.
inline HPoly qtr_matrix(const CliffordElement& x, const CliffordElement& J, const FockRep& rep) {
    HPoly s = str_fock(cliff_mul(x, J), rep);
    return s * Rat(1, 2);
}

}  // namespace slc
