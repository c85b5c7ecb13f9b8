#pragma once

#include <map>
#include <optional>
#include <string>

#include "slc/superpoly.hpp"

namespace slc {

/// Polynomial in the deformation parameter h (hbar) with SuperPoly
/// coefficients; the coefficient ring is fixed by a shared VarTable.
class HPoly {
public:
    HPoly() = default;
    explicit HPoly(TablePtr table) : table_(std::move(table)) {}

    static HPoly zero(TablePtr table) { return HPoly(std::move(table)); }

    static HPoly of(const SuperPoly& p, int hpow = 0) {
        HPoly h(p.table());
        if (!p.is_zero_poly()) h.coeffs_.emplace(hpow, p);
        return h;
    }

    static HPoly constant(TablePtr table, const Rat& c, int hpow = 0) {
        return of(SuperPoly::constant(std::move(table), c), hpow);
    }

    const TablePtr& table() const { return table_; }
    const std::map<int, SuperPoly>& coeffs() const { return coeffs_; }
    bool is_zero_poly() const { return coeffs_.empty(); }

    SuperPoly coeff(int hpow) const {
        auto it = coeffs_.find(hpow);
        return it == coeffs_.end() ? SuperPoly::zero(table_) : it->second;
    }

    /// Least h-power with nonzero coefficient; nullopt for zero.
    std::optional<int> valuation() const {
        if (coeffs_.empty()) return std::nullopt;
        return coeffs_.begin()->first;
    }

    int max_power() const { return coeffs_.empty() ? -1 : coeffs_.rbegin()->first; }

    void add(int hpow, const SuperPoly& p) {
        if (p.is_zero_poly()) return;
        auto [it, inserted] = coeffs_.emplace(hpow, p);
        if (!inserted) {
            it->second += p;
            if (it->second.is_zero_poly()) coeffs_.erase(it);
        }
    }

    HPoly& operator+=(const HPoly& o) {
        require_same_table(table_, o.table_, "HPoly addition");
        for (const auto& [k, p] : o.coeffs_) add(k, p);
        return *this;
    }
    HPoly& operator-=(const HPoly& o) {
        require_same_table(table_, o.table_, "HPoly subtraction");
        for (const auto& [k, p] : o.coeffs_) add(k, -p);
        return *this;
    }
    friend HPoly operator+(HPoly a, const HPoly& b) { return a += b; }
    friend HPoly operator-(HPoly a, const HPoly& b) { return a -= b; }
    friend HPoly operator-(const HPoly& a) {
        HPoly r(a.table_);
        for (const auto& [k, p] : a.coeffs_) r.coeffs_.emplace(k, -p);
        return r;
    }

    friend HPoly operator*(const HPoly& a, const HPoly& b) {
        require_same_table(a.table_, b.table_, "HPoly multiplication");
        HPoly r(a.table_);
        for (const auto& [ka, pa] : a.coeffs_)
            for (const auto& [kb, pb] : b.coeffs_) r.add(ka + kb, mul(pa, pb));
        return r;
    }
    friend HPoly operator*(const HPoly& a, const Rat& c) {
        HPoly r(a.table_);
        if (is_zero(c)) return r;
        for (const auto& [k, p] : a.coeffs_) r.coeffs_.emplace(k, p * c);
        return r;
    }
    friend HPoly operator*(const Rat& c, const HPoly& a) { return a * c; }

    /// Multiplication by h^s.
    HPoly shifted(int s) const {
        HPoly r(table_);
        for (const auto& [k, p] : coeffs_) r.coeffs_.emplace(k + s, p);
        return r;
    }

    /// Evaluation at a rational value of h.
    SuperPoly eval_h(const Rat& h) const {
        SuperPoly out(table_);
        Rat pw(1);
        int prev = 0;
        for (const auto& [k, p] : coeffs_) {
            for (int i = prev; i < k; ++i) pw *= h;
            prev = k;
            out += p * pw;
        }
        return out;
    }

    /// Mixed parity split of every coefficient: returns the parity-even and
    /// parity-odd parts (in the coefficient superalgebra sense).
    std::pair<HPoly, HPoly> parity_split() const {
        HPoly ev(table_), od(table_);
        for (const auto& [k, p] : coeffs_) {
            auto [pe, po] = p.parity_split();
            if (!pe.is_zero_poly()) ev.coeffs_.emplace(k, pe);
            if (!po.is_zero_poly()) od.coeffs_.emplace(k, po);
        }
        return {std::move(ev), std::move(od)};
    }

    bool operator==(const HPoly& o) const {
        return same_table(table_, o.table_) && coeffs_ == o.coeffs_;
    }
    bool operator!=(const HPoly& o) const { return !(*this == o); }

private:
    TablePtr table_;
    std::map<int, SuperPoly> coeffs_;
};

inline std::string to_string(const HPoly& h) {
    if (h.is_zero_poly()) return "0";
    std::string out;
    for (const auto& [k, p] : h.coeffs()) {
        if (!out.empty()) out += " + ";
        std::string coeff = to_string(p);
        if (k == 0) {
            out += coeff;
        } else {
            std::string hp = k == 1 ? "h" : "h^" + std::to_string(k);
            if (coeff == "1")
                out += hp;
            else if (coeff == "-1")
                out += "-" + hp;
            else if (p.term_count() == 1)
                out += coeff + "*" + hp;
            else
                out += "(" + coeff + ")*" + hp;
        }
    }
    return out;
}

/// Valuation and lowest coefficient of a nonzero HPoly.
inline std::pair<int, SuperPoly> lowest_component(const HPoly& h) {
    auto v = h.valuation();
    if (!v) throw Error("lowest_component of zero");
    return {*v, h.coeff(*v)};
}

}  // namespace slc
