#pragma once

#include <string>
#include <vector>

#include "slc/clifford.hpp"
#include "slc/fock.hpp"

namespace slc {

/// The generic (universal) element f = sum_A c_A e_A of po(0|m): one symbol
/// coordinate per Grassmann basis monomial, carrying the monomial's parity,
/// so f is even.  Symbols live below the Grassmann generators in the joint
/// table, which keeps coefficient extraction sign-free.
struct GenericElement {
    int m = 0;
    PoissonAlgebra P;            // po(0|m) over the joint table
    TablePtr symbol_table;       // the c_A alone, same layout
    SuperPoly f;                 // the generic element, parity even
    std::vector<SuperMonomial> basis;       // po basis monomials (pure-table masks)
    std::vector<std::string> symbol_names;  // c<i> indexed by basis order

    static GenericElement make(int m) {
        GenericElement G;
        G.m = m;
        PoissonAlgebra pure = make_poisson(m);
        G.basis = grassmann_basis(pure);

        std::vector<std::string> even_syms, odd_syms;
        G.symbol_names.resize(G.basis.size());
        for (size_t i = 0; i < G.basis.size(); ++i) {
            std::string nm = "c" + std::to_string(i);
            G.symbol_names[i] = nm;
            (G.basis[i].parity() ? odd_syms : even_syms).push_back(nm);
        }
        std::vector<std::string> joint_odd = odd_syms;
        for (const auto& v : pure.table->odd_vars()) joint_odd.push_back(v);
        TablePtr joint = VarTable::make(even_syms, joint_odd);
        G.symbol_table = VarTable::make(even_syms, odd_syms);
        G.P = PoissonAlgebra::over_table(m, joint, pure.convention);

        int shift = static_cast<int>(odd_syms.size());  // grassmann bits sit above the odd symbols
        SuperPoly f(joint);
        for (size_t i = 0; i < G.basis.size(); ++i) {
            int cid = joint->id_of(G.symbol_names[i]);
            SuperMonomial mono;
            mono.odd = G.basis[i].odd << shift;
            if (joint->is_odd(cid))
                mono.odd |= 1ull << joint->odd_bit(cid);
            else
                mono.even = {{cid, 1}};
            f.add_term(mono, Rat(1));
        }
        G.f = std::move(f);
        return G;
    }

    int grassmann_block() const { return m; }
};

/// Transfers a polynomial that only involves the symbol variables between
/// the joint table and the bare symbol table (identical layouts).
inline SuperPoly remap_symbols(const SuperPoly& p, const TablePtr& to) {
    const auto& from = *p.table();
    size_t ne = from.even_count();
    if (to->even_count() != ne || to->odd_count() > from.odd_count())
        throw Error("remap_symbols: incompatible tables");
    std::uint64_t allowed = to->odd_count() == 64 ? ~0ull : ((1ull << to->odd_count()) - 1);
    for (size_t i = 0; i < ne; ++i)
        if (from.even_vars()[i] != to->even_vars()[i]) throw Error("remap_symbols: even mismatch");
    for (size_t i = 0; i < to->odd_count(); ++i)
        if (from.odd_vars()[i] != to->odd_vars()[i]) throw Error("remap_symbols: odd mismatch");
    SuperPoly out(to);
    for (const auto& [mono, c] : p.terms()) {
        if (mono.odd & ~allowed) throw Error("remap_symbols: term uses non-symbol variables");
        out.add_term(mono, c);
    }
    return out;
}

inline HPoly remap_symbols(const HPoly& h, const TablePtr& to) {
    HPoly out(to);
    for (const auto& [k, p] : h.coeffs()) out.add(k, remap_symbols(p, to));
    return out;
}

/// Pullback of r_k = integral of f^k as a degree-k polynomial in the symbols.
inline SuperPoly r_k_pullback(const GenericElement& G, int k) {
    if (k < 1) throw Error("r_k_pullback needs k >= 1");
    SuperPoly fk = pow(G.f, k);
    return remap_symbols(berezin_block(fk, G.grassmann_block()), G.symbol_table);
}

/// Moments s_1..s_kmax: supertrace (even m) or queertrace (odd m) of powers
/// of the quantized generic element, as h-polynomials over the symbol table.
inline std::vector<HPoly> moments(const GenericElement& G, int kmax) {
    std::vector<HPoly> out;
    if (G.m % 2 == 0) {
        int n = G.m / 2;
        FockRep rep(n);
        SuperMatrix X = fock_matrix(Q(G.P, G.f), rep);
        SuperMatrix Pk = X;
        for (int k = 1; k <= kmax; ++k) {
            if (k > 1) Pk = Pk * X;
            out.push_back(remap_symbols(str(Pk), G.symbol_table));
        }
    } else {
        OddCliffordElement x = Q_odd(G.P, G.f);
        OddCliffordElement Pk = x;
        for (int k = 1; k <= kmax; ++k) {
            if (k > 1) Pk = odd_cliff_mul(Pk, x);
            out.push_back(remap_symbols(qtr(Pk), G.symbol_table));
        }
    }
    return out;
}

/// Exact comparison of a moment's lowest component against (1/k) r_k.
struct Star3Item {
    int k = 0;
    bool trivially_zero = false;  // both sides vanish
    int valuation = 0;            // measured h-valuation of s_k
    bool proportional = false;    // lowest component == constant * (1/k) r_k
    Rat constant;                 // the measured constant
    int remainder_order = 0;      // valuation of s_k - constant*(1/k) r_k h^v, -1 if zero
};

inline Star3Item check_star3(const GenericElement& G, const HPoly& s_k, int k) {
    Star3Item item;
    item.k = k;
    SuperPoly target = r_k_pullback(G, k) * Rat(1, k);
    if (s_k.is_zero_poly()) {
        item.trivially_zero = target.is_zero_poly();
        item.proportional = item.trivially_zero;
        item.remainder_order = -1;
        return item;
    }
    auto [v, low] = lowest_component(s_k);
    item.valuation = v;
    if (target.is_zero_poly()) return item;  // lowest component nonzero but target zero
    // fit the single constant from the leading coefficients
    const auto& [m0, c0] = *target.terms().begin();
    Rat lc = low.coeff(m0);
    if (is_zero(lc)) return item;
    item.constant = lc / c0;
    item.proportional = (low == target * item.constant);
    if (!item.proportional) return item;
    HPoly rem = s_k - HPoly::of(target * item.constant, v);
    auto rv = rem.valuation();
    item.remainder_order = rv ? *rv : -1;
    return item;
}

}  // namespace slc
