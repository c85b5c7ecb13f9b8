#pragma once

#include <memory>
#include <string>
#include <vector>

#include "slc/superpoly.hpp"

namespace slc {

/// Calibrated sign conventions of the Poisson bracket.  The even-m bracket
/// is s * (-1)^{p(f)} * sum_i (df/dxi_i dg/deta_i + df/deta_i dg/dxi_i)
/// with left or right derivatives; the odd-m bracket is
/// t * (-1)^{p(f)} * sum_a eps_a df/dth_a dg/dth_a.
struct BracketConvention {
    bool left_derivs = true;
    int even_sign = -1;
    int odd_prefactor = -2;
    std::vector<int> odd_signature;  // eps_a per generator index, sized on demand

    static std::vector<int> alternating(int m) {
        std::vector<int> eps(static_cast<size_t>(m));
        for (int a = 0; a < m; ++a) eps[static_cast<size_t>(a)] = (a % 2 == 0) ? 1 : -1;
        return eps;
    }

    std::string describe() const {
        std::string s = "even: sign ";
        s += std::to_string(even_sign);
        s += left_derivs ? ", left derivatives" : ", right derivatives";
        s += "; odd: prefactor " + std::to_string(odd_prefactor) + ", signature ";
        for (int e : odd_signature) s += e > 0 ? '+' : '-';
        s += "; berezin: top monomial -> 1; qtr: top word coefficient";
        return s;
    }
};

/// The Poisson superalgebra po(0|m) on a purely odd superspace, or its
/// symplectic generator block inside a larger table (used when symbol
/// coordinates coexist with the Grassmann generators).
struct PoissonAlgebra {
    int m = 0;
    int n = 0;  // m = 2n or m = 2n-1
    bool even_case = true;
    TablePtr table;
    std::vector<int> xi_ids, eta_ids;  // even case
    std::vector<int> theta_ids;        // odd case
    BracketConvention convention;

    static PoissonAlgebra make(int m, BracketConvention conv) {
        if (m <= 0) throw Error("po(0|m) needs m >= 1");
        PoissonAlgebra P;
        P.m = m;
        P.even_case = (m % 2 == 0);
        P.n = (m + 1) / 2;
        P.convention = std::move(conv);
        std::vector<std::string> odd;
        if (P.even_case) {
            for (int i = 1; i <= P.n; ++i) odd.push_back("xi" + std::to_string(i));
            for (int i = 1; i <= P.n; ++i) odd.push_back("eta" + std::to_string(i));
            P.table = VarTable::make({}, odd);
            for (int i = 0; i < P.n; ++i) P.xi_ids.push_back(P.table->id_of("xi" + std::to_string(i + 1)));
            for (int i = 0; i < P.n; ++i) P.eta_ids.push_back(P.table->id_of("eta" + std::to_string(i + 1)));
        } else {
            for (int a = 1; a <= m; ++a) odd.push_back("th" + std::to_string(a));
            P.table = VarTable::make({}, odd);
            for (int a = 0; a < m; ++a) P.theta_ids.push_back(P.table->id_of("th" + std::to_string(a + 1)));
            if (static_cast<int>(P.convention.odd_signature.size()) < m)
                P.convention.odd_signature = BracketConvention::alternating(m);
        }
        return P;
    }

    /// Same structure over an existing table that contains the generators
    /// (e.g. a joint symbol + Grassmann table).
    static PoissonAlgebra over_table(int m, TablePtr table, BracketConvention conv) {
        PoissonAlgebra P;
        P.m = m;
        P.even_case = (m % 2 == 0);
        P.n = (m + 1) / 2;
        P.table = std::move(table);
        P.convention = std::move(conv);
        if (P.even_case) {
            for (int i = 1; i <= P.n; ++i) P.xi_ids.push_back(P.table->id_of("xi" + std::to_string(i)));
            for (int i = 1; i <= P.n; ++i) P.eta_ids.push_back(P.table->id_of("eta" + std::to_string(i)));
        } else {
            for (int a = 1; a <= m; ++a) P.theta_ids.push_back(P.table->id_of("th" + std::to_string(a)));
            if (static_cast<int>(P.convention.odd_signature.size()) < m)
                P.convention.odd_signature = BracketConvention::alternating(m);
        }
        return P;
    }

    SuperPoly poly(std::string_view text) const { return parse_poly(table, text); }
    SuperPoly gen_xi(int i) const { return SuperPoly::variable(table, xi_ids.at(static_cast<size_t>(i))); }
    SuperPoly gen_eta(int i) const { return SuperPoly::variable(table, eta_ids.at(static_cast<size_t>(i))); }
    SuperPoly gen_theta(int a) const { return SuperPoly::variable(table, theta_ids.at(static_cast<size_t>(a))); }
};

namespace detail {

/// Right derivative of an odd variable on a parity-homogeneous term:
/// differs from the left one by (-1)^{p(term)+1}.
inline SuperPoly right_deriv_term(const SuperPoly& term_poly, int var_id, int term_parity) {
    SuperPoly d = left_deriv(term_poly, var_id);
    return (term_parity % 2 == 0) ? -d : d;
}

}  // namespace detail

/// The Poisson bracket in the calibrated convention; bilinear, applied
/// termwise in f so inhomogeneous inputs extend as the formula dictates.
inline SuperPoly poisson_bracket(const PoissonAlgebra& P, const SuperPoly& f, const SuperPoly& g) {
    require_same_table(P.table, f.table(), "poisson_bracket");
    require_same_table(P.table, g.table(), "poisson_bracket");
    SuperPoly out(P.table);
    auto deriv = [&](const SuperPoly& h, int var, int parity_of_h) {
        if (P.convention.left_derivs) return left_deriv(h, var);
        return detail::right_deriv_term(h, var, parity_of_h);
    };
    // Group f's terms by parity; the prefactor depends only on p(f_term).
    auto [f_even, f_odd] = f.parity_split();
    auto [g_even, g_odd] = g.parity_split();
    for (int pf = 0; pf <= 1; ++pf) {
        const SuperPoly& fp = pf ? f_odd : f_even;
        if (fp.is_zero_poly()) continue;
        Rat pref(P.even_case ? P.convention.even_sign : P.convention.odd_prefactor);
        if (pf) pref = -pref;  // (-1)^{p(f)}
        for (int pg = 0; pg <= 1; ++pg) {
            const SuperPoly& gp = pg ? g_odd : g_even;
            if (gp.is_zero_poly()) continue;
            SuperPoly acc(P.table);
            if (P.even_case) {
                for (int i = 0; i < P.n; ++i) {
                    acc += mul(deriv(fp, P.xi_ids[static_cast<size_t>(i)], pf),
                               deriv(gp, P.eta_ids[static_cast<size_t>(i)], pg));
                    acc += mul(deriv(fp, P.eta_ids[static_cast<size_t>(i)], pf),
                               deriv(gp, P.xi_ids[static_cast<size_t>(i)], pg));
                }
            } else {
                for (int a = 0; a < P.m; ++a) {
                    SuperPoly t = mul(deriv(fp, P.theta_ids[static_cast<size_t>(a)], pf),
                                      deriv(gp, P.theta_ids[static_cast<size_t>(a)], pg));
                    acc += P.convention.odd_signature[static_cast<size_t>(a)] > 0 ? t : -t;
                }
            }
            out += acc * pref;
        }
    }
    return out;
}

/// Invariant form B(f,g) = integral of f*g against the volume element.
/// Requires the plain po table (purely odd).
inline Rat form_B(const PoissonAlgebra& P, const SuperPoly& f, const SuperPoly& g) {
    return berezin(mul(f, g));
}

/// r_k(f) = integral of f^k.
inline Rat r_k(const PoissonAlgebra& P, const SuperPoly& f, int k) {
    if (k < 1) throw Error("r_k needs k >= 1");
    return berezin(pow(f, k));
}

/// Basis of po(0|m): all Grassmann monomials in canonical order.
inline std::vector<SuperMonomial> grassmann_basis(const PoissonAlgebra& P) {
    size_t dim = 1ull << P.m;
    std::vector<SuperMonomial> basis;
    basis.reserve(dim);
    for (std::uint64_t mask = 0; mask < dim; ++mask) {
        SuperMonomial mo;
        mo.odd = mask;
        basis.push_back(mo);
    }
    std::sort(basis.begin(), basis.end(), MonomialLess{});
    return basis;
}

}  // namespace slc
