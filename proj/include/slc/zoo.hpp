#pragma once

#include <string>
#include <vector>

#include "slc/clifford.hpp"
#include "slc/fock.hpp"
#include "slc/liealg.hpp"
#include "slc/poisson.hpp"

namespace slc {

/// po(0|m): all 2^m Grassmann monomials with the calibrated Poisson bracket
/// and the Berezin-integral form B.
inline LieSuperAlgebra po_algebra(int m) {
    PoissonAlgebra P = make_poisson(m);
    auto basis = grassmann_basis(P);
    int d = static_cast<int>(basis.size());
    std::vector<std::string> labels;
    std::vector<int> parities;
    std::map<std::uint64_t, int> index_of;
    for (int i = 0; i < d; ++i) {
        labels.push_back(basis[static_cast<size_t>(i)].is_constant()
                             ? "1"
                             : monomial_str(*P.table, basis[static_cast<size_t>(i)]));
        parities.push_back(basis[static_cast<size_t>(i)].parity());
        index_of[basis[static_cast<size_t>(i)].odd] = i;
    }
    LieSuperAlgebra g("po(0|" + std::to_string(m) + ")", labels, parities);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            SuperPoly br = poisson_bracket(P, SuperPoly::monomial(P.table, basis[static_cast<size_t>(a)], Rat(1)),
                                           SuperPoly::monomial(P.table, basis[static_cast<size_t>(b)], Rat(1)));
            SparseVec v;
            for (const auto& [mono, c] : br.terms()) sparse_add(v, index_of.at(mono.odd), c);
            g.set_bracket(a, b, std::move(v));
        }
    std::vector<std::vector<Rat>> B(static_cast<size_t>(d), std::vector<Rat>(static_cast<size_t>(d), Rat(0)));
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            B[static_cast<size_t>(a)][static_cast<size_t>(b)] =
                form_B(P, SuperPoly::monomial(P.table, basis[static_cast<size_t>(a)], Rat(1)),
                       SuperPoly::monomial(P.table, basis[static_cast<size_t>(b)], Rat(1)));
    g.form = std::move(B);
    g.detect_torus();
    return g;
}

inline LieSuperAlgebra h_algebra(int m) {
    return quotient_by_center(po_algebra(m), "h(0|" + std::to_string(m) + ")");
}

inline LieSuperAlgebra sh_algebra(int m) {
    return derived_subalgebra(h_algebra(m), "sh(0|" + std::to_string(m) + ")");
}

/// Integral-zero subalgebra {f : integral f vvol = 0} of po(0|m): the span
/// of every basis monomial except the top one.  One of the two candidate
/// readings of the paper's undefined "spo"; the other is po_derived.
inline LieSuperAlgebra po_integral_zero(int m) {
    LieSuperAlgebra po = po_algebra(m);
    int d = po.dim();
    Subspace span(d);
    for (int i = 0; i < d - 1; ++i) {  // the top monomial is last in canonical order
        std::vector<Rat> v(static_cast<size_t>(d), Rat(0));
        v[static_cast<size_t>(i)] = 1;
        span.insert(std::move(v));
    }
    return subalgebra_from_span(po, span, "ipo(0|" + std::to_string(m) + ")");
}

inline LieSuperAlgebra po_derived(int m) {
    return derived_subalgebra(po_algebra(m), "po'(0|" + std::to_string(m) + ")");
}

// ---------------------------------------------------------------------------
// Vector fields on the purely odd superspace.
// ---------------------------------------------------------------------------

struct VectBasis {
    TablePtr table;  // Lambda(th_1..th_m)
    std::vector<SuperMonomial> monos;
    std::map<std::uint64_t, int> mono_of;
    int m = 0;

    explicit VectBasis(int m_) : m(m_) {
        std::vector<std::string> odd;
        for (int a = 1; a <= m; ++a) odd.push_back("th" + std::to_string(a));
        table = VarTable::make({}, odd);
        for (std::uint64_t mask = 0; mask < (1ull << m); ++mask) {
            SuperMonomial mo;
            mo.odd = mask;
            monos.push_back(mo);
        }
        std::sort(monos.begin(), monos.end(), MonomialLess{});
        for (size_t i = 0; i < monos.size(); ++i) mono_of[monos[i].odd] = static_cast<int>(i);
    }

    int field_index(int mono_idx, int j) const { return mono_idx * m + j; }
    std::string field_label(int mono_idx, int j) const {
        std::string coeff = monos[static_cast<size_t>(mono_idx)].is_constant()
                                ? ""
                                : monomial_str(*table, monos[static_cast<size_t>(mono_idx)]) + "*";
        return coeff + "d" + std::to_string(j + 1);
    }
    int field_parity(int mono_idx, int /*j*/) const {
        return (monos[static_cast<size_t>(mono_idx)].parity() + 1) % 2;
    }
    int theta_id(int a) const { return table->id_of("th" + std::to_string(a + 1)); }

    SuperPoly mono_poly(int idx) const {
        return SuperPoly::monomial(table, monos[static_cast<size_t>(idx)], Rat(1));
    }
};

/// vect(0|m): superderivations theta_I d_j, dimension m 2^m.
inline LieSuperAlgebra vect_algebra(int m) {
    if (m < 1) throw Error("vect(0|m) needs m >= 1");
    VectBasis V(m);
    std::vector<std::string> labels;
    std::vector<int> parities;
    for (int i = 0; i < (1 << m); ++i)
        for (int j = 0; j < m; ++j) {
            labels.push_back(V.field_label(i, j));
            parities.push_back(V.field_parity(i, j));
        }
    LieSuperAlgebra g("vect(0|" + std::to_string(m) + ")", labels, parities);
    for (int i = 0; i < (1 << m); ++i)
        for (int ji = 0; ji < m; ++ji)
            for (int k = 0; k < (1 << m); ++k)
                for (int jk = 0; jk < m; ++jk) {
                    // [f d_i, g d_k] = f d_i(g) d_k - (-1)^{p q} g d_k(f) d_i
                    SparseVec out;
                    SuperPoly t1 = mul(V.mono_poly(i), left_deriv(V.mono_poly(k), V.theta_id(ji)));
                    for (const auto& [mono, c] : t1.terms())
                        sparse_add(out, V.field_index(V.mono_of.at(mono.odd), jk), c);
                    // second term carries -(-1)^{p q}
                    bool odd_pair = V.field_parity(i, ji) && V.field_parity(k, jk);
                    SuperPoly t2 = mul(V.mono_poly(k), left_deriv(V.mono_poly(i), V.theta_id(jk)));
                    for (const auto& [mono, c] : t2.terms())
                        sparse_add(out, V.field_index(V.mono_of.at(mono.odd), ji), odd_pair ? c : -c);
                    g.set_bracket(V.field_index(i, ji), V.field_index(k, jk), std::move(out));
                }
    g.detect_torus();
    return g;
}

/// div(theta_I d_j) = (-1)^{p(theta_I)} d_j(theta_I), expanded over monomials.
inline std::vector<Rat> divergence_vector(const VectBasis& V, int mono_idx, int j) {
    SuperPoly d = left_deriv(V.mono_poly(mono_idx), V.theta_id(j));
    if (V.monos[static_cast<size_t>(mono_idx)].parity()) d = -d;
    std::vector<Rat> out(V.monos.size(), Rat(0));
    for (const auto& [mono, c] : d.terms()) out[static_cast<size_t>(V.mono_of.at(mono.odd))] = c;
    return out;
}

namespace detail {

/// Kernel of a linear map given column-wise.
inline Subspace kernel_subspace(const std::vector<std::vector<Rat>>& columns, int nrows) {
    std::vector<std::vector<Rat>> dense(static_cast<size_t>(nrows),
                                        std::vector<Rat>(columns.size(), Rat(0)));
    for (size_t c = 0; c < columns.size(); ++c)
        for (int r = 0; r < nrows; ++r) dense[static_cast<size_t>(r)][c] = columns[c][static_cast<size_t>(r)];
    std::vector<SparseRow> irows;
    for (auto& row : dense) irows.push_back(to_sparse_row(row));
    auto ech = echelonize(std::move(irows), static_cast<int>(columns.size()));
    Subspace ker(static_cast<int>(columns.size()));
    for (auto& v : kernel_basis(ech)) ker.insert(std::move(v));
    return ker;
}

}  // namespace detail

/// svect(0|m): divergence-free fields, dimension m 2^m - (2^m - 1).
inline LieSuperAlgebra svect_algebra(int m) {
    if (m < 2) throw Error("svect(0|m) needs m >= 2");
    LieSuperAlgebra vect = vect_algebra(m);
    VectBasis V(m);
    std::vector<std::vector<Rat>> cols;
    for (int i = 0; i < (1 << m); ++i)
        for (int j = 0; j < m; ++j) cols.push_back(divergence_vector(V, i, j));
    Subspace ker = detail::kernel_subspace(cols, 1 << m);
    return subalgebra_from_span(vect, ker, "svect(0|" + std::to_string(m) + ")");
}

/// Kernel of X |-> L_X((1 + tau) vvol) as a subspace of vect(0|m).
inline Subspace svect_tilde_span(int m, const std::string& deform_term = "top") {
    if (m < 2) throw Error("svect_tilde needs m >= 2");
    VectBasis V(m);
    SuperMonomial tau_mono;
    if (deform_term == "top") {
        if (m % 2 != 0)
            throw Error("svect_tilde: the full product th_1..th_m is odd for odd m, "
                        "so (1+tau)vvol breaks the grading; use the 'pair' term");
        tau_mono.odd = (1ull << m) - 1;
    } else if (deform_term == "pair") {
        tau_mono.odd = (1ull << 0) | (1ull << (m - 1));
    } else {
        throw Error("deform term must be 'top' or 'pair'");
    }
    SuperPoly tau = SuperPoly::monomial(V.table, tau_mono, Rat(1));
    int tau_parity = tau_mono.parity();

    std::vector<std::vector<Rat>> cols;
    for (int i = 0; i < (1 << m); ++i)
        for (int j = 0; j < m; ++j) {
            // L_X((1+tau) vvol) = [X(tau) + div X + (-1)^{p(X) p(tau)} tau div X] vvol
            int pX = V.field_parity(i, j);
            SuperPoly xtau = mul(V.mono_poly(i), left_deriv(tau, V.theta_id(j)));
            SuperPoly div;
            {
                SuperPoly d = left_deriv(V.mono_poly(i), V.theta_id(j));
                div = V.monos[static_cast<size_t>(i)].parity() ? -d : d;
            }
            SuperPoly total = xtau + div;
            SuperPoly tdiv = mul(tau, div);
            total += (pX && tau_parity) ? -tdiv : tdiv;
            std::vector<Rat> col(V.monos.size(), Rat(0));
            for (const auto& [mono, c] : total.terms()) col[static_cast<size_t>(V.mono_of.at(mono.odd))] = c;
            cols.push_back(std::move(col));
        }
    return detail::kernel_subspace(cols, 1 << m);
}

/// Fields preserving (1 + tau) vvol, tau the full product th_1..th_m
/// ("top") or the literal pair th_1 th_m ("pair").
inline LieSuperAlgebra svect_tilde(int m, const std::string& deform_term = "top") {
    LieSuperAlgebra vect = vect_algebra(m);
    Subspace ker = svect_tilde_span(m, deform_term);
    std::string name = "svect~(0|" + std::to_string(m) + ")" + (deform_term == "pair" ? "[pair]" : "");
    return subalgebra_from_span(vect, ker, name);
}

// ---------------------------------------------------------------------------
// gl on a graded basis, and the queer family q/sq/psq.
// ---------------------------------------------------------------------------

struct GlAlgebra {
    LieSuperAlgebra algebra;
    ModuleAction natural;
};

inline GlAlgebra gl_algebra_graded(const std::vector<int>& vparities, const std::string& name) {
    int N = static_cast<int>(vparities.size());
    std::vector<std::string> labels;
    std::vector<int> parities;
    auto idx = [N](int a, int b) { return a * N + b; };
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) {
            labels.push_back("E" + std::to_string(a) + "_" + std::to_string(b));
            parities.push_back((vparities[static_cast<size_t>(a)] + vparities[static_cast<size_t>(b)]) % 2);
        }
    LieSuperAlgebra g(name, labels, parities);
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b)
            for (int c = 0; c < N; ++c)
                for (int e = 0; e < N; ++e) {
                    SparseVec v;
                    if (b == c) sparse_add(v, idx(a, e), Rat(1));
                    // coefficient of the second term is -(-1)^{p(E_ab) p(E_ce)}
                    bool odd_pair = parities[static_cast<size_t>(idx(a, b))] && parities[static_cast<size_t>(idx(c, e))];
                    if (e == a) sparse_add(v, idx(c, b), odd_pair ? Rat(1) : Rat(-1));
                    g.set_bracket(idx(a, b), idx(c, e), std::move(v));
                }
    std::vector<std::vector<Rat>> B(static_cast<size_t>(N) * N, std::vector<Rat>(static_cast<size_t>(N) * N, Rat(0)));
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b)
            B[static_cast<size_t>(idx(a, b))][static_cast<size_t>(idx(b, a))] =
                Rat(vparities[static_cast<size_t>(a)] ? -1 : 1);
    g.form = std::move(B);
    g.detect_torus();

    GlAlgebra out{std::move(g), {}};
    auto gp = std::make_shared<LieSuperAlgebra>(out.algebra);
    ModuleAction natural;
    natural.algebra = gp;
    natural.kind = "natural";
    for (int a = 0; a < N; ++a) {
        natural.labels.push_back("v" + std::to_string(a));
        natural.parities.push_back(vparities[static_cast<size_t>(a)]);
    }
    natural.mats.assign(static_cast<size_t>(N) * N, std::vector<SparseVec>(static_cast<size_t>(N)));
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b)
            natural.mats[static_cast<size_t>(idx(a, b))][static_cast<size_t>(b)] = {{a, Rat(1)}};
    natural.derive_weights();
    out.natural = std::move(natural);
    return out;
}

/// gl(2^{n-1}|2^{n-1}) on the Fock basis grading.
inline GlAlgebra gl_from_fock(int n) {
    FockRep rep(n);
    return gl_algebra_graded(rep.parities, "gl(" + std::to_string(1 << (n - 1)) + "|" +
                                               std::to_string(1 << (n - 1)) + ")");
}

namespace detail {

/// Span of q(N) or sq(N) inside gl(N|N); also returns the gl ambient.
inline std::pair<GlAlgebra, Subspace> queer_span(int N, bool traceless) {
    if (N < 1) throw Error("queer family needs N >= 1");
    std::vector<int> vparities(static_cast<size_t>(2 * N), 0);
    for (int i = N; i < 2 * N; ++i) vparities[static_cast<size_t>(i)] = 1;
    GlAlgebra gl = gl_algebra_graded(vparities, "gl(" + std::to_string(N) + "|" + std::to_string(N) + ")");
    int D = 2 * N;
    auto idx = [D](int a, int b) { return a * D + b; };
    Subspace span(D * D);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            std::vector<Rat> v(static_cast<size_t>(D) * D, Rat(0));
            v[static_cast<size_t>(idx(i, j))] = 1;
            v[static_cast<size_t>(idx(N + i, N + j))] = 1;
            span.insert(std::move(v));
        }
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            if (traceless && i == j) continue;
            std::vector<Rat> v(static_cast<size_t>(D) * D, Rat(0));
            v[static_cast<size_t>(idx(i, N + j))] = 1;
            v[static_cast<size_t>(idx(N + i, j))] = 1;
            span.insert(std::move(v));
        }
    if (traceless)
        for (int i = 0; i + 1 < N; ++i) {  // B_ii - B_{i+1,i+1}
            std::vector<Rat> v(static_cast<size_t>(D) * D, Rat(0));
            v[static_cast<size_t>(idx(i, N + i))] = 1;
            v[static_cast<size_t>(idx(N + i, i))] = 1;
            v[static_cast<size_t>(idx(i + 1, N + i + 1))] = -1;
            v[static_cast<size_t>(idx(N + i + 1, i + 1))] = -1;
            span.insert(std::move(v));
        }
    return {std::move(gl), std::move(span)};
}

}  // namespace detail

inline LieSuperAlgebra q_algebra(int N) {
    auto [gl, span] = detail::queer_span(N, false);
    return subalgebra_from_span(gl.algebra, span, "q(" + std::to_string(N) + ")");
}

inline LieSuperAlgebra sq_algebra(int N) {
    auto [gl, span] = detail::queer_span(N, true);
    return subalgebra_from_span(gl.algebra, span, "sq(" + std::to_string(N) + ")");
}

/// psq(N) = sq(N) / span(identity).
inline LieSuperAlgebra psq_algebra(int N) {
    auto [gl, span] = detail::queer_span(N, true);
    LieSuperAlgebra sq = subalgebra_from_span(gl.algebra, span, "sq(" + std::to_string(N) + ")");
    int D = 2 * N;
    std::vector<Rat> identity(static_cast<size_t>(D) * D, Rat(0));
    for (int a = 0; a < D; ++a) identity[static_cast<size_t>(a * D + a)] = 1;
    auto coords = span.coords_of(identity);
    if (!coords) throw Error("identity not inside sq span");
    Subspace ideal(sq.dim());
    ideal.insert(*coords);
    return quotient_by_ideal(sq, ideal, "psq(" + std::to_string(N) + ")");
}

/// Queertrace of a gl(N|N) coordinate vector: trace of the lower-left block.
inline Rat qtr_gl_vector(const std::vector<Rat>& glvec, int N) {
    Rat out(0);
    int D = 2 * N;
    for (int i = 0; i < N; ++i) out += glvec[static_cast<size_t>((N + i) * D + i)];
    out.canonicalize();
    return out;
}

}  // namespace slc
