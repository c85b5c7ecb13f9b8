#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "slc/linalg.hpp"
#include "slc/rational.hpp"

namespace slc {

using SparseVec = std::vector<std::pair<int, Rat>>;  // (index, value), sorted, nonzero

inline void sparse_add(SparseVec& acc, int idx, const Rat& v) {
    if (is_zero(v)) return;
    auto it = std::lower_bound(acc.begin(), acc.end(), idx,
                               [](const auto& p, int i) { return p.first < i; });
    if (it != acc.end() && it->first == idx) {
        it->second += v;
        if (is_zero(it->second)) acc.erase(it);
    } else {
        acc.insert(it, {idx, v});
    }
}

inline std::vector<Rat> densify(const SparseVec& v, int dim) {
    std::vector<Rat> out(static_cast<size_t>(dim), Rat(0));
    for (const auto& [i, c] : v) out[static_cast<size_t>(i)] = c;
    return out;
}

/// Finite-dimensional Lie superalgebra given by exact structure constants
/// over a labeled homogeneous basis.
class LieSuperAlgebra {
public:
    std::string name;
    std::vector<std::string> labels;
    std::vector<int> parities;
    std::optional<std::vector<std::vector<Rat>>> form;  // Gram matrix of an invariant form
    std::vector<int> torus;                             // basis indices with diagonal ad
    std::vector<std::vector<long>> weights;             // per basis element, one entry per torus index

    LieSuperAlgebra() = default;
    LieSuperAlgebra(std::string nm, std::vector<std::string> lab, std::vector<int> par)
        : name(std::move(nm)), labels(std::move(lab)), parities(std::move(par)) {
        table_.assign(dim() * dim(), SparseVec{});
    }

    int dim() const { return static_cast<int>(labels.size()); }

    const SparseVec& bracket(int a, int b) const {
        return table_[static_cast<size_t>(a) * labels.size() + static_cast<size_t>(b)];
    }
    void set_bracket(int a, int b, SparseVec v) {
        table_[static_cast<size_t>(a) * labels.size() + static_cast<size_t>(b)] = std::move(v);
    }

    /// Bracket of coordinate vectors.
    std::vector<Rat> bracket_vec(const std::vector<Rat>& x, const std::vector<Rat>& y) const {
        std::vector<Rat> out(static_cast<size_t>(dim()), Rat(0));
        for (int a = 0; a < dim(); ++a) {
            if (is_zero(x[static_cast<size_t>(a)])) continue;
            for (int b = 0; b < dim(); ++b) {
                if (is_zero(y[static_cast<size_t>(b)])) continue;
                Rat f = x[static_cast<size_t>(a)] * y[static_cast<size_t>(b)];
                for (const auto& [c, v] : bracket(a, b)) out[static_cast<size_t>(c)] += f * v;
            }
        }
        for (auto& r : out) r.canonicalize();
        return out;
    }

    /// Detects the torus (basis elements with diagonal integral ad) and the
    /// induced weight grading.  Zero rows are dropped.
    void detect_torus() {
        torus.clear();
        std::vector<std::vector<long>> rows;
        for (int g = 0; g < dim(); ++g) {
            bool diagonal = true;
            bool nonzero = false;
            std::vector<long> eig(static_cast<size_t>(dim()), 0);
            for (int b = 0; b < dim() && diagonal; ++b) {
                const SparseVec& br = bracket(g, b);
                if (br.empty()) continue;
                if (br.size() != 1 || br[0].first != b) {
                    diagonal = false;
                    break;
                }
                const Rat& v = br[0].second;
                if (v.get_den() != 1) {
                    diagonal = false;
                    break;
                }
                eig[static_cast<size_t>(b)] = static_cast<long>(v.get_num().get_si());
                nonzero = true;
            }
            if (diagonal && nonzero) {
                torus.push_back(g);
                rows.push_back(std::move(eig));
            }
        }
        weights.assign(static_cast<size_t>(dim()), {});
        for (int b = 0; b < dim(); ++b)
            for (size_t t = 0; t < torus.size(); ++t)
                weights[static_cast<size_t>(b)].push_back(rows[t][static_cast<size_t>(b)]);
    }

    struct ValidationReport {
        bool antisymmetry = true;
        bool jacobi = true;
        bool form_invariant = true;
        bool exhaustive = true;
        std::string detail;
        bool ok() const { return antisymmetry && jacobi && form_invariant; }
    };

    /// Super-antisymmetry on all pairs; super Jacobi exhaustive for dim <= 64
    /// (sorted triples; antisymmetry covers the rest), sampled above; form
    /// invariance on all basis triples when a form is present.
    ValidationReport validate(std::uint64_t seed = 1) const {
        ValidationReport rep;
        int d = dim();
        for (int a = 0; a < d && rep.antisymmetry; ++a)
            for (int b = 0; b < d; ++b) {
                SparseVec ba = bracket(b, a);
                int sign = (parities[static_cast<size_t>(a)] && parities[static_cast<size_t>(b)]) ? 1 : -1;
                SparseVec expect;
                for (const auto& [c, v] : ba) expect.emplace_back(c, sign > 0 ? v : -v);
                if (bracket(a, b) != expect) {
                    rep.antisymmetry = false;
                    rep.detail = "antisymmetry fails at (" + std::to_string(a) + "," + std::to_string(b) + ")";
                    break;
                }
            }

        auto jacobi_triple = [&](int a, int b, int c) {
            // [a,[b,c]] - [[a,b],c] - (-1)^{p_a p_b} [b,[a,c]] = 0
            std::vector<Rat> acc(static_cast<size_t>(d), Rat(0));
            for (const auto& [x, v] : bracket(b, c))
                for (const auto& [y, w] : bracket(a, x)) acc[static_cast<size_t>(y)] += v * w;
            for (const auto& [x, v] : bracket(a, b))
                for (const auto& [y, w] : bracket(x, c)) acc[static_cast<size_t>(y)] -= v * w;
            int sign = (parities[static_cast<size_t>(a)] && parities[static_cast<size_t>(b)]) ? -1 : 1;
            for (const auto& [x, v] : bracket(a, c))
                for (const auto& [y, w] : bracket(b, x)) {
                    Rat t = v * w;
                    acc[static_cast<size_t>(y)] -= sign > 0 ? t : -t;
                }
            for (auto& r : acc) {
                r.canonicalize();
                if (sgn(r) != 0) return false;
            }
            return true;
        };

        if (d <= 64) {
            for (int a = 0; a < d && rep.jacobi; ++a)
                for (int b = a; b < d && rep.jacobi; ++b)
                    for (int c = b; c < d; ++c)
                        if (!jacobi_triple(a, b, c)) {
                            rep.jacobi = false;
                            rep.detail = "jacobi fails at (" + std::to_string(a) + "," + std::to_string(b) +
                                         "," + std::to_string(c) + ")";
                            break;
                        }
        } else {
            rep.exhaustive = false;
            SplitMix64 rng(seed);
            for (int i = 0; i < 500 && rep.jacobi; ++i) {
                int a = static_cast<int>(rng.below(static_cast<std::uint64_t>(d)));
                int b = static_cast<int>(rng.below(static_cast<std::uint64_t>(d)));
                int c = static_cast<int>(rng.below(static_cast<std::uint64_t>(d)));
                if (!jacobi_triple(a, b, c)) {
                    rep.jacobi = false;
                    rep.detail = "jacobi fails (sampled)";
                }
            }
        }

        if (form && rep.jacobi) {
            const auto& B = *form;
            for (int a = 0; a < d && rep.form_invariant; ++a)
                for (int b = 0; b < d && rep.form_invariant; ++b)
                    for (int c = 0; c < d; ++c) {
                        Rat lhs(0), rhs(0);
                        for (const auto& [x, v] : bracket(a, b)) lhs += v * B[static_cast<size_t>(x)][static_cast<size_t>(c)];
                        for (const auto& [x, v] : bracket(b, c)) rhs += B[static_cast<size_t>(a)][static_cast<size_t>(x)] * v;
                        lhs.canonicalize();
                        rhs.canonicalize();
                        if (lhs != rhs) {
                            rep.form_invariant = false;
                            rep.detail = "form invariance fails";
                            break;
                        }
                    }
        }
        return rep;
    }

private:
    std::vector<SparseVec> table_;
};

using AlgebraPtr = std::shared_ptr<const LieSuperAlgebra>;

/// A finite-dimensional module given by one exact action matrix per algebra
/// basis element (sparse columns: mats[g][j] = e_g . u_j expanded over u_i).
struct ModuleAction {
    AlgebraPtr algebra;
    std::string kind;  // "adjoint", "coadjoint", "natural"
    std::vector<std::string> labels;
    std::vector<int> parities;
    std::vector<std::vector<SparseVec>> mats;
    std::vector<std::vector<long>> weights;  // per module coordinate; empty when no torus

    int dim() const { return static_cast<int>(labels.size()); }

    /// Weight grading induced by the algebra torus; requires the torus to
    /// act diagonally with integer eigenvalues, else leaves weights empty.
    void derive_weights() {
        weights.assign(static_cast<size_t>(dim()), {});
        for (int t : algebra->torus) {
            const auto& M = mats[static_cast<size_t>(t)];
            for (int j = 0; j < dim(); ++j) {
                const SparseVec& col = M[static_cast<size_t>(j)];
                long eig = 0;
                if (col.size() == 1 && col[0].first == j && col[0].second.get_den() == 1)
                    eig = static_cast<long>(col[0].second.get_num().get_si());
                else if (!col.empty()) {
                    weights.assign(static_cast<size_t>(dim()), {});
                    return;
                }
                weights[static_cast<size_t>(j)].push_back(eig);
            }
        }
    }

    /// rho([x,y]) = rho(x)rho(y) - (-1)^{p(x)p(y)} rho(y)rho(x) on basis pairs.
    bool respects_brackets() const {
        int d = algebra->dim();
        auto apply = [&](int g, const SparseVec& v) {
            SparseVec out;
            for (const auto& [j, c] : v)
                for (const auto& [i, w] : mats[static_cast<size_t>(g)][static_cast<size_t>(j)])
                    sparse_add(out, i, c * w);
            return out;
        };
        for (int x = 0; x < d; ++x)
            for (int y = 0; y < d; ++y) {
                bool odd_pair = algebra->parities[static_cast<size_t>(x)] && algebra->parities[static_cast<size_t>(y)];
                for (int j = 0; j < dim(); ++j) {
                    SparseVec unit{{j, Rat(1)}};
                    SparseVec lhs;
                    for (const auto& [g, c] : algebra->bracket(x, y)) {
                        for (const auto& [i, w] : mats[static_cast<size_t>(g)][static_cast<size_t>(j)])
                            sparse_add(lhs, i, c * w);
                    }
                    SparseVec rhs = apply(x, apply(y, unit));
                    SparseVec yx = apply(y, apply(x, unit));
                    for (const auto& [i, w] : yx) sparse_add(rhs, i, odd_pair ? w : -w);
                    if (lhs != rhs) return false;
                }
            }
        return true;
    }
};

inline ModuleAction adjoint_action(AlgebraPtr g) {
    ModuleAction M;
    M.algebra = g;
    M.kind = "adjoint";
    M.labels = g->labels;
    M.parities = g->parities;
    int d = g->dim();
    M.mats.assign(static_cast<size_t>(d), std::vector<SparseVec>(static_cast<size_t>(d)));
    for (int gamma = 0; gamma < d; ++gamma)
        for (int b = 0; b < d; ++b) M.mats[static_cast<size_t>(gamma)][static_cast<size_t>(b)] = g->bracket(gamma, b);
    M.derive_weights();
    return M;
}

/// Coadjoint: (e_g . c^a)(e_b) = -(-1)^{p_g p_a} c^a([e_g, e_b]).
inline ModuleAction coadjoint_action(AlgebraPtr g) {
    ModuleAction M;
    M.algebra = g;
    M.kind = "coadjoint";
    int d = g->dim();
    M.labels.reserve(static_cast<size_t>(d));
    for (const auto& l : g->labels) M.labels.push_back(l + "*");
    M.parities = g->parities;
    M.mats.assign(static_cast<size_t>(d), std::vector<SparseVec>(static_cast<size_t>(d)));
    for (int gamma = 0; gamma < d; ++gamma)
        for (int b = 0; b < d; ++b)
            for (const auto& [a, v] : g->bracket(gamma, b)) {
                // entry value is -(-1)^{p_gamma p_a} f_{gamma b}^a
                bool odd_pair = g->parities[static_cast<size_t>(gamma)] && g->parities[static_cast<size_t>(a)];
                sparse_add(M.mats[static_cast<size_t>(gamma)][static_cast<size_t>(a)], b, odd_pair ? v : -v);
            }
    M.derive_weights();
    return M;
}

// ---------------------------------------------------------------------------
// Generic constructions: span closures, subalgebras, quotients by ideals.
// ---------------------------------------------------------------------------

/// Structure constants of a bracket-closed subspace; throws when the span
/// is not closed under the bracket.
inline LieSuperAlgebra subalgebra_from_span(const LieSuperAlgebra& g, const Subspace& span,
                                            const std::string& name,
                                            const std::vector<std::string>& labels_hint = {}) {
    int d = g.dim();
    int sd = span.dim();
    std::vector<std::string> labels(static_cast<size_t>(sd));
    std::vector<int> parities(static_cast<size_t>(sd));
    for (int i = 0; i < sd; ++i) {
        int pivot = span.pivots()[static_cast<size_t>(i)];
        labels[static_cast<size_t>(i)] =
            !labels_hint.empty() ? labels_hint[static_cast<size_t>(i)] : g.labels[static_cast<size_t>(pivot)];
        // basis rows must be parity-homogeneous
        std::optional<int> par;
        for (int j = 0; j < d; ++j) {
            if (sgn(span.rows()[static_cast<size_t>(i)][static_cast<size_t>(j)]) == 0) continue;
            int pj = g.parities[static_cast<size_t>(j)];
            if (!par)
                par = pj;
            else if (*par != pj)
                throw Error("subalgebra basis vector mixes parities");
        }
        parities[static_cast<size_t>(i)] = par.value_or(0);
    }
    LieSuperAlgebra sub(name, labels, parities);
    for (int i = 0; i < sd; ++i)
        for (int j = 0; j < sd; ++j) {
            auto br = g.bracket_vec(span.rows()[static_cast<size_t>(i)], span.rows()[static_cast<size_t>(j)]);
            auto coords = span.coords_of(br);
            if (!coords) throw Error(name + ": span is not closed under the bracket");
            SparseVec v;
            for (int k = 0; k < sd; ++k)
                if (!is_zero((*coords)[static_cast<size_t>(k)])) v.emplace_back(k, (*coords)[static_cast<size_t>(k)]);
            sub.set_bracket(i, j, std::move(v));
        }
    sub.detect_torus();
    return sub;
}

/// Span of all brackets, closed under the bracket by construction (closure
/// is still verified when the constants are expressed).
inline LieSuperAlgebra derived_subalgebra(const LieSuperAlgebra& g, const std::string& name = "") {
    int d = g.dim();
    Subspace span(d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            const SparseVec& br = g.bracket(a, b);
            if (!br.empty()) span.insert(densify(br, d));
        }
    return subalgebra_from_span(g, span, name.empty() ? "[" + g.name + "," + g.name + "]" : name);
}

/// Exact center: the kernel of ad.
inline Subspace center_of(const LieSuperAlgebra& g) {
    int d = g.dim();
    // constraints indexed by (b, target coordinate); columns = alpha
    std::map<std::pair<int, int>, std::vector<Rat>> dense;
    for (int alpha = 0; alpha < d; ++alpha)
        for (int b = 0; b < d; ++b)
            for (const auto& [c, v] : g.bracket(alpha, b)) {
                auto& row = dense[{b, c}];
                if (row.empty()) row.assign(static_cast<size_t>(d), Rat(0));
                row[static_cast<size_t>(alpha)] += v;
            }
    std::vector<SparseRow> irows;
    for (auto& [key, row] : dense) irows.push_back(to_sparse_row(row));
    auto ech = echelonize(std::move(irows), d);
    Subspace ker(d);
    for (auto& v : kernel_basis(ech)) ker.insert(std::move(v));
    return ker;
}

/// Quotient by an ideal: the complement is spanned by the basis elements
/// away from the ideal's pivot coordinates (canonical, deterministic).
inline LieSuperAlgebra quotient_by_ideal(const LieSuperAlgebra& g, const Subspace& ideal,
                                         const std::string& name) {
    int d = g.dim();
    std::vector<int> keep;
    {
        std::vector<bool> is_pivot(static_cast<size_t>(d), false);
        for (int p : ideal.pivots()) is_pivot[static_cast<size_t>(p)] = true;
        for (int i = 0; i < d; ++i)
            if (!is_pivot[static_cast<size_t>(i)]) keep.push_back(i);
    }
    std::vector<std::string> labels;
    std::vector<int> parities;
    for (int i : keep) {
        labels.push_back(g.labels[static_cast<size_t>(i)]);
        parities.push_back(g.parities[static_cast<size_t>(i)]);
    }
    LieSuperAlgebra q(name, labels, parities);
    auto project = [&](std::vector<Rat> v) {
        // reduce modulo the ideal rows, then read complement coordinates
        for (size_t r = 0; r < ideal.rows().size(); ++r) {
            const Rat& c = v[static_cast<size_t>(ideal.pivots()[r])];
            if (sgn(c) == 0) continue;
            Rat f = c;
            for (int j = 0; j < d; ++j) {
                v[static_cast<size_t>(j)] -= f * ideal.rows()[r][static_cast<size_t>(j)];
                v[static_cast<size_t>(j)].canonicalize();
            }
        }
        SparseVec out;
        for (size_t k = 0; k < keep.size(); ++k) {
            const Rat& c = v[static_cast<size_t>(keep[k])];
            if (!is_zero(c)) out.emplace_back(static_cast<int>(k), c);
        }
        return out;
    };
    for (size_t i = 0; i < keep.size(); ++i)
        for (size_t j = 0; j < keep.size(); ++j) {
            std::vector<Rat> x(static_cast<size_t>(d), Rat(0)), y(static_cast<size_t>(d), Rat(0));
            x[static_cast<size_t>(keep[i])] = 1;
            y[static_cast<size_t>(keep[j])] = 1;
            q.set_bracket(static_cast<int>(i), static_cast<int>(j), project(g.bracket_vec(x, y)));
        }
    q.detect_torus();
    return q;
}

inline LieSuperAlgebra quotient_by_center(const LieSuperAlgebra& g, const std::string& name) {
    return quotient_by_ideal(g, center_of(g), name);
}

// ---------------------------------------------------------------------------
// JSON import/export:
// {basis: [{label, parity, weight?}], constants: [[a,b,c,"p/q"]], form?: [[a,b,"p/q"]]}
// Constants are stored once per unordered pair (a <= b); the other order is
// reconstructed from super-antisymmetry.
// ---------------------------------------------------------------------------

inline nlohmann::json algebra_to_json(const LieSuperAlgebra& g) {
    nlohmann::json j;
    j["name"] = g.name;
    nlohmann::json basis = nlohmann::json::array();
    for (int i = 0; i < g.dim(); ++i) {
        nlohmann::json e;
        e["label"] = g.labels[static_cast<size_t>(i)];
        e["parity"] = g.parities[static_cast<size_t>(i)];
        if (static_cast<size_t>(i) < g.weights.size() && !g.weights[static_cast<size_t>(i)].empty())
            e["weight"] = g.weights[static_cast<size_t>(i)];
        basis.push_back(e);
    }
    j["basis"] = basis;
    nlohmann::json constants = nlohmann::json::array();
    for (int a = 0; a < g.dim(); ++a)
        for (int b = a; b < g.dim(); ++b)
            for (const auto& [c, v] : g.bracket(a, b))
                constants.push_back({a, b, c, rat_str(v)});
    j["constants"] = constants;
    if (g.form) {
        nlohmann::json form = nlohmann::json::array();
        for (int a = 0; a < g.dim(); ++a)
            for (int b = 0; b < g.dim(); ++b)
                if (!is_zero((*g.form)[static_cast<size_t>(a)][static_cast<size_t>(b)]))
                    form.push_back({a, b, rat_str((*g.form)[static_cast<size_t>(a)][static_cast<size_t>(b)])});
        j["form"] = form;
    }
    return j;
}

inline LieSuperAlgebra algebra_from_json(const nlohmann::json& j) {
    std::vector<std::string> labels;
    std::vector<int> parities;
    for (const auto& e : j.at("basis")) {
        labels.push_back(e.at("label").get<std::string>());
        parities.push_back(e.at("parity").get<int>());
    }
    LieSuperAlgebra g(j.value("name", "imported"), labels, parities);
    int d = g.dim();
    std::vector<SparseVec> acc(static_cast<size_t>(d) * static_cast<size_t>(d));
    for (const auto& e : j.at("constants")) {
        int a = e.at(0).get<int>(), b = e.at(1).get<int>(), c = e.at(2).get<int>();
        Rat v = parse_rat(e.at(3).get<std::string>());
        if (a < 0 || b < 0 || c < 0 || a >= d || b >= d || c >= d) throw Error("constants index out of range");
        if (b < a) throw Error("constants must be stored with a <= b");
        sparse_add(acc[static_cast<size_t>(a) * static_cast<size_t>(d) + static_cast<size_t>(b)], c, v);
    }
    for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b) {
            const SparseVec& v = acc[static_cast<size_t>(a) * static_cast<size_t>(d) + static_cast<size_t>(b)];
            g.set_bracket(a, b, v);
            if (a != b) {
                int sign = (parities[static_cast<size_t>(a)] && parities[static_cast<size_t>(b)]) ? 1 : -1;
                SparseVec w;
                for (const auto& [c, val] : v) w.emplace_back(c, sign > 0 ? val : -val);
                g.set_bracket(b, a, std::move(w));
            }
        }
    if (j.contains("form")) {
        std::vector<std::vector<Rat>> B(static_cast<size_t>(d), std::vector<Rat>(static_cast<size_t>(d), Rat(0)));
        for (const auto& e : j.at("form"))
            B[e.at(0).get<size_t>()][e.at(1).get<size_t>()] = parse_rat(e.at(2).get<std::string>());
        g.form = std::move(B);
    }
    g.detect_torus();
    return g;
}

}  // namespace slc
