#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "slc/hpoly.hpp"
#include "slc/moments.hpp"
#include "slc/parallel.hpp"
#include "slc/polyspace.hpp"
#include "slc/zoo.hpp"

namespace slc {

struct SolverOptions {
    bool weight_filter = true;
    std::uint64_t budget = 200'000'000;  // elimination work cap (nonzeros touched)
    int threads = 1;
};

/// Exact basis of the degree-d ad-invariant subspace of S^d(module).
struct InvariantBasis {
    std::string algebra;
    std::string module;  // "adjoint" | "coadjoint" | "natural"
    int degree = 0;
    bool aborted = false;
    std::string abort_detail;
    unsigned long long space_dim = 0;  // size of the enumerated S^d basis
    std::vector<SuperPoly> basis;      // over the coordinate table
    CoordinateTable coords;

    int dim() const { return static_cast<int>(basis.size()); }
};

/// Kernel of all D_gamma on S^d.  The weight filter restricts to the
/// weight-zero block; with the filter off every block is processed (blocks
/// never couple, so the union of block kernels is the full kernel).
inline InvariantBasis invariants(const ModuleAction& A, int d, const SolverOptions& opts = {}) {
    if (d < 0) throw Error("invariants: negative degree");
    InvariantBasis out;
    out.algebra = A.algebra->name;
    out.module = A.kind;
    out.degree = d;
    out.coords = CoordinateTable::make(A.parities);

    int ne = 0, no = 0;
    for (int p : A.parities) (p ? no : ne) += 1;
    out.space_dim = count_monomials(ne, no, d);
    if (out.space_dim > 20'000'000ull) {
        out.aborted = true;
        out.abort_detail = "monomial basis too large: " + std::to_string(out.space_dim);
        return out;
    }
    if (d == 0) {  // constants are always invariant
        out.basis.push_back(SuperPoly::constant(out.coords.table, Rat(1)));
        return out;
    }

    PolySpaceBasis B = PolySpaceBasis::enumerate(out.coords, d, A.weights);

    std::vector<std::vector<SuperPoly>> images;
    for (int g = 0; g < A.algebra->dim(); ++g) images.push_back(coordinate_images(A, out.coords, g));

    std::vector<std::pair<std::vector<long>, const std::vector<int>*>> work;
    bool have_weights = !A.weights.empty() && !A.weights[0].empty();
    for (const auto& [w, idxs] : B.blocks) {
        if (opts.weight_filter && have_weights) {
            bool zero = true;
            for (long x : w) zero = zero && x == 0;
            if (!zero) continue;
        }
        work.emplace_back(w, &idxs);
    }

    struct BlockResult {
        std::vector<std::vector<Rat>> kernel;  // over local block indices
        bool aborted = false;
        std::uint64_t work = 0;
    };
    std::vector<BlockResult> results(work.size());

    std::uint64_t per_block_budget = opts.budget;
    parallel_for(work.size(), opts.threads, [&](size_t wi) {
        const std::vector<int>& cols = *work[wi].second;
        BlockResult& res = results[wi];
        // sparse rows keyed by (gamma, target monomial)
        std::map<std::pair<int, SuperMonomial>, size_t,
                 decltype([](const std::pair<int, SuperMonomial>& a, const std::pair<int, SuperMonomial>& b) {
                     if (a.first != b.first) return a.first < b.first;
                     return MonomialLess{}(a.second, b.second);
                 })>
            row_of;
        std::vector<std::map<int, Rat>> sparse_rows;
        for (int g = 0; g < A.algebra->dim(); ++g) {
            for (size_t local = 0; local < cols.size(); ++local) {
                const SuperMonomial& mu = B.monos[static_cast<size_t>(cols[local])];
                SuperPoly img = apply_derivation(images[static_cast<size_t>(g)], out.coords,
                                                 SuperPoly::monomial(out.coords.table, mu, Rat(1)));
                for (const auto& [nu, c] : img.terms()) {
                    auto [it, inserted] = row_of.emplace(std::make_pair(g, nu), sparse_rows.size());
                    if (inserted) sparse_rows.emplace_back();
                    sparse_rows[it->second][static_cast<int>(local)] += c;
                }
            }
        }
        std::vector<SparseRow> irows;
        irows.reserve(sparse_rows.size());
        for (auto& r : sparse_rows) irows.push_back(to_sparse_row(r));
        try {
            auto ech = echelonize(std::move(irows), static_cast<int>(cols.size()), per_block_budget);
            res.work = ech.work;
            res.kernel = kernel_basis(ech);
        } catch (const BudgetExceeded&) {
            res.aborted = true;
        }
    });

    for (size_t wi = 0; wi < work.size(); ++wi) {
        if (results[wi].aborted) {
            out.aborted = true;
            out.abort_detail = "budget exceeded in a weight block of size " +
                               std::to_string(work[wi].second->size());
            continue;
        }
        const std::vector<int>& cols = *work[wi].second;
        for (const auto& v : results[wi].kernel) {
            SuperPoly p(out.coords.table);
            for (size_t local = 0; local < cols.size(); ++local)
                if (!is_zero(v[local])) p.add_term(B.monos[static_cast<size_t>(cols[local])], v[local]);
            out.basis.push_back(std::move(p));
        }
    }
    return out;
}

/// True iff D_gamma P = 0 for every basis gamma.
inline bool check_invariant(const ModuleAction& A, const CoordinateTable& C, const SuperPoly& P) {
    for (int g = 0; g < A.algebra->dim(); ++g) {
        auto images = coordinate_images(A, C, g);
        if (!apply_derivation(images, C, P).is_zero_poly()) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Radial parts (po-specific: restriction to the Cartan coordinates).
// ---------------------------------------------------------------------------

struct RadialMap {
    TablePtr x_table;            // x1..xn, even
    std::vector<int> torus_coords;  // module coordinate index of h_i = xi_i eta_i

    static RadialMap make(int m) {
        if (m % 2 != 0) throw Error("radial parts need even m");
        int n = m / 2;
        RadialMap R;
        std::vector<std::string> xs;
        for (int i = 1; i <= n; ++i) xs.push_back("x" + std::to_string(i));
        R.x_table = VarTable::make(xs, {});
        PoissonAlgebra P = make_poisson(m);
        auto basis = grassmann_basis(P);
        for (int i = 0; i < n; ++i) {
            std::uint64_t mask = (1ull << i) | (1ull << (n + i));
            for (size_t b = 0; b < basis.size(); ++b)
                if (basis[b].odd == mask) R.torus_coords.push_back(static_cast<int>(b));
        }
        return R;
    }
};

/// Sets every non-torus coordinate to zero and renames c_{h_i} to x_i.
inline SuperPoly radial_part(const SuperPoly& P, const CoordinateTable& C, const RadialMap& R) {
    SuperPoly out(R.x_table);
    std::map<int, int> x_of;  // var id in C -> x var id
    for (size_t i = 0; i < R.torus_coords.size(); ++i)
        x_of[C.var_of_coord[static_cast<size_t>(R.torus_coords[i])]] =
            R.x_table->id_of("x" + std::to_string(i + 1));
    for (const auto& [mono, c] : P.terms()) {
        if (mono.odd != 0) continue;  // torus coordinates are even
        SuperMonomial img;
        bool keep = true;
        for (const auto& [v, e] : mono.even) {
            auto it = x_of.find(v);
            if (it == x_of.end()) {
                keep = false;
                break;
            }
            img.even.emplace_back(it->second, e);
        }
        if (!keep) continue;
        std::sort(img.even.begin(), img.even.end());
        out.add_term(img, c);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Span membership over the degree-d monomial basis.
// ---------------------------------------------------------------------------

inline SparseRow poly_to_row(const SuperPoly& p, const PolySpaceBasis& B) {
    std::map<int, Rat> entries;
    for (const auto& [m, c] : p.terms()) {
        int idx = B.index_of(m);
        if (idx < 0) throw Error("poly_to_row: monomial outside the basis");
        entries[idx] = c;
    }
    return to_sparse_row(entries);
}

/// True iff candidate lies in the span of the generator polynomials
/// (all homogeneous of the same degree, expanded over the basis).
inline bool span_membership(const SuperPoly& candidate, const std::vector<SuperPoly>& generators,
                            const PolySpaceBasis& B) {
    if (candidate.is_zero_poly()) return true;
    std::vector<SparseRow> rows;
    for (const auto& g : generators)
        if (!g.is_zero_poly()) rows.push_back(poly_to_row(g, B));
    auto ech = echelonize(std::move(rows), static_cast<int>(B.monos.size()));
    return reduce_row(poly_to_row(candidate, B), ech).empty();
}

/// All products of the given polynomials along integer partitions of d,
/// where part k picks factor polys[k-1] (coordinate-degree bookkeeping:
/// entry k has degree k).
inline std::vector<std::vector<int>> partitions_of(int d) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::function<void(int, int)> rec = [&](int remaining, int maxpart) {
        if (remaining == 0) {
            out.push_back(cur);
            return;
        }
        for (int k = std::min(remaining, maxpart); k >= 1; --k) {
            cur.push_back(k);
            rec(remaining - k, k);
            cur.pop_back();
        }
    };
    rec(d, d);
    return out;
}

// ---------------------------------------------------------------------------
// Valuation-aware span of lowest components (the Lemma-5 pipeline).
// ---------------------------------------------------------------------------

struct LowestComponentEntry {
    int valuation = 0;
    SuperPoly component;       // the achievable lowest component
    SparseVec witness;         // combination over the input family
};

struct LowestComponentSpan {
    std::vector<LowestComponentEntry> basis;  // linearly independent components
    int dim() const { return static_cast<int>(basis.size()); }
};

/// The space spanned by all achievable lowest components of Q-linear
/// combinations of the family: eliminate leading coefficient vectors per
/// valuation, re-insert remainders at their new (higher) valuation, iterate
/// to a fixpoint, then rank-reduce the collected components.
inline LowestComponentSpan lowest_component_span(const std::vector<HPoly>& family,
                                                 const PolySpaceBasis& B) {
    struct Item {
        std::map<int, std::map<int, Rat>> levels;  // hpow -> (basis index -> coeff)
        SparseVec witness;
        int valuation() const { return levels.empty() ? -1 : levels.begin()->first; }
    };
    auto prune = [](Item& it) {
        for (auto lv = it.levels.begin(); lv != it.levels.end();) {
            for (auto c = lv->second.begin(); c != lv->second.end();) {
                c->second.canonicalize();
                c = is_zero(c->second) ? lv->second.erase(c) : std::next(c);
            }
            lv = lv->second.empty() ? it.levels.erase(lv) : std::next(lv);
        }
    };

    std::vector<Item> queue;
    for (size_t f = 0; f < family.size(); ++f) {
        Item it;
        for (const auto& [k, poly] : family[f].coeffs())
            for (const auto& [m, c] : poly.terms()) {
                int idx = B.index_of(m);
                if (idx < 0) throw Error("lowest_component_span: monomial outside basis");
                it.levels[k][idx] = c;
            }
        it.witness = {{static_cast<int>(f), Rat(1)}};
        prune(it);
        if (!it.levels.empty()) queue.push_back(std::move(it));
    }

    // accepted items grouped by valuation; within a valuation, echelon by
    // the leading basis index of the lowest component
    std::map<int, std::vector<Item>> accepted;
    std::function<void(Item&&)> process = [&](Item&& it) {
        while (!it.levels.empty()) {
            int v = it.valuation();
            auto& bucket = accepted[v];
            auto& lc = it.levels.begin()->second;
            int pivot = lc.begin()->first;
            bool reduced = false;
            for (const auto& acc : bucket) {
                const auto& alc = acc.levels.begin()->second;
                if (alc.begin()->first != pivot) continue;
                Rat factor = lc.begin()->second / alc.begin()->second;
                // it -= factor * acc (full h-expansion and witness)
                for (const auto& [k, vec] : acc.levels)
                    for (const auto& [i, c] : vec) {
                        Rat& slot = it.levels[k][i];
                        slot -= factor * c;
                    }
                for (const auto& [i, c] : acc.witness) sparse_add(it.witness, i, -factor * c);
                prune(it);
                reduced = true;
                break;
            }
            if (!reduced) {
                bucket.push_back(it);
                // keep the bucket ordered by pivot for determinism
                std::sort(bucket.begin(), bucket.end(), [](const Item& a, const Item& b) {
                    return a.levels.begin()->second.begin()->first <
                           b.levels.begin()->second.begin()->first;
                });
                return;
            }
        }
    };
    for (auto& it : queue) process(std::move(it));

    // rank-reduce the collected lowest components across valuations
    LowestComponentSpan out;
    std::vector<std::map<int, Rat>> echelon;  // sparse reduced rows
    for (const auto& [v, bucket] : accepted)
        for (const auto& acc : bucket) {
            std::map<int, Rat> vec = acc.levels.begin()->second;
            for (const auto& row : echelon) {
                auto it = vec.find(row.begin()->first);
                if (it == vec.end()) continue;
                Rat f = it->second / row.begin()->second;
                for (const auto& [i, c] : row) {
                    Rat& slot = vec[i];
                    slot -= f * c;
                    slot.canonicalize();
                    if (is_zero(slot)) vec.erase(i);
                }
            }
            if (vec.empty()) continue;
            echelon.push_back(vec);
            LowestComponentEntry e;
            e.valuation = v;
            e.witness = acc.witness;
            SuperPoly comp(B.table);
            for (const auto& [i, c] : acc.levels.begin()->second)
                comp.add_term(B.monos[static_cast<size_t>(i)], c);
            e.component = std::move(comp);
            out.basis.push_back(std::move(e));
        }
    return out;
}

// ---------------------------------------------------------------------------
// Conjecture-6 pipeline: compare invariants with the span of lowest
// components of moment products, degree by degree.
// ---------------------------------------------------------------------------

struct Conjecture6Degree {
    int degree = 0;
    int dim_invariants = 0;
    int dim_lowest_components = 0;
    bool all_components_invariant = false;
    bool aborted = false;
    bool equal = false;
};

struct Conjecture6Report {
    int m = 0;
    bool even_case = true;
    std::vector<Conjecture6Degree> degrees;
    bool ok() const {
        for (const auto& d : degrees)
            if (!d.aborted && (!d.equal || !d.all_components_invariant)) return false;
        return true;
    }
};

inline Conjecture6Report conjecture6_report(int m, int d_max, const SolverOptions& opts = {}) {
    Conjecture6Report rep;
    rep.m = m;
    rep.even_case = (m % 2 == 0);
    auto gp = std::make_shared<LieSuperAlgebra>(po_algebra(m));
    ModuleAction co = coadjoint_action(gp);
    CoordinateTable C = CoordinateTable::make(co.parities);

    // Invariant bases first: degrees the solver aborts on never trigger the
    // (potentially heavy) moment computation.
    std::vector<InvariantBasis> inv;
    int usable_max = 0;
    for (int d = 1; d <= d_max; ++d) {
        inv.push_back(invariants(co, d, opts));
        if (!inv.back().aborted) usable_max = d;
    }
    std::vector<HPoly> ms;
    GenericElement G;
    if (usable_max > 0) {
        G = GenericElement::make(m);
        ms = moments(G, usable_max);
    }

    for (int d = 1; d <= d_max; ++d) {
        Conjecture6Degree row;
        row.degree = d;
        if (inv[static_cast<size_t>(d - 1)].aborted) {
            row.aborted = true;
            rep.degrees.push_back(row);
            continue;
        }
        row.dim_invariants = inv[static_cast<size_t>(d - 1)].dim();

        std::vector<HPoly> family;
        for (const auto& parts : partitions_of(d)) {
            HPoly prod = HPoly::constant(G.symbol_table, Rat(1));
            for (int k : parts) prod = prod * ms[static_cast<size_t>(k - 1)];
            if (!prod.is_zero_poly()) family.push_back(std::move(prod));
        }
        PolySpaceBasis B = PolySpaceBasis::enumerate(C, d, {});
        LowestComponentSpan span = lowest_component_span(family, B);
        row.dim_lowest_components = span.dim();
        row.all_components_invariant = true;
        for (const auto& e : span.basis)
            row.all_components_invariant =
                row.all_components_invariant && check_invariant(co, C, e.component);
        row.equal = (row.dim_invariants == row.dim_lowest_components);
        rep.degrees.push_back(row);
    }
    return rep;
}

}  // namespace slc
