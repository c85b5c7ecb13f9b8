#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "slc/liealg.hpp"
#include "slc/superpoly.hpp"

namespace slc {

/// Coordinate table of a module: one variable c<i> per module basis vector,
/// carrying its parity.  Even coordinates first (the VarTable convention);
/// the mapping between module indices and variable ids is kept explicit.
struct CoordinateTable {
    TablePtr table;
    std::vector<int> var_of_coord;  // module index -> variable id
    std::vector<int> coord_of_var;  // variable id -> module index

    static CoordinateTable make(const std::vector<int>& parities) {
        CoordinateTable C;
        std::vector<std::string> evens, odds;
        for (size_t i = 0; i < parities.size(); ++i)
            (parities[i] ? odds : evens).push_back("c" + std::to_string(i));
        C.table = VarTable::make(evens, odds);
        C.var_of_coord.resize(parities.size());
        C.coord_of_var.resize(parities.size());
        for (size_t i = 0; i < parities.size(); ++i) {
            int id = C.table->id_of("c" + std::to_string(i));
            C.var_of_coord[i] = id;
            C.coord_of_var[static_cast<size_t>(id)] = static_cast<int>(i);
        }
        return C;
    }
};

/// Number of degree-d monomials (symmetric in the evens, exterior in the
/// odds) without materializing them.
inline unsigned long long count_monomials(int n_even, int n_odd, int d) {
    // DP over odd count j: C(n_odd, j) * C(n_even + d - j - 1, d - j)
    auto binom = [](long long n, long long k) -> unsigned long long {
        if (k < 0 || k > n) return 0;
        unsigned long long r = 1;
        for (long long i = 1; i <= k; ++i) r = r * static_cast<unsigned long long>(n - k + i) / static_cast<unsigned long long>(i);
        return r;
    };
    unsigned long long total = 0;
    for (int j = 0; j <= std::min(n_odd, d); ++j) {
        int k = d - j;
        unsigned long long evens = (n_even == 0) ? (k == 0 ? 1 : 0) : binom(n_even + k - 1, k);
        total += binom(n_odd, j) * evens;
    }
    return total;
}

/// The monomial basis of S^d over a coordinate table, in canonical
/// (degree-lex) order, with weight bookkeeping for block decomposition.
struct PolySpaceBasis {
    TablePtr table;
    int degree = 0;
    std::vector<SuperMonomial> monos;                  // ascending canonical order
    std::map<std::vector<long>, std::vector<int>> blocks;  // weight -> indices; single empty key when no torus

    static PolySpaceBasis enumerate(const CoordinateTable& C, int d,
                                    const std::vector<std::vector<long>>& coord_weights) {
        PolySpaceBasis B;
        B.table = C.table;
        B.degree = d;
        int nvars = static_cast<int>(C.table->size());
        SuperMonomial current;
        std::vector<std::pair<int, int>> even_stack;

        std::function<void(int, int)> rec = [&](int var, int remaining) {
            if (remaining == 0) {
                SuperMonomial m;
                m.even = even_stack;
                m.odd = current.odd;
                B.monos.push_back(std::move(m));
                return;
            }
            if (var >= nvars) return;
            bool odd = C.table->is_odd(var);
            int cap = odd ? 1 : remaining;
            for (int e = cap; e >= 0; --e) {  // larger exponent first = canonically smaller
                if (e > 0) {
                    if (odd)
                        current.odd |= 1ull << C.table->odd_bit(var);
                    else
                        even_stack.emplace_back(var, e);
                }
                rec(var + 1, remaining - e);
                if (e > 0) {
                    if (odd)
                        current.odd &= ~(1ull << C.table->odd_bit(var));
                    else
                        even_stack.pop_back();
                }
            }
        };
        rec(0, d);

        // weight blocks
        bool have_weights = !coord_weights.empty() && !coord_weights[0].empty();
        for (size_t i = 0; i < B.monos.size(); ++i) {
            std::vector<long> w;
            if (have_weights) {
                w.assign(coord_weights[0].size(), 0);
                const SuperMonomial& m = B.monos[i];
                for (const auto& [v, e] : m.even) {
                    int coord = C.coord_of_var[static_cast<size_t>(v)];
                    for (size_t t = 0; t < w.size(); ++t)
                        w[t] += static_cast<long>(e) * coord_weights[static_cast<size_t>(coord)][t];
                }
                std::uint64_t rest = m.odd;
                while (rest) {
                    int bit = __builtin_ctzll(rest);
                    rest &= rest - 1;
                    int coord = C.coord_of_var[static_cast<size_t>(C.table->odd_bit_to_id(bit))];
                    for (size_t t = 0; t < w.size(); ++t) w[t] += coord_weights[static_cast<size_t>(coord)][t];
                }
            }
            B.blocks[w].push_back(static_cast<int>(i));
        }
        return B;
    }

    int index_of(const SuperMonomial& m) const {
        auto it = std::lower_bound(monos.begin(), monos.end(), m, MonomialLess{});
        if (it == monos.end() || !(*it == m)) return -1;
        return static_cast<int>(it - monos.begin());
    }
};

/// Images of the coordinates under one algebra element, as linear polys.
inline std::vector<SuperPoly> coordinate_images(const ModuleAction& A, const CoordinateTable& C,
                                                int gamma) {
    std::vector<SuperPoly> images(static_cast<size_t>(A.dim()), SuperPoly::zero(C.table));
    for (int j = 0; j < A.dim(); ++j) {
        SuperPoly img(C.table);
        for (const auto& [i, v] : A.mats[static_cast<size_t>(gamma)][static_cast<size_t>(j)])
            img += SuperPoly::variable(C.table, C.var_of_coord[static_cast<size_t>(i)], v);
        images[static_cast<size_t>(j)] = std::move(img);
    }
    return images;
}

/// The superderivation D_gamma = sum_v rho(e_gamma)(v) d/dv applied to f.
inline SuperPoly apply_derivation(const std::vector<SuperPoly>& images, const CoordinateTable& C,
                                  const SuperPoly& f) {
    SuperPoly out(C.table);
    for (size_t coord = 0; coord < images.size(); ++coord) {
        if (images[coord].is_zero_poly()) continue;
        SuperPoly df = poly_deriv(f, C.var_of_coord[coord]);
        if (df.is_zero_poly()) continue;
        out += mul(images[coord], df);
    }
    return out;
}

}  // namespace slc
