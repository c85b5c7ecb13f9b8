#include <catch2/catch_amalgamated.hpp>

#include "slc/fock.hpp"
#include "slc/moments.hpp"

using namespace slc;

namespace {

TablePtr consts() { return VarTable::make({}, {}); }

CliffordElement rand_cliff(int n, const TablePtr& t, SplitMix64& rng) {
    CliffordElement e(n, t);
    for (int k = 0; k < 3; ++k) {
        CliffWord w{static_cast<std::uint32_t>(rng.below(1u << n)),
                    static_cast<std::uint32_t>(rng.below(1u << n))};
        Rat c(rng.range(-5, 5), rng.range(1, 2));
        c.canonicalize();
        if (is_zero(c)) c = Rat(1);
        e.add(w, HPoly::constant(t, c, static_cast<int>(rng.below(2))));
    }
    return e;
}

}  // namespace

TEST_CASE("fock action satisfies the Clifford relations identically in h") {
    auto t = consts();
    for (int n : {1, 2, 3}) {
        FockRep rep(n);
        auto mat = [&](const CliffordElement& x) { return fock_matrix(x, rep); };
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                auto xi_i = CliffordElement::xi_hat(n, t, i);
                auto eta_j = CliffordElement::eta_hat(n, t, j);
                auto anti = mat(xi_i) * mat(eta_j) + mat(eta_j) * mat(xi_i);
                SuperMatrix expect(rep.parities, t);
                if (i == j)
                    for (size_t d = 0; d < rep.dim(); ++d) expect.at(d, d) = HPoly::constant(t, Rat(1), 1);
                REQUIRE(anti == expect);
                auto xixj = mat(xi_i) * mat(CliffordElement::xi_hat(n, t, j)) +
                            mat(CliffordElement::xi_hat(n, t, j)) * mat(xi_i);
                REQUIRE(xixj == SuperMatrix(rep.parities, t));
                auto etij = mat(eta_j) * mat(CliffordElement::eta_hat(n, t, i)) +
                            mat(CliffordElement::eta_hat(n, t, i)) * mat(eta_j);
                REQUIRE(etij == SuperMatrix(rep.parities, t));
            }
    }
}

TEST_CASE("fock_matrix is an algebra homomorphism") {
    auto t = consts();
    for (int n : {1, 2, 3}) {
        FockRep rep(n);
        SECTION("generator pairs, n = " + std::to_string(n)) {
            std::vector<CliffordElement> gens;
            for (int i = 0; i < n; ++i) {
                gens.push_back(CliffordElement::xi_hat(n, t, i));
                gens.push_back(CliffordElement::eta_hat(n, t, i));
            }
            for (const auto& a : gens)
                for (const auto& b : gens)
                    REQUIRE(fock_matrix(cliff_mul(a, b), rep) == fock_matrix(a, rep) * fock_matrix(b, rep));
        }
        SECTION("random element pairs, n = " + std::to_string(n)) {
            SplitMix64 rng(static_cast<std::uint64_t>(n) * 77 + 1);
            for (int rep_i = 0; rep_i < 100; ++rep_i) {
                auto a = rand_cliff(n, t, rng);
                auto b = rand_cliff(n, t, rng);
                REQUIRE(fock_matrix(cliff_mul(a, b), rep) == fock_matrix(a, rep) * fock_matrix(b, rep));
            }
        }
    }
}

TEST_CASE("supertrace") {
    auto t = consts();
    SECTION("examples at n = 1") {
        FockRep rep(1);
        auto w = CliffordElement::word(1, t, CliffWord{1, 1}, HPoly::constant(t, Rat(1)));
        auto M = fock_matrix(w, rep);
        // sends 1 -> 0 and xi1 -> h xi1
        REQUIRE(M.at(0, 0).is_zero_poly());
        REQUIRE(M.at(1, 1) == HPoly::constant(t, Rat(1), 1));
        REQUIRE(str(M) == HPoly::constant(t, Rat(-1), 1));

        auto xi = fock_matrix(CliffordElement::xi_hat(1, t, 0), rep);
        REQUIRE(xi.at(1, 0) == HPoly::constant(t, Rat(1)));  // 1 |-> xi1
        REQUIRE(xi.at(0, 1).is_zero_poly());                 // xi1 |-> 0
        auto eta = fock_matrix(CliffordElement::eta_hat(1, t, 0), rep);
        REQUIRE(eta.at(0, 1) == HPoly::constant(t, Rat(1), 1));  // xi1 |-> h 1

        REQUIRE(str(SuperMatrix::identity(rep.parities, t)).is_zero_poly());
    }
    SECTION("str of supercommutators vanishes") {
        for (int n : {1, 2, 3}) {
            FockRep rep(n);
            SplitMix64 rng(static_cast<std::uint64_t>(n) + 13);
            for (int rep_i = 0; rep_i < 50; ++rep_i) {
                auto a = rand_cliff(n, t, rng);
                auto b = rand_cliff(n, t, rng);
                REQUIRE(str_fock(supercommutator(a, b), rep).is_zero_poly());
            }
        }
    }
    SECTION("abstract top-word formula: str(word) = 0 unless I = J = full") {
        for (int n : {1, 2, 3}) {
            FockRep rep(n);
            std::uint32_t full = (1u << n) - 1;
            for (std::uint32_t I = 0; I <= full; ++I)
                for (std::uint32_t J = 0; J <= full; ++J) {
                    auto w = CliffordElement::word(n, t, CliffWord{I, J}, HPoly::constant(t, Rat(1)));
                    HPoly s = str_fock(w, rep);
                    if (I == full && J == full) {
                        Rat expect((n * (n + 1) / 2) % 2 ? -1 : 1);
                        REQUIRE(s == HPoly::constant(t, expect, n));
                    } else {
                        REQUIRE(s.is_zero_poly());
                    }
                }
        }
    }
}

TEST_CASE("generic element") {
    auto G = GenericElement::make(2);
    REQUIRE(G.f.parity().value() == 0);
    REQUIRE(G.basis.size() == 4);
    // c1, c2 odd (degree-1 monomials), c0, c3 even
    REQUIRE_FALSE(G.P.table->is_odd(G.P.table->id_of("c0")));
    REQUIRE(G.P.table->is_odd(G.P.table->id_of("c1")));
    REQUIRE(G.P.table->is_odd(G.P.table->id_of("c2")));
    REQUIRE_FALSE(G.P.table->is_odd(G.P.table->id_of("c3")));

    SECTION("numeric substitution reproduces a concrete element") {
        std::map<int, SuperPoly> a;
        a[G.P.table->id_of("c0")] = SuperPoly::constant(G.P.table, Rat(5));
        a[G.P.table->id_of("c1")] = SuperPoly::zero(G.P.table);
        a[G.P.table->id_of("c2")] = SuperPoly::zero(G.P.table);
        a[G.P.table->id_of("c3")] = SuperPoly::constant(G.P.table, Rat(7));
        auto g = substitute(G.f, a);
        REQUIRE(g == parse_poly(G.P.table, "5 + 7*xi1*eta1"));
    }
}

TEST_CASE("moments and formula (***)") {
    SECTION("m = 2: s1 = -h c3") {
        auto G = GenericElement::make(2);
        auto ms = moments(G, 2);
        auto c3 = SuperPoly::variable(G.symbol_table, G.symbol_table->id_of("c3"));
        REQUIRE(ms[0] == HPoly::of(-c3, 1));
        auto [v1, low1] = lowest_component(ms[0]);
        REQUIRE(v1 == 1);
        REQUIRE(low1 == -c3);

        // s2 lowest component = -r2, valuation 1
        auto r2 = r_k_pullback(G, 2);
        auto [v2, low2] = lowest_component(ms[1]);
        REQUIRE(v2 == 1);
        REQUIRE(low2 == -r2);
    }
    SECTION("m = 4, k = 1: valuation equals n = 2") {
        auto G = GenericElement::make(4);
        auto ms = moments(G, 1);
        auto [v, low] = lowest_component(ms[0]);
        REQUIRE(v == 2);
        auto r1 = r_k_pullback(G, 1);
        REQUIRE(low == -r1);  // sigma_2 = (-1)^{2*3/2} = -1
    }
    SECTION("check_star3 items for n = 1") {
        auto G = GenericElement::make(2);
        auto ms = moments(G, 3);
        for (int k = 1; k <= 3; ++k) {
            auto item = check_star3(G, ms[static_cast<size_t>(k - 1)], k);
            REQUIRE(item.proportional);
            REQUIRE(item.valuation == 1);
            REQUIRE(item.constant == Rat(-k));  // (-1)^n * k with n = 1
            REQUIRE((item.remainder_order == -1 || item.remainder_order >= 2));
        }
    }
    SECTION("odd route m = 3: qtr moments exist and start at h^0") {
        auto G = GenericElement::make(3);
        auto ms = moments(G, 2);
        auto [v1, low1] = lowest_component(ms[0]);
        REQUIRE(v1 == 0);
        REQUIRE(low1 == r_k_pullback(G, 1));
    }
}

TEST_CASE("matrix-route queertrace calibration constant") {
    auto t = consts();
    for (int n : {1, 2}) {
        FockRep rep(n);
        auto og = odd_generators(n, t);
        CliffordElement top = og.gens[0];
        for (size_t a = 1; a < og.gens.size(); ++a) top = cliff_mul(top, og.gens[a]);
        HPoly q_abs = qtr_cliff(top);  // = 1
        REQUIRE(q_abs == HPoly::constant(t, Rat(1)));
        HPoly q_mat = qtr_matrix(top, og.J, rep);
        // proportionality constant c * h^e relating the two routes
        REQUIRE(q_mat.coeffs().size() == 1);
        INFO("n=" << n << " matrix qtr of top word: " << to_string(q_mat));
        REQUIRE(!q_mat.is_zero_poly());
    }
}
