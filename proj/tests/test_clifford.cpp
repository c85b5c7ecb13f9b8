#include <catch2/catch_amalgamated.hpp>

#include "slc/clifford.hpp"
#include "slc/fock.hpp"

using namespace slc;

namespace {

TablePtr consts() { return VarTable::make({}, {}); }

CliffordElement basis_word(int n, TablePtr t, std::uint32_t xi, std::uint32_t eta) {
    return CliffordElement::word(n, t, CliffWord{xi, eta}, HPoly::constant(t, Rat(1)));
}

SuperPoly mono(const PoissonAlgebra& P, std::uint64_t mask) {
    SuperMonomial m;
    m.odd = mask;
    return SuperPoly::monomial(P.table, m, Rat(1));
}

}  // namespace

TEST_CASE("clifford rewriting basics") {
    auto t = consts();
    auto xi = CliffordElement::xi_hat(1, t, 0);
    auto eta = CliffordElement::eta_hat(1, t, 0);

    SECTION("eta xi = -xi eta + h") {
        auto p = cliff_mul(eta, xi);
        REQUIRE(p.coeff(CliffWord{1, 1}) == HPoly::constant(t, Rat(-1)));
        REQUIRE(p.coeff(CliffWord{0, 0}) == HPoly::constant(t, Rat(1), 1));
        REQUIRE(p.terms().size() == 2);
    }
    SECTION("squares vanish") {
        REQUIRE(cliff_mul(xi, xi).is_zero_elem());
        REQUIRE(cliff_mul(eta, eta).is_zero_elem());
    }
    SECTION("(xi eta)^2 = h xi eta") {
        auto w = basis_word(1, t, 1, 1);
        auto p = cliff_mul(w, w);
        REQUIRE(p == w.shifted(1));
    }
    SECTION("supercommutators") {
        REQUIRE(supercommutator(xi, eta) == CliffordElement::word(1, t, CliffWord{}, HPoly::constant(t, Rat(1), 1)));
        auto even = basis_word(1, t, 1, 1);
        REQUIRE(supercommutator(even, even).is_zero_elem());
        auto xi1 = CliffordElement::xi_hat(2, t, 0);
        auto xi2 = CliffordElement::xi_hat(2, t, 1);
        REQUIRE(supercommutator(xi1, xi2).is_zero_elem());
    }
}

TEST_CASE("clifford associativity") {
    auto t = consts();
    SECTION("exhaustive on basis words, n = 2") {
        std::vector<CliffordElement> words;
        for (std::uint32_t a = 0; a < 4; ++a)
            for (std::uint32_t b = 0; b < 4; ++b) words.push_back(basis_word(2, t, a, b));
        for (const auto& x : words)
            for (const auto& y : words)
                for (const auto& z : words)
                    REQUIRE(cliff_mul(cliff_mul(x, y), z) == cliff_mul(x, cliff_mul(y, z)));
    }
    SECTION("random triples of basis words, n = 3") {
        SplitMix64 rng(42);
        for (int rep = 0; rep < 200; ++rep) {
            auto w = [&] {
                return basis_word(3, t, static_cast<std::uint32_t>(rng.below(8)),
                                  static_cast<std::uint32_t>(rng.below(8)));
            };
            auto x = w(), y = w(), z = w();
            REQUIRE(cliff_mul(cliff_mul(x, y), z) == cliff_mul(x, cliff_mul(y, z)));
        }
    }
    SECTION("with odd symbol coefficients") {
        auto st = VarTable::make({"a"}, {"b", "c"});
        SplitMix64 rng(7);
        auto rand_elem = [&] {
            CliffordElement e(2, st);
            for (int k = 0; k < 3; ++k) {
                CliffWord w{static_cast<std::uint32_t>(rng.below(4)), static_cast<std::uint32_t>(rng.below(4))};
                int deg = static_cast<int>(rng.below(3));
                int par = deg == 0 ? 0 : static_cast<int>(rng.below(2));
                if (deg == 1 && par == 0) par = 0;  // feasible: even var exists
                e.add(w, HPoly::of(random_homogeneous(st, deg, par, rng.next()), static_cast<int>(rng.below(2))));
            }
            return e;
        };
        for (int rep = 0; rep < 40; ++rep) {
            auto x = rand_elem(), y = rand_elem(), z = rand_elem();
            REQUIRE(cliff_mul(cliff_mul(x, y), z) == cliff_mul(x, cliff_mul(y, z)));
        }
    }
}

TEST_CASE("quantization map Q") {
    auto P = make_poisson(2);
    SECTION("monomials and normal form") {
        auto q1 = Q(P, P.poly("xi1*eta1"));
        REQUIRE(q1.coeff(CliffWord{1, 1}) == HPoly::constant(P.table, Rat(1)));
        auto qid = Q(P, SuperPoly::constant(P.table, Rat(1)));
        REQUIRE(qid == CliffordElement::identity(1, P.table));
        // eta1*xi1 normalizes to -xi1*eta1 before hatting
        auto qn = Q(P, mul(P.poly("eta1"), P.poly("xi1")));
        REQUIRE(qn.coeff(CliffWord{1, 1}) == HPoly::constant(P.table, Rat(-1)));
    }
    SECTION("symbol property: h = 0 recovers Grassmann multiplication") {
        auto P4 = make_poisson(4);
        for (std::uint64_t a = 0; a < 16; ++a)
            for (std::uint64_t b = 0; b < 16; ++b) {
                auto f = mono(P4, a), g = mono(P4, b);
                auto prod = cliff_mul(Q(P4, f), Q(P4, g)).at_h_zero();
                REQUIRE(prod == Q(P4, mul(f, g)));
            }
    }
}

TEST_CASE("lemma 4 defect") {
    SECTION("examples") {
        auto P = make_poisson(2);
        REQUIRE(lemma4_defect(P, P.poly("xi1"), P.poly("eta1")).is_zero_elem());
        for (std::uint64_t mask = 0; mask < 4; ++mask)
            REQUIRE(lemma4_defect(P, SuperPoly::constant(P.table, Rat(1)), mono(P, mask)).is_zero_elem());
        auto P4 = make_poisson(4);
        auto d = lemma4_defect(P4, P4.poly("xi1*xi2*eta1*eta2"), P4.poly("xi1*eta1"));
        auto v = d.valuation();
        REQUIRE((!v || *v >= 2));
    }
    SECTION("exhaustive over monomial pairs, even and odd routes, m <= 4") {
        for (int m : {2, 3, 4}) {
            auto P = make_poisson(m);
            auto basis = grassmann_basis(P);
            for (const auto& ma : basis)
                for (const auto& mb : basis) {
                    auto f = SuperPoly::monomial(P.table, ma, Rat(1));
                    auto g = SuperPoly::monomial(P.table, mb, Rat(1));
                    std::optional<int> v;
                    if (P.even_case)
                        v = lemma4_defect(P, f, g).valuation();
                    else
                        v = lemma4_defect_odd(P, f, g).valuation();
                    REQUIRE((!v || *v >= 2));
                }
        }
    }
}

TEST_CASE("odd generators inside Cliff_h") {
    auto t = consts();
    for (int n : {1, 2, 3}) {
        auto og = odd_generators(n, t);
        REQUIRE(static_cast<int>(og.gens.size()) == 2 * n - 1);
        for (size_t a = 0; a < og.gens.size(); ++a) {
            // squares alternate +h, -h
            auto sq = cliff_mul(og.gens[a], og.gens[a]);
            Rat expect(a % 2 == 0 ? 1 : -1);
            REQUIRE(sq == CliffordElement::word(n, t, CliffWord{}, HPoly::constant(t, expect, 1)));
            for (size_t b = a + 1; b < og.gens.size(); ++b)
                REQUIRE(supercommutator(og.gens[a], og.gens[b]).is_zero_elem());
            REQUIRE(supercommutator(og.J, og.gens[a]).is_zero_elem());
        }
        auto j2 = cliff_mul(og.J, og.J);
        REQUIRE(j2 == CliffordElement::word(n, t, CliffWord{}, HPoly::constant(t, Rat(-1), 1)));
    }
}

TEST_CASE("odd clifford algebra and qtr") {
    auto t = consts();
    SECTION("relations") {
        for (int m : {1, 3, 5}) {
            for (int a = 0; a < m; ++a)
                for (int b = 0; b < m; ++b) {
                    auto ga = OddCliffordElement::generator(m, t, a);
                    auto gb = OddCliffordElement::generator(m, t, b);
                    auto anti = odd_cliff_mul(ga, gb) + odd_cliff_mul(gb, ga);
                    if (a != b)
                        REQUIRE(anti.is_zero_elem());
                    else {
                        Rat expect(a % 2 == 0 ? 2 : -2);
                        REQUIRE(anti == (OddCliffordElement::identity(m, t) * expect).shifted(1));
                    }
                }
        }
    }
    SECTION("qtr normalization and vanishing") {
        int m = 3;  // n = 2
        std::vector<OddCliffordElement> words;
        for (std::uint32_t w = 0; w < 8; ++w) {
            OddCliffordElement e(m, t);
            e.add(w, HPoly::constant(t, Rat(1)));
            words.push_back(e);
        }
        REQUIRE(qtr(words[7]) == HPoly::constant(t, Rat(1)));  // top word
        REQUIRE(qtr(words[0]).is_zero_poly());                 // identity
        for (const auto& a : words)
            for (const auto& b : words) REQUIRE(qtr(odd_supercommutator(a, b)).is_zero_poly());
        for (const auto& a : words)
            if (__builtin_popcount(a.terms().begin()->first) % 2 == 0) REQUIRE(qtr(a).is_zero_poly());
    }
    SECTION("xi/eta to odd-generator basis is a homomorphism") {
        SplitMix64 rng(11);
        for (int rep = 0; rep < 100; ++rep) {
            auto x = basis_word(2, t, static_cast<std::uint32_t>(rng.below(4)),
                                static_cast<std::uint32_t>(rng.below(4)));
            auto y = basis_word(2, t, static_cast<std::uint32_t>(rng.below(4)),
                                static_cast<std::uint32_t>(rng.below(4)));
            REQUIRE(to_odd_basis(cliff_mul(x, y)) == odd_cliff_mul(to_odd_basis(x), to_odd_basis(y)));
        }
    }
    SECTION("qtr on Clifford elements via the odd basis") {
        int n = 2;
        auto og = odd_generators(n, consts());
        CliffordElement top = og.gens[0];
        for (size_t a = 1; a < og.gens.size(); ++a) top = cliff_mul(top, og.gens[a]);
        REQUIRE(qtr_cliff(top) == HPoly::constant(consts(), Rat(1)));
        REQUIRE_THROWS_AS(qtr_cliff(og.J), Error);
        // qtr vanishes on supercommutators of subalgebra elements
        SplitMix64 rng(5);
        for (int rep = 0; rep < 30; ++rep) {
            auto pick = [&] {
                CliffordElement e = CliffordElement::identity(n, consts());
                int len = 1 + static_cast<int>(rng.below(3));
                for (int i = 0; i < len; ++i) e = cliff_mul(e, og.gens[rng.below(og.gens.size())]);
                return e;
            };
            auto a = pick(), b = pick();
            REQUIRE(qtr_cliff(supercommutator(a, b)).is_zero_poly());
        }
    }
}
