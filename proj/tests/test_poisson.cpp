#include <catch2/catch_amalgamated.hpp>

#include "slc/clifford.hpp"
#include "slc/poisson.hpp"

using namespace slc;

namespace {

SuperPoly mono(const PoissonAlgebra& P, std::uint64_t mask) {
    SuperMonomial m;
    m.odd = mask;
    return SuperPoly::monomial(P.table, m, Rat(1));
}

SuperPoly rand_homog(const PoissonAlgebra& P, int deg, std::uint64_t seed) {
    return random_homogeneous(P.table, deg, deg % 2, seed);
}

}  // namespace

TEST_CASE("calibration singles out the convention") {
    const auto& conv = calibrated_convention();
    REQUIRE(conv.left_derivs);
    REQUIRE(conv.even_sign == -1);
    REQUIRE(conv.odd_prefactor == -2);
    REQUIRE(BracketConvention::alternating(5) == std::vector<int>{1, -1, 1, -1, 1});
}

TEST_CASE("poisson bracket, even case") {
    auto P = make_poisson(2);
    auto xi = P.poly("xi1"), eta = P.poly("eta1"), h = P.poly("xi1*eta1");

    REQUIRE(poisson_bracket(P, xi, eta) == SuperPoly::constant(P.table, Rat(1)));
    REQUIRE(poisson_bracket(P, h, xi) == xi);  // raw Example-3 formula gives -xi1
    REQUIRE(poisson_bracket(P, h, eta) == -eta);
    for (std::uint64_t mask = 0; mask < 4; ++mask)
        REQUIRE(poisson_bracket(P, SuperPoly::constant(P.table, Rat(1)), mono(P, mask)).is_zero_poly());
}

TEST_CASE("bracket laws on random homogeneous triples") {
    for (int m : {2, 3, 4, 5, 6}) {
        auto P = make_poisson(m);
        for (std::uint64_t seed = 1; seed <= 25; ++seed) {
            int df = 1 + static_cast<int>(seed % static_cast<std::uint64_t>(m));
            int dg = 1 + static_cast<int>((seed * 3) % static_cast<std::uint64_t>(m));
            int dh = 1 + static_cast<int>((seed * 7) % static_cast<std::uint64_t>(m));
            auto f = rand_homog(P, df, seed * 1000 + static_cast<std::uint64_t>(m));
            auto g = rand_homog(P, dg, seed * 1000 + 500);
            auto h = rand_homog(P, dh, seed * 1000 + 900);
            int pf = df % 2, pg = dg % 2;

            // super-antisymmetry
            auto fg = poisson_bracket(P, f, g);
            auto gf = poisson_bracket(P, g, f);
            REQUIRE(fg == ((pf * pg) ? gf : -gf));

            // super Jacobi
            auto lhs = poisson_bracket(P, f, poisson_bracket(P, g, h));
            auto rhs = poisson_bracket(P, fg, h);
            auto mid = poisson_bracket(P, g, poisson_bracket(P, f, h));
            rhs += (pf * pg) ? -mid : mid;
            REQUIRE(lhs == rhs);

            // Poisson-Leibniz
            auto lead = poisson_bracket(P, f, mul(g, h));
            auto expect = mul(fg, h) + ((pf * pg) ? Rat(-1) : Rat(1)) * mul(g, poisson_bracket(P, f, h));
            REQUIRE(lead == expect);

            // bracket parity and degree shift
            if (!fg.is_zero_poly()) {
                REQUIRE(fg.parity().value() == (pf + pg) % 2);
                REQUIRE(fg.degree() == df + dg - 2);
            }

            // form invariance B({f,g},h) = B(f,{g,h})
            REQUIRE(form_B(P, fg, h) == form_B(P, f, poisson_bracket(P, g, h)));
        }
    }
}

TEST_CASE("form B") {
    auto P = make_poisson(4);
    SECTION("examples") {
        REQUIRE(form_B(P, P.poly("xi1*eta1"), P.poly("xi2*eta2")) == Rat(-1));
        REQUIRE(form_B(P, SuperPoly::constant(P.table, Rat(1)), P.poly("xi1*xi2*eta1*eta2")) == Rat(1));
        REQUIRE(form_B(P, P.poly("xi1"), P.poly("xi1")) == Rat(0));
    }
    SECTION("nondegenerate and parity-even for even m") {
        auto basis = grassmann_basis(P);
        size_t dim = basis.size();
        // Gram matrix must pair each monomial with exactly one complementary
        // monomial, nonzero, and only in equal total parity.
        for (size_t i = 0; i < dim; ++i) {
            int nonzero = 0;
            for (size_t j = 0; j < dim; ++j) {
                Rat b = form_B(P, SuperPoly::monomial(P.table, basis[i], Rat(1)),
                               SuperPoly::monomial(P.table, basis[j], Rat(1)));
                if (!is_zero(b)) {
                    ++nonzero;
                    REQUIRE(basis[i].parity() == basis[j].parity());
                }
            }
            REQUIRE(nonzero == 1);
        }
    }
    SECTION("odd form for odd m pairs opposite parities") {
        auto P3 = make_poisson(3);
        auto basis = grassmann_basis(P3);
        for (size_t i = 0; i < basis.size(); ++i)
            for (size_t j = 0; j < basis.size(); ++j) {
                Rat b = form_B(P3, SuperPoly::monomial(P3.table, basis[i], Rat(1)),
                               SuperPoly::monomial(P3.table, basis[j], Rat(1)));
                if (!is_zero(b)) REQUIRE(basis[i].parity() != basis[j].parity());
            }
    }
}

TEST_CASE("r_k on the torus element") {
    auto P = make_poisson(4);
    auto f = parse_poly(P.table, "2*xi1*eta1 + 3*xi2*eta2");
    REQUIRE(r_k(P, f, 2) == Rat(-12));  // -2 * x1 * x2 with x1=2, x2=3
    REQUIRE(r_k(P, f, 1) == Rat(0));
    REQUIRE(r_k(P, f, 3) == Rat(0));
    REQUIRE_THROWS_AS(r_k(P, f, 0), Error);
}
