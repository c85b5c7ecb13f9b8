#include <catch2/catch_amalgamated.hpp>

#include "slc/superpoly.hpp"

using namespace slc;

namespace {

TablePtr grassmann4() { return VarTable::make({}, {"xi1", "xi2", "eta1", "eta2"}); }

SuperPoly var(const TablePtr& t, const char* name) {
    return SuperPoly::variable(t, t->id_of(name));
}

}  // namespace

TEST_CASE("grassmann multiplication signs") {
    auto t = grassmann4();
    auto xi1 = var(t, "xi1"), eta1 = var(t, "eta1");

    SECTION("eta1 * xi1 = -xi1*eta1") {
        auto p = mul(eta1, xi1);
        REQUIRE(to_string(p) == "-xi1*eta1");
        REQUIRE(p == -mul(xi1, eta1));
    }
    SECTION("nilpotency") {
        auto p = mul(mul(xi1, eta1), xi1);
        REQUIRE(p.is_zero_poly());
        REQUIRE(mul(xi1, xi1).is_zero_poly());
    }
    SECTION("(1 + xi1)^2 = 1 + 2 xi1") {
        auto one = SuperPoly::constant(t, Rat(1));
        auto s = one + xi1;
        REQUIRE(to_string(mul(s, s)) == "1 + 2*xi1");
    }
    SECTION("monomial supercommutativity, all pairs m=4") {
        for (std::uint64_t a = 0; a < 16; ++a)
            for (std::uint64_t b = 0; b < 16; ++b) {
                SuperMonomial ma, mb;
                ma.odd = a;
                mb.odd = b;
                auto u = SuperPoly::monomial(t, ma, Rat(1));
                auto v = SuperPoly::monomial(t, mb, Rat(1));
                int sign = (ma.parity() && mb.parity()) ? -1 : 1;
                REQUIRE(mul(u, v) == (sign > 0 ? mul(v, u) : -mul(v, u)));
            }
    }
    SECTION("degree additivity and bilinearity spot check") {
        auto f = parse_poly(t, "2*xi1*eta1 + xi2*eta2");
        auto g = parse_poly(t, "xi2*eta2");
        auto p = mul(f, g);
        REQUIRE(p == parse_poly(t, "-2*xi1*xi2*eta1*eta2"));
    }
    SECTION("table mismatch rejected") {
        auto t2 = VarTable::make({}, {"xi1", "eta1"});
        REQUIRE_THROWS_AS(mul(xi1, var(t2, "xi1")), Error);
    }
}

TEST_CASE("odd left derivatives") {
    auto t = grassmann4();
    auto xi1eta1 = parse_poly(t, "xi1*eta1");

    REQUIRE(left_deriv(xi1eta1, t->id_of("xi1")) == parse_poly(t, "eta1"));
    REQUIRE(left_deriv(xi1eta1, t->id_of("eta1")) == -parse_poly(t, "xi1"));
    REQUIRE(left_deriv(xi1eta1, t->id_of("xi2")).is_zero_poly());

    SECTION("d^2 = 0 and odd Leibniz on random elements") {
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            int deg_f = 1 + static_cast<int>(seed % 3);
            int deg_g = 1 + static_cast<int>((seed / 2) % 3);
            auto f = random_homogeneous(t, deg_f, deg_f % 2, seed);
            auto g = random_homogeneous(t, deg_g, deg_g % 2, seed + 1000);
            for (const char* v : {"xi1", "xi2", "eta1", "eta2"}) {
                int id = t->id_of(v);
                REQUIRE(left_deriv(left_deriv(f, id), id).is_zero_poly());
                auto lhs = left_deriv(mul(f, g), id);
                auto sign = f.parity().value() ? Rat(-1) : Rat(1);
                auto rhs = mul(left_deriv(f, id), g) + sign * mul(f, left_deriv(g, id));
                REQUIRE(lhs == rhs);
            }
        }
    }
}

TEST_CASE("substitution is a parity-respecting homomorphism") {
    auto t = grassmann4();
    auto f = parse_poly(t, "xi1*eta1 + xi2*eta2");

    SECTION("kill one variable") {
        std::map<int, SuperPoly> a{{t->id_of("xi1"), SuperPoly::zero(t)}};
        REQUIRE(substitute(f, a) == parse_poly(t, "xi2*eta2"));
    }
    SECTION("identity assignment") {
        std::map<int, SuperPoly> a;
        REQUIRE(substitute(f, a) == f);
    }
    SECTION("relabeling") {
        auto g = parse_poly(t, "xi1*eta1");
        std::map<int, SuperPoly> a{{t->id_of("xi1"), var(t, "xi2")},
                                   {t->id_of("eta1"), var(t, "eta2")}};
        REQUIRE(substitute(g, a) == parse_poly(t, "xi2*eta2"));
    }
    SECTION("parity mismatch rejected") {
        std::map<int, SuperPoly> a{{t->id_of("xi1"), SuperPoly::constant(t, Rat(1))}};
        REQUIRE_THROWS_AS(substitute(f, a), Error);
    }
    SECTION("multiplicativity on random pairs") {
        std::map<int, SuperPoly> a{{t->id_of("xi1"), parse_poly(t, "xi1 + eta2")},
                                   {t->id_of("eta2"), parse_poly(t, "3*eta1")}};
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            auto f1 = random_homogeneous(t, 2, 0, seed);
            auto g1 = random_homogeneous(t, 1, 1, seed + 50);
            REQUIRE(substitute(mul(f1, g1), a) == mul(substitute(f1, a), substitute(g1, a)));
        }
    }
}

TEST_CASE("berezin integral") {
    auto t = grassmann4();

    SECTION("canonical reorder sign") {
        auto p = mul(mul(mul(var(t, "xi1"), var(t, "eta1")), var(t, "xi2")), var(t, "eta2"));
        REQUIRE(berezin(p) == Rat(-1));
    }
    SECTION("non-top monomials integrate to zero") {
        REQUIRE(berezin(var(t, "xi1")) == Rat(0));
        REQUIRE(berezin(parse_poly(t, "1 + xi1*eta1")) == Rat(0));
    }
    SECTION("normalization") {
        REQUIRE(berezin(parse_poly(t, "5*xi1*xi2*eta1*eta2")) == Rat(5));
    }
    SECTION("even variables rejected") {
        auto tm = VarTable::make({"x"}, {"th1"});
        REQUIRE_THROWS_AS(berezin(SuperPoly::variable(tm, tm->id_of("th1"))), Error);
    }
    SECTION("supersymmetry of the pairing") {
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            int df = 1 + static_cast<int>(seed % 4);
            int dg = 1 + static_cast<int>((seed / 2) % 4);
            auto f = random_homogeneous(t, df, df % 2, seed);
            auto g = random_homogeneous(t, dg, dg % 2, seed + 99);
            int sign = (f.parity().value() * g.parity().value()) ? -1 : 1;
            REQUIRE(berezin(mul(f, g)) == Rat(sign) * berezin(mul(g, f)));
        }
    }
    SECTION("berezin_block extracts the top Grassmann block") {
        auto tj = VarTable::make({"c0"}, {"c1", "xi1", "eta1"});
        auto f = parse_poly(tj, "3*c0*xi1*eta1 + c1*xi1 + 2*xi1*eta1 + c1");
        auto series = berezin_block(f, 2);
        REQUIRE(series == parse_poly(tj, "3*c0 + 2"));
    }
}

TEST_CASE("canonical text form round trip") {
    auto t = VarTable::make({"x", "y"}, {"th1", "th2", "th3"});
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        int deg = static_cast<int>(seed % 5);
        int par = deg == 0 ? 0 : static_cast<int>(seed % 2);
        auto f = random_homogeneous(t, deg, par, seed * 7);
        REQUIRE(parse_poly(t, to_string(f)) == f);
    }
    REQUIRE(to_string(SuperPoly::zero(t)) == "0");
    REQUIRE(parse_poly(t, "0").is_zero_poly());
    REQUIRE(to_string(parse_poly(t, "x^2*th1 - 1/2*y")) == "-1/2*y + x^2*th1");

    SECTION("term order: total degree then lexicographic") {
        auto f = parse_poly(t, "th1*th2 + x*y + x^2 + th2*th3 + 1");
        REQUIRE(to_string(f) == "1 + x^2 + x*y + th1*th2 + th2*th3");
    }
}

TEST_CASE("random_homogeneous contract") {
    auto t = grassmann4();
    SECTION("determinism") {
        auto a = random_homogeneous(t, 2, 0, 12345);
        auto b = random_homogeneous(t, 2, 0, 12345);
        REQUIRE(a == b);
    }
    SECTION("degree and parity") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            auto f = random_homogeneous(t, 3, 1, seed);
            REQUIRE(f.degree() == 3);
            REQUIRE(f.parity().value() == 1);
        }
    }
    SECTION("degree 0 even is a rational constant") {
        auto f = random_homogeneous(t, 0, 0, 7);
        REQUIRE(f.is_constant());
    }
    SECTION("impossible combinations rejected") {
        REQUIRE_THROWS_AS(random_homogeneous(t, 1, 0, 1), Error);  // pure-odd table, degree 1 is odd
        REQUIRE_THROWS_AS(random_homogeneous(t, 0, 1, 1), Error);
    }
}
