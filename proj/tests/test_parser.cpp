#include <gtest/gtest.h>

#include "gen.hpp"
#include "mwi/parser.hpp"

using namespace mwi;
using namespace mwi::fields;

TEST(Parse, Examples) {
    EXPECT_EQ(parse_poly("j[mu]"), (phi() * dphistar("mu") - phistar() * dphi("mu")) * Scalar::I());
    EXPECT_EQ(parse_poly("phi phistar"), phi() * phistar());
    EXPECT_EQ(parse_poly("phi * phistar"), phi() * phistar());
    // accepted as an element with a contraction
    Poly p = parse_poly("dphi[mu] dphi[mu] dphistar[nu]");
    EXPECT_EQ(p, dphi("a") * dphi("a") * dphistar("nu"));
    EXPECT_EQ(p.free_indices(), std::set<std::string>{"nu"});
    EXPECT_EQ(parse_poly("L"), L());
    EXPECT_EQ(parse_poly("S"), S());
    EXPECT_EQ(parse_poly("e j[a] A[a] + e^2 g A[b] A[b] phistar phi"), L());
    EXPECT_EQ(parse_poly("1/2 i c A[mu] phi - 3 phi A[mu]"),
              A("mu") * phi() * (Scalar::I() * Scalar::sym("c") * Scalar(Rational(1, 2))) - A("mu") * phi() * Scalar(3));
    EXPECT_EQ(parse_poly("eta[mu,nu] phi"), Poly::metric("mu", "nu") * phi());
    EXPECT_EQ(parse_poly("-phi + phi"), Poly{});
}

TEST(Parse, Scalars) {
    EXPECT_EQ(parse_scalar("1"), Scalar(1));
    EXPECT_EQ(parse_scalar("c"), Scalar::sym("c"));
    EXPECT_EQ(parse_scalar("1/3"), Scalar(Rational(1, 3)));
    EXPECT_EQ(parse_scalar("1 - c"), Scalar(1) - Scalar::sym("c"));
    EXPECT_EQ(parse_scalar("m^2"), Scalar::sym("m", 2));
    EXPECT_THROW(parse_scalar("phi"), ParseError);
}

TEST(Parse, Lists) {
    auto l = parse_list("L,L,j[nu]");
    ASSERT_EQ(l.size(), 3u);
    EXPECT_EQ(l[2], j("nu"));
    EXPECT_EQ(parse_list("dphi[nu]").size(), 1u);
}

TEST(Parse, ErrorsCarryPositions) {
    auto where = [](const std::string& s) -> std::pair<int, int> {
        try {
            parse_poly(s);
        } catch (const ParseError& e) {
            return {e.line, e.col};
        }
        return {0, 0};
    };
    EXPECT_EQ(where("phi psi"), std::make_pair(1, 5));
    EXPECT_EQ(where("phi\n  + chi"), std::make_pair(2, 5));
    EXPECT_EQ(where("A[mu"), std::make_pair(1, 5));
    EXPECT_EQ(where("phi $"), std::make_pair(1, 5));
    EXPECT_EQ(where("A[mu] + phi"), std::make_pair(1, 9));  // free-index mismatch
    EXPECT_EQ(where("A[mu] A[mu] A[mu]"), std::make_pair(1, 13));
    EXPECT_EQ(where(""), std::make_pair(1, 1));
    EXPECT_EQ(where("phi +"), std::make_pair(1, 6));
    EXPECT_EQ(where("phi ^2"), std::make_pair(1, 5));
    EXPECT_EQ(where("phi + A[_0] dphi[a] dphistar[a]"), std::make_pair(1, 7));
}

TEST(Print, RoundTripNamed) {
    for (const Poly& p : {L(), S(), j("mu"), jA(), theta(L()), zeta(j("mu"), L()), phi() * Scalar(Rational(-7, 3)),
                          Poly::metric("mu", "nu") * phistar() * (Scalar::I() + Scalar(2)), Poly{}, Poly(Scalar(5))}) {
        EXPECT_EQ(parse_poly(print_poly(p)), p) << print_poly(p);
    }
}

TEST(Print, RoundTripRandomized) {
    gen::Rng r(99);
    for (int k = 0; k < 300; ++k) {
        Poly p = gen::polynomial(r, {"mu", "nu"}, 3) * (r.coin() ? fields::testfn("g") : Poly(Scalar(1)));
        EXPECT_EQ(parse_poly(print_poly(p)), p) << print_poly(p);
    }
}
