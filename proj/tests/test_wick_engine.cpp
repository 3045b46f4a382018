#include <gtest/gtest.h>

#include "gen.hpp"
#include "mwi/wick_engine.hpp"

using namespace mwi;
using namespace mwi::fields;

namespace {
const Scalar I = Scalar::I();
const Scalar c = Scalar::sym("c");
const Scalar e = Scalar::sym("e");

Poly K(const std::string& name, int p1, int p2, std::vector<std::string> der = {}) {
    return Poly::of(Factor::kernel(name, p1, p2, std::move(der)));
}
Factor gen_of(const Poly& p) { return p.terms().begin()->second.first.f.at(0); }
}  // namespace

TEST(Contraction, Examples) {
    EXPECT_EQ(contraction(gen_of(dphi("nu")), kX, gen_of(dphistar("mu")), kY, Scalar(1)),
              -K("DF", 1, 0, {"mu", "nu"}) - K("delta", 1, 0) * Poly::metric("mu", "nu") * I);
    EXPECT_EQ(contraction(gen_of(dphistar("nu")), kX, gen_of(dphi("mu")), kY, Scalar(1)),
              contraction(gen_of(dphi("nu")), kX, gen_of(dphistar("mu")), kY, Scalar(1)));
    EXPECT_TRUE(contraction(gen_of(phi()), kX, gen_of(phi()), kY, c).is_zero());
    EXPECT_TRUE(contraction(gen_of(phistar()), kX, gen_of(phistar()), kY, c).is_zero());
    EXPECT_TRUE(contraction(gen_of(A("mu")), kX, gen_of(phi()), kY, c).is_zero());
    EXPECT_EQ(contraction(gen_of(phi()), kX, gen_of(phistar()), kY, c), K("DF", 1, 0));
    EXPECT_EQ(contraction(gen_of(A("mu")), kX, gen_of(A("nu")), kY, c), -K("D0", 1, 0) * Poly::metric("mu", "nu"));
}

TEST(T2Tree, Examples) {
    EXPECT_EQ(t2_tree(phi(), A("mu"), c), phi(kX) * A("mu", kY));
    // local difference on (jA, jA) is -i Z_c^(2) = -2ic A^2 phi phistar delta
    Poly diff = local_normalize(t2_tree(jA(), jA(), c) - t2_tree(jA(), jA(), Scalar(0)));
    EXPECT_EQ(local_part(diff),
              K("delta", 0, 1) * A("a", kX) * A("a", kX) * phi(kX) * phistar(kX) * (I * c * Scalar(-2)));
    EXPECT_EQ(diff, local_part(diff));
    // two uncontracted terms, DF and delta from the derivative pair, DF from phistar
    Poly t = t2_tree(dphi("nu"), j("mu"), c);
    EXPECT_EQ(t.size(), 5u);
}

TEST(T2Tree, ChargeSelectionAndCLinearity) {
    gen::Rng r(12);
    auto unit = [](const Scalar&) { return Scalar(1); };
    for (int k = 0; k < 60; ++k) {
        Poly a = gen::monomial(r, {"mu"}, 2).map_coeff(unit), b = gen::monomial(r, {"nu"}, 2).map_coeff(unit);
        Poly t = t2_tree(a, b, c);
        for (const auto& [key, v] : t.terms()) EXPECT_LE(v.second.degree("c"), 1);
        // affine in c: value at c equals value at 0 plus c times the slope
        Poly t0 = t2_tree(a, b, Scalar(0)), t1 = t2_tree(a, b, Scalar(1));
        EXPECT_EQ(t, t0 + (t1 - t0) * c);
    }
    // same-charge generators never contract
    Poly pa = phi() * phi(), pb = phi() * dphi("rho");
    EXPECT_EQ(t2_tree(pa, pb, c), at_point(pa, kX) * at_point(pb, kY));
}

TEST(OrderTwoWI, SymbolicC) {
    for (const Poly& B : {dphi("nu"), dphistar("nu"), j("nu")}) {
        EXPECT_TRUE(check_order2_WI(B, c).is_zero()) << B.str() << " -> " << check_order2_WI(B, c).str();
    }
}

TEST(OrderTwoWI, Endpoints) {
    for (const Poly& B : {dphi("nu"), dphistar("nu"), j("nu")}) {
        EXPECT_TRUE(check_order2_WI(B, Scalar(1)).is_zero());
        EXPECT_TRUE(check_order2_WI(B, Scalar(0)).is_zero());
    }
    // explicit right-hand sides
    std::string mu = "m1";
    Poly lhs1 = local_normalize(derivative_at(t2_tree(dphi("nu"), j(mu), Scalar(1)), kY, mu));
    EXPECT_EQ(lhs1, K("delta", 0, 1) * dphi("nu", kX));
    Poly lhs0 = local_normalize(derivative_at(t2_tree(dphi("nu"), j(mu), Scalar(0)), kY, mu));
    EXPECT_EQ(lhs0, K("delta", 0, 1) * dphi("nu", kX) - K("delta", 0, 1, {"nu"}) * phi(kX));
    Poly ljj = local_normalize(derivative_at(t2_tree(j("nu"), j(mu), c), kY, mu));
    EXPECT_EQ(ljj, K("delta", 0, 1, {"nu"}) * phistar(kX) * phi(kX) * ((Scalar(1) - c) * Scalar(2) * I));
}

TEST(OrderTwoWI, NoPropagatorsSurvive) {
    std::string mu = "m1";
    for (const Poly& B : {dphi("nu"), dphistar("nu"), j("nu")}) {
        Poly lhs = local_normalize(derivative_at(t2_tree(B, j(mu), c), kY, mu));
        EXPECT_FALSE(has_propagator(lhs));
    }
}

TEST(OrderTwoWI, FlippedKleinGordonSignFails) {
    WickConfig bad;
    bad.kg_sign = -1;
    int failures = 0;
    for (const Poly& B : {dphi("nu"), dphistar("nu"), j("nu")})
        if (!check_order2_WI(B, c, bad).is_zero()) ++failures;
    EXPECT_EQ(failures, 3);
}

TEST(SMatrix, CounterTerm) {
    Poly quartic = A("a") * A("a") * phistar() * phi() * testfn("g") * testfn("g");
    EXPECT_EQ(smatrix_order2(Scalar(1)), quartic * (I * e * e));
    EXPECT_TRUE(smatrix_order2(Scalar(0)).is_zero());
    EXPECT_EQ(smatrix_order2(c), quartic * (I * c * e * e));
}

TEST(LocalRules, PointIdentification) {
    // delta(y-x) f(y) = delta(y-x) f(x)
    Poly a = K("delta", 0, 1) * phi(kY) * testfn("g", kY);
    EXPECT_EQ(local_normalize(a), K("delta", 0, 1) * phi(kX) * testfn("g", kX));
    // g(y) d^nu delta(y-x) = g(x) d^nu delta(y-x) - (d^nu g)(x) delta(y-x)
    Poly b = K("delta", 0, 1, {"nu"}) * testfn("g", kY);
    Poly dg = Poly::of(Factor::testfn("g", kX, {"nu"}));
    EXPECT_EQ(local_normalize(b), K("delta", 0, 1, {"nu"}) * testfn("g", kX) - K("delta", 0, 1) * dg);
    // consistency with the Leibniz rule: d_y(g(y) delta(y-x)) computed both ways
    Poly c1 = local_normalize(derivative_at(K("delta", 0, 1) * testfn("g", kY), kY, "nu"));
    Poly c2 = local_normalize(derivative_at(local_normalize(K("delta", 0, 1) * testfn("g", kY)), kY, "nu"));
    EXPECT_EQ(c1, c2);
}

TEST(LocalRules, ConfluenceRandomized) {
    // normal form independent of whether localization happens before or after differentiation
    gen::Rng r(44);
    for (int k = 0; k < 40; ++k) {
        Poly f = at_point(gen::monomial(r, {"nu"}, 2), kY);
        Poly d = K("delta", 0, 1) * f;
        Poly a = local_normalize(derivative_at(d, kY, "rho"));
        Poly b = local_normalize(derivative_at(local_normalize(d), kY, "rho"));
        EXPECT_EQ(a, b);
    }
}
