#include <gtest/gtest.h>

#include <algorithm>

#include "gen.hpp"
#include "mwi/tensor.hpp"

using namespace mwi;
using namespace mwi::fields;

TEST(Tensor, MetricTraceAndContraction) {
    EXPECT_EQ(Poly::metric("a", "a"), Poly(Scalar(4)));
    EXPECT_EQ(Poly::metric("mu", "a") * A("a"), A("mu"));
    EXPECT_EQ(Poly::metric("mu", "a") * Poly::metric("a", "nu"), Poly::metric("nu", "mu"));
    EXPECT_EQ(Poly::metric("mu", "a") * Poly::metric("a", "mu"), Poly(Scalar(4)));
}

TEST(Tensor, DummyNamesIrrelevant) {
    EXPECT_EQ(A("a") * dphi("a"), A("b") * dphi("b"));
    EXPECT_EQ(A("a") * A("a") * A("b") * A("b"), A("x") * A("y") * A("y") * A("x"));
    EXPECT_NE(A("mu") * dphi("nu"), A("nu") * dphi("mu"));
}

TEST(Tensor, IndexErrors) {
    Term t;
    t.f.push_back(Factor::field("A", 0, "a"));
    t.f.push_back(Factor::field("A", 0, "a"));
    t.f.push_back(Factor::field("phi", 0, {}, {"a"}));
    EXPECT_THROW(Poly::of(t), IndexError);
    EXPECT_THROW((A("mu") + A("nu")).free_indices(), IndexError);
}

TEST(Tensor, CanonicalFormIdempotentAndOrderFree) {
    gen::Rng r(11);
    for (int n = 0; n < 200; ++n) {
        Poly p = gen::monomial(r, {"mu"}, 4);
        for (const auto& [k, v] : p.terms()) {
            Term t = v.first;
            Scalar s = v.second;
            EXPECT_EQ(canonicalize(t, s), k);  // idempotent
            Term shuffled = t;
            std::shuffle(shuffled.f.begin(), shuffled.f.end(), r.eng);
            for (const auto& d : shuffled.dummy_indices()) shuffled.rename_index(d, fresh_index());
            Scalar s2 = v.second;
            EXPECT_EQ(canonicalize(shuffled, s2), k);
        }
    }
}

TEST(Tensor, BoxOnSameFactor) {
    Term t;
    t.f.push_back(Factor::kernel("DF", 1, 0, {"a", "a"}));
    Term u;
    u.f.push_back(Factor::kernel("DF", 1, 0, {"b"}));
    u.g.emplace_back("b", "c");
    u.f.push_back(Factor::deriv(2, "c"));
    Poly p = Poly::of(t), q = Poly::of(u);
    EXPECT_EQ(p.free_indices().size(), 0u);
    EXPECT_EQ(q.size(), 1u);
    EXPECT_EQ(q.terms().begin()->second.first.g.size(), 0u);
}

TEST(Tensor, ExpandSubstitution) {
    // phi -> phi + phistar in phi*phi gives (phi+phistar)^2
    Poly p = phi() * phi();
    Poly q = p.expand([](const Factor& x) -> std::optional<Poly> {
        if (x.name != "phi") return std::nullopt;
        return phi() + phistar();
    });
    EXPECT_EQ(q, phi() * phi() + phi() * phistar() * Scalar(2) + phistar() * phistar());
}

TEST(Tensor, ProductFreshensDummies) {
    Poly a = A("k") * dphi("k");
    EXPECT_EQ((a * a).free_indices().size(), 0u);
    EXPECT_EQ(mass_dimension(a * a), 6);
}
