#include "mwi/field_algebra.hpp"

#include <algorithm>

namespace mwi {

namespace fields {

Poly A(const std::string& mu, int pt) { return Poly::of(Factor::field("A", pt, mu)); }
Poly phi(int pt) { return Poly::of(Factor::field("phi", pt)); }
Poly phistar(int pt) { return Poly::of(Factor::field("phistar", pt)); }
Poly dphi(const std::string& mu, int pt) { return Poly::of(Factor::field("phi", pt, {}, {mu})); }
Poly dphistar(const std::string& mu, int pt) {
    return Poly::of(Factor::field("phistar", pt, {}, {mu}));
}
Poly testfn(const std::string& name, int pt) { return Poly::of(Factor::testfn(name, pt)); }

Poly j(const std::string& mu) {
    return (phi() * dphistar(mu) - phistar() * dphi(mu)) * Scalar::I();
}

Poly jA() {
    std::string a = fresh_index();
    return j(a) * A(a);
}

Poly L() {
    std::string a = fresh_index();
    Scalar e = Scalar::sym("e");
    return jA() * e + testfn("g") * A(a) * A(a) * phistar() * phi() * (e * e);
}

Poly S() {
    std::string a = fresh_index();
    Scalar e = Scalar::sym("e");
    Poly g = testfn("g");
    return jA() * g * e + g * g * A(a) * A(a) * phistar() * phi() * (e * e);
}

}  // namespace fields

std::optional<Gen> generator_of(const Factor& f) {
    if (f.kind != Kind::Field) return std::nullopt;
    if (f.name == "A" && f.der.empty() && !f.own.empty()) return Gen::A;
    if (!f.own.empty()) return std::nullopt;
    if (f.name == "phi" && f.der.empty()) return Gen::Phi;
    if (f.name == "phistar" && f.der.empty()) return Gen::PhiStar;
    if (f.name == "phi" && f.der.size() == 1) return Gen::DPhi;
    if (f.name == "phistar" && f.der.size() == 1) return Gen::DPhiStar;
    return std::nullopt;
}

bool is_generator(const Factor& f) { return generator_of(f).has_value(); }

Factor make_generator(Gen g, const std::string& idx, int pt) {
    switch (g) {
        case Gen::A: return Factor::field("A", pt, idx);
        case Gen::Phi: return Factor::field("phi", pt);
        case Gen::PhiStar: return Factor::field("phistar", pt);
        case Gen::DPhi: return Factor::field("phi", pt, {}, {idx});
        case Gen::DPhiStar: return Factor::field("phistar", pt, {}, {idx});
    }
    return {};
}

static const std::string& generator_index(const Factor& f) {
    return f.name == "A" ? f.own : f.der.at(0);
}

static bool carries_index(Gen g) { return g == Gen::A || g == Gen::DPhi || g == Gen::DPhiStar; }

bool in_restricted_algebra(const Poly& B) {
    for (const auto& [k, v] : B.terms())
        for (const auto& x : v.first.f)
            if (x.kind != Kind::TestFn && !is_generator(x)) return false;
    return true;
}

Poly diff(const Poly& B, Gen g, const std::string& idx) {
    return B.map([&](const Term& t) {
        Poly out;
        for (size_t i = 0; i < t.f.size(); ++i) {
            if (generator_of(t.f[i]) != g) continue;
            Term rest = t;
            rest.f.erase(rest.f.begin() + static_cast<long>(i));
            if (carries_index(g)) rest.g.emplace_back(generator_index(t.f[i]), idx);
            out.add(rest, Scalar(1));
        }
        return out;
    });
}

static void require_unused(const Poly& B, const std::string& mu) {
    if (B.free_indices().count(mu)) throw IndexError("index " + mu + " already free in operand");
}

Poly theta(const Poly& B) {
    using namespace fields;
    std::string k = fresh_index();
    return phi() * diff(B, Gen::Phi) + dphi(k) * diff(B, Gen::DPhi, k) -
           phistar() * diff(B, Gen::PhiStar) - dphistar(k) * diff(B, Gen::DPhiStar, k);
}

Poly theta_mu(const Poly& B, const std::string& mu) {
    require_unused(B, mu);
    return fields::phi() * diff(B, Gen::DPhi, mu) - fields::phistar() * diff(B, Gen::DPhiStar, mu);
}

Poly zeta(const Poly& B1, const Poly& B2) {
    std::string k = fresh_index();
    return diff(B1, Gen::DPhiStar, k) * diff(B2, Gen::DPhi, k) +
           diff(B1, Gen::DPhi, k) * diff(B2, Gen::DPhiStar, k);
}

static int term_charge(const Term& t) {
    int b = 0;
    for (const auto& x : t.f) {
        if (x.kind != Kind::Field) continue;
        if (x.name == "phi") ++b;
        if (x.name == "phistar") --b;
    }
    return b;
}

int charge_number(const Poly& B) {
    if (B.is_zero()) throw NotEigenvector("zero polynomial has no charge number");
    int b = term_charge(B.terms().begin()->second.first);
    if (theta(B) != B * Scalar(b)) throw NotEigenvector("not an eigenvector of theta: " + B.str());
    return b;
}

int mass_dimension(const Poly& B) {
    std::optional<int> dim;
    for (const auto& [k, v] : B.terms()) {
        int d = 0;
        for (const auto& x : v.first.f)
            if (x.kind == Kind::Field) d += 1 + static_cast<int>(x.der.size());
        if (dim && *dim != d) throw NotHomogeneous("mixed mass dimensions in " + B.str());
        dim = d;
    }
    if (!dim) throw NotHomogeneous("zero polynomial has no mass dimension");
    return *dim;
}

Poly charge_conjugate(const Poly& B, const QI& eta) {
    return B.expand([&](const Factor& x) -> std::optional<Poly> {
        if (x.kind != Kind::Field) return std::nullopt;
        Factor y = x;
        if (x.name == "A") return Poly::of(x, Scalar(-1));
        if (x.name == "phi") {
            y.name = "phistar";
            return Poly::of(y, Scalar(eta));
        }
        y.name = "phi";
        return Poly::of(y, Scalar(eta.conj()));
    });
}

Poly star(const Poly& B) {
    return B.map_coeff([](const Scalar& s) { return s.conj(); }).expand([](const Factor& x) -> std::optional<Poly> {
        if (x.kind != Kind::Field || x.name == "A") return std::nullopt;
        Factor y = x;
        y.name = x.name == "phi" ? "phistar" : "phi";
        return Poly::of(y);
    });
}

static long binomial(int n, int k) {
    long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

std::vector<SubMonomial> submonomials(const Poly& monomial) {
    if (monomial.size() != 1) throw std::invalid_argument("submonomials needs a single monomial");
    const auto& [t0, coeff] = monomial.terms().begin()->second;
    // indices shared between sub and complement must survive separate canonicalization
    Term t = freshen(t0);

    // group identical generator factors
    std::vector<Factor> kinds;
    std::vector<int> mult;
    Term fixed{{}, t.g};
    for (const auto& x : t.f) {
        if (!is_generator(x)) {
            fixed.f.push_back(x);
            continue;
        }
        auto it = std::find(kinds.begin(), kinds.end(), x);
        if (it == kinds.end()) {
            kinds.push_back(x);
            mult.push_back(1);
        } else {
            ++mult[it - kinds.begin()];
        }
    }

    std::map<std::string, SubMonomial> merged;
    std::vector<std::string> order;
    std::vector<int> take(kinds.size(), 0);
    while (true) {
        Term sub = fixed, comp;
        Rational factor = 1;
        for (size_t i = 0; i < kinds.size(); ++i) {
            for (int r = 0; r < mult[i] - take[i]; ++r) sub.f.push_back(kinds[i]);
            for (int r = 0; r < take[i]; ++r) comp.f.push_back(kinds[i]);
            factor *= binomial(mult[i], take[i]);
        }
        // joint key so that index-relabelled duplicates merge
        Term joint = sub;
        for (auto x : comp.f) {
            x.pt = -99;
            joint.f.push_back(x);
        }
        Scalar one(1);
        std::string key = canonicalize(joint, one);
        auto it = merged.find(key);
        if (it == merged.end()) {
            merged.emplace(key, SubMonomial{Poly::of(sub, coeff), Poly::of(comp), factor});
            order.push_back(key);
        } else {
            it->second.factor += factor;
        }

        size_t i = 0;
        for (; i < kinds.size(); ++i) {
            if (take[i] < mult[i]) {
                ++take[i];
                break;
            }
            take[i] = 0;
        }
        if (i == kinds.size()) break;
    }
    std::vector<SubMonomial> out;
    for (const auto& k : order) out.push_back(merged.at(k));
    return out;
}

std::pair<Poly, Poly> delta_Q_action(const Poly& B, const std::string& mu) {
    return {theta(B), theta_mu(B, mu)};
}

bool single_derivative_ansatz(const Poly& B) {
    std::string a = fresh_index(), b = fresh_index();
    return diff(diff(B, Gen::DPhi, a), Gen::DPhi, b).is_zero() &&
           diff(diff(B, Gen::DPhiStar, a), Gen::DPhi, b).is_zero() &&
           diff(diff(B, Gen::DPhiStar, a), Gen::DPhiStar, b).is_zero();
}

std::vector<NamedPoly> p0_strict(const std::string& nu) {
    using namespace fields;
    std::string a = fresh_index();
    return {
        {"L", L()},
        {"j", j(nu)},
        {"A.dphistar", A(a) * dphistar(a)},
        {"A.dphi", A(a) * dphi(a)},
        {"phiA", phi() * A(nu)},
        {"phistarA", phistar() * A(nu)},
        {"dphi", dphi(nu)},
        {"dphistar", dphistar(nu)},
        {"A", A(nu)},
        {"phi", phi()},
        {"phistar", phistar()},
        {"AAphistar", A(a) * A(a) * phistar()},
        {"AAphi", A(a) * A(a) * phi()},
        {"Aphistarphi", A(nu) * phistar() * phi()},
        {"AA", A(a) * A(a)},
        {"phistarphi", phistar() * phi()},
    };
}

std::vector<NamedPoly> p0_extended(const std::string& nu) {
    using namespace fields;
    auto out = p0_strict(nu);
    std::string a = fresh_index();
    out.push_back({"jA", jA()});
    out.push_back({"AAphistarphi", A(a) * A(a) * phistar() * phi()});
    out.push_back({"phi.dphistar", phi() * dphistar(nu)});
    out.push_back({"phistar.dphi", phistar() * dphi(nu)});
    return out;
}

Poly at_point(const Poly& B, int pt) {
    return B.map([&](const Term& t) {
        Term u = t;
        for (auto& x : u.f) x.pt = pt;
        return Poly::of(u);
    });
}

}  // namespace mwi
