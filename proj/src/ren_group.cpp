#include "mwi/ren_group.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace mwi {

Poly RenMap::order2(const Poly& B1, const Poly& B2) const {
    Poly z = zeta(B1, B2) * lambda;
    switch (kernel) {
        case RenKernel::Zeta:
            return z;
        case RenKernel::PhiPhiStarZeta:
            return fields::phi() * fields::phistar() * z;
        case RenKernel::ImaginaryZeta:
            return z * Scalar::I();
    }
    return z;
}

RenMap RenMap::inverse() const { return RenMap{-lambda, kernel}; }

RenMap Z_c(const Scalar& c) { return RenMap{c}; }

Poly renormalize_interaction(const RenMap& Z, const Poly& S) {
    return S + Z.order2(S, S) * Scalar(Rational(1, 2));
}

std::vector<std::pair<Poly, Poly>> split_interaction(const Poly& S) {
    std::vector<std::pair<Poly, Poly>> out;
    for (const auto& [k, v] : S.terms()) {
        Term tf, fp;
        fp.g = v.first.g;
        for (const auto& x : v.first.f) (x.kind == Kind::TestFn ? tf : fp).f.push_back(x);
        Poly test = Poly::of(tf), field = Poly::of(fp, v.second);
        auto it = std::find_if(out.begin(), out.end(), [&](const auto& p) { return p.first == test; });
        if (it == out.end())
            out.emplace_back(test, field);
        else
            it->second = it->second + field;
    }
    return out;
}

Poly interacting_current_shift(const RenMap& Z, const std::string& mu) {
    const std::string l = "lambda_";
    Poly S = fields::jA() * fields::testfn("g") * Scalar::sym("e") +
             fields::j(mu) * fields::testfn("alpha") * Scalar::sym(l);
    return renormalize_interaction(Z, S).map_coeff([&](const Scalar& s) {
        return s.derivative(l).substitute(l, Scalar(0));
    });
}

bool SPReport::all_passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

const PropertyCheck& SPReport::at(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return c;
    throw std::out_of_range("no check named " + name);
}

namespace {

// Random product of 1..3 undifferentiated generators and at most one derivated field.
Poly random_ansatz_monomial(std::mt19937_64& rng, const std::string& tag) {
    std::uniform_int_distribution<int> len(1, 3), pick(0, 2), dpick(0, 2);
    Poly out(Scalar(1));
    int n = len(rng);
    for (int k = 0; k < n; ++k) {
        switch (pick(rng)) {
            case 0: out = out * fields::A(tag + std::to_string(k)); break;
            case 1: out = out * fields::phi(); break;
            default: out = out * fields::phistar(); break;
        }
    }
    switch (dpick(rng)) {
        case 0: out = out * fields::dphi(tag + "d"); break;
        case 1: out = out * fields::dphistar(tag + "d"); break;
        default: break;
    }
    return out;
}

std::vector<NamedPoly> generating_set(const std::string& tag, unsigned seed) {
    using namespace fields;
    std::vector<NamedPoly> out = {
        {"A", A(tag)}, {"phi", phi()}, {"phistar", phistar()}, {"dphi", dphi(tag)}, {"dphistar", dphistar(tag)},
    };
    for (auto& p : p0_extended(tag)) out.push_back(p);
    std::mt19937_64 rng(seed);
    for (int k = 0; k < 6; ++k) out.push_back({"rand" + std::to_string(k), random_ansatz_monomial(rng, tag + "r")});
    return out;
}

bool has_fields(const Term& t) {
    for (const auto& x : t.f)
        if (x.kind == Kind::Field) return true;
    return false;
}

Poly vev_part(const Poly& P) {
    Poly out;
    for (const auto& [k, v] : P.terms())
        if (!has_fields(v.first)) out.add(v.first, v.second);
    return out;
}

void fail(PropertyCheck& c, const std::string& what) {
    if (c.passed) c.detail = what;
    c.passed = false;
}

}  // namespace

SPReport verify_sp_membership(const RenMap& Z, unsigned seed) {
    SPReport rep;
    rep.scope = "Field Independence checked for n <= 2 under the single-derivative ansatz";
    PropertyCheck lowest{"lowest-order", true, "Z^(1) = id"};
    PropertyCheck local{"locality", true, "Z^(2) supported on x1 = x2 without derivatives of delta"};
    PropertyCheck symm{"symmetry", true, "Z^(2)(B1, B2) = Z^(2)(B2, B1)"};
    PropertyCheck fi{"field-independence", true, "dZ^(2)/d(gen) obeys the Leibniz rule for all five generators"};
    PropertyCheck lor{"lorentz", true, "free indices of Z^(2)(B1, B2) are those of B1 and B2, term-wise"};
    PropertyCheck star_c{"star-structure", true, "Z^(2)(B1, B2)* = Z^(2)(B1*, B2*)"};
    PropertyCheck sd{"scaling-degree", true, ""};

    auto left = generating_set("u", seed), right = generating_set("v", seed + 1);
    const std::vector<Gen> gens = {Gen::A, Gen::Phi, Gen::PhiStar, Gen::DPhi, Gen::DPhiStar};
    int max_sd = -1;
    for (const auto& a : left) {
        // Z(B) is B plus nothing at first order
        if (renormalize_interaction(RenMap{Scalar(0), Z.kernel}, a.value) != a.value)
            fail(lowest, "first-order part differs from B for " + a.name);
        for (const auto& b : right) {
            std::string pair = "(" + a.name + ", " + b.name + ")";
            Poly z = Z.order2(a.value, b.value);
            for (const auto& [k, v] : z.terms())
                for (const auto& x : v.first.f)
                    if (x.kind == Kind::Kernel || x.pt != 0) fail(local, "non-local term in " + pair);
            if (Z.order2(b.value, a.value) != z) fail(symm, "asymmetric on " + pair);

            std::string rho = fresh_index();
            for (Gen g : gens) {
                Poly lhs = diff(z, g, rho);
                Poly rhs = Z.order2(diff(a.value, g, rho), b.value) + Z.order2(a.value, diff(b.value, g, rho));
                if (lhs != rhs) fail(fi, "Leibniz rule broken on " + pair);
            }

            if (!z.is_zero()) {
                std::set<std::string> want = a.value.free_indices();
                for (const auto& i : b.value.free_indices()) want.insert(i);
                for (const auto& [k, v] : z.terms())
                    if (v.first.free_indices() != want) fail(lor, "index structure changes on " + pair);
            }

            if (star(z) != Z.order2(star(a.value), star(b.value))) fail(star_c, "conjugation fails on " + pair);

            Poly vev = vev_part(z);
            if (!vev.is_zero()) {
                // the numerical part is c-number times delta(x1 - x2): degree 4
                int s = 4;
                max_sd = std::max(max_sd, s);
                int bound = mass_dimension(a.value) + mass_dimension(b.value);
                if (s > bound) fail(sd, "sd " + std::to_string(s) + " > " + std::to_string(bound) + " on " + pair);
            }
        }
    }
    if (sd.passed) {
        std::ostringstream os;
        os << "sd of numerical part = " << max_sd << " <= dim B1 + dim B2";
        sd.detail = os.str();
    }
    rep.checks = {lowest, local, symm, fi, lor, star_c, sd};
    return rep;
}

}  // namespace mwi
