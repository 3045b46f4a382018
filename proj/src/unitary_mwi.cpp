#include "mwi/unitary_mwi.hpp"

#include <json.hpp>

#include <cstdlib>

namespace mwi {

namespace {

const Scalar kI = Scalar::I();
const char* kOrder = "t_";

Poly fn_of(const std::string& fn, std::vector<std::string> der = {}) {
    return Poly::of(Factor::testfn(fn, 0, std::move(der)));
}

// sum_{k<=K} (i s lambda fn)^k / k!
Poly exp_series(int s, const Scalar& lambda, int K, const std::string& fn) {
    Poly out(Scalar(1)), term(Scalar(1));
    for (int k = 1; k <= K; ++k) {
        term = term * fn_of(fn) * (kI * Scalar(s) * lambda * Scalar(Rational(1, k)));
        out = out + term;
    }
    return out;
}

Poly truncate_order(const Poly& p, int K) {
    return p.map_coeff([&](const Scalar& s) { return s.truncate(kOrder, K).substitute(kOrder, Scalar(1)); });
}

Poly truncate_in(const Poly& p, const std::string& sym, int K) {
    return p.map_coeff([&](const Scalar& s) { return s.truncate(sym, K); });
}

}  // namespace

int default_truncation() {
    if (const char* v = std::getenv("MWI_TRUNCATION_K")) {
        char* end = nullptr;
        long k = std::strtol(v, &end, 10);
        if (end != v && *end == '\0' && k >= 1 && k <= 12) return static_cast<int>(k);
    }
    return 3;
}

Poly AlphaSeries::coeff(int k) const {
    Rational fact = 1;
    for (int i = 2; i <= k; ++i) fact *= i;
    return value.map_coeff([&](const Scalar& s) {
        Scalar d = s;
        for (int i = 0; i < k; ++i) d = d.derivative(param);
        return d.substitute(param, Scalar(0)) * Scalar(Rational(1) / fact);
    });
}

AlphaSeries AlphaSeries::derivative() const {
    AlphaSeries d = *this;
    d.K = K - 1;
    d.value = truncate_in(value.map_coeff([&](const Scalar& s) { return s.derivative(param); }), param, d.K);
    return d;
}

bool AlphaSeries::is_constant() const {
    for (const auto& [k, v] : value.terms())
        if (v.second.contains(param)) return false;
    return true;
}

Poly transform_poly(const Poly& F, const Scalar& lambda, int K, const std::string& fn, const TransformOptions& opts) {
    Scalar lt = lambda * Scalar::sym(kOrder);
    Poly ep = exp_series(1, lt, K, fn), em = exp_series(-1, lt, K, fn);
    Poly out = F.expand([&](const Factor& x) -> std::optional<Poly> {
        if (x.kind != Kind::Field || x.pt != 0) return std::nullopt;
        if (x.name == "A") {
            if (!opts.gauge_A || !x.der.empty()) return std::nullopt;
            return Poly::of(x) + fn_of(fn, {x.own}) * lt;
        }
        int s = x.name == "phi" ? 1 : x.name == "phistar" ? -1 : 0;
        if (s == 0) return std::nullopt;
        const Poly& e = s > 0 ? ep : em;
        Factor bare = x;
        bare.der.clear();
        if (x.der.empty()) return Poly::of(x) * e;
        if (x.der.size() != 1) throw std::invalid_argument("transform: only first derivatives of phi are supported");
        // d phi_alpha = (d phi) e^{i alpha} + i phi_alpha d alpha
        return Poly::of(x) * e + Poly::of(bare) * e * fn_of(fn, {x.der[0]}) * (kI * Scalar(s) * lt);
    });
    return truncate_order(out, K);
}

AlphaSeries transform(const Poly& F, int K, const TransformOptions& opts) {
    AlphaSeries a;
    a.K = K;
    a.value = transform_poly(F, Scalar::sym(a.param), K, "beta", opts);
    return a;
}

Poly free_lagrangian() {
    using namespace fields;
    return dphistar("k") * dphi("k") - phistar() * phi() * Scalar::sym("m", 2);
}

Poly dj_smeared(const Scalar& lambda, const std::string& fn) {
    std::string mu = fresh_index();
    return fields::j(mu) * fn_of(fn, {mu}) * (-lambda);
}

Poly delta_L0(const Scalar& lambda, const std::string& fn) {
    std::string k = fresh_index();
    return -dj_smeared(lambda, fn) + fields::phistar() * fields::phi() * fn_of(fn, {k}) * fn_of(fn, {k}) * (lambda * lambda);
}

Poly delta_L0_from_lagrangian(const Scalar& lambda, int K, const std::string& fn) {
    Poly L = free_lagrangian();
    return transform_poly(L, lambda, K, fn) - L;
}

Poly delta0(const Poly& F, const std::string& fn) { return theta(F) * fn_of(fn); }

Poly delta1(const Poly& F, const std::string& fn) {
    std::string mu = fresh_index();
    return theta_mu(F, mu) * fn_of(fn, {mu});
}

Poly delta_Q(const Poly& F, const std::string& fn) { return (delta0(F, fn) + delta1(F, fn)) * (-kI); }

Poly delta_Q_S0(const std::string& fn) { return dj_smeared(Scalar(1), fn); }

std::vector<InteractionList> apply_leibniz(const InteractionList& list, Poly (*d)(const Poly&, const std::string&),
                                           const std::string& fn) {
    std::vector<InteractionList> out;
    for (size_t k = 0; k < list.size(); ++k) {
        InteractionList l = list;
        l[k] = d(list[k], fn);
        if (!l[k].is_zero()) out.push_back(std::move(l));
    }
    return out;
}

Poly check_Fa(const Poly& F, int K, const TransformOptions& opts) {
    AlphaSeries Fa = transform(F, K, opts);
    Poly lhs = Fa.derivative().value;
    Poly rhs = truncate_in(delta_Q(Fa.value, "beta"), Fa.param, K - 1);
    return lhs + rhs;
}

Poly check_dL0_da(int K) {
    Scalar a = Scalar::sym("a");
    Poly L = truncate_in(delta_L0(a), "a", K);
    Poly dL = truncate_in(L.map_coeff([](const Scalar& s) { return s.derivative("a"); }), "a", K - 1);
    return dL + truncate_in(delta_Q(L, "beta"), "a", K - 1) + delta_Q_S0("beta");
}

Poly number_operator(const Poly& F) {
    std::string k = fresh_index();
    return fields::phi() * diff(F, Gen::Phi) + fields::dphi(k) * diff(F, Gen::DPhi, k);
}

UnitaryCertificate unitary_assembly(const Poly& F, int K) {
    if (!F.free_indices().empty()) throw std::invalid_argument("unitary_assembly needs a Lorentz scalar functional");
    UnitaryCertificate c;
    c.K = K;
    c.premises = {"MWI: T((dj)(beta) (x) e^{iG})_0 = -T(delta_{beta Q} G (x) e^{iG})_0 for every local G",
                  "unitary identity trivially true at a = 0",
                  "delta_{beta Q} S0 = (dj)(beta)"};
    auto step = [&](const std::string& name, const Poly& residual) {
        c.steps.push_back({name, residual.is_zero(), residual.str()});
    };
    Scalar a = Scalar::sym("a");
    step("dF/da = -delta_Q F", check_Fa(F, K));
    step("dL0 from free Lagrangian", truncate_in(delta_L0(a), "a", K) - delta_L0_from_lagrangian(a, K));
    step("delta_Q L0(f) = delta_Q S0", delta_Q(free_lagrangian(), "beta") - delta_Q_S0("beta"));
    step("d dL0/da = -delta_Q dL0 - delta_Q S0", check_dL0_da(K));
    // G(a) = F_{a beta} + dL0(a beta): its derivative is minus the MWI integrand
    Poly G = transform(F, K).value + truncate_in(delta_L0(a), "a", K);
    Poly dG = truncate_in(G.map_coeff([](const Scalar& s) { return s.derivative("a"); }), "a", K - 1);
    Poly integrand = truncate_in(delta_Q(G, "beta"), "a", K - 1) + delta_Q_S0("beta");
    step("dG/da + delta_Q G + delta_Q S0", dG + integrand);
    c.verified = true;
    for (const auto& s : c.steps) c.verified = c.verified && s.passed;
    return c;
}

std::string UnitaryCertificate::to_json() const {
    nlohmann::json j{{"verified", verified}, {"K", K}, {"premises", premises}};
    j["steps"] = nlohmann::json::array();
    for (const auto& s : steps) j["steps"].push_back({{"name", s.name}, {"passed", s.passed}, {"residual", s.residual}});
    return j.dump();
}

}  // namespace mwi
