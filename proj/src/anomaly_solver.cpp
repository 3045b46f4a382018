#include "mwi/anomaly_solver.hpp"

#include <json.hpp>

#include <set>

namespace mwi {

namespace {

using json = nlohmann::json;

Poly d(int pt, const std::string& idx) { return Poly::of(Factor::deriv(pt, idx)); }
Poly dot(int p, int q) { return d(p, "al") * d(q, "al"); }
Poly g(const std::string& a, const std::string& b) { return Poly::metric(a, b); }

std::string cname(size_t k) { return "C" + std::to_string(k + 1); }

DeltaTensor combine(int n, const std::vector<Poly>& basis) {
    Poly p;
    for (size_t k = 0; k < basis.size(); ++k) p = p + basis[k] * Scalar::sym(cname(k));
    return delta_normalize(n, p);
}

std::vector<std::string> names(size_t k) {
    std::vector<std::string> out;
    for (size_t i = 0; i < k; ++i) out.push_back(cname(i));
    return out;
}

Poly substitute(const Poly& p, const std::map<std::string, Scalar>& vals) {
    return p.map_coeff([&](const Scalar& s) {
        Scalar r = s;
        for (const auto& [k, v] : vals) r = r.substitute(k, v);
        return r;
    });
}

std::vector<Scalar> equations(const DeltaTensor& t) {
    std::vector<Scalar> eqs;
    for (const auto& [k, v] : coordinates(t)) eqs.push_back(v);
    return eqs;
}

SolutionSpace solve_space(const DeltaTensor& u, const std::vector<std::string>& unknowns,
                          const std::vector<Scalar>& eqs) {
    SolutionSpace s;
    s.unknowns = unknowns;
    s.solution = solve_linear(eqs, unknowns);
    s.dimension = static_cast<int>(s.solution.free.size());
    s.general = DeltaTensor{u.n, substitute(u.p, s.solution.pivots)};
    return s;
}

PermAction swap(int p, int q, const std::string& a, const std::string& b) {
    return PermAction{{{p, q}, {q, p}}, {{a, b}, {b, a}}};
}

json space_json(const SolutionSpace& s) {
    return {{"unknowns", s.unknowns},
            {"consistent", s.solution.consistent},
            {"constraints", s.constraints()},
            {"free", s.solution.free},
            {"dimension", s.dimension},
            {"general", s.general.str()}};
}

}  // namespace

std::vector<std::string> SolutionSpace::constraints() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : solution.pivots) out.push_back(k + " = " + v.str());
    return out;
}

Scalar SolutionSpace::value(const std::string& unknown) const {
    auto it = solution.pivots.find(unknown);
    return it == solution.pivots.end() ? Scalar::sym(unknown) : it->second;
}

Matrix coordinate_matrix(const std::vector<DeltaTensor>& ts) {
    std::vector<std::map<std::string, Scalar>> cs;
    std::set<std::string> keys;
    for (const auto& t : ts) {
        cs.push_back(coordinates(t));
        for (const auto& [k, v] : cs.back()) keys.insert(k);
    }
    Matrix m;
    for (const auto& c : cs) {
        std::vector<QI> row;
        for (const auto& k : keys) {
            auto it = c.find(k);
            row.push_back(it == c.end() ? QI(0) : it->second.number());
        }
        m.push_back(row);
    }
    return m;
}

SolutionSpace impose_invariance(const DeltaTensor& u, const std::vector<std::string>& unknowns,
                                const std::vector<PermAction>& gs) {
    std::vector<Scalar> eqs;
    for (const auto& a : gs) {
        auto e = equations(apply_action(u, a) - u);
        eqs.insert(eqs.end(), e.begin(), e.end());
    }
    return solve_space(u, unknowns, eqs);
}

// ---- case 3

Case3Report solve_case3() {
    Case3Report r;
    r.u = delta_normalize(1, g("mu", "nu"));
    r.divergence = divergence_y(r.u, "mu");
    r.symmetric = apply_action(r.u, swap(1, 0, "nu", "mu")) == r.u;
    return r;
}

std::string Case3Report::to_json() const {
    return json{{"case", "3"},
                {"u", u.str()},
                {"divergence", divergence.str()},
                {"dimension", dimension},
                {"symmetric", symmetric}}
        .dump();
}

// ---- case 2

Case2Report solve_case2(Case2Variant v) {
    Case2Report r;
    r.variant = v;
    const int n = 3;
    r.ansatz = combine(n, {g("mu", "n1") * g("n2", "n3"), g("mu", "n2") * g("n1", "n3"),
                           g("mu", "n3") * g("n1", "n2")});
    auto s12 = swap(1, 2, "n1", "n2"), s23 = swap(2, 3, "n2", "n3");
    std::vector<PermAction> gs;
    switch (v) {
        case Case2Variant::A:
            gs = {s12, s23};
            r.symmetries = {"(x1,n1)<->(x2,n2)", "(x2,n2)<->(x3,n3)"};
            break;
        case Case2Variant::B:
            gs = {s12};
            r.symmetries = {"(x1,n1)<->(x2,n2)"};
            break;
        case Case2Variant::C:
            gs = {s23};
            r.symmetries = {"(x2,n2)<->(x3,n3)"};
            break;
    }
    std::vector<Scalar> eqs;
    for (const auto& a : gs) {
        auto e = equations(apply_action(r.ansatz, a) - r.ansatz);
        eqs.insert(eqs.end(), e.begin(), e.end());
    }
    if (v == Case2Variant::C) {
        // d^{x3}_{n3} d^y_mu u is symmetric under x3 <-> y
        DeltaTensor dd = times(divergence_y(r.ansatz, "mu"), d(3, "n3"));
        auto e = equations(dd - apply_action(dd, PermAction{{{3, 0}, {0, 3}}, {}}));
        eqs.insert(eqs.end(), e.begin(), e.end());
        r.extra_condition_used = true;
    }
    r.space = solve_space(r.ansatz, names(3), eqs);
    return r;
}

std::string Case2Report::to_json() const {
    const char* tag = variant == Case2Variant::A ? "2a" : variant == Case2Variant::B ? "2b" : "2c";
    return json{{"case", tag},
                {"ansatz", ansatz.str()},
                {"symmetries", symmetries},
                {"extra_condition", extra_condition_used},
                {"solution", space_json(space)}}
        .dump();
}

// ---- case 1

std::vector<NamedTensor> case1_sum_basis(int m) {
    const int n = m + 1, x2 = m + 1;
    Poly box, dd, cross_box, cross_dd, sk_mu, sk_nu, sk_al;
    for (int k = 1; k <= m; ++k) {
        box = box + dot(k, k);
        dd = dd + d(k, "mu") * d(k, "nu");
        sk_mu = sk_mu + d(k, "mu");
        sk_nu = sk_nu + d(k, "nu");
        sk_al = sk_al + d(k, "al");
        for (int l = 1; l <= m; ++l)
            if (k != l) {
                cross_box = cross_box + dot(k, l);
                cross_dd = cross_dd + d(k, "mu") * d(l, "nu");
            }
    }
    Poly gmn = g("mu", "nu");
    std::vector<std::pair<std::string, Poly>> raw = {
        {"g sum box_k", gmn * box},
        {"sum d_k^mu d_k^nu", dd},
        {"g sum_{k!=l} d_k.d_l", gmn * cross_box},
        {"sum_{k!=l} d_k^mu d_l^nu", cross_dd},
        {"g d_2.sum d_k", gmn * d(x2, "al") * sk_al},
        {"d_2^mu sum d_k^nu", d(x2, "mu") * sk_nu},
        {"d_2^nu sum d_k^mu", d(x2, "nu") * sk_mu},
        {"g box_2", gmn * dot(x2, x2)},
        {"d_2^mu d_2^nu", d(x2, "mu") * d(x2, "nu")},
    };
    std::vector<NamedTensor> out;
    for (auto& [name, p] : raw) out.push_back({name, delta_normalize(n, p)});
    return out;
}

std::vector<NamedTensor> case1_split_basis(int m) {
    const int n = m + 1, x2 = m + 1;
    Poly box, dd;
    for (int k = 1; k <= m; ++k) {
        box = box + dot(k, k);
        dd = dd + d(k, "mu") * d(k, "nu");
    }
    Poly gmn = g("mu", "nu");
    std::vector<std::pair<std::string, Poly>> raw = {
        {"g sum box_k", gmn * box},
        {"sum d_k^mu d_k^nu", dd},
        {"d_2^mu d_y^nu", d(x2, "mu") * d(0, "nu")},
        {"d_y^mu d_2^nu", d(0, "mu") * d(x2, "nu")},
        {"g d_y.d_2", gmn * dot(0, x2)},
        {"g box_2", gmn * dot(x2, x2)},
        {"g box_y", gmn * dot(0, 0)},
        {"d_2^mu d_2^nu", d(x2, "mu") * d(x2, "nu")},
        {"d_y^mu d_y^nu", d(0, "mu") * d(0, "nu")},
    };
    std::vector<NamedTensor> out;
    for (auto& [name, p] : raw) out.push_back({name, delta_normalize(n, p)});
    return out;
}

Case1Report solve_case1(int m) {
    if (m < 1) throw std::invalid_argument("solve_case1 needs m >= 1");
    Case1Report r;
    r.m = m;
    const int n = m + 1, x2 = m + 1;
    auto sum = case1_sum_basis(m), split = case1_split_basis(m);
    std::vector<DeltaTensor> ts, tp, all;
    for (const auto& b : sum) ts.push_back(b.t);
    for (const auto& b : split) tp.push_back(b.t);
    all = ts;
    all.insert(all.end(), tp.begin(), tp.end());
    r.rank_sum_basis = rank(coordinate_matrix(ts));
    r.rank_split_basis = rank(coordinate_matrix(tp));
    r.rank_union = rank(coordinate_matrix(all));

    if (r.rank_sum_basis == ts.size() && r.rank_union == ts.size()) {
        // row k: coordinates of split[k] in the sum basis
        auto as = names(ts.size());
        for (auto& a : as) a = "a" + a.substr(1);
        Matrix T;
        for (const auto& s : tp) {
            DeltaTensor comb{n, {}};
            for (size_t i = 0; i < ts.size(); ++i) comb = comb + ts[i] * Scalar::sym(as[i]);
            auto sol = solve_linear(equations(comb - s), as);
            std::vector<QI> row;
            for (const auto& a : as) row.push_back(sol.pivots.at(a).is_zero() ? QI(0) : sol.pivots.at(a).number());
            T.push_back(row);
        }
        r.change_of_basis_det = determinant(T);
    }

    PermAction sw = swap(x2, 0, "nu", "mu");
    for (size_t k = 0; k < 5; ++k) r.group1_invariant.push_back(apply_action(tp[k], sw) == tp[k]);

    // group (2): d^{x2}_nu d^y_mu u - (x2 <-> y) = 0
    DeltaTensor u2 = combine(n, {g("mu", "nu") * dot(x2, x2), g("mu", "nu") * dot(0, 0),
                                 d(x2, "mu") * d(x2, "nu"), d(0, "mu") * d(0, "nu")});
    DeltaTensor dd = times(divergence_y(u2, "mu"), d(x2, "nu"));
    r.group2 = solve_space(u2, names(4), equations(dd - apply_action(dd, PermAction{{{x2, 0}, {0, x2}}, {}})));

    Scalar C2 = Scalar::sym("C2"), C3 = Scalar::sym("C3"), C4 = Scalar::sym("C4");
    Poly gmn = g("mu", "nu");
    r.u_final = delta_normalize(
        n, gmn * (dot(0, 0) + dot(x2, x2)) * (C2 + C4) +
               (d(x2, "mu") * d(x2, "nu") - gmn * dot(x2, x2) + d(0, "mu") * d(0, "nu") - gmn * dot(0, 0)) * C3);
    r.final_symmetric = apply_action(r.u_final, sw) == r.u_final;
    r.divergence_preserved = divergence_y(r.u_final, "mu") == divergence_y(r.group2.general, "mu");
    DeltaTensor c0 = delta_normalize(n, gmn);
    r.c0_symmetric = apply_action(c0, sw) == c0;
    return r;
}

std::string Case1Report::to_json() const {
    json j{{"case", "1"},
           {"m", m},
           {"rank_sum_basis", rank_sum_basis},
           {"rank_split_basis", rank_split_basis},
           {"rank_union", rank_union},
           {"group1_invariant", group1_invariant},
           {"group2", space_json(group2)},
           {"u_final", u_final.str()},
           {"final_symmetric", final_symmetric},
           {"divergence_preserved", divergence_preserved},
           {"c0_symmetric", c0_symmetric}};
    j["change_of_basis_det"] = change_of_basis_det ? json(change_of_basis_det->str()) : json(nullptr);
    return j.dump();
}

}  // namespace mwi
