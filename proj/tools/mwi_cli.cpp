#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "mwi/anomaly_solver.hpp"
#include "mwi/parser.hpp"
#include "mwi/tproduct_rewriter.hpp"
#include "mwi/unitary_mwi.hpp"

using namespace mwi;
using json = nlohmann::json;

namespace {

constexpr int kOk = 0, kViolated = 1, kInputError = 2;

struct Report {
    json j = json::object();
    std::vector<std::string> lines;
    int status = kOk;

    void set(const std::string& k, const json& v, const std::string& text = {}) {
        j[k] = v;
        lines.push_back(k + ": " + (text.empty() ? (v.is_string() ? v.get<std::string>() : v.dump()) : text));
    }
    void check(const std::string& name, bool ok, const std::string& residual = {}) {
        j["checks"][name] = ok;
        lines.push_back(std::string(ok ? "ok   " : "FAIL ") + name + (ok || residual.empty() ? "" : "  residual: " + residual));
        if (!ok) status = kViolated;
    }
};

DeltaTensor delta_from_json(const json& in) {
    int n = in.at("n").get<int>();
    Poly p;
    for (const auto& t : in.at("terms")) {
        Poly m(parse_scalar(t.value("coeff", std::string("1"))));
        for (const auto& d : t.value("derivs", json::array()))
            m = m * Poly::of(Factor::deriv(d.at(0).get<int>(), d.at(1).get<std::string>()));
        for (const auto& g : t.value("metrics", json::array()))
            m = m * Poly::metric(g.at(0).get<std::string>(), g.at(1).get<std::string>());
        p = p + m;
    }
    return delta_normalize(n, p);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Symbolic checks of Ward identities in scalar QED"};
    app.require_subcommand(1);
    std::string format = "text";
    unsigned seed = 1;
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--seed", seed, "Seed for randomized runs");

    std::string B, B1, B2, mu, cval = "c", entries, direction = "both", case_id, input, check_kind;
    int n = 0, m = 2, K = default_truncation(), kg_sign = 1;

    auto* theta_cmd = app.add_subcommand("theta", "Charge number derivation theta (or theta_mu with --mu)");
    theta_cmd->add_option("--B", B, "Field polynomial")->required();
    theta_cmd->add_option("--mu", mu, "Gradient index");

    auto* zeta_cmd = app.add_subcommand("zeta", "zeta(B1, B2)");
    zeta_cmd->add_option("--B1", B1)->required();
    zeta_cmd->add_option("--B2", B2)->required();

    auto* sub_cmd = app.add_subcommand("submono", "Submonomials of a monomial");
    sub_cmd->add_option("--B", B)->required();

    auto* wick_cmd = app.add_subcommand("wick-check", "Order-two c-dependent Ward identity");
    wick_cmd->add_option("--B", B)->required();
    wick_cmd->add_option("--c", cval);
    wick_cmd->add_option("--kg-sign", kg_sign)->check(CLI::IsMember({-1, 1}));

    auto* sm_cmd = app.add_subcommand("smatrix2", "Local second-order S-matrix part");
    sm_cmd->add_option("--c", cval);

    auto* vt_cmd = app.add_subcommand("verify-theorem", "Equivalence of the MWI for T and the c-dependent WI");
    vt_cmd->add_option("--n", n)->required();
    vt_cmd->add_option("--entries", entries)->required();
    vt_cmd->add_option("--direction", direction)->check(CLI::IsMember({"mwi-to-wi", "wi-to-mwi", "both"}));
    vt_cmd->add_option("--c", cval);

    auto* cl_cmd = app.add_subcommand("classify", "Selection rules for an anomaly tuple");
    cl_cmd->add_option("--entries", entries)->required();

    auto* sc_cmd = app.add_subcommand("solve-case", "Solve the anomaly constraint system of one case");
    sc_cmd->add_option("--case", case_id)->required()->check(CLI::IsMember({"1", "2a", "2b", "2c", "3"}));
    sc_cmd->add_option("--m", m)->check(CLI::Range(1, 6));

    auto* pc_cmd = app.add_subcommand("poincare", "Solve d = d^y_mu u^mu");
    pc_cmd->add_option("--input", input, "JSON file or inline JSON")->required();
    pc_cmd->add_option("--mu", mu);

    auto* un_cmd = app.add_subcommand("unitary", "Formal series checks of the unitary identity");
    un_cmd->add_option("--check", check_kind)->required()->check(CLI::IsMember({"Fa", "dL0", "derivations", "assembly"}));
    un_cmd->add_option("--K", K)->check(CLI::Range(1, 8));
    un_cmd->add_option("--F", B, "Functional for Fa/assembly (test function g)");

    auto* sp_cmd = app.add_subcommand("sp-check", "Renormalization group membership of Z_c and its inverse");
    sp_cmd->add_option("--c", cval);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kInputError;
    }

    Report r;
    r.set("seed", seed);
    try {
        if (theta_cmd->parsed()) {
            Poly P = parse_poly(B);
            Poly out = mu.empty() ? theta(P) : theta_mu(P, mu);
            r.set("result", print_poly(out));
        } else if (zeta_cmd->parsed()) {
            r.set("result", print_poly(zeta(parse_poly(B1), parse_poly(B2))));
        } else if (sub_cmd->parsed()) {
            json arr = json::array();
            for (const auto& s : submonomials(parse_poly(B))) {
                arr.push_back({{"sub", print_poly(s.sub)}, {"complement", print_poly(s.complement)},
                               {"factor", rational_str(s.factor)}});
                r.lines.push_back(rational_str(s.factor) + " : " + print_poly(s.sub) + " | " + print_poly(s.complement));
            }
            r.j["submonomials"] = arr;
        } else if (wick_cmd->parsed()) {
            WickConfig cfg;
            cfg.kg_sign = kg_sign;
            Poly res = check_order2_WI(parse_poly(B), parse_scalar(cval), cfg);
            r.set("c", cval);
            r.check("order-2 WI", res.is_zero(), res.str());
            r.j["residual"] = res.str();
        } else if (sm_cmd->parsed()) {
            Poly s = smatrix_order2(parse_scalar(cval));
            r.set("c", cval);
            r.set("local part", print_poly(s));
            Scalar e = Scalar::sym("e");
            Poly want = fields::A("a") * fields::A("a") * fields::phistar() * fields::phi() * fields::testfn("g") *
                        fields::testfn("g") * (Scalar::I() * parse_scalar(cval) * e * e);
            r.check("equals c i e^2 (A A phistar phi)(g^2)", s == want, (s - want).str());
        } else if (vt_cmd->parsed()) {
            auto Bs = parse_list(entries);
            if (static_cast<int>(Bs.size()) != n)
                throw std::invalid_argument("--n " + std::to_string(n) + " but " + std::to_string(Bs.size()) + " entries");
            Scalar c = parse_scalar(cval);
            std::vector<std::pair<std::string, Direction>> dirs;
            if (direction != "wi-to-mwi") dirs.push_back({"mwi-to-wi", Direction::MwiToWi});
            if (direction != "mwi-to-wi") dirs.push_back({"wi-to-mwi", Direction::WiToMwi});
            for (const auto& [name, d] : dirs) {
                Certificate cert = verify_theorem(Bs, c, d);
                r.j["certificates"][name] = json::parse(cert.to_json());
                for (const auto& p : cert.premises) r.lines.push_back("premise: " + p);
                for (const auto& t : cert.trace) r.lines.push_back("  " + t);
                r.check(name, cert.verified, cert.residual);
            }
        } else if (cl_cmd->parsed()) {
            Classification cl = selection_rules(parse_list(entries));
            r.set("class", selection_name(cl.kind));
            r.set("omega", cl.omega);
            r.set("rank", cl.rank);
            r.set("reason", cl.reason);
        } else if (sc_cmd->parsed()) {
            if (case_id == "3") {
                auto c3 = solve_case3();
                r.j["report"] = json::parse(c3.to_json());
                r.set("dimension", c3.dimension);
                r.set("u", c3.u.str());
                r.check("symmetric", c3.symmetric);
            } else if (case_id == "1") {
                auto c1 = solve_case1(m);
                r.j["report"] = json::parse(c1.to_json());
                r.set("m", m);
                r.set("rank", c1.rank_sum_basis);
                r.set("rank symmetry-adapted basis", c1.rank_split_basis);
                if (c1.change_of_basis_det) r.set("change of basis determinant", c1.change_of_basis_det->str());
                for (const auto& s : c1.group2.constraints()) r.lines.push_back("constraint: " + s);
                r.set("u", c1.u_final.str());
                bool inv = true;
                for (bool b : c1.group1_invariant) inv = inv && b;
                r.check("group (1) invariant", inv);
                r.check("final u symmetric", c1.final_symmetric);
                r.check("divergence unchanged", c1.divergence_preserved);
            } else {
                Case2Variant v = case_id == "2a" ? Case2Variant::A : case_id == "2b" ? Case2Variant::B : Case2Variant::C;
                auto c2 = solve_case2(v);
                r.j["report"] = json::parse(c2.to_json());
                for (const auto& s : c2.space.constraints()) r.lines.push_back("constraint: " + s);
                r.set("dimension", c2.space.dimension);
                r.check("consistent", c2.space.solution.consistent);
            }
        } else if (pc_cmd->parsed()) {
            json in;
            std::ifstream f(input);
            try {
                in = f ? json::parse(f) : json::parse(input);
            } catch (const json::exception& e) {
                throw std::invalid_argument(std::string("bad JSON input: ") + e.what());
            }
            std::string idx = mu.empty() ? in.value("index", std::string("mu")) : mu;
            DeltaTensor d = delta_from_json(in);
            r.set("d", d.str());
            try {
                DeltaTensor u = poincare_solve(d, idx);
                r.set("u", u.str());
                r.check("divergence roundtrip", divergence_y(u, idx) == d);
            } catch (const NotCoexact& e) {
                r.check("coexact (integral over y vanishes)", false, e.what());
            }
        } else if (un_cmd->parsed()) {
            r.set("K", K);
            Poly F = B.empty() ? fields::phi() * fields::testfn("g") : parse_poly(B);
            if (check_kind == "Fa") {
                Poly res = check_Fa(F, K);
                r.check("dF/da + delta_Q F = 0", res.is_zero(), res.str());
            } else if (check_kind == "dL0") {
                Poly res = check_dL0_da(K);
                r.check("dL0 from Lagrangian", (delta_L0_from_lagrangian(Scalar::sym("a"), std::max(K, 2)) == delta_L0(Scalar::sym("a"))));
                r.check("d dL0/da relation", res.is_zero(), res.str());
            } else if (check_kind == "derivations") {
                Poly S = fields::S();
                Poly d0 = delta0(S), d1 = delta1(S);
                r.set("delta0(S)", d0.str());
                r.set("delta1(S)", d1.str());
                auto cc = current_conservation_certificate();
                r.set("J", print_poly(cc.J));
                r.check("delta0(S) = 0", d0.is_zero());
                r.check("current conservation", cc.cert.verified, cc.cert.residual);
            } else {
                auto cert = unitary_assembly(F, K);
                r.j["certificate"] = json::parse(cert.to_json());
                for (const auto& p : cert.premises) r.lines.push_back("premise: " + p);
                for (const auto& s : cert.steps) r.check(s.name, s.passed, s.residual);
            }
        } else if (sp_cmd->parsed()) {
            Scalar c = parse_scalar(cval);
            for (const auto& [name, Z] : {std::pair{std::string("Z"), Z_c(c)}, std::pair{std::string("Y"), Z_c(c).inverse()}}) {
                SPReport rep = verify_sp_membership(Z, seed);
                for (const auto& ch : rep.checks) r.check(name + " " + ch.name, ch.passed, ch.detail);
                r.j["scope"] = rep.scope;
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    }

    r.j["status"] = r.status == kOk ? "verified" : "violated";
    if (format == "json") {
        std::cout << r.j.dump(2) << "\n";
    } else {
        for (const auto& l : r.lines) std::cout << l << "\n";
        std::cout << (r.status == kOk ? "verified" : "violated") << "\n";
    }
    return r.status;
}
