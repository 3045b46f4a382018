#include "mwi/wick_engine.hpp"

#include <algorithm>

namespace mwi {

namespace {

const Scalar kI = Scalar::I();

Scalar sign(size_t k) { return (k % 2) ? Scalar(-1) : Scalar(1); }

std::vector<std::string> join_ders(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::vector<std::string> out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

Poly kernel(const std::string& name, int p1, int p2, std::vector<std::string> der, const Scalar& s) {
    return Poly::of(Factor::kernel(name, p1, p2, std::move(der)), s);
}

// first index that appears twice in the list
std::optional<std::string> repeated(const std::vector<std::string>& v) {
    for (size_t i = 0; i < v.size(); ++i)
        for (size_t k = i + 1; k < v.size(); ++k)
            if (v[i] == v[k]) return v[i];
    return std::nullopt;
}

std::vector<std::string> drop_pair(std::vector<std::string> v, const std::string& d) {
    for (int r = 0; r < 2; ++r) v.erase(std::find(v.begin(), v.end(), d));
    return v;
}

}  // namespace

Poly contraction(const Factor& g1, int p1, const Factor& g2, int p2, const Scalar& c) {
    auto k1 = generator_of(g1), k2 = generator_of(g2);
    if (!k1 || !k2) return {};
    bool charged = (g1.name == "phi" && g2.name == "phistar") || (g1.name == "phistar" && g2.name == "phi");
    // d_x^a d_y^b K(x - y) = (-1)^{|b|} K^{(a+b)}(x - y)
    if (charged) {
        Poly out = kernel("DF", p1, p2, join_ders(g1.der, g2.der), sign(g2.der.size()));
        if (g1.der.size() == 1 && g2.der.size() == 1)
            out = out + kernel("delta", p1, p2, {}, -kI * c) * Poly::metric(g1.der[0], g2.der[0]);
        return out;
    }
    if (g1.name == "A" && g2.name == "A")
        return kernel("D0", p1, p2, join_ders(g1.der, g2.der), -sign(g2.der.size())) *
               Poly::metric(g1.own, g2.own);
    return {};
}

Poly t2_tree(const Poly& B1, const Poly& B2, const Scalar& c) {
    Poly x = at_point(B1, kX), y = at_point(B2, kY);
    Poly out;
    for (const auto& [ka, a] : x.terms())
        for (const auto& [kb, b] : y.terms()) {
            Term ta = freshen(a.first), tb = freshen(b.first);
            Scalar s = a.second * b.second;
            out.add(concat(ta, tb), s);
            for (size_t i = 0; i < ta.f.size(); ++i)
                for (size_t k = 0; k < tb.f.size(); ++k) {
                    Poly K = contraction(ta.f[i], kX, tb.f[k], kY, c);
                    if (K.is_zero()) continue;
                    Term ra = ta, rb = tb;
                    ra.f.erase(ra.f.begin() + static_cast<long>(i));
                    rb.f.erase(rb.f.begin() + static_cast<long>(k));
                    Term rest = concat(ra, rb);
                    for (const auto& [kk, kv] : K.terms()) out.add(concat(rest, kv.first), s * kv.second);
                }
        }
    return out;
}

Poly derivative_at(const Poly& P, int pt, const std::string& mu) {
    return P.map([&](const Term& t) {
        Poly out;
        for (size_t i = 0; i < t.f.size(); ++i) {
            const Factor& x = t.f[i];
            Scalar s(1);
            if (x.kind == Kind::Kernel) {
                if (x.pt == pt)
                    s = Scalar(1);
                else if (x.pt2 == pt)
                    s = Scalar(-1);
                else
                    continue;
            } else if (x.kind == Kind::Deriv || x.pt != pt) {
                continue;
            }
            Term u = t;
            u.f[i].der.push_back(mu);
            out.add(u, s);
        }
        return out;
    });
}

namespace {

// Derivatives in `ders` distributed over the factors with Leibniz.
void leibniz(const std::vector<Factor>& fs, const std::vector<std::string>& ders, size_t k,
             std::vector<Factor>& cur, std::vector<std::vector<Factor>>& out) {
    if (k == ders.size()) {
        out.push_back(cur);
        return;
    }
    for (size_t i = 0; i < cur.size(); ++i) {
        cur[i].der.push_back(ders[k]);
        leibniz(fs, ders, k + 1, cur, out);
        cur[i].der.pop_back();
    }
}

// One rewriting step on a term; nullopt when the term is already normal.
std::optional<Poly> rewrite(const Term& t, const WickConfig& cfg) {
    const Scalar m2 = Scalar::sym("m", 2);
    for (size_t i = 0; i < t.f.size(); ++i) {
        const Factor& x = t.f[i];
        auto rep = [&](const Poly& p) {
            Term rest = t;
            rest.f.erase(rest.f.begin() + static_cast<long>(i));
            Poly out;
            for (const auto& [k, v] : p.terms()) out.add(concat(rest, v.first), v.second);
            return out;
        };
        if (x.kind == Kind::Kernel && (x.name == "DF" || x.name == "D0")) {
            if (auto d = repeated(x.der)) {
                auto rest = drop_pair(x.der, *d);
                Poly p = kernel("delta", x.pt, x.pt2, rest, -kI * Scalar(cfg.kg_sign));
                if (x.name == "DF") p = p + kernel("DF", x.pt, x.pt2, rest, -m2);
                return rep(p);
            }
            if (x.pt < x.pt2) return rep(kernel(x.name, x.pt2, x.pt, x.der, sign(x.der.size())));
        }
        if (x.kind == Kind::Kernel && x.name == "delta" && x.pt > x.pt2)
            return rep(kernel("delta", x.pt2, x.pt, x.der, sign(x.der.size())));
        if (cfg.on_shell && x.kind == Kind::Field) {
            if (auto d = repeated(x.der)) {
                if (x.name == "A") return Poly{};
                Factor y = x;
                y.der = drop_pair(x.der, *d);
                return rep(Poly::of(y, -m2));
            }
        }
    }
    // point identification under delta(y - x)
    auto dl = std::find_if(t.f.begin(), t.f.end(), [](const Factor& x) {
        return x.kind == Kind::Kernel && x.name == "delta";
    });
    if (dl == t.f.end()) return std::nullopt;
    int y = dl->pt, x = dl->pt2;
    std::vector<Factor> at_y, others;
    for (const auto& f : t.f) {
        if (&f == &*dl) continue;
        if (f.kind == Kind::Kernel && (f.pt == y || f.pt2 == y))
            throw std::logic_error("second kernel attached to a localized point");
        (f.kind != Kind::Kernel && f.kind != Kind::Deriv && f.pt == y ? at_y : others).push_back(f);
    }
    if (at_y.empty()) return std::nullopt;
    for (auto& f : at_y) f.pt = x;
    // f(y) d^a delta(y-x) = sum_{S subset a} (-1)^{|S|} (d^S f)(x) d^{a\S} delta(y-x)
    const auto& a = dl->der;
    Poly out;
    for (unsigned mask = 0; mask < (1u << a.size()); ++mask) {
        std::vector<std::string> moved, kept;
        for (size_t k = 0; k < a.size(); ++k) ((mask >> k) & 1u ? moved : kept).push_back(a[k]);
        std::vector<std::vector<Factor>> dist;
        std::vector<Factor> cur = at_y;
        leibniz(at_y, moved, 0, cur, dist);
        for (const auto& fs : dist) {
            Term u{others, t.g};
            u.f.insert(u.f.end(), fs.begin(), fs.end());
            u.f.push_back(Factor::kernel("delta", y, x, kept));
            out.add(u, sign(moved.size()));
        }
    }
    return out;
}

}  // namespace

Poly local_normalize(const Poly& P, const WickConfig& cfg) {
    Poly cur = P;
    for (int iter = 0; iter < 64; ++iter) {
        bool changed = false;
        Poly next;
        for (const auto& [k, v] : cur.terms()) {
            auto r = rewrite(v.first, cfg);
            if (r) {
                changed = true;
                next.add(*r, v.second);
            } else {
                next.add(v.first, v.second);
            }
        }
        cur = std::move(next);
        if (!changed) return cur;
    }
    throw std::logic_error("local normalization did not terminate");
}

Poly local_part(const Poly& P) {
    Poly out;
    for (const auto& [k, v] : P.terms())
        for (const auto& x : v.first.f)
            if (x.kind == Kind::Kernel && x.name == "delta") {
                out.add(v.first, v.second);
                break;
            }
    return out;
}

bool has_propagator(const Poly& P) {
    for (const auto& [k, v] : P.terms())
        for (const auto& x : v.first.f)
            if (x.kind == Kind::Kernel && x.name != "delta") return true;
    return false;
}

Poly order2_rhs(const Poly& B, const Scalar& grad, const std::string& mu) {
    Poly local = kernel("delta", kY, kX, {}, Scalar(1)) * at_point(theta(B), kX);
    Poly gradient = kernel("delta", kY, kX, {mu}, grad) * at_point(theta_mu(B, mu), kX);
    return local + gradient;
}

Poly check_order2_WI(const Poly& B, const Scalar& c, const WickConfig& cfg) {
    std::string mu = fresh_index();
    Poly lhs = local_normalize(derivative_at(t2_tree(B, fields::j(mu), c), kY, mu), cfg);
    Poly rhs = local_normalize(order2_rhs(B, c - Scalar(1), mu), cfg);
    return lhs - rhs;
}

Poly integrate_local(const Poly& P) {
    Poly out;
    for (const auto& [k, v] : P.terms()) {
        Term t = v.first;
        auto dl = std::find_if(t.f.begin(), t.f.end(), [](const Factor& x) {
            return x.kind == Kind::Kernel && x.name == "delta";
        });
        if (dl == t.f.end()) throw std::invalid_argument("integrate_local needs delta terms only");
        if (!dl->der.empty()) continue;
        t.f.erase(dl);
        out.add(t, v.second);
    }
    return out;
}

Poly smatrix_order2(const Scalar& c, const WickConfig& cfg) {
    Poly S1 = fields::jA() * fields::testfn("g");
    Poly T2 = local_normalize(t2_tree(S1, S1, c), cfg);
    Scalar e = Scalar::sym("e");
    // (i^2 / 2) e^2 T2(S1, S1)
    Poly local = integrate_local(local_part(T2)) * (Scalar(Rational(-1, 2)) * e * e);
    return at_point(local, 0);
}

}  // namespace mwi
