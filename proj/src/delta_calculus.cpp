#include "mwi/delta_calculus.hpp"

#include <algorithm>
#include <set>

namespace mwi {

std::string DeltaTensor::str() const { return "[n=" + std::to_string(n) + "] " + p.str(); }

DeltaTensor delta_normalize(int n, const Poly& p, Pivot pivot) {
    int pv = pivot == Pivot::Y ? 0 : n;
    Poly out = p.expand([&](const Factor& x) -> std::optional<Poly> {
        if (x.kind != Kind::Deriv || x.pt != pv) return std::nullopt;
        Poly r;
        for (int i = 0; i <= n; ++i)
            if (i != pv) r.add(Poly::of(Factor::deriv(i, x.own), Scalar(-1)));
        return r;
    });
    return {n, out};
}

DeltaTensor delta_monomial(int n, const std::vector<std::pair<int, std::string>>& derivs,
                           const Scalar& coeff) {
    Term t;
    for (const auto& [pt, idx] : derivs) t.f.push_back(Factor::deriv(pt, idx));
    return delta_normalize(n, Poly::of(t, coeff));
}

DeltaTensor operator+(const DeltaTensor& a, const DeltaTensor& b) {
    if (a.n != b.n) throw std::invalid_argument("point count mismatch");
    return {a.n, a.p + b.p};
}

DeltaTensor operator-(const DeltaTensor& a, const DeltaTensor& b) {
    if (a.n != b.n) throw std::invalid_argument("point count mismatch");
    return {a.n, a.p - b.p};
}

DeltaTensor operator*(const DeltaTensor& a, const Scalar& s) { return {a.n, a.p * s}; }

DeltaTensor times(const DeltaTensor& a, const Poly& factor) {
    return delta_normalize(a.n, a.p * factor);
}

DeltaTensor divergence_y(const DeltaTensor& u, const std::string& mu) {
    if (!u.p.free_indices().count(mu) && !u.is_zero())
        throw IndexError("divergence index " + mu + " is not free");
    return times(u, Poly::of(Factor::deriv(0, mu)));
}

DeltaTensor integrate_out_y(const DeltaTensor& d) {
    // x_n plays the role of the new reference point
    DeltaTensor nd = delta_normalize(d.n, d.p);
    Poly moved = nd.p.expand([&](const Factor& x) -> std::optional<Poly> {
        if (x.kind != Kind::Deriv || x.pt != d.n) return std::nullopt;
        return Poly::of(Factor::deriv(0, x.own));
    });
    return delta_normalize(d.n - 1, moved);
}

DeltaTensor poincare_solve(const DeltaTensor& d, const std::string& mu) {
    if (!integrate_out_y(d).is_zero()) throw NotCoexact("integral over y does not vanish");
    if (d.p.free_indices().count(mu)) throw IndexError("index " + mu + " already free");
    constexpr int Q = -1;
    DeltaTensor nd = delta_normalize(d.n, d.p);
    Poly inq = nd.p.expand([&](const Factor& x) -> std::optional<Poly> {
        if (x.kind != Kind::Deriv || x.pt != nd.n) return std::nullopt;
        Poly r = Poly::of(Factor::deriv(Q, x.own));
        for (int i = 1; i < nd.n; ++i) r.add(Poly::of(Factor::deriv(i, x.own), Scalar(-1)));
        return r;
    });
    Poly u;
    for (const auto& [k, v] : inq.terms()) {
        Term t = v.first;
        auto it = std::find_if(t.f.begin(), t.f.end(),
                               [](const Factor& x) { return x.kind == Kind::Deriv && x.pt == Q; });
        if (it == t.f.end()) throw std::logic_error("Q-free term survived: " + k);
        std::string a = it->own;
        t.f.erase(it);
        t.g.emplace_back(mu, a);
        u.add(t, -v.second);
    }
    Poly back = u.expand([&](const Factor& x) -> std::optional<Poly> {
        if (x.kind != Kind::Deriv || x.pt != Q) return std::nullopt;
        Poly r;
        for (int i = 1; i <= nd.n; ++i) r.add(Poly::of(Factor::deriv(i, x.own)));
        return r;
    });
    return delta_normalize(nd.n, back);
}

static Term rename_indices(Term t, const std::map<std::string, std::string>& m) {
    auto fi = t.free_indices();
    std::vector<std::pair<std::string, std::string>> pending;
    for (const auto& [from, to] : m) {
        if (!fi.count(from)) continue;
        std::string tmp = fresh_index();
        t.rename_index(from, tmp);
        pending.emplace_back(tmp, to);
    }
    for (const auto& [tmp, to] : pending) t.rename_index(tmp, to);
    return t;
}

DeltaTensor apply_action(const DeltaTensor& u, const PermAction& g) {
    Poly out;
    for (const auto& [k, v] : u.p.terms()) {
        Term t = rename_indices(v.first, g.indices);
        for (auto& x : t.f) {
            auto it = g.points.find(x.pt);
            if (it != g.points.end()) x.pt = it->second;
        }
        out.add(t, v.second);
    }
    return delta_normalize(u.n, out);
}

namespace {

template <class K>
void check_bijection(const std::map<K, K>& m) {
    std::set<K> keys, vals;
    for (const auto& [a, b] : m) {
        keys.insert(a);
        vals.insert(b);
    }
    if (keys != vals) throw std::invalid_argument("group generator is not a permutation");
}

template <class K>
std::map<K, K> compose(const std::map<K, K>& g, const std::map<K, K>& h, const std::set<K>& dom) {
    std::map<K, K> out;
    for (const auto& x : dom) {
        K y = x;
        if (auto it = h.find(y); it != h.end()) y = it->second;
        if (auto it = g.find(y); it != g.end()) y = it->second;
        out[x] = y;
    }
    return out;
}

}  // namespace

std::vector<PermAction> group_closure(const std::vector<PermAction>& generators) {
    std::set<int> pd;
    std::set<std::string> id;
    for (const auto& g : generators) {
        check_bijection(g.points);
        check_bijection(g.indices);
        for (const auto& [a, b] : g.points) pd.insert(a);
        for (const auto& [a, b] : g.indices) id.insert(a);
    }
    auto full = [&](const PermAction& g) {
        return PermAction{compose<int>(g.points, {}, pd), compose<std::string>(g.indices, {}, id)};
    };
    auto key = [](const PermAction& g) { return std::make_pair(g.points, g.indices); };
    std::vector<PermAction> elems{full(PermAction{})};
    std::set<std::pair<std::map<int, int>, std::map<std::string, std::string>>> seen{key(elems[0])};
    for (size_t i = 0; i < elems.size(); ++i) {
        for (const auto& g : generators) {
            PermAction h{compose(g.points, elems[i].points, pd), compose(g.indices, elems[i].indices, id)};
            if (seen.insert(key(h)).second) elems.push_back(h);
        }
    }
    return elems;
}

DeltaTensor symmetrize(const DeltaTensor& u, const std::vector<PermAction>& generators) {
    auto group = group_closure(generators);
    DeltaTensor out{u.n, Poly{}};
    for (const auto& g : group) out = out + apply_action(u, g);
    return out * Scalar(Rational(1, static_cast<long>(group.size())));
}

int singular_order(const std::vector<Poly>& Bs) {
    int s = 0;
    for (const auto& B : Bs) s += mass_dimension(B);
    return s + 4 - 4 * static_cast<int>(Bs.size());
}

int derivative_order(const DeltaTensor& d) {
    int best = 0;
    for (const auto& [k, v] : d.p.terms()) {
        int c = 0;
        for (const auto& x : v.first.f)
            if (x.kind == Kind::Deriv) ++c;
        best = std::max(best, c);
    }
    return best;
}

int scaling_degree(const DeltaTensor& d) {
    DeltaTensor nd = delta_normalize(d.n, d.p);
    if (nd.is_zero()) throw ZeroDistribution("scaling degree of the zero distribution");
    return 4 * nd.n + derivative_order(nd);
}

bool lorentz_covariant_termwise(const DeltaTensor& d) {
    for (const auto& [k, v] : d.p.terms())
        for (const auto& x : v.first.f)
            if (x.kind != Kind::Deriv) return false;
    return true;
}

std::map<std::string, Scalar> coordinates(const DeltaTensor& d) {
    std::map<std::string, Scalar> out;
    DeltaTensor nd = delta_normalize(d.n, d.p);
    for (const auto& [k, v] : nd.p.terms()) out[k] = v.second;
    return out;
}

}  // namespace mwi
