#include "mwi/tensor.hpp"

#include <algorithm>
#include <array>
#include <atomic>

namespace mwi {

Factor Factor::field(const std::string& name, int pt, std::string own, std::vector<std::string> der) {
    Factor f;
    f.kind = Kind::Field;
    f.name = name;
    f.pt = pt;
    f.own = std::move(own);
    f.der = std::move(der);
    return f;
}

Factor Factor::testfn(const std::string& name, int pt, std::vector<std::string> der) {
    Factor f;
    f.kind = Kind::TestFn;
    f.name = name;
    f.pt = pt;
    f.der = std::move(der);
    return f;
}

Factor Factor::kernel(const std::string& name, int pt, int pt2, std::vector<std::string> der) {
    Factor f;
    f.kind = Kind::Kernel;
    f.name = name;
    f.pt = pt;
    f.pt2 = pt2;
    f.der = std::move(der);
    return f;
}

Factor Factor::deriv(int pt, const std::string& index) {
    Factor f;
    f.kind = Kind::Deriv;
    f.pt = pt;
    f.own = index;
    return f;
}

std::vector<std::string> Factor::indices() const {
    std::vector<std::string> out;
    if (!own.empty()) out.push_back(own);
    out.insert(out.end(), der.begin(), der.end());
    return out;
}

static std::string join(const std::vector<std::string>& v, const char* sep = ",") {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += sep;
        s += v[i];
    }
    return s;
}

std::string Factor::str() const {
    std::string d = der.empty() ? "" : "d[" + join(der) + "]";
    switch (kind) {
        case Kind::Field:
            return d + name + (own.empty() ? "" : "[" + own + "]") + "@" + std::to_string(pt);
        case Kind::TestFn:
            return d + name + "@" + std::to_string(pt);
        case Kind::Kernel:
            return d + name + "(" + std::to_string(pt) + "-" + std::to_string(pt2) + ")";
        case Kind::Deriv:
            return "p" + std::to_string(pt) + "[" + own + "]";
    }
    return {};
}

std::vector<std::string> Term::all_indices() const {
    std::vector<std::string> out;
    for (const auto& x : f) {
        auto v = x.indices();
        out.insert(out.end(), v.begin(), v.end());
    }
    for (const auto& m : g) {
        out.push_back(m.first);
        out.push_back(m.second);
    }
    return out;
}

static std::map<std::string, int> index_counts(const Term& t) {
    std::map<std::string, int> n;
    for (const auto& i : t.all_indices()) ++n[i];
    for (const auto& [k, v] : n)
        if (v > 2) throw IndexError("index " + k + " occurs " + std::to_string(v) + " times");
    return n;
}

std::set<std::string> Term::free_indices() const {
    std::set<std::string> out;
    for (const auto& [k, v] : index_counts(*this))
        if (v == 1) out.insert(k);
    return out;
}

std::set<std::string> Term::dummy_indices() const {
    std::set<std::string> out;
    for (const auto& [k, v] : index_counts(*this))
        if (v == 2) out.insert(k);
    return out;
}

void Term::rename_index(const std::string& from, const std::string& to) {
    auto r = [&](std::string& s) {
        if (s == from) s = to;
    };
    for (auto& x : f) {
        r(x.own);
        for (auto& d : x.der) r(d);
    }
    for (auto& m : g) {
        r(m.first);
        r(m.second);
    }
}

std::string Term::str() const {
    std::vector<std::string> parts;
    for (const auto& x : f) parts.push_back(x.str());
    for (const auto& m : g) parts.push_back("g[" + m.first + "," + m.second + "]");
    if (parts.empty()) return "1";
    return join(parts, "*");
}

std::string fresh_index() {
    static std::atomic<unsigned long> counter{0};
    return "~" + std::to_string(counter.fetch_add(1));
}

Term freshen(const Term& t) {
    Term out = t;
    for (const auto& d : t.dummy_indices()) out.rename_index(d, fresh_index());
    return out;
}

Term concat(const Term& a, const Term& b) {
    Term out = a;
    out.f.insert(out.f.end(), b.f.begin(), b.f.end());
    out.g.insert(out.g.end(), b.g.begin(), b.g.end());
    return out;
}

namespace {

// Rename the single occurrence of `from` outside metric number `skip`.
bool rename_outside(Term& t, size_t skip, const std::string& from, const std::string& to) {
    for (auto& x : t.f) {
        if (x.own == from) {
            x.own = to;
            return true;
        }
        for (auto& d : x.der)
            if (d == from) {
                d = to;
                return true;
            }
    }
    for (size_t k = 0; k < t.g.size(); ++k) {
        if (k == skip) continue;
        if (t.g[k].first == from) {
            t.g[k].first = to;
            return true;
        }
        if (t.g[k].second == from) {
            t.g[k].second = to;
            return true;
        }
    }
    return false;
}

void contract_metrics(Term& t, Scalar& coeff) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t k = 0; k < t.g.size() && !changed; ++k) {
            auto [a, b] = t.g[k];
            if (a == b) {
                coeff = coeff * Scalar(4);
                t.g.erase(t.g.begin() + static_cast<long>(k));
                changed = true;
                break;
            }
            Term probe = t;
            probe.g.erase(probe.g.begin() + static_cast<long>(k));
            if (rename_outside(probe, SIZE_MAX, a, b) || rename_outside(probe, SIZE_MAX, b, a)) {
                t = probe;
                changed = true;
            }
        }
    }
}

struct Slot {
    int factor;
    int type;  // 0 own, 1 der
};

}  // namespace

std::string canonicalize(Term& t, Scalar& coeff) {
    index_counts(t);
    contract_metrics(t, coeff);
    auto counts = index_counts(t);
    auto is_dummy = [&](const std::string& s) { return counts.at(s) == 2; };

    const int nf = static_cast<int>(t.f.size());
    std::vector<std::string> desc(nf);
    std::vector<bool> has_dummy(nf, false);
    std::map<std::string, std::vector<Slot>> dslots;
    for (int i = 0; i < nf; ++i) {
        const auto& x = t.f[i];
        std::string own = x.own;
        if (!own.empty() && is_dummy(own)) {
            own = "_";
            has_dummy[i] = true;
            dslots[x.own].push_back({i, 0});
        }
        std::vector<std::string> freeder;
        int ndum = 0;
        for (const auto& d : x.der) {
            if (is_dummy(d)) {
                ++ndum;
                has_dummy[i] = true;
                dslots[d].push_back({i, 1});
            } else {
                freeder.push_back(d);
            }
        }
        std::sort(freeder.begin(), freeder.end());
        desc[i] = std::to_string(static_cast<int>(x.kind)) + "|" + x.name + "|" + std::to_string(x.pt) +
                  "|" + std::to_string(x.pt2) + "|" + own + "|" + join(freeder) + "|" +
                  std::to_string(ndum);
    }

    std::vector<int> order(nf);
    for (int i = 0; i < nf; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return desc[a] < desc[b]; });

    // groups of identical descriptors that carry dummies can be permuted
    std::vector<std::pair<int, int>> groups;
    for (int i = 0; i < nf;) {
        int j = i;
        while (j < nf && desc[order[j]] == desc[order[i]]) ++j;
        if (j - i > 1 && has_dummy[order[i]]) groups.emplace_back(i, j);
        i = j;
    }

    using Conn = std::array<int, 4>;
    auto connections = [&](const std::vector<int>& ord) {
        std::vector<int> inv(nf);
        for (int p = 0; p < nf; ++p) inv[ord[p]] = p;
        std::vector<std::pair<Conn, std::string>> out;
        for (const auto& [name, s] : dslots) {
            std::array<int, 2> a{inv[s[0].factor] * 2 + s[0].type, inv[s[1].factor] * 2 + s[1].type};
            if (a[0] > a[1]) std::swap(a[0], a[1]);
            out.push_back({Conn{a[0] / 2, a[0] % 2, a[1] / 2, a[1] % 2}, name});
        }
        std::sort(out.begin(), out.end());
        return out;
    };

    std::vector<int> best = order;
    auto best_conn = connections(order);
    if (!groups.empty() && !dslots.empty()) {
        std::vector<int> cur = order;
        for (auto& [a, b] : groups) std::sort(cur.begin() + a, cur.begin() + b);
        while (true) {
            auto c = connections(cur);
            std::vector<Conn> ck, bk;
            for (auto& x : c) ck.push_back(x.first);
            for (auto& x : best_conn) bk.push_back(x.first);
            if (ck < bk) {
                best = cur;
                best_conn = c;
            }
            size_t gi = 0;
            for (; gi < groups.size(); ++gi) {
                auto [a, b] = groups[gi];
                if (std::next_permutation(cur.begin() + a, cur.begin() + b)) break;
            }
            if (gi == groups.size()) break;
        }
    }

    std::map<std::string, std::string> rename;
    for (size_t k = 0; k < best_conn.size(); ++k) rename[best_conn[k].second] = "_" + std::to_string(k);

    Term out;
    for (int p = 0; p < nf; ++p) {
        Factor x = t.f[best[p]];
        if (rename.count(x.own)) x.own = rename[x.own];
        for (auto& d : x.der)
            if (rename.count(d)) d = rename[d];
        std::sort(x.der.begin(), x.der.end());
        out.f.push_back(std::move(x));
    }
    for (auto m : t.g) {
        if (m.first > m.second) std::swap(m.first, m.second);
        out.g.push_back(m);
    }
    std::sort(out.g.begin(), out.g.end());
    t = std::move(out);
    return t.str();
}

Poly::Poly(const Scalar& s) {
    if (!s.is_zero()) add(Term{}, s);
}

Poly Poly::of(const Term& t, const Scalar& s) {
    Poly p;
    p.add(t, s);
    return p;
}

Poly Poly::of(const Factor& f, const Scalar& s) {
    Term t;
    t.f.push_back(f);
    return of(t, s);
}

Poly Poly::metric(const std::string& a, const std::string& b) {
    Term t;
    t.g.emplace_back(a, b);
    return of(t);
}

void Poly::add(Term t, Scalar s) {
    if (s.is_zero()) return;
    std::string key = canonicalize(t, s);
    auto it = terms_.find(key);
    if (it == terms_.end()) {
        terms_.emplace(key, std::make_pair(std::move(t), std::move(s)));
        return;
    }
    it->second.second += s;
    if (it->second.second.is_zero()) terms_.erase(it);
}

void Poly::add(const Poly& p, const Scalar& s) {
    if (s.is_zero()) return;
    for (const auto& [k, v] : p.terms_) {
        Scalar c = v.second * s;
        if (c.is_zero()) continue;
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            terms_.emplace(k, std::make_pair(v.first, c));
            continue;
        }
        it->second.second += c;
        if (it->second.second.is_zero()) terms_.erase(it);
    }
}

Poly Poly::operator+(const Poly& o) const {
    Poly r = *this;
    r.add(o);
    return r;
}

Poly Poly::operator-(const Poly& o) const {
    Poly r = *this;
    r.add(o, Scalar(-1));
    return r;
}

Poly Poly::operator-() const {
    Poly r;
    r.add(*this, Scalar(-1));
    return r;
}

Poly Poly::operator*(const Scalar& s) const {
    Poly r;
    r.add(*this, s);
    return r;
}

Poly operator*(const Scalar& s, const Poly& p) { return p * s; }

Poly Poly::operator*(const Poly& o) const {
    Poly r;
    for (const auto& [ka, a] : terms_)
        for (const auto& [kb, b] : o.terms_)
            r.add(concat(freshen(a.first), freshen(b.first)), a.second * b.second);
    return r;
}

bool Poly::operator==(const Poly& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    for (const auto& [k, v] : terms_) {
        auto it = o.terms_.find(k);
        if (it == o.terms_.end() || it->second.second != v.second) return false;
    }
    return true;
}

Poly Poly::map(const std::function<Poly(const Term&)>& fn) const {
    Poly r;
    for (const auto& [k, v] : terms_) r.add(fn(v.first), v.second);
    return r;
}

Poly Poly::map_coeff(const std::function<Scalar(const Scalar&)>& fn) const {
    Poly r;
    for (const auto& [k, v] : terms_) r.add(v.first, fn(v.second));
    return r;
}

Poly expand_term(const Term& t, const Scalar& c,
                 const std::function<std::optional<Poly>(const Factor&)>& fn) {
    std::vector<std::pair<Term, Scalar>> partial{{Term{{}, t.g}, c}};
    for (const auto& x : t.f) {
        auto rep = fn(x);
        if (!rep) {
            for (auto& p : partial) p.first.f.push_back(x);
            continue;
        }
        std::vector<std::pair<Term, Scalar>> next;
        for (const auto& p : partial)
            for (const auto& [k, alt] : rep->terms())
                next.emplace_back(concat(p.first, freshen(alt.first)), p.second * alt.second);
        partial = std::move(next);
        if (partial.empty()) return Poly{};
    }
    Poly r;
    for (auto& [term, s] : partial) r.add(std::move(term), s);
    return r;
}

Poly Poly::expand(const std::function<std::optional<Poly>(const Factor&)>& fn) const {
    Poly r;
    for (const auto& [k, v] : terms_) r.add(expand_term(v.first, v.second, fn));
    return r;
}

std::set<std::string> Poly::free_indices() const {
    std::optional<std::set<std::string>> s;
    for (const auto& [k, v] : terms_) {
        auto fi = v.first.free_indices();
        if (!s)
            s = fi;
        else if (*s != fi)
            throw IndexError("free-index mismatch between terms of " + str());
    }
    return s.value_or(std::set<std::string>{});
}

void Poly::rename_free(const std::string& from, const std::string& to) {
    Poly r;
    for (auto [k, v] : terms_) {
        if (v.first.free_indices().count(from)) v.first.rename_index(from, to);
        r.add(v.first, v.second);
    }
    *this = std::move(r);
}

std::string Poly::str() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [k, v] : terms_) {
        if (!s.empty()) s += " + ";
        s += "(" + v.second.str() + ")*" + k;
    }
    return s;
}

std::optional<Scalar> as_scalar(const Poly& p) {
    if (p.is_zero()) return Scalar(0);
    if (p.size() != 1) return std::nullopt;
    const auto& [t, s] = p.terms().begin()->second;
    if (!t.f.empty() || !t.g.empty()) return std::nullopt;
    return s;
}

}  // namespace mwi
