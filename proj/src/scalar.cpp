#include "mwi/scalar.hpp"

#include <sstream>
#include <stdexcept>

namespace mwi {

QI QI::inverse() const {
    Rational n = re * re + im * im;
    if (n == 0) throw std::domain_error("division by zero");
    return QI(re / n, -im / n);
}

std::string rational_str(const Rational& r) {
    std::ostringstream os;
    os << numerator(r);
    if (denominator(r) != 1) os << "/" << denominator(r);
    return os.str();
}

Rational parse_rational(const std::string& text) {
    auto slash = text.find('/');
    if (slash == std::string::npos) return Rational(boost::multiprecision::cpp_int(text));
    boost::multiprecision::cpp_int n(text.substr(0, slash));
    boost::multiprecision::cpp_int d(text.substr(slash + 1));
    if (d == 0) throw std::invalid_argument("zero denominator in " + text);
    return Rational(n, d);
}

std::string QI::str() const {
    if (im == 0) return rational_str(re);
    std::string ims = (im == 1) ? "i" : (im == -1) ? "-i" : rational_str(im) + "*i";
    if (re == 0) return ims;
    std::string s = rational_str(re);
    if (im > 0) return "(" + s + "+" + ims + ")";
    return "(" + s + ims + ")";
}

Scalar::Scalar(long v) {
    if (v != 0) terms_[{}] = QI(v);
}

Scalar::Scalar(const QI& v) {
    if (!v.is_zero()) terms_[{}] = v;
}

Scalar::Scalar(const Rational& v) {
    if (v != 0) terms_[{}] = QI(v);
}

Scalar Scalar::sym(const std::string& name, int power) {
    Scalar s;
    if (power == 0) return Scalar(1);
    s.terms_[{{name, power}}] = QI(1);
    return s;
}

bool Scalar::is_number() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

QI Scalar::number() const {
    if (!is_number()) throw std::logic_error("scalar is not a number: " + str());
    return terms_.empty() ? QI(0) : terms_.begin()->second;
}

void Scalar::add_term(const SymMono& mono, const QI& value) {
    if (value.is_zero()) return;
    auto it = terms_.find(mono);
    if (it == terms_.end()) {
        terms_.emplace(mono, value);
        return;
    }
    it->second += value;
    if (it->second.is_zero()) terms_.erase(it);
}

Scalar Scalar::operator+(const Scalar& o) const {
    Scalar r = *this;
    for (const auto& [m, v] : o.terms_) r.add_term(m, v);
    return r;
}

Scalar Scalar::operator-(const Scalar& o) const {
    Scalar r = *this;
    for (const auto& [m, v] : o.terms_) r.add_term(m, -v);
    return r;
}

Scalar Scalar::operator-() const {
    Scalar r;
    for (const auto& [m, v] : terms_) r.terms_.emplace(m, -v);
    return r;
}

static SymMono mono_mul(const SymMono& a, const SymMono& b) {
    SymMono out;
    size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            out.push_back(b[j++]);
        } else {
            out.emplace_back(a[i].first, a[i].second + b[j].second);
            ++i;
            ++j;
        }
    }
    return out;
}

Scalar Scalar::operator*(const Scalar& o) const {
    Scalar r;
    for (const auto& [ma, va] : terms_)
        for (const auto& [mb, vb] : o.terms_) r.add_term(mono_mul(ma, mb), va * vb);
    return r;
}

Scalar Scalar::conj() const {
    Scalar r;
    for (const auto& [m, v] : terms_) r.terms_.emplace(m, v.conj());
    return r;
}

Scalar Scalar::substitute(const std::string& name, const Scalar& value) const {
    Scalar r;
    for (const auto& [m, v] : terms_) {
        SymMono rest;
        int power = 0;
        for (const auto& p : m) {
            if (p.first == name)
                power = p.second;
            else
                rest.push_back(p);
        }
        Scalar t;
        t.terms_[rest] = v;
        for (int k = 0; k < power; ++k) t = t * value;
        r += t;
    }
    return r;
}

Scalar Scalar::derivative(const std::string& name) const {
    Scalar r;
    for (const auto& [m, v] : terms_) {
        SymMono rest;
        int power = 0;
        for (const auto& p : m) {
            if (p.first == name) {
                power = p.second;
                if (p.second > 1) rest.emplace_back(p.first, p.second - 1);
            } else {
                rest.push_back(p);
            }
        }
        if (power > 0) r.add_term(rest, v * QI(power));
    }
    return r;
}

int Scalar::degree(const std::string& name) const {
    int d = 0;
    for (const auto& [m, v] : terms_)
        for (const auto& p : m)
            if (p.first == name) d = std::max(d, p.second);
    return d;
}

Scalar Scalar::truncate(const std::string& name, int max_degree) const {
    Scalar r;
    for (const auto& [m, v] : terms_) {
        int power = 0;
        for (const auto& p : m)
            if (p.first == name) power = p.second;
        if (power <= max_degree) r.terms_.emplace(m, v);
    }
    return r;
}

std::string mono_str(const SymMono& m) {
    std::string s;
    for (const auto& [name, power] : m) {
        if (!s.empty()) s += "*";
        s += name;
        if (power != 1) s += "^" + std::to_string(power);
    }
    return s;
}

std::string Scalar::str() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [m, v] : terms_) {
        std::string coeff = v.str();
        std::string ms = mono_str(m);
        std::string t;
        if (ms.empty())
            t = coeff;
        else if (v == QI(1))
            t = ms;
        else if (v == QI(-1))
            t = "-" + ms;
        else
            t = coeff + "*" + ms;
        if (!s.empty() && t[0] != '-') s += "+";
        s += t;
    }
    return s;
}

}  // namespace mwi
