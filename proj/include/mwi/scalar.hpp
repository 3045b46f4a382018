#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace mwi {

using Rational = boost::multiprecision::cpp_rational;

// Gaussian rational a + b i.
struct QI {
    Rational re{0};
    Rational im{0};

    QI() = default;
    QI(long v) : re(v) {}
    QI(Rational r, Rational i = 0) : re(std::move(r)), im(std::move(i)) {}

    static QI I() { return QI(Rational(0), Rational(1)); }

    bool is_zero() const { return re == 0 && im == 0; }
    QI conj() const { return QI(re, -im); }
    QI inverse() const;

    QI operator+(const QI& o) const { return QI(re + o.re, im + o.im); }
    QI operator-(const QI& o) const { return QI(re - o.re, im - o.im); }
    QI operator-() const { return QI(-re, -im); }
    QI operator*(const QI& o) const {
        return QI(re * o.re - im * o.im, re * o.im + im * o.re);
    }
    QI operator/(const QI& o) const { return *this * o.inverse(); }
    QI& operator+=(const QI& o) { return *this = *this + o; }
    QI& operator-=(const QI& o) { return *this = *this - o; }
    QI& operator*=(const QI& o) { return *this = *this * o; }
    bool operator==(const QI& o) const { return re == o.re && im == o.im; }
    bool operator!=(const QI& o) const { return !(*this == o); }

    std::string str() const;
};

Rational parse_rational(const std::string& text);
std::string rational_str(const Rational& r);

// Commutative monomial in named symbols, sorted by name.
using SymMono = std::vector<std::pair<std::string, int>>;

// Polynomial over QI in formal commuting symbols (e, m, c, ...).
class Scalar {
public:
    Scalar() = default;
    Scalar(long v);
    Scalar(const QI& v);
    Scalar(const Rational& v);

    static Scalar sym(const std::string& name, int power = 1);
    static Scalar I() { return Scalar(QI::I()); }

    bool is_zero() const { return terms_.empty(); }
    bool is_number() const;
    QI number() const;  // requires is_number()
    const std::map<SymMono, QI>& terms() const { return terms_; }

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator-() const;
    Scalar operator*(const Scalar& o) const;
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    bool operator==(const Scalar& o) const { return terms_ == o.terms_; }
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    Scalar conj() const;
    Scalar substitute(const std::string& name, const Scalar& value) const;
    Scalar derivative(const std::string& name) const;
    int degree(const std::string& name) const;
    Scalar truncate(const std::string& name, int max_degree) const;
    bool contains(const std::string& name) const { return degree(name) > 0; }

    std::string str() const;

    void add_term(const SymMono& mono, const QI& value);

private:
    std::map<SymMono, QI> terms_;
};

std::string mono_str(const SymMono& m);

}  // namespace mwi
