#pragma once

#include "mwi/scalar.hpp"

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mwi {

// Building blocks shared by every tensor-valued object in the engine.
//   Field  : basic field at point pt; name in {A, phi, phistar}; own = Lorentz index of A;
//            der = derivative indices.
//   TestFn : formal test function (g, alpha, beta, h) at pt with derivative indices.
//   Kernel : two-point distribution name(pt - pt2) with derivatives w.r.t. its argument.
//   Deriv  : one derivative d/dx_pt^own acting on the total delta (momentum factor).
enum class Kind { Field = 0, TestFn = 1, Kernel = 2, Deriv = 3 };

struct Factor {
    Kind kind = Kind::Field;
    std::string name;
    int pt = 0;
    int pt2 = 0;
    std::string own;
    std::vector<std::string> der;

    bool operator==(const Factor& o) const {
        return kind == o.kind && name == o.name && pt == o.pt && pt2 == o.pt2 && own == o.own &&
               der == o.der;
    }

    static Factor field(const std::string& name, int pt = 0, std::string own = {},
                        std::vector<std::string> der = {});
    static Factor testfn(const std::string& name, int pt = 0, std::vector<std::string> der = {});
    static Factor kernel(const std::string& name, int pt, int pt2, std::vector<std::string> der = {});
    static Factor deriv(int pt, const std::string& index);

    std::vector<std::string> indices() const;
    std::string str() const;
};

using Metric = std::pair<std::string, std::string>;

struct Term {
    std::vector<Factor> f;
    std::vector<Metric> g;

    std::vector<std::string> all_indices() const;
    std::set<std::string> free_indices() const;
    std::set<std::string> dummy_indices() const;
    void rename_index(const std::string& from, const std::string& to);
    std::string str() const;
};

class IndexError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Fresh internal index name, unique for the process lifetime.
std::string fresh_index();

// Rename all dummy indices of t to fresh names.
Term freshen(const Term& t);

// Contract metrics and bring t to canonical form; the metric trace multiplies coeff.
// Returns the canonical key.
std::string canonicalize(Term& t, Scalar& coeff);

Term concat(const Term& a, const Term& b);  // no freshening

class Poly {
public:
    Poly() = default;
    explicit Poly(const Scalar& s);
    static Poly of(const Term& t, const Scalar& s = Scalar(1));
    static Poly of(const Factor& f, const Scalar& s = Scalar(1));
    static Poly metric(const std::string& a, const std::string& b);

    void add(Term t, Scalar s);
    void add(const Poly& p, const Scalar& s = Scalar(1));

    bool is_zero() const { return terms_.empty(); }
    size_t size() const { return terms_.size(); }
    const std::map<std::string, std::pair<Term, Scalar>>& terms() const { return terms_; }

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator-() const;
    Poly operator*(const Scalar& s) const;
    Poly operator*(const Poly& o) const;  // dummies of both sides are freshened
    bool operator==(const Poly& o) const;
    bool operator!=(const Poly& o) const { return !(*this == o); }

    // Linear extension of a per-term map.
    Poly map(const std::function<Poly(const Term&)>& fn) const;
    Poly map_coeff(const std::function<Scalar(const Scalar&)>& fn) const;

    // Replace selected factors by polynomials sharing the factor's index names.
    Poly expand(const std::function<std::optional<Poly>(const Factor&)>& fn) const;

    std::set<std::string> free_indices() const;  // throws IndexError if inconsistent
    void rename_free(const std::string& from, const std::string& to);
    std::string str() const;

private:
    std::map<std::string, std::pair<Term, Scalar>> terms_;
};

Poly operator*(const Scalar& s, const Poly& p);

// Pure scalar multiple of the empty term, if p has that shape.
std::optional<Scalar> as_scalar(const Poly& p);

// Expand the product over factors where each factor is replaced by a list of alternatives.
Poly expand_term(const Term& t, const Scalar& c,
                 const std::function<std::optional<Poly>(const Factor&)>& fn);

}  // namespace mwi
