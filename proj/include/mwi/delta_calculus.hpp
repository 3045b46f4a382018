#pragma once

#include "mwi/field_algebra.hpp"
#include "mwi/tensor.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace mwi {

// Q(d) delta(x_1 - y, ..., x_n - y) with x_i labelled i and y labelled 0.
// The polynomial Q is a Poly of Deriv factors and metrics.
struct DeltaTensor {
    int n = 1;
    Poly p;

    bool is_zero() const { return p.is_zero(); }
    bool operator==(const DeltaTensor& o) const { return n == o.n && p == o.p; }
    std::string str() const;
};

class NotCoexact : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ZeroDistribution : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Pivot { Y, LastX };

// Eliminate d_y (or d_{x_n}) using sum_i d_{x_i} + d_y = 0 on the total delta.
DeltaTensor delta_normalize(int n, const Poly& p, Pivot pivot = Pivot::Y);

// Monomial helper: product of d^{idx}_{pt} over the given list, times the total delta.
DeltaTensor delta_monomial(int n, const std::vector<std::pair<int, std::string>>& derivs,
                           const Scalar& coeff = Scalar(1));

DeltaTensor operator+(const DeltaTensor& a, const DeltaTensor& b);
DeltaTensor operator-(const DeltaTensor& a, const DeltaTensor& b);
DeltaTensor operator*(const DeltaTensor& a, const Scalar& s);
DeltaTensor times(const DeltaTensor& a, const Poly& factor);  // multiply by derivatives/metrics

DeltaTensor divergence_y(const DeltaTensor& u, const std::string& mu);
DeltaTensor integrate_out_y(const DeltaTensor& d);
DeltaTensor poincare_solve(const DeltaTensor& d, const std::string& mu);

// Group element acting on point labels and Lorentz indices.
struct PermAction {
    std::map<int, int> points;
    std::map<std::string, std::string> indices;
};
DeltaTensor apply_action(const DeltaTensor& u, const PermAction& g);
std::vector<PermAction> group_closure(const std::vector<PermAction>& generators);
DeltaTensor symmetrize(const DeltaTensor& u, const std::vector<PermAction>& generators);

int singular_order(const std::vector<Poly>& Bs);
int scaling_degree(const DeltaTensor& d);
int derivative_order(const DeltaTensor& d);  // max number of derivatives in a term

// Only metric and derivative building blocks (no epsilon tensors).
bool lorentz_covariant_termwise(const DeltaTensor& d);

// Coordinates of d in the momentum-monomial basis (canonical key -> coefficient).
std::map<std::string, Scalar> coordinates(const DeltaTensor& d);

}  // namespace mwi
