#pragma once

#include "mwi/field_algebra.hpp"

#include <string>
#include <vector>

namespace mwi {

// Kernel of the order-2 part. The last two are deliberately broken maps used as controls.
enum class RenKernel { Zeta, PhiPhiStarZeta, ImaginaryZeta };

// Z = id + (1/2) Z^(2), Z^(2)(B1 (x) B2) = lambda zeta(B1, B2) delta(x1 - x2); all higher orders vanish.
struct RenMap {
    Scalar lambda;
    RenKernel kernel = RenKernel::Zeta;

    // Coefficient of delta(x1 - x2), as a field polynomial at point 0.
    Poly order2(const Poly& B1, const Poly& B2) const;
    RenMap inverse() const;
};

RenMap Z_c(const Scalar& c);

// Interaction list written as one polynomial whose terms carry their test functions.
// Z(S) = S + (1/2) Z^(2)(S, S).
Poly renormalize_interaction(const RenMap& Z, const Poly& S);

// Terms of S grouped by their test-function content: (test functions, field polynomial).
std::vector<std::pair<Poly, Poly>> split_interaction(const Poly& S);

// d/dlambda at 0 of Z((g, e jA) + (alpha, lambda j^mu)).
Poly interacting_current_shift(const RenMap& Z, const std::string& mu);

struct PropertyCheck {
    std::string name;
    bool passed = true;
    std::string detail;
};

struct SPReport {
    std::vector<PropertyCheck> checks;
    std::string scope;
    bool all_passed() const;
    const PropertyCheck& at(const std::string& name) const;
};

// Checks the defining properties of the renormalization group on a generating set:
// generators, the extended P0 list, and seeded random single-derivative monomials.
SPReport verify_sp_membership(const RenMap& Z, unsigned seed = 1);

}  // namespace mwi
