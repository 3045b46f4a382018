#pragma once

#include "mwi/tensor.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace mwi {

// A field polynomial is a Poly whose factors are Field generators at point 0,
// optionally multiplied by formal test functions (the coupling g in L).
using FieldPolynomial = Poly;

enum class Gen { A, Phi, PhiStar, DPhi, DPhiStar };

class NotEigenvector : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotHomogeneous : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace fields {
Poly A(const std::string& mu, int pt = 0);
Poly phi(int pt = 0);
Poly phistar(int pt = 0);
Poly dphi(const std::string& mu, int pt = 0);
Poly dphistar(const std::string& mu, int pt = 0);
Poly testfn(const std::string& name, int pt = 0);

Poly j(const std::string& mu);          // i(phi d^mu phistar - phistar d^mu phi)
Poly jA();                              // j^a A_a
Poly L();                               // e jA + e^2 g A^2 phistar phi
Poly S();                               // e jA g + e^2 A^2 phistar phi g g
}  // namespace fields

bool is_generator(const Factor& f);
std::optional<Gen> generator_of(const Factor& f);
Factor make_generator(Gen g, const std::string& idx, int pt = 0);

// True when every factor is a generator of the restricted set or a test function.
bool in_restricted_algebra(const Poly& B);

// dB / d(gen^idx); idx is ignored for phi and phistar.
Poly diff(const Poly& B, Gen g, const std::string& idx = {});

Poly theta(const Poly& B);
Poly theta_mu(const Poly& B, const std::string& mu);
Poly zeta(const Poly& B1, const Poly& B2);
int charge_number(const Poly& B);
int mass_dimension(const Poly& B);
Poly charge_conjugate(const Poly& B, const QI& eta = QI(1));

// Complex conjugation B -> B*: phi <-> phistar, A real, coefficients conjugated.
Poly star(const Poly& B);

struct SubMonomial {
    Poly sub;
    Poly complement;
    Rational factor;
};
std::vector<SubMonomial> submonomials(const Poly& monomial);

// delta_Q B = -i( delta(y-x) theta B - d_y^mu (delta(y-x) theta_mu B) ), returned as (theta B, theta_mu B).
std::pair<Poly, Poly> delta_Q_action(const Poly& B, const std::string& mu);

// At most one derivated basic field: the three second derivatives vanish.
bool single_derivative_ansatz(const Poly& B);

struct NamedPoly {
    std::string name;
    Poly value;
};
std::vector<NamedPoly> p0_strict(const std::string& nu = "nu");
std::vector<NamedPoly> p0_extended(const std::string& nu = "nu");

// Move every factor to point pt.
Poly at_point(const Poly& B, int pt);

}  // namespace mwi
