#pragma once

#include "mwi/field_algebra.hpp"

namespace mwi {

// Point labels of the order-2 engine.
constexpr int kX = 1;
constexpr int kY = 0;

// Kernel names: DF (massive Feynman propagator), D0 (massless), delta.
// Normal orientation: DF/D0 as K(x - y), delta as delta(y - x).
struct WickConfig {
    int kg_sign = 1;       // (box + m^2) DF = -i kg_sign delta, box D0 = -i kg_sign delta
    bool on_shell = true;  // (box + m^2) phi -> 0, box A -> 0
};

// Time-ordered two-point kernel t(g1(p1), g2(p2)); zero for forbidden pairs.
Poly contraction(const Factor& g1, int p1, const Factor& g2, int p2, const Scalar& c);

// Uncontracted product plus all single contractions, B1 at x and B2 at y.
Poly t2_tree(const Poly& B1, const Poly& B2, const Scalar& c);

// d/dy^mu of a local expression (Leibniz over every factor at y).
Poly derivative_at(const Poly& P, int pt, const std::string& mu);

// KG and on-shell rewriting, kernel orientation, and point identification under delta.
Poly local_normalize(const Poly& P, const WickConfig& cfg = {});

Poly local_part(const Poly& P);
bool has_propagator(const Poly& P);

// d_mu^y T^_c2(B(x) j^mu(y)) tree part minus
// delta(y-x) (theta B)(x) + (c-1) d^mu_y (delta(y-x) (theta_mu B)(x)).
Poly check_order2_WI(const Poly& B, const Scalar& c, const WickConfig& cfg = {});

// Right-hand side used by check_order2_WI with gradient coefficient grad.
Poly order2_rhs(const Poly& B, const Scalar& grad, const std::string& mu);

// Local second-order part of the S-matrix for the interaction e jA g, integrated over y,
// returned as a field polynomial with test functions at point 0.
Poly smatrix_order2(const Scalar& c, const WickConfig& cfg = {});

// Integrate a localized expression over y (delta(y-x) carrying derivatives integrates to zero).
Poly integrate_local(const Poly& P);

}  // namespace mwi
