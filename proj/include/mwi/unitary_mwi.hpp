#pragma once

#include "mwi/field_algebra.hpp"

#include <string>
#include <utility>
#include <vector>

namespace mwi {

// Functionals are local: a Poly term is the integral of its fields times its test functions.
// alpha(x) = a beta(x) with beta the test function "beta" and a the formal parameter.

int default_truncation();  // MWI_TRUNCATION_K or 3

struct AlphaSeries {
    Poly value;              // coefficients polynomial in the symbol `param`
    std::string param = "a";
    int K = 3;

    Poly coeff(int k) const;
    AlphaSeries derivative() const;  // d/da, truncated at K - 1
    bool is_constant() const;
};

struct TransformOptions {
    bool gauge_A = false;  // also shift A^mu by d^mu alpha (negative control)
};

// F(phi e^{i lambda beta}, phistar e^{-i lambda beta}, A), truncated at total degree K in lambda.
Poly transform_poly(const Poly& F, const Scalar& lambda, int K, const std::string& fn = "beta",
                    const TransformOptions& opts = {});
AlphaSeries transform(const Poly& F, int K, const TransformOptions& opts = {});

// Free scalar Lagrangian d phistar . d phi - m^2 phistar phi; the photon part is invariant.
Poly free_lagrangian();

// (dj)(lambda fn) in integrated-by-parts form: -lambda j^mu (d_mu fn).
Poly dj_smeared(const Scalar& lambda, const std::string& fn = "beta");

// -(dj)(alpha) + (phistar phi)((d alpha)^2) with alpha = lambda fn.
Poly delta_L0(const Scalar& lambda, const std::string& fn = "beta");
// The same quantity computed from the transformed free Lagrangian.
Poly delta_L0_from_lagrangian(const Scalar& lambda, int K = 3, const std::string& fn = "beta");

// delta0(F) = (theta F)(g alpha), delta1(F) = (theta_mu F)(g d^mu alpha).
Poly delta0(const Poly& F, const std::string& fn = "alpha");
Poly delta1(const Poly& F, const std::string& fn = "alpha");
// delta_{alpha Q} = -i (delta0 + delta1)
Poly delta_Q(const Poly& F, const std::string& fn = "alpha");
// delta_{alpha Q} S0, represented by its value (dj)(alpha)
Poly delta_Q_S0(const std::string& fn = "alpha");

using InteractionList = std::vector<Poly>;
// Leibniz rule on a tensor list: sum over slots with one entry replaced.
std::vector<InteractionList> apply_leibniz(const InteractionList& list, Poly (*d)(const Poly&, const std::string&),
                                           const std::string& fn = "alpha");

// d/da F_{a beta} + delta_{beta Q} F_{a beta} to order K - 1.
Poly check_Fa(const Poly& F, int K, const TransformOptions& opts = {});
// d dL0(a beta)/da + delta_{beta Q}(dL0(a beta)) + delta_{beta Q} S0 to order K - 1.
Poly check_dL0_da(int K);

// phi delta/delta phi on a local functional: counts phi and d phi factors.
Poly number_operator(const Poly& F);

struct UnitaryStep {
    std::string name;
    bool passed = false;
    std::string residual;
};

struct UnitaryCertificate {
    bool verified = false;
    int K = 3;
    std::vector<std::string> premises;
    std::vector<UnitaryStep> steps;
    std::string to_json() const;
};

// dG/da = -(delta_{beta Q} G + delta_{beta Q} S0) for G(a) = F_{a beta} + dL0(a beta);
// the remaining T-product vanishes by the MWI for G(a), which is taken as a premise.
UnitaryCertificate unitary_assembly(const Poly& F, int K);

}  // namespace mwi
