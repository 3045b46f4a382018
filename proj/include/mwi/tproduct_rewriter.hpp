#pragma once

#include "mwi/ren_group.hpp"
#include "mwi/wick_engine.hpp"

#include <string>
#include <vector>

namespace mwi {

// A TExpr is a Poly whose terms encode coefficient x atom:
//   #T or #That at pt 0    family of the atom
//   #E at pt l             an entry sits at x_l; its fields are the Field factors at pt l
//   #DJ at pt 0            the atom is d^y_mu T(... (x) j^mu(y))
//   Kernel dy(0, l, der)   d^der delta(y - x_l)
//   Kernel bond(k, j)      delta(x_k - x_j), k < j
// y is point 0, x_l is point l >= 1.
using TExpr = Poly;

enum class Family { T, THat };

std::string family_marker(Family f);

// Atom F_n(B_1(x_1), ..., B_n(x_n)); with_current adds the d^y_mu (x) j^mu(y) slot.
TExpr atom(Family f, const std::vector<Poly>& Bs, bool with_current = false);

// Partitions of {1..n} into blocks of size 1 or 2.
using Partition = std::vector<std::vector<int>>;
std::vector<Partition> part2_partitions(int n);

// i^m F_m(...) = sum_P i^{|P|} G_{|P|}(Z-insertions): rewrites every atom of family `from`
// into family `to` with order-2 kernel Z.
TExpr expand_atoms(const TExpr& e, Family from, Family to, const RenMap& Z);
TExpr expand_That(const TExpr& e, const RenMap& Z);

// Replaces every #DJ atom of family f by the (generalized) Ward identity right-hand side
//   sum_l delta(y - x_l) f(... theta B_l ...) + grad d^mu_y sum_l delta(y - x_l) f(... theta_mu B_l ...).
// grad = -1 is the MWI for T, grad = c - 1 the c-dependent WI for That.
TExpr axiom_rewrite(const TExpr& e, Family f, const Scalar& grad);
TExpr mwi_rewrite(const TExpr& e);

// Point identification under bonds delta(x_k - x_j), k < j: everything at x_j (fields, test functions,
// entry markers, the delta(y - x_j)) moves to x_k.
TExpr normalize(const TExpr& e);

// Drop markers of an order-1 expression and return it in the wick-engine notation.
Poly to_local(const TExpr& e);

// int dy: terms with d delta(y - x) vanish, delta(y - x) integrates to 1.
TExpr integrate_y(const TExpr& e);

enum class Direction { MwiToWi, WiToMwi };

struct Certificate {
    bool verified = false;
    std::vector<std::string> premises;
    std::vector<std::string> trace;
    std::string residual;
    std::string to_json() const;
};

// d^y F_{n+1}(B.. (x) j(y)) in family `target`, expanded into `base` and rewritten with the base
// identity, minus the target identity expanded the same way.
Certificate verify_identity(const std::vector<Poly>& Bs, Family target, const Scalar& grad_target, Family base,
                            const Scalar& grad_base, const RenMap& Z);

// Theorem: MWI for T <=> c-dependent WI for That, for Bs that are theta eigenvectors with at most
// one derivated basic field.
Certificate verify_theorem(const std::vector<Poly>& Bs, const Scalar& c, Direction dir);

// (-i)^n Delta^n as the formal difference d^y T_{n+1}(... j(y)) - MWI right-hand side.
TExpr anomaly_expression(const std::vector<Poly>& Bs);

// Order-1 anomaly evaluated through the tree-level engine.
Poly anomaly_order1(const Poly& B, const Scalar& c, const WickConfig& cfg = {});

// Exchange claim for the double divergence d^{x_p}_nu d_n(B_1, ..., j^nu(x_p)) under x_p <-> y.
// Terms are kept as total derivatives d^y, d^{x_p} of (deltas x atom); currents are opaque slots.
// The lower-order MWI is applied on the x_p current of every atom that does not contain j(y).
struct ClaimReport {
    bool invariant = false;                  // after the lower-order MWI
    bool invariant_without_rewrite = false;  // same comparison before it
    size_t terms = 0;
    std::string residual;
};
ClaimReport double_divergence_claim(const std::vector<Poly>& Bs, size_t current_slot);

enum class Selection { CNCZero, FTZero, Case1, Case2a, Case2b, Case2c, Case3, NotApplicable };
std::string selection_name(Selection s);

struct Classification {
    Selection kind = Selection::NotApplicable;
    int omega = 0;
    int rank = 0;
    std::string reason;
};

// Bs are the listed entries; the current j^mu(y) is implicit.
Classification selection_rules(const std::vector<Poly>& Bs);

// MWI with F = S inserted into the interacting-field formula: the conserved current J^mu
// read off from -j(d alpha)_S = 2e (phi phistar A)(g d alpha)_S.
struct CurrentConservation {
    Certificate cert;
    Poly J;  // free index "mu"
};
CurrentConservation current_conservation_certificate(bool constant_alpha = false);

}  // namespace mwi
