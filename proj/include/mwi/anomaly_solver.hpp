#pragma once

#include "mwi/delta_calculus.hpp"
#include "mwi/linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mwi {

// Linear constraints on the unknown coefficients C1, C2, ... of an ansatz.
struct SolutionSpace {
    std::vector<std::string> unknowns;
    LinearSolution solution;
    int dimension = 0;
    DeltaTensor general;  // ansatz with the pivots substituted

    std::vector<std::string> constraints() const;  // "C1 = ..." strings
    Scalar value(const std::string& unknown) const;
};

// Anomaly proportional to g^{mu nu} delta, a single one-dimensional direction.
struct Case3Report {
    DeltaTensor u;
    DeltaTensor divergence;
    int dimension = 1;
    bool symmetric = false;
    std::string to_json() const;
};
Case3Report solve_case3();

enum class Case2Variant { A, B, C };  // three, one, two currents

struct Case2Report {
    Case2Variant variant;
    DeltaTensor ansatz;
    SolutionSpace space;
    std::vector<std::string> symmetries;
    bool extra_condition_used = false;
    std::string to_json() const;
};
Case2Report solve_case2(Case2Variant v);

// Two-index anomaly with m interaction vertices and one further current point.
struct Case1Report {
    int m = 1;
    size_t rank_sum_basis = 0;     // Sigma_k based basis
    size_t rank_split_basis = 0;   // symmetry adapted basis
    size_t rank_union = 0;
    std::optional<QI> change_of_basis_det;  // only when both bases are independent
    std::vector<bool> group1_invariant;
    SolutionSpace group2;          // constraint from the double divergence
    DeltaTensor u_final;
    bool final_symmetric = false;
    bool divergence_preserved = false;
    bool c0_symmetric = false;
    std::string to_json() const;
};
Case1Report solve_case1(int m);

// Named elements of both bases, exposed for tests and the CLI.
struct NamedTensor {
    std::string name;
    DeltaTensor t;
};
std::vector<NamedTensor> case1_sum_basis(int m);
std::vector<NamedTensor> case1_split_basis(int m);

// Solve apply_action(u, g) == u for every g, u linear in the unknowns.
SolutionSpace impose_invariance(const DeltaTensor& u, const std::vector<std::string>& unknowns,
                                const std::vector<PermAction>& gs);

// Matrix of coordinates (rows = tensors) over the union of their supports.
Matrix coordinate_matrix(const std::vector<DeltaTensor>& ts);

}  // namespace mwi
