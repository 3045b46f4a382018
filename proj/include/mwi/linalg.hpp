#pragma once

#include "mwi/scalar.hpp"

#include <map>
#include <string>
#include <vector>

namespace mwi {

using Matrix = std::vector<std::vector<QI>>;

// Reduced row echelon form in place; returns pivot columns.
std::vector<size_t> rref(Matrix& m);
size_t rank(Matrix m);
Matrix nullspace(Matrix m);  // basis vectors as rows
QI determinant(Matrix m);

struct LinearSolution {
    bool consistent = true;
    std::map<std::string, Scalar> pivots;  // pivot unknown -> expression in free unknowns
    std::vector<std::string> free;
};

// Solve eqs = 0 where each eq is affine in the unknowns with numeric coefficients.
LinearSolution solve_linear(const std::vector<Scalar>& eqs, const std::vector<std::string>& unknowns);

}  // namespace mwi
