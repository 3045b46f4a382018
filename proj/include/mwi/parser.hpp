#pragma once

#include "mwi/field_algebra.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace mwi {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, int line, int col);
    int line, col;
};

// poly   := term (('+' | '-') term)*
// term   := coeff* factor+          ('*' between items is optional)
// factor := A[mu] | phi | phistar | dphi[mu] | dphistar[mu] | j[mu] | L | S | g
// coeff  := rational | i | e | m | c | eta, each optionally ^int
// Repeated index names inside a term are contracted.
Poly parse_poly(const std::string& text);

// Comma separated list of polynomials, e.g. L,L,j[nu].
std::vector<Poly> parse_list(const std::string& text);

// Rational, complex rational or one of the symbols above, e.g. "1/2", "c", "2 c".
Scalar parse_scalar(const std::string& text);

// Inverse of parse_poly on normalized polynomials built from the factors above.
std::string print_poly(const Poly& P);

}  // namespace mwi
