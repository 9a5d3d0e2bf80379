#pragma once

#include "eucalc/polynomial.hpp"

#include <utility>
#include <vector>

namespace eucalc {

/// p = unit * prod(factor^multiplicity). Factors are primitive integer
/// polynomials with positive leading coefficient. `complete` is false when a
/// size cap stopped the search; unfactored pieces are then listed as they are.
struct Factorization {
    BigRational unit{1};
    std::vector<std::pair<Polynomial, unsigned>> factors;
    bool complete = true;
};

/// Factorization over the rationals: monomial content, Kronecker substitution
/// to one variable, square-free decomposition, Zassenhaus (Cantor–Zassenhaus
/// modulo a prime, Hensel lifting, subset recombination) and trial division.
Factorization factor(const Polynomial& p);

/// Univariate integer polynomials, coefficient i is the degree-i coefficient.
using IntPoly = std::vector<BigInt>;

/// Irreducible factors over Z of a univariate polynomial, with multiplicities
/// (content dropped). Sets `complete` to false when the recombination cap hits.
std::vector<std::pair<IntPoly, unsigned>> factor_univariate(const IntPoly& f, bool& complete);

}  // namespace eucalc
