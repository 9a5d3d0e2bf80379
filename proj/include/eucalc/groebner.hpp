#pragma once

#include "eucalc/polynomial.hpp"

#include <vector>

namespace eucalc {

/// Reduced Gröbner basis of the ideal generated by `generators` (Buchberger
/// with the normal selection strategy and the Gebauer–Möller criteria).
/// Elements are monic and sorted by descending leading monomial; the zero
/// ideal gives an empty basis and the unit ideal gives {1}.
std::vector<Polynomial> buchberger(const VariableContext& context, const std::vector<Polynomial>& generators,
                                   const MonomialOrder& order);

/// Fully reduced remainder of `p` modulo `basis` (which must be a Gröbner basis for `order`).
Polynomial reduce(const Polynomial& p, const std::vector<Polynomial>& basis, const MonomialOrder& order);

}  // namespace eucalc
