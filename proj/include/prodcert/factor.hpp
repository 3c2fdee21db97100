#pragma once

#include <vector>

#include "prodcert/poly.hpp"

namespace prodcert {

/// Distinct irreducible factors of f over Z[x] (content discarded), each
/// primitive with positive leading coefficient, sorted by degree then
/// coefficients. Multiplicities are not reported.
std::vector<IntPoly> irreducible_factors(const IntPoly& f);

/// True iff the primitive part of f has degree >= 1 and is irreducible in Q[x].
bool is_irreducible(const IntPoly& f);

}  // namespace prodcert
