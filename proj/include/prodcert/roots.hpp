#pragma once

#include <vector>

#include "prodcert/ball.hpp"
#include "prodcert/poly.hpp"

namespace prodcert {

/// Working-precision ceiling; PRODCERT_PRECISION_CAP overrides the default
/// of 65536 bits.
Precision precision_cap();

/// Certified enclosures of all roots of a squarefree f with deg f >= 1.
///
/// The returned boxes are pairwise disjoint and each holds exactly one root.
/// For real f a root proven real has an exactly zero imaginary part; for even
/// or odd f a root proven purely imaginary has an exactly zero real part.
/// Every box satisfies rad <= 2^(1 - prec) (1 + |mid|) per coordinate.
///
/// The result depends only on (f, prec).
std::vector<ComplexBall> isolate_roots(const IntPoly& f, Precision prec);

}  // namespace prodcert
