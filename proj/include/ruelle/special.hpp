#pragma once

#include <span>

#include "ruelle/types.hpp"

namespace ruelle {

/// Hurwitz zeta values out[m] = ζ(m + 2, a) for m = 0 .. out.size()-1, for
/// complex a away from the non-positive real axis. Euler–Maclaurin summation
/// after shifting a by enough terms to make the remainder negligible.
void hurwitz_zeta_from2(Complex a, std::span<Complex> out);

/// ζ(s, a) for a single integer s ≥ 2 and real a > 0.
double hurwitz_zeta(int s, double a);

}  // namespace ruelle
