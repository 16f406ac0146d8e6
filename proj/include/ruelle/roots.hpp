#pragma once

#include <vector>

#include "ruelle/types.hpp"

namespace ruelle {

/// All roots of Σ_k coeffs[k] z^k by Aberth–Ehrlich simultaneous iteration
/// started from Newton-polygon radii, then Newton-polished. Trailing zero
/// coefficients are dropped. Throws RootFindingFailure if a root's relative
/// residual |p(z)| / Σ|c_k||z|^k exceeds residual_tol.
std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs,
                                      double residual_tol = 1e-12, int max_iter = 2000);

}  // namespace ruelle
