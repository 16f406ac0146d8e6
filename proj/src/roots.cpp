#include "ruelle/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "ruelle/error.hpp"

namespace ruelle {

namespace {

struct Evaluation {
  Complex newton;   ///< p(z) / p'(z)
  double residual;  ///< |p(z)| / Σ|c_k||z|^k
};

/// Horner in z for |z| ≤ 1 and in 1/z for |z| > 1, so large roots never
/// overflow.
Evaluation evaluate(const std::vector<Complex>& c, Complex z) {
  const int n = static_cast<int>(c.size()) - 1;
  if (std::abs(z) <= 1.0) {
    Complex p = c[n], dp = 0.0;
    double mag = std::abs(c[n]);
    const double az = std::abs(z);
    for (int k = n - 1; k >= 0; --k) {
      dp = dp * z + p;
      p = p * z + c[k];
      mag = mag * az + std::abs(c[k]);
    }
    return {p / dp, std::abs(p) / mag};
  }
  const Complex y = 1.0 / z;
  const double ay = std::abs(y);
  Complex q = c[0], dq = 0.0;
  double mag = std::abs(c[0]);
  for (int k = 1; k <= n; ++k) {
    dq = dq * y + q;
    q = q * y + c[k];
    mag = mag * ay + std::abs(c[k]);
  }
  // p(z) = z^n q(y) and p'(z) = z^{n-1} (n q(y) - y q'(y)).
  return {z / (double(n) - y * dq / q), std::abs(q) / mag};
}

std::vector<Complex> initial_guesses(const std::vector<Complex>& c) {
  const int n = static_cast<int>(c.size()) - 1;
  std::vector<int> idx;
  std::vector<double> lg;
  for (int k = 0; k <= n; ++k) {
    if (c[k] != Complex(0.0)) {
      idx.push_back(k);
      lg.push_back(std::log(std::abs(c[k])));
    }
  }
  // Upper convex hull of (k, log|c_k|).
  std::vector<int> hull;
  for (std::size_t p = 0; p < idx.size(); ++p) {
    while (hull.size() >= 2) {
      std::size_t a = static_cast<std::size_t>(hull[hull.size() - 2]);
      std::size_t b = static_cast<std::size_t>(hull.back());
      double cross = (idx[b] - idx[a]) * (lg[p] - lg[a]) - (lg[b] - lg[a]) * (idx[p] - idx[a]);
      if (cross >= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(static_cast<int>(p));
  }
  constexpr double kOffset = 0.7;
  std::vector<Complex> z;
  z.reserve(static_cast<std::size_t>(n));
  for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
    std::size_t a = static_cast<std::size_t>(hull[h]), b = static_cast<std::size_t>(hull[h + 1]);
    int span = idx[b] - idx[a];
    double radius = std::exp((lg[a] - lg[b]) / span);
    for (int j = 0; j < span; ++j) {
      double angle = 2.0 * std::numbers::pi * (double(j) / span + double(idx[a]) / n) + kOffset;
      z.push_back(std::polar(radius, angle));
    }
  }
  return z;
}

}  // namespace

std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs, double residual_tol,
                                      int max_iter) {
  std::vector<Complex> c = coeffs;
  while (!c.empty() && c.back() == Complex(0.0)) c.pop_back();
  std::vector<Complex> zeros_at_origin;
  std::size_t lead = 0;
  while (lead < c.size() && c[lead] == Complex(0.0)) ++lead;
  zeros_at_origin.assign(lead, Complex(0.0));
  c.erase(c.begin(), c.begin() + static_cast<long>(lead));
  if (c.size() <= 1) return zeros_at_origin;

  const int n = static_cast<int>(c.size()) - 1;
  const double eps = std::numeric_limits<double>::epsilon();
  std::vector<Complex> z = initial_guesses(c);
  std::vector<bool> done(static_cast<std::size_t>(n), false);

  for (int it = 0; it < max_iter; ++it) {
    bool all_done = true;
    for (int k = 0; k < n; ++k) {
      if (done[k]) continue;
      Evaluation e = evaluate(c, z[k]);
      Complex sum = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j != k) sum += 1.0 / (z[k] - z[j]);
      }
      Complex step = e.newton / (1.0 - e.newton * sum);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) step = e.newton;
      z[k] -= step;
      if (std::abs(step) <= 4.0 * eps * std::abs(z[k]) || e.residual <= eps) {
        done[k] = true;
      } else {
        all_done = false;
      }
    }
    if (all_done) break;
  }

  for (auto& root : z) {
    for (int polish = 0; polish < 3; ++polish) {
      Evaluation e = evaluate(c, root);
      if (e.residual <= eps || !std::isfinite(std::abs(e.newton))) break;
      Complex next = root - e.newton;
      if (evaluate(c, next).residual < e.residual) root = next;
    }
    double residual = evaluate(c, root).residual;
    if (!(residual <= residual_tol)) {
      throw Error(ErrorCode::RootFindingFailure,
                  fmt::format("root {}{:+}i has relative residual {:.3g}", root.real(), root.imag(),
                              residual));
    }
  }
  z.insert(z.end(), zeros_at_origin.begin(), zeros_at_origin.end());
  return z;
}

}  // namespace ruelle
