#include "ruelle/special.hpp"

#include <array>
#include <vector>

namespace ruelle {

namespace {

/// B_{2j} / (2j)! for j = 1..15.
constexpr std::array<double, 15> kBernoulliOverFactorial = {
    8.3333333333333329e-2,  -1.3888888888888889e-3,  3.3068783068783071e-5,
    -8.2671957671957675e-7, 2.08767569878681e-8,     -5.2841901386874932e-10,
    1.3382536530684679e-11, -3.3896802963225827e-13, 8.5860620562778452e-15,
    -2.1748686985580619e-16, 5.5090028283602295e-18, -1.3954464685812525e-19,
    3.5347070396294673e-21, -8.9535174270375463e-23, 2.2679524523376829e-24};

constexpr int kCorrectionTerms = 14;

}  // namespace

void hurwitz_zeta_from2(Complex a, std::span<Complex> out) {
  const int count = static_cast<int>(out.size());
  if (count == 0) return;
  const int smax = count + 1;
  const int shift = smax + 12;

  for (auto& v : out) v = 0.0;
  for (int k = 0; k < shift; ++k) {
    Complex inv = 1.0 / (a + double(k));
    Complex p = inv * inv;
    for (int m = 0; m < count; ++m) {
      out[m] += p;
      p *= inv;
    }
  }

  const Complex A = a + double(shift);
  const Complex invA = 1.0 / A;
  const Complex invA2 = invA * invA;
  Complex a_pow = invA;  // A^{1-s} for s = 2
  for (int m = 0; m < count; ++m) {
    const double s = m + 2;
    Complex a_s = a_pow * invA;  // A^{-s}
    Complex tail = a_pow / (s - 1.0) + 0.5 * a_s;
    double rising = s;          // s (s+1) ... (s+2j-2)
    Complex power = a_s * invA;  // A^{-s-2j+1}
    for (int j = 1; j <= kCorrectionTerms; ++j) {
      tail += kBernoulliOverFactorial[j - 1] * rising * power;
      rising *= (s + 2 * j - 1) * (s + 2 * j);
      power *= invA2;
    }
    out[m] += tail;
    a_pow = a_s;
  }
}

double hurwitz_zeta(int s, double a) {
  std::vector<Complex> v(static_cast<std::size_t>(s - 1));
  hurwitz_zeta_from2(Complex(a, 0.0), v);
  return v.back().real();
}

}  // namespace ruelle
