#include "ruelle/determinant.hpp"

#include <gtest/gtest.h>

#include <cmath>

using ruelle::Complex;
using ruelle::ErrorCode;

namespace {

const ruelle::BallDomain kGaussDisc = ruelle::make_disc(1.0, 1.5);

ruelle::MapWeightSystem single_affine(double a, double b) {
  return ruelle::make_system("affine", ruelle::make_disc(b / (1.0 - a), 1.0), {ruelle::make_affine(a, b)},
                             {ruelle::make_constant(1.0)});
}

ruelle::MapWeightSystem cantor_system() {
  return ruelle::make_system("cantor", ruelle::make_disc(0.5, 1.0),
                             {ruelle::make_affine(1.0 / 3.0, 0.0), ruelle::make_affine(1.0 / 3.0, 2.0 / 3.0)},
                             {ruelle::make_constant(1.0), ruelle::make_constant(1.0)});
}

/// Coefficients of Π_{k<terms} (1 - z a^k) up to degree M.
std::vector<Complex> product_expansion(double a, int terms, int M) {
  std::vector<Complex> c(static_cast<std::size_t>(M + 1), 0.0);
  c[0] = 1.0;
  for (int k = 0; k < terms; ++k) {
    const double ak = std::pow(a, k);
    for (int m = M; m >= 1; --m) c[m] -= ak * c[m - 1];
  }
  return c;
}

std::vector<Complex> affine_traces(double a, int M) {
  std::vector<Complex> t;
  for (int n = 1; n <= M; ++n) t.emplace_back(1.0 / (1.0 - std::pow(a, n)));
  return t;
}

}  // namespace

TEST(Trace, SingleAffineFirstOrder) {
  auto t = ruelle::trace(single_affine(0.5, 0.3), 1);
  EXPECT_NEAR(t.value.real(), 2.0, 1e-14);
  EXPECT_LE(t.truncation_bound, 1e-13);
}

TEST(Trace, SingleAffineAllOrders) {
  auto table = ruelle::compute_traces(single_affine(0.5, 0.3), 12);
  ASSERT_EQ(table.values.size(), 12u);
  for (int n = 1; n <= 12; ++n) {
    EXPECT_NEAR(std::abs(table.values[n - 1] - 1.0 / (1.0 - std::pow(0.5, n))), 0.0, 1e-13) << n;
    EXPECT_EQ(table.words[n - 1], 1u);
  }
}

TEST(Trace, TwoAffineBranches) {
  auto table = ruelle::compute_traces(cantor_system(), 6);
  EXPECT_NEAR(table.values[0].real(), 3.0, 1e-14);
  for (int n = 1; n <= 6; ++n) {
    double want = std::pow(2.0, n) / (1.0 - std::pow(3.0, -n));
    EXPECT_NEAR(table.values[n - 1].real(), want, 1e-12 * want) << n;
  }
}

TEST(Trace, PermutationInvariant) {
  auto sys = ruelle::make_system(
      "three", ruelle::make_disc(0.0, 1.0),
      {ruelle::make_affine(0.3, 0.2), ruelle::make_moebius(0.2, 0.1, 0.1, 1.0), ruelle::make_affine({0.1, 0.2}, -0.3)},
      {ruelle::make_constant(0.5), ruelle::make_affine(0.2, 1.0), ruelle::make_constant({0.0, 0.7})});
  auto perm = ruelle::make_system("perm", sys.domain, {sys.branches[2], sys.branches[0], sys.branches[1]},
                                  {sys.weights[2], sys.weights[0], sys.weights[1]});
  auto a = ruelle::compute_traces(sys, 6);
  auto b = ruelle::compute_traces(perm, 6);
  for (int n = 0; n < 6; ++n) {
    EXPECT_LE(std::abs(a.values[n] - b.values[n]), 1e-13 * std::max(1.0, std::abs(a.values[n]))) << n;
  }
}

TEST(Trace, InvariantUnderAffineConjugation) {
  // φ(z) = 2z + 1 carries the system on disc(0,1) to one on disc(1,2); fixed
  // points, multipliers and weights correspond, so traces agree.
  auto sys = ruelle::make_system("orig", ruelle::make_disc(0.0, 1.0),
                                 {ruelle::make_moebius(0.3, 0.1, 0.2, 1.0), ruelle::make_affine(-0.4, 0.2)},
                                 {ruelle::make_affine(0.3, 1.0), ruelle::make_constant(0.5)});
  auto conj = [](const ruelle::AnalyticMap& T) {
    return ruelle::AnalyticMap::scalar([T](Complex z) { return 2.0 * T((z - 1.0) / 2.0) + 1.0; },
                                       [T](Complex z) { return T.derivative((z - 1.0) / 2.0); });
  };
  auto pull = [](const ruelle::AnalyticMap& w) {
    return ruelle::AnalyticMap::scalar([w](Complex z) { return w((z - 1.0) / 2.0); },
                                       [w](Complex z) { return 0.5 * w.derivative((z - 1.0) / 2.0); });
  };
  auto moved = ruelle::make_system("moved", ruelle::make_disc(1.0, 2.0), {conj(sys.branches[0]), conj(sys.branches[1])},
                                   {pull(sys.weights[0]), pull(sys.weights[1])});
  auto a = ruelle::compute_traces(sys, 8);
  auto b = ruelle::compute_traces(moved, 8);
  for (int n = 0; n < 8; ++n) {
    EXPECT_LE(std::abs(a.values[n] - b.values[n]), 1e-13 * std::max(1.0, std::abs(a.values[n]))) << n;
  }
}

TEST(Trace, TwoDimensionalDiagonalAffine) {
  const double a = 0.5, c = 0.25;
  auto T = ruelle::AnalyticMap::from_dual(2, 2, [a, c](auto in, auto out) {
    out[0] = a * in[0] + 0.1;
    out[1] = c * in[1];
  });
  auto sys = ruelle::make_system("diag", ruelle::make_ball({0.0, 0.0}, 1.0, 2), {T},
                                 {ruelle::make_constant(1.0, 2)});
  auto table = ruelle::compute_traces(sys, 6);
  for (int n = 1; n <= 6; ++n) {
    double want = 1.0 / ((1.0 - std::pow(a, n)) * (1.0 - std::pow(c, n)));
    EXPECT_NEAR(table.values[n - 1].real(), want, 1e-13) << n;
  }
}

TEST(Trace, GaussTruncatedModeBoundCoversAnalyticValue) {
  auto sys = ruelle::make_gauss_system(40, kGaussDisc);
  ruelle::TraceOptions cut;
  cut.tail = ruelle::TailTreatment::Truncate;
  auto a = ruelle::compute_traces(sys, 3);
  auto b = ruelle::compute_traces(sys, 3, cut);
  EXPECT_TRUE(a.tail_analytic);
  EXPECT_FALSE(b.tail_analytic);
  for (int n = 0; n < 3; ++n) {
    EXPECT_GT(b.truncation_bounds[n], 0.0);
    EXPECT_LE(std::abs(a.values[n] - b.values[n]), b.truncation_bounds[n]) << n;
  }
}

TEST(Trace, GaussFirstTraceMatchesClosedForm) {
  // τ(L) = Σ_i w_i(z_i)/(1 - T_i'(z_i)) = Σ_i z_i^2/(1 + z_i^2) with
  // z_i = (√(i²+4) - i)/2.
  double want = 0.0;
  for (int i = 2000000; i >= 1; --i) {
    double z = 2.0 / (std::sqrt(double(i) * i + 4.0) + i);
    want += z * z / (1.0 + z * z);
  }
  want += 1.0 / 2000000.5;  // Σ_{i>I} i^{-2} to leading order
  auto t = ruelle::trace(ruelle::make_gauss_system(200, kGaussDisc), 1);
  EXPECT_NEAR(t.value.real(), want, 1e-11);
  EXPECT_LE(t.truncation_bound, 1e-10);
}

TEST(Trace, BudgetEnforced) {
  auto sys = ruelle::make_gauss_system(200, kGaussDisc);
  ruelle::TraceOptions opts;
  opts.tail = ruelle::TailTreatment::Truncate;
  opts.word_budget = 1000;
  try {
    ruelle::compute_traces(sys, 3, opts);
    ADD_FAILURE() << "expected BudgetExceeded";
  } catch (const ruelle::Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BudgetExceeded);
  }
}

TEST(DeterminantCoefficients, AffineSecondOrder) {
  auto s = ruelle::determinant_coefficients(ruelle::make_trace_table(affine_traces(0.5, 2)));
  ASSERT_EQ(s.coefficients.size(), 3u);
  EXPECT_EQ(s.coefficients[0], Complex(1.0));
  EXPECT_NEAR(std::abs(s.coefficients[1] - Complex(-2.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s.coefficients[2] - Complex(4.0 / 3.0)), 0.0, 1e-15);
}

TEST(DeterminantCoefficients, MatchProductExpansion) {
  auto s = ruelle::determinant_coefficients(ruelle::make_trace_table(affine_traces(0.5, 12)));
  auto want = product_expansion(0.5, 60, 12);
  for (int m = 0; m <= 12; ++m) {
    EXPECT_LE(std::abs(s.coefficients[m] - want[m]), 1e-12) << m;
  }
}

TEST(DeterminantCoefficients, ZeroTraces) {
  auto s = ruelle::determinant_coefficients(ruelle::make_trace_table(std::vector<Complex>(6, 0.0)));
  EXPECT_EQ(s.coefficients[0], Complex(1.0));
  for (int m = 1; m <= 6; ++m) EXPECT_EQ(s.coefficients[m], Complex(0.0));
  EXPECT_TRUE(std::isinf(s.trust_radius));
}

TEST(DeterminantCoefficients, RankOne) {
  const Complex lambda(0.3, -0.2);
  std::vector<Complex> t;
  Complex p = 1.0;
  for (int n = 1; n <= 8; ++n) t.push_back(p *= lambda);
  auto s = ruelle::determinant_coefficients(ruelle::make_trace_table(t));
  EXPECT_LE(std::abs(s.coefficients[1] + lambda), 1e-16);
  for (int m = 2; m <= 8; ++m) EXPECT_LE(std::abs(s.coefficients[m]), 1e-16) << m;
}

TEST(DeterminantCoefficients, ErrorsGrowWithTraceBounds) {
  auto exact = ruelle::determinant_coefficients(ruelle::make_trace_table(affine_traces(0.5, 8)));
  auto noisy = ruelle::determinant_coefficients(
      ruelle::make_trace_table(affine_traces(0.5, 8), std::vector<double>(8, 1e-6)));
  EXPECT_LT(noisy.trust_radius, exact.trust_radius);
  for (int m = 1; m <= 8; ++m) EXPECT_GE(noisy.errors[m], exact.errors[m]);
}

TEST(DeterminantZeros, AffineLeadingEigenvalues) {
  auto s = ruelle::determinant_coefficients(ruelle::make_trace_table(affine_traces(0.5, 12)));
  auto e = ruelle::determinant_zeros(s, 3);
  ASSERT_GE(e.values.size(), 3u);
  EXPECT_EQ(e.method, ruelle::SpectrumMethod::Determinant);
  EXPECT_NEAR(std::abs(e.values[0] - 1.0), 0.0, 1e-9);
  EXPECT_NEAR(std::abs(e.values[1] - 0.5), 0.0, 1e-9);
  EXPECT_NEAR(std::abs(e.values[2] - 0.25), 0.0, 1e-9);
}

TEST(DeterminantZeros, LinearDeterminant) {
  const Complex lambda(0.4, 0.1);
  ruelle::DeterminantSeries s;
  s.coefficients = {1.0, -lambda};
  s.errors = {0.0, 0.0};
  auto e = ruelle::determinant_zeros(s, 5);
  ASSERT_EQ(e.values.size(), 1u);
  EXPECT_LE(std::abs(e.values[0] - lambda), 1e-16);
}

TEST(DeterminantZeros, GaussAgreesWithMatrixRoute) {
  auto sys = ruelle::make_gauss_system(200, kGaussDisc);
  auto s = ruelle::determinant_coefficients(ruelle::compute_traces(sys, 10));
  auto det = ruelle::determinant_zeros(s, 10);
  auto mat = ruelle::spectral_sequence(sys, kGaussDisc, 40);
  ASSERT_GE(det.values.size(), 2u);
  for (int k = 0; k < 2; ++k) {
    EXPECT_LE(std::abs(det.values[k] - mat.values[k]), 1e-7 * std::abs(mat.values[k])) << k;
  }
}

TEST(DeterminantZeros, TraceConsistencyWithMatrixSpectrum) {
  // Σ of all matrix eigenvalues approximates τ(L) up to the neglected spectrum.
  auto sys = ruelle::make_gauss_system(200, kGaussDisc);
  auto seq = ruelle::spectral_sequence(sys, kGaussDisc, 40);
  Complex sum = 0.0;
  for (Complex v : seq.values) sum += v;
  auto t = ruelle::trace(sys, 1);
  double tol = std::abs(seq.values[static_cast<std::size_t>(seq.reliable_count)]) + t.truncation_bound;
  EXPECT_LE(std::abs(sum - t.value), tol);
}

TEST(DeterminantJson, KeysAndInfiniteRadius) {
  auto table = ruelle::make_trace_table(std::vector<Complex>(3, 0.0));
  auto s = ruelle::determinant_coefficients(table);
  std::string text = ruelle::determinant_json(table, s).dump(-1);
  for (const char* key : {"\"orders\"", "\"traces_re\"", "\"traces_im\"", "\"coeffs_re\"", "\"coeffs_im\"",
                          "\"trust_radius\": null"}) {
    EXPECT_NE(text.find(key), std::string::npos) << key << " in " << text;
  }
}
