#include "ruelle/spectra.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "json.hpp"
#include "oracles/collocation.hpp"

using ruelle::Complex;
using ruelle::ErrorCode;

namespace {

const ruelle::BallDomain kGaussDisc = ruelle::make_disc(1.0, 1.5);

ruelle::MapWeightSystem single_affine(Complex a, Complex b, const ruelle::BallDomain& dom) {
  return ruelle::make_system("affine", dom, {ruelle::make_affine(a, b)}, {ruelle::make_constant(1.0)});
}

void expect_close(const std::vector<Complex>& got, const std::vector<Complex>& want, double tol) {
  ASSERT_GE(got.size(), want.size());
  for (std::size_t k = 0; k < want.size(); ++k) {
    EXPECT_LE(std::abs(got[k] - want[k]), tol) << "k=" << k << " got " << got[k];
  }
}

/// Σ_i (z+i)^{-2} h(1/(z+i)) for h(z) = 1/(1+z), summed explicitly to i = I
/// with the midpoint Euler–Maclaurin remainder.
Complex gauss_applied_to_h(Complex z) {
  const int I = 1000;
  auto f = [z](double i) { return 1.0 / ((z + i) * (z + i + 1.0)); };
  Complex s = 0.0;
  for (int i = I; i >= 1; --i) s += f(i);
  const Complex u = z + (I + 0.5);
  // ∫ f plus the f' and f''' corrections at the left endpoint.
  Complex integral = std::log((u + 1.0) / u);
  auto g1 = [](Complex x) { return -1.0 / (x * x) + 1.0 / ((x + 1.0) * (x + 1.0)); };
  auto g3 = [](Complex x) { return -6.0 / std::pow(x, 4) + 6.0 / std::pow(x + 1.0, 4); };
  return s + integral + g1(u) / 24.0 - 7.0 * g3(u) / 5760.0;
}

}  // namespace

TEST(TaylorCoefficients, Monomial) {
  auto f = ruelle::AnalyticMap::scalar([](Complex z) { return z * z; }, [](Complex z) { return 2.0 * z; });
  expect_close(ruelle::taylor_coefficients(f, 0.0, 1.0, 4), {0.0, 0.0, 1.0, 0.0}, 1e-15);
}

TEST(TaylorCoefficients, GeometricSeries) {
  auto f = ruelle::AnalyticMap::scalar_dual([](auto z) { return 1.0 / (1.0 - z / 2.0); });
  expect_close(ruelle::taylor_coefficients(f, 0.0, 1.0, 3), {1.0, 0.5, 0.25}, 1e-12);
}

TEST(TaylorCoefficients, ShiftedCenter) {
  auto f = ruelle::make_moebius(0.0, 1.0, 1.0, 1.0);
  expect_close(ruelle::taylor_coefficients(f, 1.0, 1.0, 3), {0.5, -0.25, 0.125}, 1e-12);
}

TEST(AssembleMatrix, LinearMapIsDiagonal) {
  const double a = 0.7;
  auto sys = single_affine(a, 0.0, ruelle::make_disc(0.0, 1.0));
  auto M = ruelle::assemble_matrix(sys, sys.domain, 5);
  for (int r = 0; r < 5; ++r) {
    for (int c = 0; c < 5; ++c) {
      Complex want = r == c ? std::pow(a, r) : 0.0;
      EXPECT_LE(std::abs(M.entries(r, c) - want), 1e-15) << r << "," << c;
    }
  }
}

TEST(AssembleMatrix, AffineMapIsUpperTriangular) {
  // Basis about c = 0 on the unit disc; (a z + b)^n expands binomially.
  const double a = 0.5, b = 0.3;
  auto sys = single_affine(a, b, ruelle::make_disc(0.0, 1.0));
  const int N = 12;
  auto M = ruelle::assemble_matrix(sys, sys.domain, N);
  for (int n = 0; n < N; ++n) {
    double binom = 1.0;
    for (int m = 0; m < N; ++m) {
      Complex want = 0.0;
      if (m <= n) {
        want = binom * std::pow(a, m) * std::pow(b, n - m);
        binom = binom * (n - m) / (m + 1);
      }
      EXPECT_LE(std::abs(M.entries(m, n) - want), 1e-14) << m << "," << n;
    }
  }
}

TEST(AssembleMatrix, TwoDimensionalRejected) {
  auto dom = ruelle::make_ball({0.0, 0.0}, 1.0, 2);
  auto T = ruelle::AnalyticMap::from_dual(2, 2, [](auto in, auto out) {
    out[0] = 0.5 * in[0];
    out[1] = 0.5 * in[1];
  });
  auto sys = ruelle::make_system("d2", dom, {T}, {ruelle::make_constant(1.0, 2)});
  try {
    ruelle::assemble_matrix(sys, dom, 4);
    ADD_FAILURE() << "expected DimensionUnsupported";
  } catch (const ruelle::Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionUnsupported);
  }
}

TEST(Eigenvalues, DiagonalMatrix) {
  ruelle::OperatorMatrix M;
  M.N = 5;
  M.entries = Eigen::MatrixXcd::Zero(5, 5);
  for (int k = 0; k < 5; ++k) M.entries(k, k) = std::pow(0.5, 4 - k);
  auto e = ruelle::eigenvalues(M);
  expect_close(e.values, {1.0, 0.5, 0.25, 0.125, 0.0625}, 1e-15);
  EXPECT_EQ(e.reliable_count, 0);
}

TEST(Eigenvalues, SwapMatrixPositiveFirst) {
  ruelle::OperatorMatrix M;
  M.N = 2;
  M.entries = Eigen::MatrixXcd::Zero(2, 2);
  M.entries(0, 1) = M.entries(1, 0) = 1.0;
  auto e = ruelle::eigenvalues(M);
  ASSERT_EQ(e.values.size(), 2u);
  EXPECT_NEAR(e.values[0].real(), 1.0, 1e-15);
  EXPECT_NEAR(e.values[1].real(), -1.0, 1e-15);
  EXPECT_EQ(e.values[0].imag(), 0.0);
}

TEST(Eigenvalues, TriangularSpectrumEqualsDiagonal) {
  auto sys = single_affine(0.5, 0.3, ruelle::make_disc(0.0, 1.0));
  auto M = ruelle::assemble_matrix(sys, sys.domain, 16);
  auto e = ruelle::eigenvalues(M);
  for (int k = 0; k < 16; ++k) {
    EXPECT_LE(std::abs(e.values[k] - M.entries(k, k)), 1e-12) << k;
  }
}

TEST(SortSpectrum, ModulusThenArgument) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Complex> v;
  for (int k = 0; k < 200; ++k) v.emplace_back(u(rng), u(rng));
  for (int k = 0; k < 8; ++k) v.push_back(0.5 * std::polar(1.0, 0.7 * k - 2.0));
  v.emplace_back(0.25, 1e-20);
  ruelle::sort_spectrum(v);
  for (std::size_t k = 1; k < v.size(); ++k) {
    double a = std::abs(v[k - 1]), b = std::abs(v[k]);
    EXPECT_GE(a * (1.0 + 1e-12), b);
    if (std::abs(a - b) <= 1e-12 * a) {
      EXPECT_LE(std::arg(v[k - 1]), std::arg(v[k]));
    }
  }
  EXPECT_NE(std::find(v.begin(), v.end(), Complex(0.25, 0.0)), v.end());
}

TEST(GaussOperator, TelescopingIdentityPointwise) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    Complex z = 1.0 + 1.5 * std::sqrt(u(rng)) * std::polar(1.0, 2.0 * std::numbers::pi * u(rng));
    Complex h = 1.0 / (1.0 + z);
    EXPECT_LE(std::abs(gauss_applied_to_h(z) - h), 1e-12 * std::abs(h)) << z;
  }
}

TEST(GaussOperator, LeadingEigenvalueIsOne) {
  auto sys = ruelle::make_gauss_system(200, kGaussDisc);
  auto M = ruelle::assemble_matrix(sys, kGaussDisc, 40);
  EXPECT_TRUE(M.tail_included);
  auto e = ruelle::eigenvalues(M);
  EXPECT_LE(std::abs(e.values[0] - 1.0), 1e-12);
}

TEST(GaussOperator, AgreesWithCollocation) {
  auto sys = ruelle::make_gauss_system(200, kGaussDisc);
  auto e = ruelle::eigenvalues(ruelle::assemble_matrix(sys, kGaussDisc, 60));
  auto ref = oracle::gauss_collocation_eigenvalues(60);
  EXPECT_NEAR(std::abs(e.values[1]), 0.30366300289873, 1e-10);
  // Collocation carries spurious modes, so each value is matched to the
  // nearest oracle eigenvalue.
  for (int k = 0; k < 6; ++k) {
    double best = 1e300;
    for (Complex r : ref) best = std::min(best, std::abs(r - e.values[k]));
    EXPECT_LE(best, 1e-8) << "k=" << k << " " << e.values[k];
  }
}

TEST(GaussOperator, TruncatedTailShiftsLeadingEigenvalueToFirstOrder) {
  // Dropping i > K moves λ_0 by about ⟨Lebesgue, L_tail h⟩/⟨Lebesgue, h⟩ with
  // h = 1/(1+x), i.e. log(1 + 1/(K+1))/log 2.
  auto sys = ruelle::make_gauss_system(200, kGaussDisc);
  auto full = ruelle::assemble_matrix(sys, kGaussDisc, 24, ruelle::TailTreatment::Analytic);
  auto cut = ruelle::assemble_matrix(sys, kGaussDisc, 24, ruelle::TailTreatment::Truncate);
  EXPECT_TRUE(full.tail_included);
  EXPECT_FALSE(cut.tail_included);
  EXPECT_EQ(cut.tail_bound, sys.alphabet.weight_tail_bound);
  Complex shift = ruelle::eigenvalues(full).values[0] - ruelle::eigenvalues(cut).values[0];
  EXPECT_NEAR(shift.real(), std::log1p(1.0 / 201.0) / std::log(2.0), 1e-4);
}

TEST(SpectralSequence, AffineReliablePowers) {
  auto sys = single_affine(0.5, 0.3, ruelle::make_disc(0.6, 1.0));
  auto seq = ruelle::spectral_sequence(sys, sys.domain, 32);
  EXPECT_GE(seq.reliable_count, 10);
  for (int k = 0; k < 10; ++k) EXPECT_LE(std::abs(seq.values[k] - std::pow(0.5, k)), 1e-12);
}

TEST(SpectralSequence, GaussStableLeadingValues) {
  auto sys = ruelle::make_gauss_system(200, kGaussDisc);
  auto seq40 = ruelle::spectral_sequence(sys, kGaussDisc, 40);
  EXPECT_GE(seq40.reliable_count, 6);
  auto seq64 = ruelle::spectral_sequence(sys, kGaussDisc, 64);
  EXPECT_GE(seq64.reliable_count, 8);
}

TEST(SpectralSequence, ZeroOperator) {
  auto sys = ruelle::make_system("zero", ruelle::make_disc(0.0, 1.0),
                                 {ruelle::make_affine(0.5, 0.0), ruelle::make_affine(0.5, 0.2)},
                                 {ruelle::make_constant(0.0), ruelle::make_constant(0.0)});
  auto seq = ruelle::spectral_sequence(sys, sys.domain, 8);
  for (Complex v : seq.values) EXPECT_EQ(v, Complex(0.0));
}

TEST(SpectralSequence, UniversalityAcrossBalls) {
  auto sys = ruelle::make_gauss_system(200, kGaussDisc);
  auto a = ruelle::spectral_sequence(sys, kGaussDisc, 48);
  auto b = ruelle::spectral_sequence(sys, ruelle::make_disc(0.8, 1.2), 48);
  int k = std::min(a.reliable_count, b.reliable_count);
  ASSERT_GE(k, 5);
  for (int j = 0; j < k; ++j) {
    EXPECT_LE(std::abs(a.values[j] - b.values[j]), 1e-7 * std::abs(a.values[j])) << j;
  }
}

TEST(MatrixCsv, HeaderAndRows) {
  auto sys = single_affine(0.5, 0.0, ruelle::make_disc(0.0, 1.0));
  auto M = ruelle::assemble_matrix(sys, sys.domain, 3);
  std::ostringstream os;
  ruelle::write_matrix_csv(os, M);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  ASSERT_EQ(line.rfind("# ", 0), 0u);
  auto header = nlohmann::json::parse(line.substr(2));
  EXPECT_EQ(header["N"], 3);
  EXPECT_EQ(header["radius"], 1.0);
  EXPECT_EQ(header["system"], "affine");
  EXPECT_EQ(header["center"], nlohmann::json::array({0.0, 0.0}));
  int rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 5);
  }
  EXPECT_EQ(rows, 3);
}
