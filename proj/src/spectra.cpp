#include "ruelle/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "ruelle/output.hpp"
#include "ruelle/parallel.hpp"

namespace ruelle {

namespace {

/// e^{-2πik/M} for k = 0..M-1.
std::vector<Complex> twiddles(int M) {
  std::vector<Complex> w(static_cast<std::size_t>(M));
  for (int k = 0; k < M; ++k) w[k] = std::polar(1.0, -2.0 * std::numbers::pi * k / M);
  return w;
}

std::vector<Complex> circle_points(Complex center, double radius, int M) {
  std::vector<Complex> z(static_cast<std::size_t>(M));
  for (int j = 0; j < M; ++j) z[j] = center + radius * std::polar(1.0, 2.0 * std::numbers::pi * j / M);
  return z;
}

bool use_tail(const MapWeightSystem& sys, TailTreatment tail) {
  if (tail == TailTreatment::Truncate) return false;
  if (tail == TailTreatment::Analytic && !sys.has_tail()) {
    throw Error(ErrorCode::InvalidArgument, "system has no analytic tail model");
  }
  return sys.has_tail();
}

}  // namespace

std::vector<Complex> taylor_coefficients(const AnalyticMap& f, Complex center, double radius,
                                         int count, int oversample) {
  if (count < 1) return {};
  // Trapezoidal sums on the circle, doubling the grid until aliasing is below
  // rounding level.
  auto scaled = [&](int M) {
    const auto z = circle_points(center, radius, M);
    const auto w = twiddles(M);
    std::vector<Complex> values(static_cast<std::size_t>(M));
    for (int j = 0; j < M; ++j) values[j] = f(z[j]);
    std::vector<Complex> a(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
      CompensatedSum s;
      for (int j = 0; j < M; ++j) {
        s.add(values[j] * w[static_cast<std::size_t>((static_cast<long>(j) * k) % M)]);
      }
      a[k] = s.value() / double(M);
    }
    return a;
  };
  constexpr int kMaxPoints = 1 << 16;
  int M = std::max(std::max(oversample, 4) * count, 16);
  std::vector<Complex> a = scaled(M);
  while (M < kMaxPoints) {
    M *= 2;
    std::vector<Complex> b = scaled(M);
    double diff = 0.0, size = 0.0;
    for (int k = 0; k < count; ++k) {
      diff = std::max(diff, std::abs(b[k] - a[k]));
      size = std::max(size, std::abs(b[k]));
    }
    a = std::move(b);
    if (diff <= 4.0 * std::numeric_limits<double>::epsilon() * size) break;
  }
  double scale = 1.0;
  for (int k = 0; k < count; ++k) {
    a[k] /= scale;
    scale *= radius;
  }
  return a;
}

OperatorMatrix assemble_matrix(const MapWeightSystem& sys, const BallDomain& ball, int N,
                               TailTreatment tail) {
  if (sys.dim() != 1 || ball.dim != 1) {
    throw Error(ErrorCode::DimensionUnsupported,
                "matrix discretization is implemented for dimension 1 only");
  }
  if (N < 1) throw Error(ErrorCode::InvalidArgument, "matrix size must be positive");
  const bool with_tail = use_tail(sys, tail);
  const Complex c = ball.center1();
  const double rho = ball.radius;
  const int M = std::max(4 * N, 128);
  const auto z = circle_points(c, rho, M);
  const int K = sys.size();

  // G(j, n) = Σ_i w_i(z_j) ((T_i(z_j) - c)/ρ)^n, one grid row per task.
  Eigen::MatrixXcd G(M, N);
  parallel_for(static_cast<std::size_t>(M), [&](std::size_t j) {
    std::vector<CompensatedSum> acc(static_cast<std::size_t>(N));
    for (int i = 0; i < K; ++i) {
      Complex w = sys.weights[i](z[j]);
      Complex u = (sys.branches[i](z[j]) - c) / rho;
      Complex p = w;
      for (int n = 0; n < N; ++n) {
        acc[n].add(p);
        p *= u;
      }
    }
    if (with_tail) {
      // Σ_{i>K} w_i ((T_i - c)/ρ)^n = Σ_m C(n,m) α^{n-m} h_m with α = (p - c)/ρ
      // and h_m = ρ^{-m} Σ_{i>K} w_i (T_i - p)^m.
      const auto& model = *sys.alphabet.tail;
      std::vector<Complex> h(static_cast<std::size_t>(N));
      model.kernels(K, z[j], h);
      double scale = 1.0;
      for (int m = 0; m < N; ++m) {
        h[m] /= scale;
        scale *= rho;
      }
      const Complex alpha = (model.accumulation_point() - c) / rho;
      std::vector<Complex> row(static_cast<std::size_t>(N), 0.0);
      row[0] = 1.0;
      for (int n = 0; n < N; ++n) {
        if (n > 0) {
          for (int m = n; m >= 1; --m) row[m] = row[m - 1] + alpha * row[m];
          row[0] = alpha * row[0];
        }
        Complex s = 0.0;
        for (int m = n; m >= 0; --m) s += row[m] * h[m];
        acc[n].add(s);
      }
    }
    for (int n = 0; n < N; ++n) G(static_cast<Eigen::Index>(j), n) = acc[n].value();
  });

  const auto w = twiddles(M);
  Eigen::MatrixXcd F(N, M);
  for (int m = 0; m < N; ++m) {
    for (int j = 0; j < M; ++j) F(m, j) = w[static_cast<std::size_t>((static_cast<long>(j) * m) % M)];
  }

  OperatorMatrix out;
  out.entries = (F * G) / double(M);
  out.center = c;
  out.radius = rho;
  out.N = N;
  out.system_id = sys.id;
  out.tail_included = with_tail;
  out.tail_bound = with_tail ? 0.0 : sys.alphabet.weight_tail_bound;
  return out;
}

std::string to_string(SpectrumMethod m) {
  return m == SpectrumMethod::Matrix ? "matrix" : "determinant";
}

void sort_spectrum(std::vector<Complex>& values) {
  const double eps = std::numeric_limits<double>::epsilon();
  for (auto& v : values) {
    if (std::abs(v.imag()) <= 4.0 * eps * std::abs(v)) v = Complex(v.real(), 0.0);
  }
  std::stable_sort(values.begin(), values.end(),
                   [](Complex a, Complex b) { return std::abs(a) > std::abs(b); });
  std::size_t start = 0;
  while (start < values.size()) {
    std::size_t end = start + 1;
    const double lead = std::abs(values[start]);
    while (end < values.size() && lead - std::abs(values[end]) <= 1e-12 * lead) ++end;
    std::stable_sort(values.begin() + static_cast<long>(start), values.begin() + static_cast<long>(end),
                     [](Complex a, Complex b) { return std::arg(a) < std::arg(b); });
    start = end;
  }
}

EigenvalueSequence eigenvalues(const OperatorMatrix& M) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver;
  solver.compute(M.entries, false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::SolverFailure, "eigensolver did not converge");
  }
  EigenvalueSequence out;
  out.method = SpectrumMethod::Matrix;
  const auto& ev = solver.eigenvalues();
  out.values.assign(ev.data(), ev.data() + ev.size());
  sort_spectrum(out.values);
  return out;
}

EigenvalueSequence spectral_sequence(const MapWeightSystem& sys, const BallDomain& ball, int N,
                                     TailTreatment tail, double rel_tol) {
  EigenvalueSequence coarse = eigenvalues(assemble_matrix(sys, ball, N, tail));
  EigenvalueSequence fine = eigenvalues(assemble_matrix(sys, ball, 2 * N, tail));
  EigenvalueSequence out;
  out.method = SpectrumMethod::Matrix;
  out.values.assign(fine.values.begin(), fine.values.begin() + N);
  int k = 0;
  while (k < N && std::abs(coarse.values[k] - fine.values[k]) <= rel_tol * std::abs(fine.values[k])) ++k;
  out.reliable_count = k;
  return out;
}

void write_matrix_csv(std::ostream& os, const OperatorMatrix& M) {
  JsonValue header = JsonValue::object();
  header.set("center", JsonValue::numbers({M.center.real(), M.center.imag()}))
      .set("radius", M.radius)
      .set("N", M.N)
      .set("system", M.system_id);
  os << "# " << header.dump(-1);
  for (Eigen::Index r = 0; r < M.entries.rows(); ++r) {
    for (Eigen::Index c = 0; c < M.entries.cols(); ++c) {
      if (c > 0) os << ',';
      os << format_double(M.entries(r, c).real()) << ',' << format_double(M.entries(r, c).imag());
    }
    os << '\n';
  }
}

}  // namespace ruelle
