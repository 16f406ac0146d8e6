#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "ruelle/dynamics.hpp"
#include "ruelle/output.hpp"
#include "ruelle/spectra.hpp"

namespace ruelle {

struct TraceOptions {
  std::uint64_t word_budget = kDefaultWordBudget;
  double fixed_point_tol = 1e-13;
  TailTreatment tail = TailTreatment::Auto;
  /// Analytic tail: letters 1..split are enumerated as periodic orbits, all
  /// larger letters go through the rank-tail_rank Taylor model of the tail
  /// operator sampled on tail_points points.
  int split = 2;
  int tail_rank = 48;
  int tail_points = 128;
};

/// τ(L^n) for n = 1..M with per-order estimates of what the sum leaves out.
struct TraceTable {
  std::vector<int> orders;
  std::vector<Complex> values;
  std::vector<double> truncation_bounds;
  std::vector<std::uint64_t> words;  ///< periodic orbits enumerated per order
  bool tail_analytic = false;
  int explicit_letters = 0;
};

/// Table from given trace values (bounds default to zero).
TraceTable make_trace_table(std::vector<Complex> values, std::vector<double> bounds = {});

/// Σ over words of length n of w_word(z_word) / det(I - T_word'(z_word)),
/// for orders 1..M. Throws BudgetExceeded and propagates NoConvergence.
TraceTable compute_traces(const MapWeightSystem& sys, int M, const TraceOptions& opts = {});

struct TraceValue {
  Complex value;
  double truncation_bound = 0.0;
};

TraceValue trace(const MapWeightSystem& sys, int n, const TraceOptions& opts = {});

/// Coefficients of Δ(z) = exp(-Σ z^n t_n / n) truncated at degree M.
struct DeterminantSeries {
  std::vector<Complex> coefficients;  ///< c_0 .. c_M, c_0 = 1
  std::vector<double> errors;         ///< propagated error estimate per c_m
  double trust_radius = std::numeric_limits<double>::infinity();
};

/// Newton-identity recursion c_m = -(1/m) Σ_{k≤m} t_k c_{m-k}. The trust
/// radius is the largest R with Σ_m e_m R^m + |c_M| R^M < 1e-6, where e_m
/// carries trace bounds and rounding through the recursion and the last
/// term stands in for the omitted series tail.
DeterminantSeries determinant_coefficients(const TraceTable& traces);

/// Reciprocals of the zeros of the truncated determinant inside the trust
/// radius, at most `count` of them. Throws RootFindingFailure.
EigenvalueSequence determinant_zeros(const DeterminantSeries& series, int count);

/// {"orders", "traces_re", "traces_im", "coeffs_re", "coeffs_im",
/// "trust_radius"} plus bounds and error estimates. An infinite trust radius is
/// written as null.
JsonValue determinant_json(const TraceTable& traces, const DeterminantSeries& series);

}  // namespace ruelle
