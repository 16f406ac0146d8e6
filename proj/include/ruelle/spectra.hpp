#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ruelle/systems.hpp"

namespace ruelle {

/// a_0..a_{count-1} of f about center, from the trapezoidal rule on the circle
/// |z - center| = radius. The grid starts at oversample·count points and is
/// doubled until aliasing falls below rounding level.
std::vector<Complex> taylor_coefficients(const AnalyticMap& f, Complex center, double radius,
                                         int count, int oversample = 4);

/// Matrix of the transfer operator in the orthonormal monomial basis
/// ((z - c)/ρ)^n of the Hardy space on the disc |z - c| < ρ.
struct OperatorMatrix {
  Eigen::MatrixXcd entries;
  Complex center;
  double radius = 1.0;
  int N = 0;
  std::string system_id;
  bool tail_included = false;   ///< branches beyond i_max added analytically
  double tail_bound = 0.0;      ///< Σ_{i>i_max} sup |w_i| for the omitted branches
};

/// Column n holds the basis coefficients of L p_n. Throws DimensionUnsupported
/// for d ≥ 2.
OperatorMatrix assemble_matrix(const MapWeightSystem& sys, const BallDomain& ball, int N,
                               TailTreatment tail = TailTreatment::Auto);

enum class SpectrumMethod { Matrix, Determinant };

struct EigenvalueSequence {
  std::vector<Complex> values;  ///< non-increasing modulus, ties by argument
  int reliable_count = 0;
  SpectrumMethod method = SpectrumMethod::Matrix;
};

std::string to_string(SpectrumMethod m);

/// Sorts by non-increasing modulus; runs of equal modulus (relative 1e-12)
/// are ordered by increasing principal argument. Imaginary parts below
/// rounding level are set to zero first.
void sort_spectrum(std::vector<Complex>& values);

/// All eigenvalues of the matrix, sorted. reliable_count is left at zero: a
/// single matrix carries no refinement evidence.
EigenvalueSequence eigenvalues(const OperatorMatrix& M);

/// Eigenvalues at sizes N and 2N; returns the leading N of the larger run with
/// reliable_count = largest k whose leading k values agree to rel_tol.
EigenvalueSequence spectral_sequence(const MapWeightSystem& sys, const BallDomain& ball, int N,
                                     TailTreatment tail = TailTreatment::Auto,
                                     double rel_tol = 1e-8);

/// CSV export: one JSON header comment line, then one row per matrix row of
/// interleaved re,im values.
void write_matrix_csv(std::ostream& os, const OperatorMatrix& M);

}  // namespace ruelle
