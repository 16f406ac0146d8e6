#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ruelle/output.hpp"
#include "ruelle/spectra.hpp"

namespace ruelle {

/// (W, r, d): weight sup, enclosing ratio and ambient dimension.
struct BoundProfile {
  double W = 1.0;
  double r = 0.5;
  int d = 1;
};

/// Throws InvalidArgument unless W > 0, 0 < r < 1 and d ≥ 1.
BoundProfile make_profile(double W, double r, int d);

/// t_l = k for C(k-1+d, d) < l ≤ C(k+d, d), l = 1..n: the total degree of the
/// l-th monomial in d variables ordered by degree.
std::vector<int> t_sequence(int d, int n);

/// (d!)^{1/d}; exact factorial for d ≤ 20, log-gamma beyond (see note).
double factorial_root(int d);
/// Describes the precision used by factorial_root for this d.
std::string factorial_root_note(int d);

/// W n^{1/2} r^{(Σ_{l≤n} t_l)/n}.
double weyl_product_bound(const BoundProfile& p, int n);
/// W n^{1/2} r^{(n-1)/2}. Throws WrongDimension unless d = 1.
double bound_d1(const BoundProfile& p, int n);
/// (W/r^d) n^{1/2} r^{(d/(d+1)) (d!)^{1/d} n^{1/d}}.
double bound_general(const BoundProfile& p, int n);
/// (W √d / (r^d (1-r²)^{d/2})) n^{(d-1)/(2d)} r^{(d/(d+1)) (d!)^{1/d} n^{1/d}}.
double bound_hardy(const BoundProfile& p, int n);
/// min(bound_general, bound_hardy).
double bound_combined(const BoundProfile& p, int n);

/// Largest n with bound_general(n) ≤ bound_hardy(n); 0 if hardy wins at n = 1.
/// The value can exceed 2^64, so it is returned as a double; `exact` is false
/// when it exceeds 2^53 and is only accurate to double precision.
struct CrossoverIndex {
  double index = 0.0;
  bool exact = true;
};
CrossoverIndex crossover_N(double r, int d);

/// Thresholds related to the crossover, for reporting: the condition
/// n^2 < 1/(1-r^2) stated for d = 1, the largest n with the d = 1 bound below
/// the Hardy bound, and the largest n with the general branch below the Hardy
/// branch (which equals crossover_N at d = 1).
struct CrossoverReport {
  double r = 0.0;
  int d = 1;
  CrossoverIndex crossover;
  double squared_threshold = 0.0;  ///< largest n with n^2 < 1/(1-r^2)
  double d1_vs_hardy = 0.0;        ///< largest n with bound_d1 ≤ bound_hardy
};
CrossoverReport crossover_report(double r, int d);
JsonValue to_json(const CrossoverReport& report);

struct BoundRow {
  int n = 0;
  double abs_lambda = 0.0;
  bool has_lambda = false;
  double d1 = 0.0;  ///< NaN unless d = 1
  double general = 0.0;
  double hardy = 0.0;
  double combined = 0.0;
  bool pass = true;
};

struct VerificationReport {
  std::vector<BoundRow> rows;
  std::vector<int> weyl_orders;   ///< n checked by the product inequality
  std::vector<bool> weyl_pass;
  bool all_pass = true;
};

/// Checks every reliable eigenvalue against bound_combined and the product
/// inequality Π_{k≤n}|λ_k| ≤ n^{n/2} W^n r^{Σ t_k} for n ≤ weyl_max.
VerificationReport verify_bounds(const EigenvalueSequence& eigs, const BoundProfile& p,
                                 int weyl_max = 10);

/// Bound rows for n = 1..n_max without eigenvalues.
VerificationReport bound_table(const BoundProfile& p, int n_max);

/// CSV with columns n, abs_lambda, bound_d1, bound_general, bound_hardy,
/// bound_combined, pass. Missing values are left empty.
void write_bounds_csv(std::ostream& os, const VerificationReport& report);

}  // namespace ruelle
