#pragma once

#include <cstdint>
#include <vector>

#include "ruelle/systems.hpp"

namespace ruelle {

/// Letters are 1-based branch indices; the word (i_1, ..., i_n) acts as
/// T_{i_n} ∘ ... ∘ T_{i_1}.
using Word = std::vector<int>;

inline constexpr std::uint64_t kDefaultWordBudget = 2'000'000;

/// T_{i_n} ∘ ... ∘ T_{i_1}, derivative by the chain rule. Throws BadIndex.
AnalyticMap compose(const MapWeightSystem& sys, const Word& word);

/// z -> Π_k w_{i_k}(T_{P_{k-1}}(z)) with T_{P_0} = id. Throws BadIndex.
AnalyticMap word_weight(const MapWeightSystem& sys, const Word& word);

struct FixedPointResult {
  Point point;
  double residual = 0.0;
  int iterations = 0;
  double contraction_estimate = 0.0;
};

/// Iterates z_{k+1} = T(z_k) from the domain center until the a-posteriori
/// bound |z_{k+1} - z_k| q/(1-q) falls below tol. Throws EscapedDomain if an
/// iterate leaves the domain and NoConvergence if max_iter is exhausted or the
/// limit is not attracting.
FixedPointResult fixed_point(const AnalyticMap& map, const BallDomain& domain, double tol,
                             int max_iter = 10000);

/// Periodic-orbit data of a word: its fixed point z, w_word(z) and
/// det(I - T_word'(z)).
struct OrbitData {
  FixedPointResult fixed;
  Complex weight;
  Complex det_one_minus_jacobian;
};

OrbitData word_orbit(const MapWeightSystem& sys, const Word& word, double tol,
                     int max_iter = 10000);

/// Number of words of length n over `letters` letters, or a value above
/// `cap` when that count exceeds it.
std::uint64_t word_count(int letters, int n, std::uint64_t cap);

/// Advances a lexicographic word over letters 1..letters; false at the end.
bool next_word(Word& word, int letters);

struct ContractionResult {
  double value = 0.0;   ///< sampled boundary sup of ‖T_word'‖ over all words
  double safety = 0.0;  ///< grid-refinement safety term (half the largest step)
  Word word;            ///< maximizing word
  Point point;          ///< maximizing boundary point
  std::uint64_t words = 0;
  bool sampled = true;

  double upper() const { return value + safety; }
};

/// γ = sup over words of length n of ‖T_word'‖ on the boundary of the domain.
/// Throws BudgetExceeded when count^n exceeds the budget.
ContractionResult contraction_factor(const MapWeightSystem& sys, int n, int grid = 1024,
                                     std::uint64_t budget = kDefaultWordBudget);

/// Distance of the adapted metric for complex n-contraction, with
/// β = γ^{1/n} and γ taken as the sampled contraction factor plus safety.
class AdaptedMetric {
 public:
  /// Throws NotContracting if γ ≥ 1.
  AdaptedMetric(const MapWeightSystem& sys, int n, int grid = 1024,
                std::uint64_t budget = kDefaultWordBudget);

  double gamma() const { return gamma_; }
  double beta() const { return beta_; }
  int order() const { return n_; }
  double distance(const Point& x, const Point& y) const;

 private:
  const MapWeightSystem* sys_;
  int n_;
  double gamma_;
  double beta_;
};

double adapted_distance(const MapWeightSystem& sys, int n, const Point& x, const Point& y);

struct EnclosingResult {
  double r = 0.0;       ///< sup_i sup_grid |T_i(z) - center| / radius
  double safety = 0.0;  ///< half-step safety term, relative to the radius
  bool sampled = true;
};

/// Ratio of the smallest concentric ball holding all branch images to the
/// domain radius. Tail branches enter through their closed-form image data.
/// Throws NotEnclosed if r ≥ 1.
EnclosingResult enclosing_radius(const MapWeightSystem& sys, int grid = 1024);

}  // namespace ruelle
