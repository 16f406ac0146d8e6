#pragma once

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ruelle/dual.hpp"
#include "ruelle/error.hpp"
#include "ruelle/types.hpp"

namespace ruelle {

/// Open ball {z : |z - center| < radius} in C^dim.
struct BallDomain {
  Point center;
  double radius = 1.0;
  int dim = 1;

  Complex center1() const { return center(0); }
  bool contains(const Point& z, double slack = 0.0) const {
    return (z - center).norm() < radius * (1.0 + slack);
  }
};

BallDomain make_ball(const std::vector<Complex>& center, double radius, int dim);
BallDomain make_disc(Complex center, double radius);

/// Holomorphic map C^dim_in -> C^dim_out with a derivative rule. Maps with
/// dim_in = dim_out = 1 carry scalar fast paths.
class AnalyticMap {
 public:
  using ScalarFn = std::function<Complex(Complex)>;
  using VectorFn = std::function<Point(const Point&)>;
  using JacobianFn = std::function<Jacobian(const Point&)>;

  AnalyticMap() = default;
  AnalyticMap(int dim_in, int dim_out, VectorFn eval, JacobianFn jacobian);

  /// One-dimensional map with closed-form derivative.
  static AnalyticMap scalar(ScalarFn f, ScalarFn df);

  /// One-dimensional map given as a generic callable; the derivative is
  /// computed by forward-mode dual numbers.
  template <class F>
  static AnalyticMap scalar_dual(F f) {
    return scalar([f](Complex z) { return f(z); },
                  [f](Complex z) { return f(Dual<Complex>(z, Complex(1.0))).eps; });
  }

  /// Map C^dim_in -> C^dim_out given as a generic callable
  /// f(std::span<const T> in, std::span<T> out). The Jacobian is assembled
  /// column by column from dim_in dual-number passes.
  template <class F>
  static AnalyticMap from_dual(int dim_in, int dim_out, F f);

  int dim_in() const { return dim_in_; }
  int dim_out() const { return dim_out_; }
  bool is_scalar() const { return static_cast<bool>(f1_); }

  Point operator()(const Point& z) const { return eval_(z); }
  Jacobian jacobian(const Point& z) const { return jac_(z); }

  /// Scalar evaluation; valid when dim_in = dim_out = 1.
  Complex operator()(Complex z) const { return f1_ ? f1_(z) : eval_(point1(z))(0); }
  Complex derivative(Complex z) const { return df1_ ? df1_(z) : jac_(point1(z))(0, 0); }

  /// Value of a scalar-valued map (weights) at a point of any dimension.
  Complex value(const Point& z) const {
    return (f1_ && z.size() == 1) ? f1_(z(0)) : eval_(z)(0);
  }

 private:
  int dim_in_ = 1;
  int dim_out_ = 1;
  VectorFn eval_;
  JacobianFn jac_;
  ScalarFn f1_;
  ScalarFn df1_;
};

/// z -> (a z + b) / (c z + e). Throws DegenerateMap when ae - bc = 0.
AnalyticMap make_moebius(Complex a, Complex b, Complex c, Complex e);
/// z -> a z + b.
AnalyticMap make_affine(Complex a, Complex b);
/// Constant scalar map on C^dim.
AnalyticMap make_constant(Complex value, int dim = 1);

/// Closed-form data for the branches i > K of a countable family, used to
/// carry the infinite part of the alphabet analytically.
class TailModel {
 public:
  virtual ~TailModel() = default;
  /// Point p that T_i(D) accumulates on as i grows.
  virtual Complex accumulation_point() const = 0;
  /// Upper bound for Σ_{i>K} sup_D |w_i|.
  virtual double weight_bound(int K, const BallDomain& D) const = 0;
  /// sup_{i>K} sup_D |T_i(z) - q|.
  virtual double image_sup(int K, const BallDomain& D, Complex q) const = 0;
  /// sup_{i>K} sup_D |T_i(z) - p|.
  virtual double image_radius(int K, const BallDomain& D) const = 0;
  /// Radius of the disc about p on which the tail operator is expanded.
  virtual double expansion_radius(int K) const = 0;
  /// out[m] = Σ_{i>K} w_i(z) (T_i(z) - p)^m.
  virtual void kernels(int K, Complex z, std::span<Complex> out) const = 0;
};

enum class AlphabetKind { Finite, CountableTruncated };

/// How the branches beyond the explicit ones enter a computation: through the
/// family's tail model, or dropped (with their bound reported). Auto picks
/// Analytic when a tail model exists.
enum class TailTreatment { Auto, Analytic, Truncate };

struct Alphabet {
  AlphabetKind kind = AlphabetKind::Finite;
  int count = 0;  ///< number of explicit branches (i_max when truncated)
  double weight_tail_bound = 0.0;
  std::shared_ptr<const TailModel> tail;
};

struct MapWeightSystem {
  std::string id;
  BallDomain domain;
  std::vector<AnalyticMap> branches;
  std::vector<AnalyticMap> weights;
  Alphabet alphabet;

  int dim() const { return domain.dim; }
  int size() const { return static_cast<int>(branches.size()); }
  bool has_tail() const { return static_cast<bool>(alphabet.tail); }
};

/// Finite system. Throws EmptyAlphabet, InvalidArgument on size or dimension
/// mismatch.
MapWeightSystem make_system(std::string id, BallDomain domain, std::vector<AnalyticMap> branches,
                            std::vector<AnalyticMap> weights);

/// Gauss map system T_i(z) = 1/(i+z), w_i(z) = 1/(i+z)^2, i = 1..i_max with an
/// analytic tail for i > i_max.
MapWeightSystem make_gauss_system(int i_max, const BallDomain& domain);

/// Sampled boundary of a ball: closed circles {center + radius e^{iθ} u}.
/// For d = 1 there is a single circle; for d ≥ 2 the coordinate circles and a
/// seeded set of random great circles.
std::vector<std::vector<Point>> boundary_circles(const BallDomain& D, int points_per_circle);

struct ValidationReport {
  bool images_contained = false;
  double image_sup = 0.0;       ///< sup_i sup_grid |T_i(z) - center| plus safety
  double image_safety = 0.0;    ///< grid-refinement safety included above
  double allowed = 0.0;         ///< (1 - margin) radius
  double W = 0.0;               ///< sampled sup Σ|w_i| plus weight_tail_bound
  double weight_tail_bound = 0.0;
  double margin = 0.0;
  int grid = 0;                 ///< final points per boundary circle
  bool sampled = true;          ///< sups are grid estimates, not rigorous
  std::vector<std::string> failures;
};

/// Checks ∪ T_i(D) ⊂⊂ D by boundary sampling and computes W.
ValidationReport validate_system(const MapWeightSystem& sys, double margin, int grid = 1024);

template <class F>
AnalyticMap AnalyticMap::from_dual(int dim_in, int dim_out, F f) {
  auto eval = [f, dim_in, dim_out](const Point& z) {
    std::array<Complex, kMaxDim> in{}, out{};
    for (int k = 0; k < dim_in; ++k) in[k] = z(k);
    f(std::span<const Complex>(in.data(), dim_in), std::span<Complex>(out.data(), dim_out));
    Point p(dim_out);
    for (int k = 0; k < dim_out; ++k) p(k) = out[k];
    return p;
  };
  auto jac = [f, dim_in, dim_out](const Point& z) {
    using D = Dual<Complex>;
    Jacobian J(dim_out, dim_in);
    for (int col = 0; col < dim_in; ++col) {
      std::array<D, kMaxDim> in{}, out{};
      for (int k = 0; k < dim_in; ++k) in[k] = D(z(k), k == col ? Complex(1.0) : Complex(0.0));
      f(std::span<const D>(in.data(), dim_in), std::span<D>(out.data(), dim_out));
      for (int r = 0; r < dim_out; ++r) J(r, col) = out[r].eps;
    }
    return J;
  };
  return AnalyticMap(dim_in, dim_out, eval, jac);
}

}  // namespace ruelle
