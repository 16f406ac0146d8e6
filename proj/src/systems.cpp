#include "ruelle/systems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <utility>

#include <fmt/format.h>

#include "ruelle/parallel.hpp"
#include "ruelle/special.hpp"

namespace ruelle {

BallDomain make_ball(const std::vector<Complex>& center, double radius, int dim) {
  if (dim < 1 || dim > kMaxDim) {
    throw Error(ErrorCode::InvalidDomain, fmt::format("dimension {} outside 1..{}", dim, kMaxDim));
  }
  if (static_cast<int>(center.size()) != dim) {
    throw Error(ErrorCode::InvalidDomain,
                fmt::format("center has {} coordinates, expected {}", center.size(), dim));
  }
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorCode::InvalidDomain, fmt::format("radius must be positive, got {}", radius));
  }
  BallDomain b;
  b.center = Point(dim);
  for (int k = 0; k < dim; ++k) b.center(k) = center[k];
  b.radius = radius;
  b.dim = dim;
  return b;
}

BallDomain make_disc(Complex center, double radius) { return make_ball({center}, radius, 1); }

AnalyticMap::AnalyticMap(int dim_in, int dim_out, VectorFn eval, JacobianFn jacobian)
    : dim_in_(dim_in), dim_out_(dim_out), eval_(std::move(eval)), jac_(std::move(jacobian)) {}

AnalyticMap AnalyticMap::scalar(ScalarFn f, ScalarFn df) {
  AnalyticMap m(
      1, 1, [f](const Point& z) { return point1(f(z(0))); },
      [df](const Point& z) {
        Jacobian J(1, 1);
        J(0, 0) = df(z(0));
        return J;
      });
  m.f1_ = std::move(f);
  m.df1_ = std::move(df);
  return m;
}

AnalyticMap make_moebius(Complex a, Complex b, Complex c, Complex e) {
  Complex det = a * e - b * c;
  double scale = std::max({std::abs(a * e), std::abs(b * c), 1e-300});
  if (std::abs(det) <= 1e-14 * scale) {
    throw Error(ErrorCode::DegenerateMap, "ae - bc vanishes");
  }
  return AnalyticMap::scalar([=](Complex z) { return (a * z + b) / (c * z + e); },
                             [=](Complex z) {
                               Complex q = c * z + e;
                               return det / (q * q);
                             });
}

AnalyticMap make_affine(Complex a, Complex b) {
  return AnalyticMap::scalar([=](Complex z) { return a * z + b; }, [=](Complex) { return a; });
}

AnalyticMap make_constant(Complex value, int dim) {
  if (dim == 1) {
    return AnalyticMap::scalar([=](Complex) { return value; }, [](Complex) { return Complex(0.0); });
  }
  return AnalyticMap(
      dim, 1, [=](const Point&) { return point1(value); },
      [=](const Point&) { return Jacobian::Zero(1, dim).eval(); });
}

MapWeightSystem make_system(std::string id, BallDomain domain, std::vector<AnalyticMap> branches,
                            std::vector<AnalyticMap> weights) {
  if (branches.empty()) throw Error(ErrorCode::EmptyAlphabet, "system has no branches");
  if (branches.size() != weights.size()) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("{} branches but {} weights", branches.size(), weights.size()));
  }
  for (std::size_t i = 0; i < branches.size(); ++i) {
    if (branches[i].dim_in() != domain.dim || branches[i].dim_out() != domain.dim) {
      throw Error(ErrorCode::InvalidArgument, fmt::format("branch {} has wrong dimension", i + 1));
    }
    if (weights[i].dim_in() != domain.dim || weights[i].dim_out() != 1) {
      throw Error(ErrorCode::InvalidArgument, fmt::format("weight {} has wrong dimension", i + 1));
    }
  }
  MapWeightSystem sys;
  sys.id = std::move(id);
  sys.domain = std::move(domain);
  sys.alphabet.kind = AlphabetKind::Finite;
  sys.alphabet.count = static_cast<int>(branches.size());
  sys.branches = std::move(branches);
  sys.weights = std::move(weights);
  return sys;
}

namespace {

/// Branches i > K of the Gauss family. Kernels are Hurwitz zeta values:
/// Σ_{i>K} (i+z)^{-2} (i+z)^{-m} = ζ(m+2, K+1+z).
class GaussTail final : public TailModel {
 public:
  Complex accumulation_point() const override { return 0.0; }

  double weight_bound(int K, const BallDomain& D) const override {
    return hurwitz_zeta(2, K + 1 + D.center1().real() - D.radius);
  }

  double image_sup(int K, const BallDomain& D, Complex q) const override {
    // T_i(D) is the disc with center conj(u)/(|u|^2-ρ^2) and radius
    // ρ/(|u|^2-ρ^2), u = i + c. The images shrink to 0 as i grows.
    constexpr int kExplicit = 1 << 16;
    double rho2 = D.radius * D.radius;
    double best = std::abs(q);
    for (int i = K + 1; i <= K + kExplicit; ++i) {
      Complex u = double(i) + D.center1();
      double den = std::norm(u) - rho2;
      double v = std::abs(std::conj(u) / den - q) + D.radius / den;
      best = std::max(best, v);
    }
    return best;
  }

  double image_radius(int K, const BallDomain& D) const override {
    return 1.0 / (K + 1 + D.center1().real() - D.radius);
  }

  double expansion_radius(int K) const override { return K >= 2 ? 0.6 : 0.8; }

  void kernels(int K, Complex z, std::span<Complex> out) const override {
    hurwitz_zeta_from2(double(K + 1) + z, out);
  }
};

constexpr double kGaussMargin = 1e-3;

}  // namespace

MapWeightSystem make_gauss_system(int i_max, const BallDomain& domain) {
  if (i_max < 1) throw Error(ErrorCode::EmptyAlphabet, "i_max must be at least 1");
  if (domain.dim != 1) {
    throw Error(ErrorCode::InadmissibleDomain, "the Gauss system lives in dimension 1");
  }
  if (!(1.0 + domain.center1().real() - domain.radius > 0.0)) {
    throw Error(ErrorCode::InadmissibleDomain, "domain meets the pole of T_1 at z = -1");
  }
  MapWeightSystem sys;
  sys.id = fmt::format("gauss-{}", i_max);
  sys.domain = domain;
  sys.branches.reserve(static_cast<std::size_t>(i_max));
  sys.weights.reserve(static_cast<std::size_t>(i_max));
  for (int i = 1; i <= i_max; ++i) {
    const double di = i;
    sys.branches.push_back(AnalyticMap::scalar(
        [di](Complex z) { return 1.0 / (di + z); },
        [di](Complex z) {
          Complex q = 1.0 / (di + z);
          return -q * q;
        }));
    sys.weights.push_back(AnalyticMap::scalar(
        [di](Complex z) {
          Complex q = 1.0 / (di + z);
          return q * q;
        },
        [di](Complex z) {
          Complex q = 1.0 / (di + z);
          return -2.0 * q * q * q;
        }));
  }
  auto tail = std::make_shared<GaussTail>();
  sys.alphabet.kind = AlphabetKind::CountableTruncated;
  sys.alphabet.count = i_max;
  sys.alphabet.weight_tail_bound = tail->weight_bound(i_max, domain);
  sys.alphabet.tail = tail;

  ValidationReport report = validate_system(sys, kGaussMargin);
  if (!report.images_contained) {
    throw Error(ErrorCode::InadmissibleDomain,
                fmt::format("branch images reach {:.6g}, allowed {:.6g}", report.image_sup,
                            report.allowed));
  }
  return sys;
}

std::vector<std::vector<Point>> boundary_circles(const BallDomain& D, int points_per_circle) {
  const int d = D.dim;
  std::vector<Point> directions;
  for (int k = 0; k < d; ++k) {
    Point u = Point::Zero(d);
    u(k) = 1.0;
    directions.push_back(u);
  }
  if (d >= 2) {
    std::mt19937_64 rng(0x5eedULL + static_cast<unsigned>(d));
    std::normal_distribution<double> normal;
    for (int k = 0; k < 8 * d; ++k) {
      Point u(d);
      for (int j = 0; j < d; ++j) u(j) = Complex(normal(rng), normal(rng));
      directions.push_back(u / u.norm());
    }
  }
  std::vector<std::vector<Point>> circles;
  circles.reserve(directions.size());
  for (const auto& u : directions) {
    std::vector<Point> circle;
    circle.reserve(static_cast<std::size_t>(points_per_circle));
    for (int j = 0; j < points_per_circle; ++j) {
      double theta = 2.0 * std::numbers::pi * j / points_per_circle;
      circle.push_back(D.center + D.radius * std::polar(1.0, theta) * u);
    }
    circles.push_back(std::move(circle));
  }
  return circles;
}

namespace {

struct BoundarySweep {
  double image_sup = 0.0;
  double image_safety = 0.0;
  double weight_sup = 0.0;
};

/// Sup over the sampled boundary of |T_i - center| (with a half-chord safety
/// term per branch) and of Σ_i |w_i|.
BoundarySweep sweep(const MapWeightSystem& sys, int grid) {
  const auto circles = boundary_circles(sys.domain, grid);
  const std::size_t nb = sys.branches.size();
  std::vector<double> branch_sup(nb, 0.0), branch_safety(nb, 0.0);
  std::vector<std::vector<double>> weight_sum(circles.size(), std::vector<double>(grid, 0.0));
  std::vector<std::vector<std::vector<double>>> per_branch_weights(nb);

  parallel_for(nb, [&](std::size_t i) {
    double sup = 0.0, safety = 0.0;
    std::vector<std::vector<double>> wabs(circles.size(), std::vector<double>(grid));
    for (std::size_t c = 0; c < circles.size(); ++c) {
      const auto& circle = circles[c];
      Point first = sys.branches[i](circle[0]);
      Point prev = first;
      for (int j = 0; j < grid; ++j) {
        Point img = j == 0 ? first : sys.branches[i](circle[j]);
        sup = std::max(sup, (img - sys.domain.center).norm());
        if (j > 0) safety = std::max(safety, 0.5 * (img - prev).norm());
        prev = img;
        wabs[c][j] = std::abs(sys.weights[i].value(circle[j]));
      }
      safety = std::max(safety, 0.5 * (first - prev).norm());
    }
    branch_sup[i] = sup;
    branch_safety[i] = safety;
    per_branch_weights[i] = std::move(wabs);
  });

  BoundarySweep out;
  for (std::size_t i = 0; i < nb; ++i) {
    if (branch_sup[i] + branch_safety[i] > out.image_sup + out.image_safety) {
      out.image_sup = branch_sup[i];
      out.image_safety = branch_safety[i];
    }
    for (std::size_t c = 0; c < circles.size(); ++c) {
      for (int j = 0; j < grid; ++j) weight_sum[c][j] += per_branch_weights[i][c][j];
    }
  }
  for (const auto& circle : weight_sum) {
    for (double v : circle) out.weight_sup = std::max(out.weight_sup, v);
  }
  return out;
}

}  // namespace

ValidationReport validate_system(const MapWeightSystem& sys, double margin, int grid) {
  if (!(margin > 0.0 && margin < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("margin {} outside (0,1)", margin));
  }
  if (grid < 8) throw Error(ErrorCode::InvalidArgument, "grid must have at least 8 points");

  constexpr double kRefineTol = 1e-10;
  constexpr int kMaxGrid = 1 << 16;

  BoundarySweep s = sweep(sys, grid);
  while (grid < kMaxGrid) {
    BoundarySweep finer = sweep(sys, 2 * grid);
    grid *= 2;
    bool settled = std::abs(finer.image_sup - s.image_sup) < kRefineTol &&
                   std::abs(finer.weight_sup - s.weight_sup) < kRefineTol;
    s = finer;
    if (settled) break;
  }

  ValidationReport r;
  r.margin = margin;
  r.grid = grid;
  r.allowed = (1.0 - margin) * sys.domain.radius;
  r.image_safety = s.image_safety;
  r.image_sup = s.image_sup + s.image_safety;
  r.weight_tail_bound = sys.alphabet.weight_tail_bound;
  if (sys.has_tail()) {
    double tail_sup = sys.alphabet.tail->image_sup(sys.alphabet.count, sys.domain,
                                                   sys.domain.center1());
    if (tail_sup > r.image_sup) {
      r.image_sup = tail_sup;
      r.image_safety = 0.0;
    }
  }
  r.W = s.weight_sup + r.weight_tail_bound;
  r.images_contained = r.image_sup <= r.allowed;
  if (!r.images_contained) {
    r.failures.push_back(fmt::format("branch images reach distance {:.17g} from the center, "
                                     "allowed {:.17g}",
                                     r.image_sup, r.allowed));
  }
  if (!std::isfinite(r.W)) r.failures.push_back("weight sum is not finite on the boundary");
  return r;
}

}  // namespace ruelle
