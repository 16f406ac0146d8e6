#include "ruelle/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <fmt/format.h>

#include "ruelle/parallel.hpp"

namespace ruelle {

namespace {

void check_word(const MapWeightSystem& sys, const Word& word) {
  if (word.empty()) throw Error(ErrorCode::BadIndex, "empty word");
  for (int letter : word) {
    if (letter < 1 || letter > sys.size()) {
      throw Error(ErrorCode::BadIndex,
                  fmt::format("letter {} outside 1..{}", letter, sys.size()));
    }
  }
}

bool scalar_system(const MapWeightSystem& sys) { return sys.dim() == 1; }

double spectral_radius(const Jacobian& J) {
  if (J.rows() == 1) return std::abs(J(0, 0));
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(Eigen::MatrixXcd(J), false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double operator_norm(const Jacobian& J) {
  if (J.rows() == 1) return std::abs(J(0, 0));
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd{Eigen::MatrixXcd(J)};
  return svd.singularValues()(0);
}

struct WordValue {
  Point image;
  Jacobian jacobian;
  Complex weight;
};

WordValue evaluate_word(const MapWeightSystem& sys, const Word& word, const Point& z) {
  const int d = sys.dim();
  WordValue out;
  out.weight = 1.0;
  if (d == 1) {
    Complex x = z(0), dx = 1.0;
    for (int letter : word) {
      const auto& T = sys.branches[letter - 1];
      out.weight *= sys.weights[letter - 1](x);
      dx *= T.derivative(x);
      x = T(x);
    }
    out.image = point1(x);
    out.jacobian = Jacobian::Constant(1, 1, dx);
    return out;
  }
  Point x = z;
  Jacobian J = Jacobian::Identity(d, d);
  for (int letter : word) {
    const auto& T = sys.branches[letter - 1];
    out.weight *= sys.weights[letter - 1].value(x);
    J = (T.jacobian(x) * J).eval();
    x = T(x);
  }
  out.image = x;
  out.jacobian = J;
  return out;
}

/// Shared fixed-point iteration; eval maps a point, jac gives the Jacobian.
template <class Eval, class Jac>
FixedPointResult iterate_fixed_point(Eval&& eval, Jac&& jac, const BallDomain& domain, double tol,
                                     int max_iter) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  constexpr double kQCap = 0.999;
  const double eps = std::numeric_limits<double>::epsilon();

  Point z = domain.center;
  double q = kQCap;
  double prev_step = -1.0;
  for (int k = 1; k <= max_iter; ++k) {
    Point z1 = eval(z);
    if (!z1.allFinite() || !domain.contains(z1, 1e-12)) {
      throw Error(ErrorCode::EscapedDomain,
                  fmt::format("iterate {} left the domain", k));
    }
    double step = (z1 - z).norm();
    double noise = 8.0 * eps * std::max(1.0, z1.norm());
    if (prev_step > noise && step > noise) q = std::min(kQCap, step / prev_step);
    z = z1;
    bool small = step * q / (1.0 - q) <= tol || step <= noise;
    if (small) {
      Point z2 = eval(z);
      double residual = (z2 - z).norm();
      if (residual <= tol) {
        if (spectral_radius(jac(z)) >= 1.0) {
          throw Error(ErrorCode::NoConvergence, "limit point is not attracting");
        }
        return {z, residual, k, q};
      }
    }
    prev_step = step;
  }
  throw Error(ErrorCode::NoConvergence, fmt::format("no convergence within {} iterations", max_iter));
}

}  // namespace

AnalyticMap compose(const MapWeightSystem& sys, const Word& word) {
  check_word(sys, word);
  std::vector<AnalyticMap> maps;
  for (int letter : word) maps.push_back(sys.branches[letter - 1]);
  if (sys.dim() == 1) {
    return AnalyticMap::scalar(
        [maps](Complex z) {
          for (const auto& T : maps) z = T(z);
          return z;
        },
        [maps](Complex z) {
          Complex d = 1.0;
          for (const auto& T : maps) {
            d *= T.derivative(z);
            z = T(z);
          }
          return d;
        });
  }
  const int dim = sys.dim();
  return AnalyticMap(
      dim, dim,
      [maps](const Point& z) {
        Point x = z;
        for (const auto& T : maps) x = T(x);
        return x;
      },
      [maps, dim](const Point& z) {
        Point x = z;
        Jacobian J = Jacobian::Identity(dim, dim);
        for (const auto& T : maps) {
          J = (T.jacobian(x) * J).eval();
          x = T(x);
        }
        return J;
      });
}

AnalyticMap word_weight(const MapWeightSystem& sys, const Word& word) {
  check_word(sys, word);
  std::vector<AnalyticMap> maps, weights;
  for (int letter : word) {
    maps.push_back(sys.branches[letter - 1]);
    weights.push_back(sys.weights[letter - 1]);
  }
  if (sys.dim() == 1) {
    // Product rule carried alongside the orbit: (w, w') and (x, x').
    return AnalyticMap::scalar(
        [maps, weights](Complex z) {
          Complex w = 1.0;
          for (std::size_t k = 0; k < maps.size(); ++k) {
            w *= weights[k](z);
            z = maps[k](z);
          }
          return w;
        },
        [maps, weights](Complex z) {
          Complex w = 1.0, dw = 0.0, dz = 1.0;
          for (std::size_t k = 0; k < maps.size(); ++k) {
            Complex wk = weights[k](z);
            Complex dwk = weights[k].derivative(z) * dz;
            dw = dw * wk + w * dwk;
            w *= wk;
            dz *= maps[k].derivative(z);
            z = maps[k](z);
          }
          return dw;
        });
  }
  const int dim = sys.dim();
  return AnalyticMap(
      dim, 1,
      [maps, weights](const Point& z) {
        Point x = z;
        Complex w = 1.0;
        for (std::size_t k = 0; k < maps.size(); ++k) {
          w *= weights[k].value(x);
          x = maps[k](x);
        }
        return point1(w);
      },
      [maps, weights, dim](const Point& z) {
        Point x = z;
        Complex w = 1.0;
        Jacobian dw = Jacobian::Zero(1, dim);
        Jacobian J = Jacobian::Identity(dim, dim);
        for (std::size_t k = 0; k < maps.size(); ++k) {
          Complex wk = weights[k].value(x);
          Jacobian dwk = (weights[k].jacobian(x) * J).eval();
          dw = (dw * wk + w * dwk).eval();
          w *= wk;
          J = (maps[k].jacobian(x) * J).eval();
          x = maps[k](x);
        }
        return dw;
      });
}

FixedPointResult fixed_point(const AnalyticMap& map, const BallDomain& domain, double tol,
                             int max_iter) {
  if (map.dim_in() != domain.dim || map.dim_out() != domain.dim) {
    throw Error(ErrorCode::InvalidArgument, "map dimension does not match the domain");
  }
  return iterate_fixed_point([&](const Point& z) { return map(z); },
                             [&](const Point& z) { return map.jacobian(z); }, domain, tol,
                             max_iter);
}

OrbitData word_orbit(const MapWeightSystem& sys, const Word& word, double tol, int max_iter) {
  check_word(sys, word);
  OrbitData out;
  if (scalar_system(sys)) {
    auto eval = [&](const Point& z) {
      Complex x = z(0);
      for (int letter : word) x = sys.branches[letter - 1](x);
      return point1(x);
    };
    auto jac = [&](const Point& z) { return evaluate_word(sys, word, z).jacobian; };
    out.fixed = iterate_fixed_point(eval, jac, sys.domain, tol, max_iter);
  } else {
    auto eval = [&](const Point& z) { return evaluate_word(sys, word, z).image; };
    auto jac = [&](const Point& z) { return evaluate_word(sys, word, z).jacobian; };
    out.fixed = iterate_fixed_point(eval, jac, sys.domain, tol, max_iter);
  }
  WordValue v = evaluate_word(sys, word, out.fixed.point);
  out.weight = v.weight;
  const int d = sys.dim();
  if (d == 1) {
    out.det_one_minus_jacobian = 1.0 - v.jacobian(0, 0);
  } else {
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(d, d) - Eigen::MatrixXcd(v.jacobian);
    out.det_one_minus_jacobian = A.determinant();
  }
  return out;
}

std::uint64_t word_count(int letters, int n, std::uint64_t cap) {
  std::uint64_t count = 1;
  for (int k = 0; k < n; ++k) {
    if (count > cap / static_cast<std::uint64_t>(std::max(letters, 1))) return cap + 1;
    count *= static_cast<std::uint64_t>(letters);
  }
  return count;
}

bool next_word(Word& word, int letters) {
  for (int k = static_cast<int>(word.size()) - 1; k >= 0; --k) {
    if (word[k] < letters) {
      ++word[k];
      for (std::size_t j = static_cast<std::size_t>(k) + 1; j < word.size(); ++j) word[j] = 1;
      return true;
    }
  }
  return false;
}

namespace {

struct ContractionCandidate {
  double value = -1.0;
  double safety = 0.0;
  Word word;
  Point point;
};

/// Depth-first sweep of all words starting with `first`, carrying images and
/// derivative products of the prefix along every boundary circle.
ContractionCandidate sweep_words(const MapWeightSystem& sys, int n, int first,
                                 const std::vector<std::vector<Point>>& circles) {
  const int letters = sys.size();
  const int d = sys.dim();
  ContractionCandidate best;
  Word word(static_cast<std::size_t>(n), 1);
  word[0] = first;

  // images[k][c][j], jacs[k][c][j]: state after the first k+1 letters.
  std::vector<std::vector<std::vector<Point>>> images(static_cast<std::size_t>(n));
  std::vector<std::vector<std::vector<Jacobian>>> jacs(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    images[k].resize(circles.size());
    jacs[k].resize(circles.size());
    for (std::size_t c = 0; c < circles.size(); ++c) {
      images[k][c].resize(circles[c].size());
      jacs[k][c].resize(circles[c].size());
    }
  }
  auto advance = [&](int level) {
    const auto& T = sys.branches[word[level] - 1];
    for (std::size_t c = 0; c < circles.size(); ++c) {
      for (std::size_t j = 0; j < circles[c].size(); ++j) {
        const Point& x = level == 0 ? circles[c][j] : images[level - 1][c][j];
        if (d == 1) {
          Complex dz = T.derivative(x(0));
          Complex prev = level == 0 ? Complex(1.0) : jacs[level - 1][c][j](0, 0);
          jacs[level][c][j] = Jacobian::Constant(1, 1, dz * prev);
          if (level + 1 < n) images[level][c][j] = point1(T(x(0)));
        } else {
          Jacobian Jx = T.jacobian(x);
          jacs[level][c][j] = level == 0 ? Jx : (Jx * jacs[level - 1][c][j]).eval();
          if (level + 1 < n) images[level][c][j] = T(x);
        }
      }
    }
  };
  auto score = [&]() {
    const auto& J = jacs[n - 1];
    for (std::size_t c = 0; c < circles.size(); ++c) {
      const std::size_t m = circles[c].size();
      double first_norm = operator_norm(J[c][0]);
      double prev = first_norm;
      double step = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        double v = j == 0 ? first_norm : operator_norm(J[c][j]);
        if (j > 0) step = std::max(step, std::abs(v - prev));
        prev = v;
        if (v > best.value) {
          best.value = v;
          best.word = word;
          best.point = circles[c][j];
        }
      }
      step = std::max(step, std::abs(first_norm - prev));
      best.safety = std::max(best.safety, 0.5 * step);
    }
  };

  for (int k = 0; k < n; ++k) advance(k);
  score();
  // Lexicographic increment of positions 1..n-1, recomputing only the
  // changed suffix.
  while (true) {
    int k = n - 1;
    while (k >= 1 && word[k] == letters) --k;
    if (k < 1) break;
    ++word[k];
    for (int j = k + 1; j < n; ++j) word[j] = 1;
    for (int j = k; j < n; ++j) advance(j);
    score();
  }
  return best;
}

}  // namespace

ContractionResult contraction_factor(const MapWeightSystem& sys, int n, int grid,
                                     std::uint64_t budget) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "word length must be at least 1");
  if (grid < 8) throw Error(ErrorCode::InvalidArgument, "grid must have at least 8 points");
  const int letters = sys.size();
  std::uint64_t total = word_count(letters, n, budget);
  if (total > budget) {
    throw Error(ErrorCode::BudgetExceeded,
                fmt::format("{}^{} words exceed the budget of {}", letters, n, budget));
  }
  const auto circles = boundary_circles(sys.domain, grid);
  std::vector<ContractionCandidate> per_first(static_cast<std::size_t>(letters));
  parallel_for(per_first.size(), [&](std::size_t i) {
    per_first[i] = sweep_words(sys, n, static_cast<int>(i) + 1, circles);
  });
  ContractionResult out;
  out.words = total;
  out.value = -1.0;
  for (const auto& cand : per_first) {
    if (cand.value > out.value) {
      out.value = cand.value;
      out.word = cand.word;
      out.point = cand.point;
    }
    out.safety = std::max(out.safety, cand.safety);
  }
  return out;
}

AdaptedMetric::AdaptedMetric(const MapWeightSystem& sys, int n, int grid, std::uint64_t budget)
    : sys_(&sys), n_(n) {
  ContractionResult c = contraction_factor(sys, n, grid, budget);
  gamma_ = c.upper();
  if (!(gamma_ < 1.0)) {
    throw Error(ErrorCode::NotContracting,
                fmt::format("contraction factor {:.6g} at n = {} is not below 1", gamma_, n));
  }
  beta_ = std::pow(gamma_, 1.0 / n);
  if (word_count(sys.size(), n - 1, budget) > budget) {
    throw Error(ErrorCode::BudgetExceeded, "adapted metric word sup exceeds the budget");
  }
}

double AdaptedMetric::distance(const Point& x, const Point& y) const {
  const int m = n_ - 1;
  double base = std::pow(beta_, m) * (x - y).norm();
  if (m == 0) return base;
  const int letters = sys_->size();
  const int d = sys_->dim();
  double best = 0.0;
  Word word(static_cast<std::size_t>(m), 1);
  do {
    double sum = base;
    Point a = x, b = y;
    for (int k = 1; k <= m; ++k) {
      const auto& T = sys_->branches[word[k - 1] - 1];
      if (d == 1) {
        a = point1(T(a(0)));
        b = point1(T(b(0)));
      } else {
        a = T(a);
        b = T(b);
      }
      sum += std::pow(beta_, m - k) * (a - b).norm();
    }
    best = std::max(best, sum);
  } while (next_word(word, letters));
  return best;
}

double adapted_distance(const MapWeightSystem& sys, int n, const Point& x, const Point& y) {
  return AdaptedMetric(sys, n).distance(x, y);
}

EnclosingResult enclosing_radius(const MapWeightSystem& sys, int grid) {
  const auto circles = boundary_circles(sys.domain, grid);
  const std::size_t nb = sys.branches.size();
  std::vector<double> sup(nb, 0.0), safety(nb, 0.0);
  parallel_for(nb, [&](std::size_t i) {
    const auto& T = sys.branches[i];
    for (const auto& circle : circles) {
      Point first = T(circle[0]);
      Point prev = first;
      for (std::size_t j = 0; j < circle.size(); ++j) {
        Point img = j == 0 ? first : T(circle[j]);
        sup[i] = std::max(sup[i], (img - sys.domain.center).norm());
        if (j > 0) safety[i] = std::max(safety[i], 0.5 * (img - prev).norm());
        prev = img;
      }
      safety[i] = std::max(safety[i], 0.5 * (first - prev).norm());
    }
  });
  EnclosingResult out;
  double best = 0.0, best_safety = 0.0;
  for (std::size_t i = 0; i < nb; ++i) {
    if (sup[i] > best) best = sup[i];
    best_safety = std::max(best_safety, safety[i]);
  }
  if (sys.has_tail()) {
    best = std::max(best, sys.alphabet.tail->image_sup(sys.alphabet.count, sys.domain,
                                                       sys.domain.center1()));
  }
  out.r = best / sys.domain.radius;
  out.safety = best_safety / sys.domain.radius;
  if (!(out.r < 1.0)) {
    throw Error(ErrorCode::NotEnclosed, fmt::format("enclosing ratio {:.17g} is not below 1", out.r));
  }
  return out;
}

}  // namespace ruelle
