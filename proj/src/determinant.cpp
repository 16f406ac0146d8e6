#include "ruelle/determinant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "ruelle/parallel.hpp"
#include "ruelle/roots.hpp"

namespace ruelle {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

Word word_at(std::uint64_t index, int letters, int n) {
  Word w(static_cast<std::size_t>(n));
  for (int k = n - 1; k >= 0; --k) {
    w[k] = static_cast<int>(index % static_cast<std::uint64_t>(letters)) + 1;
    index /= static_cast<std::uint64_t>(letters);
  }
  return w;
}

void check_budget(int letters, int n, std::uint64_t budget) {
  if (word_count(letters, n, budget) > budget) {
    throw Error(ErrorCode::BudgetExceeded,
                fmt::format("{}^{} words exceed the budget of {}", letters, n, budget));
  }
}

/// Lexicographic periodic-orbit sum over words of length n on letters
/// 1..letters. abs_total receives Σ|term| for rounding estimates.
Complex orbit_sum(const MapWeightSystem& sys, int letters, int n, const TraceOptions& opts,
                  double& abs_total) {
  const std::uint64_t count = word_count(letters, n, opts.word_budget);
  return ordered_sum(
      count,
      [&](std::size_t idx) {
        OrbitData o = word_orbit(sys, word_at(idx, letters, n), opts.fixed_point_tol);
        return o.weight / o.det_one_minus_jacobian;
      },
      &abs_total);
}

/// Tail-containing part of the traces through a finite-rank model of the tail
/// operator R f = Σ_m δ_m(f) H_m, δ_m the Taylor coefficient at the
/// accumulation point. With B_a[m][m'] = δ_m(E^a H_{m'}) and E the explicit
/// part, every cyclic word containing a tail letter contributes a product of
/// B blocks, giving Σ_a (a+1) tr(G_{n-a-1} B_a) with G_k = Σ_a G_{k-a-1} B_a.
class TailTraceModel {
 public:
  TailTraceModel(const MapWeightSystem& sys, int K, int M, const TraceOptions& opts)
      : P_(opts.tail_rank) {
    const TailModel& tail = *sys.alphabet.tail;
    const int Q = opts.tail_points;
    const double rho0 = tail.expansion_radius(K);
    const Complex p = tail.accumulation_point();
    std::vector<Complex> y(static_cast<std::size_t>(Q));
    for (int j = 0; j < Q; ++j) y[j] = p + rho0 * std::polar(1.0, 2.0 * std::numbers::pi * j / Q);

    Eigen::MatrixXcd F(P_, Q);
    for (int m = 0; m < P_; ++m) {
      double scale = std::pow(rho0, m) * Q;
      for (int j = 0; j < Q; ++j) {
        F(m, j) = std::polar(1.0, -2.0 * std::numbers::pi * double((static_cast<long>(j) * m) % Q) / Q) /
                  scale;
      }
    }

    B_.reserve(static_cast<std::size_t>(M));
    for (int a = 0; a < M; ++a) {
      const std::uint64_t words = word_count(K, a, opts.word_budget);
      Eigen::MatrixXcd G(Q, P_);
      parallel_for(static_cast<std::size_t>(Q), [&](std::size_t j) {
        std::vector<CompensatedSum> acc(static_cast<std::size_t>(P_));
        std::vector<Complex> h(static_cast<std::size_t>(P_));
        for (std::uint64_t idx = 0; idx < words; ++idx) {
          Complex z = y[j], w = 1.0;
          if (a > 0) {
            for (int letter : word_at(idx, K, a)) {
              w *= sys.weights[letter - 1](z);
              z = sys.branches[letter - 1](z);
            }
          }
          tail.kernels(K, z, h);
          for (int m = 0; m < P_; ++m) acc[m].add(w * h[m]);
        }
        for (int m = 0; m < P_; ++m) G(static_cast<Eigen::Index>(j), m) = acc[m].value();
      });
      B_.push_back(F * G);
    }
  }

  /// Tail-part traces for orders 1..M using the leading rank×rank block.
  std::vector<Complex> traces(int rank, int M) const {
    std::vector<Eigen::MatrixXcd> G;
    G.push_back(Eigen::MatrixXcd::Identity(rank, rank));
    std::vector<Complex> out;
    for (int n = 1; n <= M; ++n) {
      Eigen::MatrixXcd next = Eigen::MatrixXcd::Zero(rank, rank);
      Complex t = 0.0;
      for (int a = 0; a < n; ++a) {
        Eigen::MatrixXcd prod = G[static_cast<std::size_t>(n - a - 1)] * B_[a].topLeftCorner(rank, rank);
        next += prod;
        t += double(a + 1) * prod.trace();
      }
      G.push_back(std::move(next));
      out.push_back(t);
    }
    return out;
  }

  int rank() const { return P_; }

 private:
  int P_;
  std::vector<Eigen::MatrixXcd> B_;
};

}  // namespace

TraceTable make_trace_table(std::vector<Complex> values, std::vector<double> bounds) {
  TraceTable t;
  const std::size_t M = values.size();
  for (std::size_t n = 1; n <= M; ++n) t.orders.push_back(static_cast<int>(n));
  t.values = std::move(values);
  t.truncation_bounds = bounds.empty() ? std::vector<double>(M, 0.0) : std::move(bounds);
  if (t.truncation_bounds.size() != M) {
    throw Error(ErrorCode::InvalidArgument, "trace values and bounds differ in length");
  }
  t.words.assign(M, 0);
  return t;
}

TraceTable compute_traces(const MapWeightSystem& sys, int M, const TraceOptions& opts) {
  if (M < 1) throw Error(ErrorCode::InvalidArgument, "trace order must be at least 1");
  const bool analytic =
      opts.tail != TailTreatment::Truncate && sys.has_tail();
  if (opts.tail == TailTreatment::Analytic && !sys.has_tail()) {
    throw Error(ErrorCode::InvalidArgument, "system has no analytic tail model");
  }

  TraceTable table;
  table.tail_analytic = analytic;
  const int letters = analytic ? std::clamp(opts.split, 1, sys.size()) : sys.size();
  table.explicit_letters = letters;
  for (int n = 1; n <= M; ++n) check_budget(letters, n, opts.word_budget);

  // Non-rigorous estimate for dropped branches in truncate mode:
  // n · tail · W^{n-1} / (1 - r)^d.
  double tail_W = 0.0, tail_r = 0.0;
  const double dropped = analytic ? 0.0 : sys.alphabet.weight_tail_bound;
  if (dropped > 0.0) {
    tail_W = validate_system(sys, 0.5).W;
    tail_r = enclosing_radius(sys).r;
  }

  std::vector<Complex> tail_full, tail_reduced;
  if (analytic) {
    TailTraceModel model(sys, letters, M, opts);
    tail_full = model.traces(model.rank(), M);
    tail_reduced = model.traces(std::max(1, 3 * model.rank() / 4), M);
  }

  for (int n = 1; n <= M; ++n) {
    double abs_total = 0.0;
    Complex value = orbit_sum(sys, letters, n, opts, abs_total);
    double bound = 8.0 * kEps * abs_total;
    if (analytic) {
      value += tail_full[n - 1];
      bound += std::abs(tail_full[n - 1] - tail_reduced[n - 1]) +
               8.0 * kEps * std::abs(tail_full[n - 1]);
    } else if (dropped > 0.0) {
      bound += n * dropped * std::pow(tail_W, n - 1) / std::pow(1.0 - tail_r, sys.dim());
    }
    table.orders.push_back(n);
    table.values.push_back(value);
    table.truncation_bounds.push_back(bound);
    table.words.push_back(word_count(letters, n, opts.word_budget));
  }
  return table;
}

TraceValue trace(const MapWeightSystem& sys, int n, const TraceOptions& opts) {
  TraceTable t = compute_traces(sys, n, opts);
  return {t.values.back(), t.truncation_bounds.back()};
}

DeterminantSeries determinant_coefficients(const TraceTable& traces) {
  const int M = static_cast<int>(traces.values.size());
  const auto& t = traces.values;
  const auto& b = traces.truncation_bounds;
  DeterminantSeries s;
  s.coefficients.assign(static_cast<std::size_t>(M + 1), 0.0);
  s.errors.assign(static_cast<std::size_t>(M + 1), 0.0);
  s.coefficients[0] = 1.0;
  for (int m = 1; m <= M; ++m) {
    CompensatedSum acc;
    double err = 0.0, magnitude = 0.0;
    for (int k = 1; k <= m; ++k) {
      acc.add(t[k - 1] * s.coefficients[m - k]);
      err += std::abs(t[k - 1]) * s.errors[m - k] + b[k - 1] * std::abs(s.coefficients[m - k]);
      magnitude += std::abs(t[k - 1]) * std::abs(s.coefficients[m - k]);
    }
    s.coefficients[m] = -acc.value() / double(m);
    s.errors[m] = (err + 2.0 * m * kEps * magnitude) / m;
  }

  const double last = M > 0 ? std::abs(s.coefficients[M]) : 0.0;
  auto excess = [&](double R) {
    double total = 0.0, power = 1.0;
    for (int m = 1; m <= M; ++m) {
      power *= R;
      total += s.errors[m] * power;
    }
    return total + last * power;
  };
  constexpr double kThreshold = 1e-6;
  bool unbounded = last == 0.0 && std::all_of(s.errors.begin(), s.errors.end(),
                                              [](double e) { return e == 0.0; });
  if (unbounded || M == 0) {
    s.trust_radius = std::numeric_limits<double>::infinity();
    return s;
  }
  // Bisection on log R; excess is increasing in R.
  double lo = -300.0, hi = 300.0;
  if (excess(std::exp(hi)) < kThreshold) {
    s.trust_radius = std::numeric_limits<double>::infinity();
    return s;
  }
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (excess(std::exp(mid)) < kThreshold) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  s.trust_radius = std::exp(lo);
  return s;
}

EigenvalueSequence determinant_zeros(const DeterminantSeries& series, int count) {
  std::vector<Complex> roots = polynomial_roots(series.coefficients);
  EigenvalueSequence out;
  out.method = SpectrumMethod::Determinant;
  for (Complex z : roots) {
    if (z != Complex(0.0) && std::abs(z) < series.trust_radius) out.values.push_back(1.0 / z);
  }
  sort_spectrum(out.values);
  if (count >= 0 && static_cast<int>(out.values.size()) > count) {
    out.values.resize(static_cast<std::size_t>(count));
  }
  out.reliable_count = static_cast<int>(out.values.size());
  return out;
}

JsonValue determinant_json(const TraceTable& traces, const DeterminantSeries& series) {
  std::vector<double> tre, tim, cre, cim;
  for (Complex t : traces.values) {
    tre.push_back(t.real());
    tim.push_back(t.imag());
  }
  for (Complex c : series.coefficients) {
    cre.push_back(c.real());
    cim.push_back(c.imag());
  }
  JsonValue::Array orders;
  for (int n : traces.orders) orders.emplace_back(n);
  JsonValue::Array words;
  for (auto w : traces.words) words.emplace_back(w);
  JsonValue j = JsonValue::object();
  j.set("orders", JsonValue(std::move(orders)))
      .set("traces_re", JsonValue::numbers(tre))
      .set("traces_im", JsonValue::numbers(tim))
      .set("coeffs_re", JsonValue::numbers(cre))
      .set("coeffs_im", JsonValue::numbers(cim))
      .set("trust_radius", std::isfinite(series.trust_radius) ? JsonValue(series.trust_radius)
                                                              : JsonValue())
      .set("truncation_bounds", JsonValue::numbers(traces.truncation_bounds))
      .set("coeff_errors", JsonValue::numbers(series.errors))
      .set("orbits_enumerated", JsonValue(std::move(words)))
      .set("tail", traces.tail_analytic ? "analytic" : "truncated")
      .set("explicit_letters", traces.explicit_letters);
  return j;
}

}  // namespace ruelle
