#include "ruelle/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>

namespace ruelle {

namespace {

constexpr double kTwo53 = 9007199254740992.0;
constexpr int kExactFactorialMax = 20;

/// C(n, k) clamped to `cap` to stay inside 64 bits.
std::uint64_t binomial_capped(int n, int k, std::uint64_t cap) {
  k = std::min(k, n - k);
  if (k < 0) return 0;
  std::uint64_t result = 1;
  for (int j = 1; j <= k; ++j) {
    // result * (n-k+j) / j stays integral at every step.
    const auto factor = static_cast<std::uint64_t>(n - k + j);
    if (result > std::numeric_limits<std::uint64_t>::max() / factor) return cap;
    result = result * factor / static_cast<std::uint64_t>(j);
    if (result > cap) return cap;
  }
  return result;
}

/// Exponent (d/(d+1)) (d!)^{1/d} n^{1/d} shared by the stretched-exponential
/// bounds.
double stretched_exponent(int d, double n) {
  return double(d) / (d + 1) * factorial_root(d) * std::pow(n, 1.0 / d);
}

double log_general(const BoundProfile& p, double n) {
  return std::log(p.W) - p.d * std::log(p.r) + 0.5 * std::log(n) +
         stretched_exponent(p.d, n) * std::log(p.r);
}

double log_hardy(const BoundProfile& p, double n) {
  const int d = p.d;
  return std::log(p.W) + 0.5 * std::log(double(d)) - d * std::log(p.r) -
         0.5 * d * std::log1p(-p.r * p.r) + double(d - 1) / (2.0 * d) * std::log(n) +
         stretched_exponent(d, n) * std::log(p.r);
}

double log_d1(const BoundProfile& p, double n) {
  return std::log(p.W) + 0.5 * std::log(n) + 0.5 * (n - 1.0) * std::log(p.r);
}

void check_n(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "bound index must be at least 1");
}

/// Largest n ≥ 0 with pred(n) true, starting from an estimate and correcting
/// by direct evaluation. pred must hold on an initial segment of n ≥ 1.
template <class Pred>
double settle_index(double estimate, Pred pred) {
  double n = std::floor(estimate);
  if (n >= kTwo53) return n;
  n = std::max(n, 0.0);
  while (n >= 1.0 && !pred(n)) n -= 1.0;
  while (pred(n + 1.0)) n += 1.0;
  return n;
}

}  // namespace

BoundProfile make_profile(double W, double r, int d) {
  if (!(W > 0.0) || !std::isfinite(W)) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("W must be positive, got {}", W));
  }
  if (!(r > 0.0 && r < 1.0)) throw Error(ErrorCode::InvalidArgument, fmt::format("r = {} outside (0,1)", r));
  if (d < 1) throw Error(ErrorCode::InvalidArgument, fmt::format("dimension {} below 1", d));
  return {W, r, d};
}

std::vector<int> t_sequence(int d, int n) {
  if (d < 1 || n < 1) throw Error(ErrorCode::InvalidArgument, "t_sequence needs d ≥ 1 and n ≥ 1");
  std::vector<int> t;
  t.reserve(static_cast<std::size_t>(n));
  const auto cap = static_cast<std::uint64_t>(n);
  for (int k = 0; static_cast<int>(t.size()) < n; ++k) {
    // Monomials of total degree k in d variables.
    std::uint64_t run = binomial_capped(k + d - 1, d - 1, cap);
    for (std::uint64_t j = 0; j < run && static_cast<int>(t.size()) < n; ++j) t.push_back(k);
  }
  return t;
}

double factorial_root(int d) {
  if (d <= kExactFactorialMax) {
    std::uint64_t f = 1;
    for (int k = 2; k <= d; ++k) f *= static_cast<std::uint64_t>(k);
    return std::pow(static_cast<double>(f), 1.0 / d);
  }
  return std::exp(std::lgamma(d + 1.0) / d);
}

std::string factorial_root_note(int d) {
  if (d <= kExactFactorialMax) return "exact integer factorial";
  return "log-gamma approximation of d!, relative error near machine precision";
}

double weyl_product_bound(const BoundProfile& p, int n) {
  check_n(n);
  auto t = t_sequence(p.d, n);
  double sum = 0.0;
  for (int v : t) sum += v;
  return p.W * std::sqrt(double(n)) * std::pow(p.r, sum / n);
}

double bound_d1(const BoundProfile& p, int n) {
  check_n(n);
  if (p.d != 1) throw Error(ErrorCode::WrongDimension, "the d = 1 bound needs d = 1");
  return std::exp(log_d1(p, n));
}

double bound_general(const BoundProfile& p, int n) {
  check_n(n);
  return std::exp(log_general(p, n));
}

double bound_hardy(const BoundProfile& p, int n) {
  check_n(n);
  return std::exp(log_hardy(p, n));
}

double bound_combined(const BoundProfile& p, int n) {
  return std::min(bound_general(p, n), bound_hardy(p, n));
}

CrossoverIndex crossover_N(double r, int d) {
  BoundProfile p = make_profile(1.0, r, d);
  // general ≤ hardy ⟺ n^{1/(2d)} ≤ √d (1-r²)^{-d/2} ⟺ n ≤ d^d (1-r²)^{-d²}.
  const double log_x = d * std::log(double(d)) - double(d) * d * std::log1p(-r * r);
  const double x = std::exp(log_x);
  CrossoverIndex out;
  out.index = settle_index(x, [&](double n) { return log_general(p, n) <= log_hardy(p, n); });
  out.exact = out.index < kTwo53;
  return out;
}

CrossoverReport crossover_report(double r, int d) {
  CrossoverReport rep;
  rep.r = r;
  rep.d = d;
  rep.crossover = crossover_N(r, d);
  const double x = 1.0 / (1.0 - r * r);
  rep.squared_threshold = settle_index(std::sqrt(x), [&](double n) { return n * n < x; });
  if (d == 1) {
    BoundProfile p = make_profile(1.0, r, 1);
    rep.d1_vs_hardy = settle_index(1.0 / (r * (1.0 - r * r)),
                                   [&](double n) { return log_d1(p, n) <= log_hardy(p, n); });
  } else {
    rep.d1_vs_hardy = std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

JsonValue to_json(const CrossoverReport& report) {
  JsonValue j = JsonValue::object();
  j.set("r", report.r)
      .set("d", report.d)
      .set("crossover_N", report.crossover.index)
      .set("crossover_exact", report.crossover.exact)
      .set("n_squared_threshold", report.squared_threshold)
      .set("d1_vs_hardy_threshold",
           std::isfinite(report.d1_vs_hardy) ? JsonValue(report.d1_vs_hardy) : JsonValue())
      .set("factorial_root", factorial_root_note(report.d));
  return j;
}

namespace {

BoundRow bound_row(const BoundProfile& p, int n) {
  BoundRow row;
  row.n = n;
  row.d1 = p.d == 1 ? bound_d1(p, n) : std::numeric_limits<double>::quiet_NaN();
  row.general = bound_general(p, n);
  row.hardy = bound_hardy(p, n);
  row.combined = std::min(row.general, row.hardy);
  return row;
}

}  // namespace

VerificationReport verify_bounds(const EigenvalueSequence& eigs, const BoundProfile& p,
                                 int weyl_max) {
  VerificationReport rep;
  const int count = std::min<int>(eigs.reliable_count, static_cast<int>(eigs.values.size()));
  for (int n = 1; n <= count; ++n) {
    BoundRow row = bound_row(p, n);
    row.has_lambda = true;
    row.abs_lambda = std::abs(eigs.values[n - 1]);
    row.pass = row.abs_lambda <= row.combined;
    rep.all_pass = rep.all_pass && row.pass;
    rep.rows.push_back(row);
  }
  double log_product = 0.0;
  double t_sum = 0.0;
  const auto t = t_sequence(p.d, std::max(1, std::min(count, weyl_max)));
  for (int n = 1; n <= std::min(count, weyl_max); ++n) {
    log_product += std::log(std::abs(eigs.values[n - 1]));
    t_sum += t[n - 1];
    double log_bound = 0.5 * n * std::log(double(n)) + n * std::log(p.W) + t_sum * std::log(p.r);
    bool ok = log_product <= log_bound;
    rep.weyl_orders.push_back(n);
    rep.weyl_pass.push_back(ok);
    rep.all_pass = rep.all_pass && ok;
  }
  return rep;
}

VerificationReport bound_table(const BoundProfile& p, int n_max) {
  VerificationReport rep;
  for (int n = 1; n <= n_max; ++n) rep.rows.push_back(bound_row(p, n));
  return rep;
}

void write_bounds_csv(std::ostream& os, const VerificationReport& report) {
  os << "n,abs_lambda,bound_d1,bound_general,bound_hardy,bound_combined,pass\n";
  auto num = [](double x) { return std::isfinite(x) ? format_double(x) : std::string(); };
  for (const auto& row : report.rows) {
    os << row.n << ',' << (row.has_lambda ? num(row.abs_lambda) : "") << ',' << num(row.d1) << ','
       << num(row.general) << ',' << num(row.hardy) << ',' << num(row.combined) << ','
       << (row.has_lambda ? (row.pass ? "true" : "false") : "") << '\n';
  }
}

}  // namespace ruelle
