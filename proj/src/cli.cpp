#include "ruelle/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ruelle/bounds.hpp"
#include "ruelle/descriptor.hpp"
#include "ruelle/determinant.hpp"
#include "ruelle/dynamics.hpp"
#include "ruelle/output.hpp"
#include "ruelle/parallel.hpp"
#include "ruelle/spectra.hpp"

namespace ruelle {

namespace {

struct Options {
  std::string command;
  std::string config_path;
  std::optional<int> matrix_size;
  std::optional<int> trace_order;
  std::optional<std::uint64_t> word_budget;
  std::vector<double> crossover;
  std::vector<double> profile;
  std::string out_dir;
  int threads = 0;
  bool timestamp = false;
  bool matrix_csv = false;
};

/// Thrown for problems that map to the usage exit code.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError(fmt::format("cannot read config '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig load_config(const Options& o) {
  if (o.config_path.empty()) throw UsageError("--config is required for this command");
  RunConfig c = parse_run_config(read_file(o.config_path));
  if (o.matrix_size) c.matrix_size = *o.matrix_size;
  if (o.trace_order) c.trace_order = *o.trace_order;
  if (o.word_budget) c.word_budget = *o.word_budget;
  if (c.matrix_size < 2) throw Error(ErrorCode::ConfigError, "matrix_size must be at least 2");
  if (c.trace_order < 1) throw Error(ErrorCode::ConfigError, "trace_order must be at least 1");
  if (c.word_budget < 1) throw Error(ErrorCode::ConfigError, "word_budget must be at least 1");
  if (!(c.fixed_point_tol > 0.0) || !(c.agreement_tol > 0.0)) {
    throw Error(ErrorCode::ConfigError, "tolerances must be positive");
  }
  if (!(c.margin > 0.0 && c.margin < 1.0)) throw Error(ErrorCode::ConfigError, "margin must lie in (0,1)");
  if (c.contraction_order < 1) throw Error(ErrorCode::ConfigError, "contraction_order must be at least 1");
  if (c.grid < 8) throw Error(ErrorCode::ConfigError, "grid must be at least 8");
  return c;
}

/// Writes to stdout and, when an output directory is set, to
/// <dir>/<command>-<id>[-<timestamp>].<ext>.
void emit(const Options& o, const std::string& id, const std::string& ext, const std::string& text,
          std::ostream& out) {
  out << text;
  if (o.out_dir.empty()) return;
  std::filesystem::create_directories(o.out_dir);
  std::string name = fmt::format("{}-{}", o.command, id);
  if (o.timestamp) {
    auto now = std::chrono::system_clock::now().time_since_epoch();
    name += fmt::format("-{}", std::chrono::duration_cast<std::chrono::seconds>(now).count());
  }
  std::ofstream file(std::filesystem::path(o.out_dir) / (name + "." + ext), std::ios::binary);
  if (!file) throw UsageError(fmt::format("cannot write to '{}'", o.out_dir));
  file << text;
}

JsonValue complex_json(Complex z) { return JsonValue::numbers({z.real(), z.imag()}); }

JsonValue word_json(const Word& w) {
  JsonValue::Array a;
  for (int letter : w) a.emplace_back(letter);
  return JsonValue(std::move(a));
}

TraceOptions trace_options(const RunConfig& c) {
  TraceOptions t;
  t.word_budget = c.word_budget;
  t.fixed_point_tol = c.fixed_point_tol;
  t.tail = c.tail;
  t.split = c.split;
  return t;
}

int cmd_validate(const Options& o, std::ostream& out) {
  RunConfig c = load_config(o);
  MapWeightSystem sys = build_system(c);
  ValidationReport v = validate_system(sys, c.margin, c.grid);
  JsonValue j = JsonValue::object();
  j.set("system", sys.id).set("dim", sys.dim());
  j.set("images_contained", v.images_contained)
      .set("image_sup", v.image_sup)
      .set("image_safety", v.image_safety)
      .set("allowed", v.allowed)
      .set("margin", v.margin)
      .set("W", v.W)
      .set("weight_tail_bound", v.weight_tail_bound)
      .set("grid", v.grid)
      .set("sampled", v.sampled);

  JsonValue::Array failures;
  for (const auto& f : v.failures) failures.emplace_back(f);

  try {
    EnclosingResult e = enclosing_radius(sys, c.grid);
    j.set("enclosing_radius", e.r).set("enclosing_safety", e.safety);
  } catch (const Error& err) {
    j.set("enclosing_radius", JsonValue());
    failures.emplace_back(err.what());
  }

  bool contracting = false;
  try {
    ContractionResult cf = contraction_factor(sys, c.contraction_order, c.grid, c.word_budget);
    contracting = cf.upper() < 1.0;
    JsonValue cj = JsonValue::object();
    cj.set("order", c.contraction_order)
        .set("value", cf.value)
        .set("safety", cf.safety)
        .set("word", word_json(cf.word))
        .set("point", complex_json(cf.point(0)))
        .set("certified", contracting)
        .set("sampled", cf.sampled);
    j.set("contraction", std::move(cj));
    if (!contracting) {
      failures.emplace_back(fmt::format("not complex {}-contracting: factor {} plus safety {}",
                                        c.contraction_order, format_double(cf.value),
                                        format_double(cf.safety)));
    }
  } catch (const Error& err) {
    j.set("contraction", JsonValue());
    failures.emplace_back(err.what());
  }

  const bool ok = v.images_contained && contracting && failures.empty();
  j.set("validated", ok).set("failures", JsonValue(std::move(failures)));
  emit(o, sys.id, "json", j.dump(), out);
  return ok ? kExitOk : kExitFailure;
}

int cmd_spectrum(const Options& o, std::ostream& out) {
  RunConfig c = load_config(o);
  MapWeightSystem sys = build_system(c);
  EigenvalueSequence seq = spectral_sequence(sys, sys.domain, c.matrix_size, c.tail);
  std::string csv = "n,re,im,abs,reliable\n";
  for (std::size_t k = 0; k < seq.values.size(); ++k) {
    Complex v = seq.values[k];
    csv += fmt::format("{},{},{},{},{}\n", k + 1, format_double(v.real()), format_double(v.imag()),
                       format_double(std::abs(v)),
                       static_cast<int>(k) < seq.reliable_count ? "true" : "false");
  }
  emit(o, sys.id, "csv", csv, out);
  if (o.matrix_csv && !o.out_dir.empty()) {
    std::ostringstream m;
    write_matrix_csv(m, assemble_matrix(sys, sys.domain, c.matrix_size, c.tail));
    std::ofstream file(std::filesystem::path(o.out_dir) / fmt::format("matrix-{}.csv", sys.id),
                       std::ios::binary);
    file << m.str();
  }
  return kExitOk;
}

int cmd_determinant(const Options& o, std::ostream& out) {
  RunConfig c = load_config(o);
  MapWeightSystem sys = build_system(c);
  TraceTable traces = compute_traces(sys, c.trace_order, trace_options(c));
  DeterminantSeries series = determinant_coefficients(traces);
  EigenvalueSequence eig = determinant_zeros(series, c.trace_order);

  JsonValue j = determinant_json(traces, series);
  JsonValue::Array zeros, values;
  for (Complex lambda : eig.values) {
    zeros.push_back(complex_json(1.0 / lambda));
    values.push_back(complex_json(lambda));
  }
  j.set("system", sys.id);
  j.set("zeros", JsonValue(std::move(zeros))).set("eigenvalues", JsonValue(std::move(values)));

  bool agree = true;
  if (sys.dim() == 1) {
    EigenvalueSequence matrix = spectral_sequence(sys, sys.domain, c.matrix_size, c.tail);
    const int k = std::min(matrix.reliable_count, static_cast<int>(eig.values.size()));
    double worst = 0.0;
    for (int n = 0; n < k; ++n) {
      worst = std::max(worst, std::abs(matrix.values[n] - eig.values[n]) /
                                  std::max(std::abs(matrix.values[n]), 1e-300));
    }
    agree = worst <= c.agreement_tol;
    JsonValue cj = JsonValue::object();
    cj.set("compared", k)
        .set("max_relative_difference", worst)
        .set("agreement_tol", c.agreement_tol)
        .set("agree", agree)
        .set("matrix_size", c.matrix_size);
    j.set("cross_check", std::move(cj));
  }
  emit(o, sys.id, "json", j.dump(), out);
  return agree ? kExitOk : kExitFailure;
}

int cmd_bounds(const Options& o, std::ostream& out) {
  int status = kExitOk;
  if (!o.crossover.empty()) {
    if (o.crossover.size() != 2 || o.crossover[1] != std::floor(o.crossover[1])) {
      throw UsageError("--crossover takes r and an integer d");
    }
    CrossoverReport rep = crossover_report(o.crossover[0], static_cast<int>(o.crossover[1]));
    emit(o, fmt::format("crossover-{}-{}", format_double(rep.r), rep.d), "json",
         to_json(rep).dump(), out);
  }
  if (!o.profile.empty()) {
    if (o.profile.size() != 3 || o.profile[2] != std::floor(o.profile[2])) {
      throw UsageError("--profile takes W, r and an integer d");
    }
    BoundProfile p = make_profile(o.profile[0], o.profile[1], static_cast<int>(o.profile[2]));
    int rows = o.matrix_size.value_or(40);
    std::ostringstream csv;
    write_bounds_csv(csv, bound_table(p, rows));
    csv << "# " << to_json(crossover_report(p.r, p.d)).dump(-1);
    emit(o, fmt::format("profile-{}", p.d), "csv", csv.str(), out);
  }
  if (!o.config_path.empty()) {
    RunConfig c = load_config(o);
    MapWeightSystem sys = build_system(c);
    ValidationReport v = validate_system(sys, c.margin, c.grid);
    EnclosingResult e = enclosing_radius(sys, c.grid);
    BoundProfile p = make_profile(v.W, e.r, sys.dim());
    VerificationReport rep;
    if (sys.dim() == 1) {
      rep = verify_bounds(spectral_sequence(sys, sys.domain, c.matrix_size, c.tail), p);
    } else {
      rep = bound_table(p, c.matrix_size);
    }
    std::ostringstream csv;
    write_bounds_csv(csv, rep);
    JsonValue summary = to_json(crossover_report(p.r, p.d));
    summary.set("W", p.W).set("all_pass", rep.all_pass);
    JsonValue::Array weyl;
    for (std::size_t k = 0; k < rep.weyl_orders.size(); ++k) {
      JsonValue row = JsonValue::object();
      row.set("n", rep.weyl_orders[k]).set("pass", static_cast<bool>(rep.weyl_pass[k]));
      weyl.push_back(std::move(row));
    }
    summary.set("weyl_product", JsonValue(std::move(weyl)));
    csv << "# " << summary.dump(-1);
    emit(o, sys.id, "csv", csv.str(), out);
    if (!rep.all_pass) status = kExitFailure;
  }
  if (o.crossover.empty() && o.profile.empty() && o.config_path.empty()) {
    throw UsageError("bounds needs --config, --profile or --crossover");
  }
  return status;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ruelle eigenvalue sequences of holomorphic map-weight systems"};
  app.require_subcommand(1, 1);
  Options o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "JSON run config");
    sub->add_option("--out", o.out_dir, "directory for result files");
    sub->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--timestamp", o.timestamp, "append a timestamp to output file names");
    sub->add_option("--matrix-size", o.matrix_size, "matrix size N");
    sub->add_option("--trace-order", o.trace_order, "trace order M");
    sub->add_option("--word-budget", o.word_budget, "maximum words per trace order");
  };
  auto* validate = app.add_subcommand("validate", "validate a system");
  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues by matrix discretization");
  auto* determinant = app.add_subcommand("determinant", "eigenvalues by the dynamical determinant");
  auto* bounds = app.add_subcommand("bounds", "eigenvalue bounds and their verification");
  for (auto* sub : {validate, spectrum, determinant, bounds}) add_common(sub);
  spectrum->add_flag("--matrix-csv", o.matrix_csv, "also export the matrix to the output directory");
  bounds->add_option("--crossover", o.crossover, "crossover report for r d")->expected(2);
  bounds->add_option("--profile", o.profile, "bound table for W r d")->expected(3);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitUsage;
  }
  o.command = app.get_subcommands().front()->get_name();
  if (o.threads > 0) set_thread_count(o.threads);

  try {
    if (o.command == "validate") return cmd_validate(o, out);
    if (o.command == "spectrum") return cmd_spectrum(o, out);
    if (o.command == "determinant") return cmd_determinant(o, out);
    return cmd_bounds(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    bool usage = e.code() == ErrorCode::ConfigError || e.code() == ErrorCode::InvalidArgument;
    return usage ? kExitUsage : kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace ruelle
