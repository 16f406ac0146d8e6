#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ruelle/dynamics.hpp"
#include "ruelle/systems.hpp"

namespace ruelle {

/// Batch run settings: a system descriptor plus numerical parameters.
///
/// Descriptor fields: "family" ("gauss" | "moebius_list" | "affine_list"),
/// "params" (list of branch objects), "domain" {"center", "radius", "dim"},
/// "i_max" (gauss), optional "id". Branch objects carry "a", "b" (affine) or
/// "a", "b", "c", "e" (Möbius) and an optional "weight": a complex constant
/// (number or [re, im]), "derivative" or "-derivative". Run fields:
/// "matrix_size", "trace_order", "word_budget", "fixed_point_tol",
/// "agreement_tol", "contraction_order", "margin", "grid", "tail", "split".
struct RunConfig {
  std::string descriptor;  ///< raw JSON text of the system descriptor
  std::string system_id;
  int matrix_size = 40;
  int trace_order = 10;
  std::uint64_t word_budget = kDefaultWordBudget;
  double fixed_point_tol = 1e-13;
  double agreement_tol = 1e-7;
  int contraction_order = 2;
  double margin = 0.05;
  int grid = 1024;
  TailTreatment tail = TailTreatment::Auto;
  int split = 2;
};

/// Parses and checks a config document. Throws ConfigError on schema
/// violations.
RunConfig parse_run_config(const std::string& json_text);

/// Builds the system described by the config. Schema errors throw
/// ConfigError; mathematical rejections (degenerate maps, inadmissible
/// domains) keep their own codes.
MapWeightSystem build_system(const RunConfig& config);

}  // namespace ruelle
