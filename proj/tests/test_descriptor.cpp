#include "ruelle/descriptor.hpp"

#include <gtest/gtest.h>

#include <cmath>

using ruelle::Complex;
using ruelle::ErrorCode;

namespace {

template <class F>
void expect_error(ErrorCode code, F&& f) {
  try {
    f();
    ADD_FAILURE() << "expected " << ruelle::to_string(code);
  } catch (const ruelle::Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

}  // namespace

TEST(ParseRunConfig, GaussDefaults) {
  auto c = ruelle::parse_run_config(R"({"family": "gauss", "domain": {"center": 1, "radius": 1.5}})");
  EXPECT_EQ(c.system_id, "gauss-200");
  EXPECT_EQ(c.matrix_size, 40);
  EXPECT_EQ(c.trace_order, 10);
  EXPECT_EQ(c.word_budget, ruelle::kDefaultWordBudget);
  EXPECT_EQ(c.fixed_point_tol, 1e-13);
  EXPECT_EQ(c.tail, ruelle::TailTreatment::Auto);
  auto sys = ruelle::build_system(c);
  EXPECT_EQ(sys.size(), 200);
  EXPECT_EQ(sys.domain.center1(), Complex(1.0));
  EXPECT_EQ(sys.domain.radius, 1.5);
}

TEST(ParseRunConfig, RunFieldsOverrideDefaults) {
  auto c = ruelle::parse_run_config(R"({"family": "gauss", "i_max": 30, "id": "g",
      "domain": {"center": [1, 0], "radius": 1.5, "dim": 1},
      "matrix_size": 24, "trace_order": 6, "word_budget": 5000, "fixed_point_tol": 1e-12,
      "agreement_tol": 1e-6, "contraction_order": 3, "margin": 0.1, "grid": 256,
      "tail": "truncate", "split": 3})");
  EXPECT_EQ(c.system_id, "g");
  EXPECT_EQ(c.matrix_size, 24);
  EXPECT_EQ(c.trace_order, 6);
  EXPECT_EQ(c.word_budget, 5000u);
  EXPECT_EQ(c.fixed_point_tol, 1e-12);
  EXPECT_EQ(c.agreement_tol, 1e-6);
  EXPECT_EQ(c.contraction_order, 3);
  EXPECT_EQ(c.margin, 0.1);
  EXPECT_EQ(c.grid, 256);
  EXPECT_EQ(c.tail, ruelle::TailTreatment::Truncate);
  EXPECT_EQ(c.split, 3);
  EXPECT_EQ(ruelle::build_system(c).size(), 30);
}

TEST(ParseRunConfig, AffineListWithWeights) {
  auto c = ruelle::parse_run_config(R"({"family": "affine_list",
      "params": [{"a": 0.5, "b": 0.3}, {"a": [0.2, 0.1], "b": 0, "weight": [0, 2]},
                 {"a": 0.25, "b": 0.1, "weight": "derivative"}],
      "domain": {"center": 0.5, "radius": 1}})");
  EXPECT_EQ(c.system_id, "affine_list-3");
  auto sys = ruelle::build_system(c);
  ASSERT_EQ(sys.size(), 3);
  Complex z(0.1, 0.2);
  EXPECT_LE(std::abs(sys.branches[1](z) - Complex(0.2, 0.1) * z), 1e-16);
  EXPECT_EQ(sys.weights[0](z), Complex(1.0));
  EXPECT_EQ(sys.weights[1](z), Complex(0.0, 2.0));
  EXPECT_EQ(sys.weights[2](z), Complex(0.25));
}

TEST(ParseRunConfig, MoebiusDerivativeWeights) {
  auto c = ruelle::parse_run_config(R"({"family": "moebius_list",
      "params": [{"a": 0, "b": 1, "c": 1, "e": 2, "weight": "-derivative"}],
      "domain": {"center": 0, "radius": 1}})");
  auto sys = ruelle::build_system(c);
  Complex z(0.3, -0.1);
  EXPECT_LE(std::abs(sys.weights[0](z) - 1.0 / ((z + 2.0) * (z + 2.0))), 1e-16);
  const double h = 1e-6;
  Complex fd = (sys.weights[0](z + h) - sys.weights[0](z - h)) / (2.0 * h);
  EXPECT_LE(std::abs(sys.weights[0].derivative(z) - fd), 1e-8);
}

TEST(ParseRunConfig, SchemaViolations) {
  const char* bad[] = {
      R"(not json)",
      R"([1, 2])",
      R"({"domain": {"center": 0, "radius": 1}})",
      R"({"family": "gauss"})",
      R"({"family": "spiral", "domain": {"center": 0, "radius": 1}})",
      R"({"family": "affine_list", "domain": {"center": 0, "radius": 1}})",
      R"({"family": "affine_list", "params": [], "domain": {"center": 0, "radius": 1}})",
      R"({"family": "gauss", "domain": {"center": 1, "radius": 1.5}, "matrix_size": 2.5})",
      R"({"family": "gauss", "domain": {"center": 1, "radius": 1.5}, "tail": "sometimes"})",
      R"({"family": "gauss", "domain": {"center": 1, "radius": 1.5}, "id": 7})",
  };
  for (const char* text : bad) {
    expect_error(ErrorCode::ConfigError, [&] { ruelle::parse_run_config(text); });
  }
}

TEST(BuildSystem, SchemaViolationsInBranches) {
  auto c = ruelle::parse_run_config(R"({"family": "affine_list", "params": [{"a": 0.5}],
      "domain": {"center": 0, "radius": 1}})");
  expect_error(ErrorCode::ConfigError, [&] { ruelle::build_system(c); });
  c = ruelle::parse_run_config(R"({"family": "affine_list", "params": [{"a": 0.5, "b": 0, "weight": "x"}],
      "domain": {"center": 0, "radius": 1}})");
  expect_error(ErrorCode::ConfigError, [&] { ruelle::build_system(c); });
  c = ruelle::parse_run_config(R"({"family": "affine_list", "params": [{"a": 0.5, "b": 0}],
      "domain": {"radius": 1}})");
  expect_error(ErrorCode::ConfigError, [&] { ruelle::build_system(c); });
}

TEST(BuildSystem, MathematicalRejectionsKeepTheirCodes) {
  auto c = ruelle::parse_run_config(R"({"family": "moebius_list",
      "params": [{"a": 1, "b": 1, "c": 1, "e": 1}], "domain": {"center": 0, "radius": 1}})");
  expect_error(ErrorCode::DegenerateMap, [&] { ruelle::build_system(c); });
  c = ruelle::parse_run_config(R"({"family": "gauss", "domain": {"center": 0, "radius": 1.5}})");
  expect_error(ErrorCode::InadmissibleDomain, [&] { ruelle::build_system(c); });
  c = ruelle::parse_run_config(R"({"family": "gauss", "domain": {"center": 1, "radius": 0}})");
  expect_error(ErrorCode::InvalidDomain, [&] { ruelle::build_system(c); });
}
