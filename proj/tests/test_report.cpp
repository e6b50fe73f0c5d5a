// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>
#include <sstream>

#include "cqverify/errors.hpp"
#include "cqverify/report.hpp"
#include "cqverify/suites.hpp"

using namespace cq;

namespace {

ReportDocument random_report(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> n(0, 5);
  ReportDocument r;
  r.config = {{"suite", "structure"}, {"samples", n(rng)}, {"tol", nullptr}};
  r.conventions = default_conventions();
  const int rows = n(rng);
  for (int i = 0; i < rows; ++i) {
    IdentityResidual ir{"res, \"" + std::to_string(i) + "\"", n(rng), n(rng), u(rng) * 1e-9, u(rng) * 1e-10, 1e-9,
                        u(rng) < 0.5};
    if (u(rng) < 0.3) ir.max_res = ir.mean_res = std::numeric_limits<double>::quiet_NaN();
    r.residuals.push_back(ir);
  }
  for (int i = 0; i < n(rng); ++i) r.observations.push_back(observe("obs" + std::to_string(i), u(rng), ">", 0.5));
  r.duration_s = u(rng);
  r.finalize();
  return r;
}

int count_lines(const std::string& s) {
  int k = 0;
  for (char ch : s) k += ch == '\n';
  return k;
}

RunConfig small_config(const std::string& suite) {
  RunConfig c;
  c.suite = suite;
  c.model = "cp(1,c=0.0625)xcp(1,c=0.0625)";
  c.samples = 12;
  c.seed = 9;
  return c;
}

}  // namespace

TEST(Accumulator, EmptyFails) {
  const IdentityResidual r = ResidualAccumulator("x", 1e-9).finish();
  EXPECT_TRUE(std::isnan(r.max_res));
  EXPECT_FALSE(r.pass);
}

TEST(Accumulator, MaxMeanAndTolerance) {
  ResidualAccumulator a("x", 0.25);
  a.add(0.1);
  a.add(0.3);
  a.skip(2);
  const IdentityResidual r = a.finish();
  EXPECT_EQ(r.samples, 2);
  EXPECT_EQ(r.skipped, 2);
  EXPECT_DOUBLE_EQ(r.max_res, 0.3);
  EXPECT_DOUBLE_EQ(r.mean_res, 0.2);
  EXPECT_FALSE(r.pass);
}

TEST(Accumulator, NaNResidualFails) {
  ResidualAccumulator a("x", 1.0);
  a.add(0.0);
  a.add(std::numeric_limits<double>::quiet_NaN());
  EXPECT_FALSE(a.finish().pass);
}

TEST(Accumulator, MergeIsAssociative) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ResidualAccumulator a("x", 0.5), b("x", 0.5), c("x", 0.5);
  for (int i = 0; i < 7; ++i) a.add(u(rng));
  for (int i = 0; i < 3; ++i) b.add(u(rng));
  c.skip(4);
  ResidualAccumulator left = a;
  left.merge(b);
  left.merge(c);
  ResidualAccumulator bc = b;
  bc.merge(c);
  ResidualAccumulator right = a;
  right.merge(bc);
  const IdentityResidual l = left.finish(), r = right.finish();
  EXPECT_EQ(l.samples, r.samples);
  EXPECT_EQ(l.skipped, 4);
  EXPECT_EQ(l.max_res, r.max_res);
  EXPECT_NEAR(l.mean_res, r.mean_res, 1e-15);
}

TEST(Observation, Relations) {
  EXPECT_TRUE(observe("a", 1.0, ">", 0.0).pass);
  EXPECT_FALSE(observe("a", 0.0, ">", 0.0).pass);
  EXPECT_TRUE(observe("a", 0.0, ">=", 0.0).pass);
  EXPECT_FALSE(observe("a", 2.0, "<=", 1.0).pass);
  EXPECT_TRUE(observe("a", 5.0, "info", 0.0).pass);
  EXPECT_THROW(observe("a", 0.0, "==", 0.0), UsageError);
}

TEST(Report, FinalizeIgnoresNonGatingObservations) {
  ReportDocument r;
  r.residuals.push_back({"a", 1, 0, 0.0, 0.0, 1.0, true});
  r.observations.push_back(observe("info", 3.0, "<=", 1.0, false));
  r.finalize();
  EXPECT_TRUE(r.overall_pass);
  r.observations.push_back(observe("gate", 0.0, ">", 0.0));
  r.finalize();
  EXPECT_FALSE(r.overall_pass);
}

TEST(Report, EmptyReport) {
  ReportDocument r;
  r.finalize();
  EXPECT_TRUE(r.overall_pass);
  const std::string csv = emit(r, ReportFormat::csv);
  EXPECT_EQ(csv, "name,samples,skipped,max_res,mean_res,tol,pass\n");
  EXPECT_EQ(parse_report_json(emit(r, ReportFormat::json)), r);
}

TEST(Report, CsvRows) {
  ReportDocument r;
  r.residuals.push_back({"plain", 3, 1, 0.5, 0.25, 1.0, true});
  r.residuals.push_back({"a, b", 0, 0, std::numeric_limits<double>::quiet_NaN(), 0.0, 1.0, false});
  const std::string csv = emit(r, ReportFormat::csv);
  EXPECT_EQ(count_lines(csv), 3);
  EXPECT_NE(csv.find("plain,3,1,0.5,0.25,1,true\n"), std::string::npos);
  EXPECT_NE(csv.find("\"a, b\",0,0,"), std::string::npos);
}

TEST(Report, JsonRoundTrip) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 100; ++t) {
    const ReportDocument r = random_report(rng);
    const ReportDocument back = parse_report_json(emit(r, ReportFormat::json));
    EXPECT_EQ(back, r);
    EXPECT_EQ(emit(back, ReportFormat::json), emit(r, ReportFormat::json));
  }
}

TEST(Report, JsonNonFiniteIsNull) {
  ReportDocument r;
  r.residuals.push_back({"x", 0, 1, std::numeric_limits<double>::quiet_NaN(), 0.0, 1.0, false});
  const auto j = nlohmann::json::parse(emit(r, ReportFormat::json));
  EXPECT_TRUE(j["residuals"][0]["max_res"].is_null());
}

TEST(Report, MalformedJson) {
  EXPECT_THROW(parse_report_json("{"), UsageError);
  EXPECT_THROW(parse_report_json("[]"), UsageError);
  EXPECT_THROW(parse_report_json(R"({"tool_version": 3})"), UsageError);
}

TEST(Run, Deterministic) {
  ReportDocument a = run(small_config("structure"));
  ReportDocument b = run(small_config("structure"));
  a.duration_s = b.duration_s = 0.0;
  EXPECT_EQ(emit(a, ReportFormat::json), emit(b, ReportFormat::json));
  EXPECT_TRUE(a.overall_pass);
  EXPECT_EQ(a.config["suite"], "structure");
  EXPECT_TRUE(a.config["immersion"].is_null());
}

TEST(Run, ThreadCountInvariant) {
  RunConfig c = small_config("codazzi");
  c.immersion = "e3";
  c.samples = 6;
  const char* prev = std::getenv("VERIFY_THREADS");
  const std::string saved = prev ? prev : "";
  setenv("VERIFY_THREADS", "1", 1);
  ReportDocument one = run(c);
  setenv("VERIFY_THREADS", "4", 1);
  ReportDocument four = run(c);
  if (prev) setenv("VERIFY_THREADS", saved.c_str(), 1);
  else unsetenv("VERIFY_THREADS");
  one.duration_s = four.duration_s = 0.0;
  EXPECT_EQ(emit(one, ReportFormat::json), emit(four, ReportFormat::json));
}

TEST(Run, TolOverride) {
  RunConfig c = small_config("structure");
  c.tol = 1e-30;
  const ReportDocument r = run(c);
  EXPECT_FALSE(r.overall_pass);
  for (const auto& res : r.residuals) EXPECT_EQ(res.tol, 1e-30);
}

TEST(Run, UsageErrors) {
  RunConfig bad_suite = small_config("nope");
  EXPECT_THROW(run(bad_suite), UsageError);
  RunConfig bad_model = small_config("structure");
  bad_model.model = "cp(1,c=1)";
  EXPECT_THROW(run(bad_model), UsageError);
  RunConfig bad_step = small_config("structure");
  bad_step.step = 1e-2;
  EXPECT_THROW(run(bad_step), UsageError);
  RunConfig bad_samples = small_config("structure");
  bad_samples.samples = 0;
  EXPECT_THROW(run(bad_samples), UsageError);
  EXPECT_THROW(run(small_config("gauss")), UsageError);
  RunConfig bad_imm = small_config("codazzi");
  bad_imm.immersion = "e2(q=1)";
  EXPECT_THROW(run(bad_imm), UsageError);
}

TEST(Run, SampleSeedsDiffer) {
  EXPECT_NE(sample_seed(1, 0), sample_seed(1, 1));
  EXPECT_NE(sample_seed(1, 0), sample_seed(2, 0));
  EXPECT_EQ(sample_seed(3, 5), sample_seed(3, 5));
}
