// SPDX-License-Identifier: Apache-2.0
#include "cqverify/report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "cqverify/errors.hpp"

namespace cq {

using nlohmann::ordered_json;

void ResidualAccumulator::add(double residual) {
  ++samples_;
  if (std::isnan(residual)) {
    nan_ = true;
    return;
  }
  max_ = std::max(max_, residual);
  sum_ += residual;
}

void ResidualAccumulator::merge(const ResidualAccumulator& other) {
  samples_ += other.samples_;
  skipped_ += other.skipped_;
  max_ = std::max(max_, other.max_);
  sum_ += other.sum_;
  nan_ = nan_ || other.nan_;
}

IdentityResidual ResidualAccumulator::finish() const {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  IdentityResidual r;
  r.name = name_;
  r.samples = samples_;
  r.skipped = skipped_;
  r.tol = tol_;
  if (samples_ == 0 || nan_) {
    r.max_res = nan;
    r.mean_res = samples_ == 0 ? nan : sum_ / samples_;
  } else {
    r.max_res = max_;
    r.mean_res = sum_ / samples_;
  }
  r.pass = r.max_res <= tol_;
  return r;
}

Observation observe(std::string name, double value, std::string relation, double bound, bool gating) {
  bool pass = true;
  if (relation == ">") pass = value > bound;
  else if (relation == ">=") pass = value >= bound;
  else if (relation == "<=") pass = value <= bound;
  else if (relation != "info") throw UsageError("unknown observation relation '" + relation + "'");
  return Observation{std::move(name), value, std::move(relation), bound, pass, gating};
}

void ReportDocument::finalize() {
  overall_pass = true;
  for (const auto& r : residuals) overall_pass = overall_pass && r.pass;
  for (const auto& o : observations)
    if (o.gating) overall_pass = overall_pass && o.pass;
}

namespace {

bool same_number(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

ordered_json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

double read_number(const ordered_json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.get<double>();
}

std::string fmt17(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

bool ReportDocument::operator==(const ReportDocument& o) const {
  if (tool_version != o.tool_version || config != o.config || conventions != o.conventions ||
      overall_pass != o.overall_pass || !same_number(duration_s, o.duration_s) ||
      residuals.size() != o.residuals.size() || observations.size() != o.observations.size()) {
    return false;
  }
  for (size_t i = 0; i < residuals.size(); ++i) {
    const auto& a = residuals[i];
    const auto& b = o.residuals[i];
    if (a.name != b.name || a.samples != b.samples || a.skipped != b.skipped || a.pass != b.pass ||
        !same_number(a.max_res, b.max_res) || !same_number(a.mean_res, b.mean_res) || !same_number(a.tol, b.tol)) {
      return false;
    }
  }
  for (size_t i = 0; i < observations.size(); ++i) {
    const auto& a = observations[i];
    const auto& b = o.observations[i];
    if (a.name != b.name || a.relation != b.relation || a.pass != b.pass || a.gating != b.gating ||
        !same_number(a.value, b.value) || !same_number(a.bound, b.bound)) {
      return false;
    }
  }
  return true;
}

ordered_json default_conventions() {
  return ordered_json{
      {"wedge", "(X^Y)Z = <Y,Z>X - <X,Z>Y"},
      {"curvature", "R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y]"},
      {"space_form_curvature", "R(X,Y)Z = 4c(X^Y + JX^JY + 2<X,JY>J)Z"},
      {"holomorphic_sectional_curvature", "<R(X,JX)JX,X> / |X|^4 = 16c"},
      {"codazzi", "d(Y,X) = (nabla_X A)Y - (nabla_Y A)X"},
      {"shape_operator", "AX = -nabla-bar_X nu"},
      {"normal_orientation", "det[tangent basis | nu] > 0"},
      {"eps", {1, -1}},
  };
}

std::string emit(const ReportDocument& report, ReportFormat format) {
  if (format == ReportFormat::csv) {
    std::string out = "name,samples,skipped,max_res,mean_res,tol,pass\n";
    for (const auto& r : report.residuals) {
      out += csv_field(r.name) + "," + std::to_string(r.samples) + "," + std::to_string(r.skipped) + "," +
             fmt17(r.max_res) + "," + fmt17(r.mean_res) + "," + fmt17(r.tol) + "," + (r.pass ? "true" : "false") +
             "\n";
    }
    return out;
  }
  ordered_json doc;
  doc["tool_version"] = report.tool_version;
  doc["config"] = report.config;
  doc["conventions"] = report.conventions;
  doc["residuals"] = ordered_json::array();
  for (const auto& r : report.residuals) {
    doc["residuals"].push_back(ordered_json{{"name", r.name},
                                            {"samples", r.samples},
                                            {"skipped", r.skipped},
                                            {"max_res", number(r.max_res)},
                                            {"mean_res", number(r.mean_res)},
                                            {"tol", number(r.tol)},
                                            {"pass", r.pass}});
  }
  doc["observations"] = ordered_json::array();
  for (const auto& o : report.observations) {
    doc["observations"].push_back(ordered_json{{"name", o.name},
                                               {"value", number(o.value)},
                                               {"relation", o.relation},
                                               {"bound", number(o.bound)},
                                               {"pass", o.pass},
                                               {"gating", o.gating}});
  }
  doc["overall_pass"] = report.overall_pass;
  doc["duration_s"] = number(report.duration_s);
  return doc.dump(2) + "\n";
}

ReportDocument parse_report_json(std::string_view text) {
  try {
    const ordered_json doc = ordered_json::parse(text);
    ReportDocument r;
    r.tool_version = doc.at("tool_version").get<std::string>();
    r.config = doc.at("config");
    r.conventions = doc.at("conventions");
    for (const auto& j : doc.at("residuals")) {
      r.residuals.push_back(IdentityResidual{j.at("name").get<std::string>(), j.at("samples").get<int>(),
                                             j.at("skipped").get<int>(), read_number(j.at("max_res")),
                                             read_number(j.at("mean_res")), read_number(j.at("tol")),
                                             j.at("pass").get<bool>()});
    }
    for (const auto& j : doc.at("observations")) {
      r.observations.push_back(Observation{j.at("name").get<std::string>(), read_number(j.at("value")),
                                           j.at("relation").get<std::string>(), read_number(j.at("bound")),
                                           j.at("pass").get<bool>(), j.at("gating").get<bool>()});
    }
    r.overall_pass = doc.at("overall_pass").get<bool>();
    r.duration_s = read_number(doc.at("duration_s"));
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("malformed report: ") + e.what());
  }
}

}  // namespace cq
