// SPDX-License-Identifier: Apache-2.0
#include "cqverify/model_spec.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>

#include "cqverify/errors.hpp"

namespace cq {

std::string strip_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) out.push_back(ch);
  return out;
}

double parse_real(std::string_view text, std::string_view what) {
  const std::string s(text);
  if (s.empty()) throw UsageError("empty value for " + std::string(what));
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) {
    throw UsageError("invalid number '" + s + "' for " + std::string(what));
  }
  return v;
}

long long parse_integer(std::string_view text, std::string_view what) {
  const std::string s(text);
  if (s.empty()) throw UsageError("empty value for " + std::string(what));
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size() || errno == ERANGE) {
    throw UsageError("invalid integer '" + s + "' for " + std::string(what));
  }
  return v;
}

SpaceFormSpec parse_space_form(std::string_view raw) {
  const std::string text = strip_whitespace(raw);
  const auto open = text.find('(');
  if (open == std::string::npos || text.back() != ')') {
    throw UsageError("malformed space form '" + text + "', expected kind(n, c=value)");
  }
  const std::string kind = text.substr(0, open);
  const std::string args = text.substr(open + 1, text.size() - open - 2);
  const auto comma = args.find(',');
  const std::string n_text = args.substr(0, comma);
  const long long n = parse_integer(n_text, "complex dimension");
  if (n < 1 || n > 64) throw UsageError("complex dimension out of range in '" + text + "'");

  bool has_c = false;
  double c = 0.0;
  if (comma != std::string::npos) {
    const std::string rest = args.substr(comma + 1);
    if (rest.rfind("c=", 0) != 0) throw UsageError("expected c=value in '" + text + "'");
    c = parse_real(rest.substr(2), "curvature parameter c");
    has_c = true;
  }

  SpaceFormSpec spec;
  spec.n = static_cast<int>(n);
  spec.c = c;
  if (kind == "eu") {
    spec.kind = SpaceFormKind::euclidean;
  } else if (kind == "cp") {
    spec.kind = SpaceFormKind::projective;
  } else if (kind == "ch") {
    spec.kind = SpaceFormKind::hyperbolic;
  } else {
    throw UsageError("unknown space form kind '" + kind + "' (expected eu, cp or ch)");
  }
  if (spec.kind != SpaceFormKind::euclidean && !has_c) {
    throw UsageError("space form '" + text + "' requires c=value");
  }
  spec.validate();
  return spec;
}

ProductSpec parse_product_spec(std::string_view raw) {
  const std::string text = strip_whitespace(raw);
  const auto close = text.find(')');
  if (close == std::string::npos || close + 1 >= text.size() || text[close + 1] != 'x') {
    throw UsageError("malformed model '" + text + "', expected kind(n, c=value) x kind(n, c=value)");
  }
  ProductSpec spec{parse_space_form(text.substr(0, close + 1)), parse_space_form(text.substr(close + 2))};
  spec.validate();
  return spec;
}

}  // namespace cq
