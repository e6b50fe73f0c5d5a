// SPDX-License-Identifier: Apache-2.0
#include "cqverify/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <random>
#include <thread>

#include "cqverify/errors.hpp"
#include "cqverify/identities.hpp"
#include "cqverify/immersions.hpp"
#include "cqverify/model_spec.hpp"

namespace cq {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Tolerances.  Pure algebra is compared at roundoff level, anything that went
// through finite differences at truncation level.
constexpr double kAlgebraTol = 1e-10;
constexpr double kAlgebraTolTight = 1e-11;
constexpr double kProductTol = 1e-12;
constexpr double kFdTol = 1e-5;
constexpr double kCurvatureFdTol = 1e-6;
constexpr double kPointwiseFdTol = 1e-7;
constexpr double kSelfAdjointTol = 1e-8;
constexpr double kGradientTol = 1e-8;
constexpr double kMinV = 0.05;

struct Entry {
  std::string name;
  double value;
  double tol;
};

// Output of one sample.  `skips` names residuals the sample did not apply to;
// `stats` feed observations.
struct SampleOut {
  bool skipped = false;
  std::vector<Entry> values;
  std::vector<std::pair<std::string, double>> skips;
  std::vector<std::pair<std::string, double>> stats;

  void add(std::string name, double value, double tol) { values.push_back({std::move(name), value, tol}); }
  void skip(std::string name, double tol) { skips.emplace_back(std::move(name), tol); }
  void stat(std::string name, double value) { stats.emplace_back(std::move(name), value); }
};

struct Context {
  RunConfig cfg;
  ProductSpec spec;
  std::optional<Immersion> imm;
};

RealVector random_vector(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> normal;
  RealVector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = normal(rng);
  return v;
}

// ||a - b|| / max(||b||, 1), used for algebraic identities whose values are O(c).
double scaled(const RealVector& a, const RealVector& b) { return relative_residual(a, b, 1.0); }
// finite-difference comparisons
double fd_rel(const RealVector& a, const RealVector& b) { return relative_residual(a, b, 1e-6); }

double max_abs(const std::array<double, 2>& v) { return std::max(std::abs(v[0]), std::abs(v[1])); }

std::vector<SampleOut> parallel_map(int n, const std::function<SampleOut(int)>& body) {
  std::vector<SampleOut> out(static_cast<size_t>(n));
  const int workers = std::max(1, std::min(worker_count(), n));
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto work = [&](int w) {
    for (int i = w; i < n; i += workers) {
      try {
        out[i] = body(i);
      } catch (const DomainError&) {
        out[i] = SampleOut{};
        out[i].skipped = true;
      } catch (const DegeneracyError&) {
        out[i] = SampleOut{};
        out[i].skipped = true;
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(work, w);
    for (auto& t : threads) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

// Merges sample outputs in index order, so the result does not depend on the
// thread schedule.
void accumulate(const std::vector<SampleOut>& outs, const RunConfig& cfg, ReportDocument& doc) {
  std::vector<ResidualAccumulator> accs;
  std::map<std::string, size_t> index;
  const auto acc_for = [&](const std::string& name, double tol) -> ResidualAccumulator& {
    auto it = index.find(name);
    if (it == index.end()) {
      it = index.emplace(name, accs.size()).first;
      accs.emplace_back(name, cfg.tol.value_or(tol));
    }
    return accs[it->second];
  };
  int whole_skips = 0;
  for (const SampleOut& s : outs) {
    if (s.skipped) {
      ++whole_skips;
      continue;
    }
    for (const Entry& e : s.values) acc_for(e.name, e.tol).add(e.value);
    for (const auto& [name, tol] : s.skips) acc_for(name, tol).skip();
  }
  if (accs.empty()) {
    ResidualAccumulator none("usable samples", cfg.tol.value_or(0.0));
    none.skip(whole_skips);
    doc.residuals.push_back(none.finish());
    return;
  }
  for (auto& a : accs) {
    a.skip(whole_skips);
    doc.residuals.push_back(a.finish());
  }
}

std::vector<double> collect(const std::vector<SampleOut>& outs, const std::string& name) {
  std::vector<double> v;
  for (const SampleOut& s : outs)
    for (const auto& [n, x] : s.stats)
      if (n == name) v.push_back(x);
  return v;
}

double min_of(const std::vector<double>& v) { return v.empty() ? kNaN : *std::min_element(v.begin(), v.end()); }
double max_of(const std::vector<double>& v) { return v.empty() ? kNaN : *std::max_element(v.begin(), v.end()); }

const Immersion& need_immersion(const Context& ctx) {
  if (!ctx.imm) throw UsageError("suite '" + ctx.cfg.suite + "' needs --immersion");
  return *ctx.imm;
}

double sample_margin(const RunConfig& cfg) { return 4.0 * cfg.step; }

RealVector sample_u(const Immersion& imm, std::mt19937_64& rng, const RunConfig& cfg) {
  return imm.sample_parameter(rng, sample_margin(cfg));
}

std::array<double, 2> model_c(const ProductSpec& spec) { return {spec.c(0), spec.c(1)}; }

// ---- suites ----------------------------------------------------------------

void add_structure_entries(SampleOut& out, const std::string& prefix, const StructuralData& sd,
                           const AdaptedFrame& fr, std::mt19937_64& rng) {
  const RealVector x = random_vector(rng, sd.dim());
  const RealVector y = random_vector(rng, sd.dim());
  for (const NamedValue& nv : structure_residuals(sd, x, y)) out.add(prefix + nv.name, nv.value, kAlgebraTol);
  for (const NamedValue& nv : frame_residuals(sd, fr)) out.add(prefix + nv.name, nv.value, kAlgebraTol);
}

void suite_structure(const Context& ctx, ReportDocument& doc) {
  const RunConfig& cfg = ctx.cfg;
  const auto c = model_c(ctx.spec);
  auto outs = parallel_map(cfg.samples, [&](int i) {
    std::mt19937_64 rng(sample_seed(cfg.seed, i));
    SampleOut out;
    const StructuralSample ss = synth_structural(rng(), ctx.spec.factor1.n, ctx.spec.factor2.n, c);
    const AdaptedFrame fr = adapted_frame(ss.sd, rng());
    add_structure_entries(out, "synthesized: ", ss.sd, fr, rng);
    return out;
  });
  if (ctx.imm) {
    const Immersion& imm = *ctx.imm;
    auto immersed = parallel_map(cfg.samples, [&](int i) {
      std::mt19937_64 rng(sample_seed(cfg.seed ^ 0x5bd1e995ULL, i));
      SampleOut out;
      const RealVector u = sample_u(imm, rng, cfg);
      const HypersurfacePoint pt = point_data(imm, ctx.spec, u, cfg.step);
      const StructuralSample ss = sample_at_point(ctx.spec, pt);
      const AdaptedFrame fr = adapted_frame(ss.sd, rng());
      add_structure_entries(out, "immersed: ", ss.sd, fr, rng);
      const double scale = std::max(1.0, pt.A.norm());
      out.add("immersed: A self-adjoint", (pt.A - pt.A.transpose()).norm() / scale, kSelfAdjointTol);
      const Endomorphism a2 = shape_operator_second_form(imm, ctx.spec, pt, cfg.step);
      out.add("immersed: A vs second fundamental form", (pt.A - a2).norm() / std::max(a2.norm(), 1e-6),
              kCurvatureFdTol);
      return out;
    });
    outs.insert(outs.end(), immersed.begin(), immersed.end());
  }
  accumulate(outs, cfg, doc);
}

void suite_product_curvature(const Context& ctx, ReportDocument& doc) {
  const RunConfig& cfg = ctx.cfg;
  const ProductSpec& spec = ctx.spec;
  auto outs = parallel_map(cfg.samples, [&](int i) {
    std::mt19937_64 rng(sample_seed(cfg.seed, i));
    SampleOut out;
    const ProductPoint q = random_product_point(spec, rng);
    const int d = spec.real_dim();
    const RealVector x = random_vector(rng, d), y = random_vector(rng, d), z = random_vector(rng, d);
    const RealVector formula = curvature_product_formula(spec, q, x, y, z);
    out.add("product formula vs block sum", relative_residual(formula, curvature_block_sum(spec, q, x, y, z)),
            kProductTol);
    const RiemannTensor fd = product_curvature_tensor_fd(spec, q, cfg.step);
    out.add("product formula vs finite difference", relative_residual(fd.apply(x, y, z), formula),
            kCurvatureFdTol);
    for (int k = 0; k < 2; ++k) {
      const SpaceFormSpec& f = spec.factor(k);
      const ChartPoint& p = k == 0 ? q.p1 : q.p2;
      const std::string tag = "factor " + std::to_string(k + 1) + ": ";
      const int fd_dim = f.real_dim();
      const RealVector a = random_vector(rng, fd_dim), b = random_vector(rng, fd_dim), e = random_vector(rng, fd_dim);
      out.add(tag + "curvature formula vs finite difference",
              relative_residual(curvature_fd(f, p, a, b, e, cfg.step), curvature_formula(f, p, a, b, e)),
              kCurvatureFdTol);
      out.add(tag + "holomorphic sectional curvature - 16c",
              std::abs(hol_sec_curvature(f, p, a, CurvatureSource::formula) - 16.0 * f.c), kPointwiseFdTol);
      out.add(tag + "holomorphic sectional curvature (finite difference) - 16c",
              std::abs(hol_sec_curvature(f, p, a, CurvatureSource::finite_difference, cfg.step) - 16.0 * f.c),
              kPointwiseFdTol);
      out.add(tag + "kahler residual", kahler_residual(f, p, cfg.step), kPointwiseFdTol);
    }
    return out;
  });
  accumulate(outs, cfg, doc);
}

void suite_gauss(const Context& ctx, ReportDocument& doc) {
  const RunConfig& cfg = ctx.cfg;
  const Immersion& imm = need_immersion(ctx);
  auto outs = parallel_map(cfg.samples, [&](int i) {
    std::mt19937_64 rng(sample_seed(cfg.seed, i));
    SampleOut out;
    const RealVector u = sample_u(imm, rng, cfg);
    const IntrinsicCurvature r = intrinsic_curvature_numeric(imm, ctx.spec, u, cfg.step);
    const HypersurfacePoint& pt = r.point();
    const StructuralSample ss = sample_at_point(ctx.spec, pt);
    const int m = pt.dim();
    const RealVector x = random_vector(rng, m), y = random_vector(rng, m), z = random_vector(rng, m);
    const RealVector direct = gauss_tangential_direct(ss, pt.A, x, y, z);
    out.add("gauss: intrinsic curvature vs tangential ambient + (AX^AY)Z", fd_rel(r(x, y, z), direct), kFdTol);
    out.add("gauss: A self-adjoint", (pt.A - pt.A.transpose()).norm() / std::max(1.0, pt.A.norm()),
            kSelfAdjointTol);
    out.stat("printed", scaled(gauss_rhs_closed_form(ss, pt.A, x, y, z, GaussReading::literal), direct));
    out.stat("weighted", scaled(gauss_rhs_closed_form(ss, pt.A, x, y, z, GaussReading::eps_weighted), direct));
    out.stat("printed vs intrinsic",
             fd_rel(gauss_rhs_closed_form(ss, pt.A, x, y, z, GaussReading::literal), r(x, y, z)));
    return out;
  });
  accumulate(outs, cfg, doc);
  doc.observations.push_back(observe("gauss expansion as printed: max residual vs definition form",
                                     max_of(collect(outs, "printed")), "<=", kAlgebraTol, false));
  doc.observations.push_back(observe("gauss expansion as printed: max residual vs intrinsic curvature",
                                     max_of(collect(outs, "printed vs intrinsic")), "<=", kFdTol, false));
  doc.observations.push_back(observe("gauss expansion with eps_i on the V-W terms: max residual vs definition form",
                                     max_of(collect(outs, "weighted")), "<=", kAlgebraTol, false));
}

void suite_codazzi(const Context& ctx, ReportDocument& doc) {
  const RunConfig& cfg = ctx.cfg;
  const Immersion& imm = need_immersion(ctx);
  auto outs = parallel_map(cfg.samples, [&](int i) {
    std::mt19937_64 rng(sample_seed(cfg.seed, i));
    SampleOut out;
    const RealVector u = sample_u(imm, rng, cfg);
    const NumericCodazzi d = codazzi_numeric(imm, ctx.spec, u, cfg.step);
    const StructuralSample ss = sample_at_point(ctx.spec, d.point());
    const int m = ss.dim();
    const RealVector y = random_vector(rng, m), x = random_vector(rng, m);
    const RealVector numeric = d(y, x);
    const RealVector closed = codazzi_rhs_closed_form(ss, y, x);
    out.add("codazzi: numeric vs closed form", fd_rel(numeric, closed), kFdTol);
    out.add("codazzi: closed form vs ambient curvature", scaled(closed, codazzi_rhs_from_curvature(ss, y, x)),
            kAlgebraTol);
    out.add("codazzi: numeric antisymmetry", (numeric + d(x, y)).norm(), kSelfAdjointTol);
    return out;
  });
  accumulate(outs, cfg, doc);
}

// index of the largest entry of |v|
int argmax_abs(const RealVector& v) {
  int k = 0;
  v.cwiseAbs().maxCoeff(&k);
  return k;
}

void suite_lemma1(const Context& ctx, ReportDocument& doc) {
  const RunConfig& cfg = ctx.cfg;
  const auto c = model_c(ctx.spec);
  auto outs = parallel_map(cfg.samples, [&](int i) {
    std::mt19937_64 rng(sample_seed(cfg.seed, i));
    SampleOut out;
    const StructuralSample ss = synth_structural(rng(), ctx.spec.factor1.n, ctx.spec.factor2.n, c);
    const AdaptedFrame fr = adapted_frame(ss.sd, rng());
    const int m = static_cast<int>(fr.e.size());
    double worst = -1.0;
    int worst_component = -1;
    for (int j = 0; j < m; ++j) {
      for (FrameDisplay disp : {FrameDisplay::w_e, FrameDisplay::w_phi_e, FrameDisplay::e_phi_e}) {
        const int lmax = disp == FrameDisplay::e_phi_e ? m : 1;
        for (int l = 0; l < lmax; ++l) {
          const auto args = frame_display_arguments(fr, disp, j, l);
          const RealVector oracle = codazzi_rhs_closed_form(ss, args[0], args[1]);
          const RealVector printed = frame_codazzi_rhs(ss, fr, disp, j, l, Transcription::literal);
          const double res = scaled(printed, oracle);
          out.add(std::string("lemma1 ") + to_string(disp), res, kAlgebraTol);
          if (disp == FrameDisplay::w_e) {
            out.stat("corrected", scaled(frame_codazzi_rhs(ss, fr, disp, j, l, Transcription::corrected), oracle));
            if (res > worst) {
              worst = res;
              worst_component = argmax_abs(frame_components(fr, printed - oracle));
            }
            out.add("lemma1 W-component of d(W,e_j)",
                    std::abs(fr.W.dot(oracle) - codazzi_w_component(ss, fr.e[j])) / std::max(1.0, oracle.norm()),
                    kAlgebraTol);
          }
        }
      }
    }
    out.add("codazzi: closed form vs ambient curvature",
            scaled(codazzi_rhs_closed_form(ss, fr.W, fr.e[0]), codazzi_rhs_from_curvature(ss, fr.W, fr.e[0])),
            kAlgebraTol);
    out.stat("worst", worst);
    out.stat("worst component", worst_component);
    return out;
  });
  accumulate(outs, cfg, doc);
  // component of the worst W,e mismatch, in the ordering (W, e_1, phi e_1, ...)
  const auto worst = collect(outs, "worst");
  const auto comps = collect(outs, "worst component");
  double comp = kNaN;
  if (!worst.empty()) comp = comps[std::max_element(worst.begin(), worst.end()) - worst.begin()];
  doc.observations.push_back(
      observe("lemma1 W,e: frame component of largest mismatch (0 = W, 2k-1 = e_k, 2k = phi e_k)", comp, "info", 0.0,
              false));
  doc.observations.push_back(observe("lemma1 W,e with <V,phi e_k> in place of <phi V,e_k>: max residual",
                                     max_of(collect(outs, "corrected")), "<=", kAlgebraTol, false));
}

void suite_eq20(const Context& ctx, ReportDocument& doc) {
  const RunConfig& cfg = ctx.cfg;
  const auto c = model_c(ctx.spec);
  auto outs = parallel_map(cfg.samples, [&](int i) {
    std::mt19937_64 rng(sample_seed(cfg.seed, i));
    SampleOut out;
    const StructuralSample ss = synth_structural(rng(), ctx.spec.factor1.n, ctx.spec.factor2.n, c);
    const RealVector x = random_vector(rng, ss.dim());
    const RealVector& w = ss.sd.W;
    out.add("codazzi with Y = W", scaled(codazzi_rhs_with_w(ss, x), codazzi_rhs_closed_form(ss, w, x)),
            kAlgebraTolTight);
    out.add("codazzi with Y = X = W",
            std::max(codazzi_rhs_with_w(ss, w).norm(), codazzi_rhs_closed_form(ss, w, w).norm()), kAlgebraTolTight);
    out.add("d(W,V) display", scaled(codazzi_w_v(ss), codazzi_rhs_closed_form(ss, w, ss.sd.V)), kAlgebraTolTight);
    return out;
  });
  accumulate(outs, cfg, doc);
}

void suite_obstruction(const Context& ctx, ReportDocument& doc) {
  const RunConfig& cfg = ctx.cfg;
  const Immersion& imm = need_immersion(ctx);
  const std::string numeric_name = "d(W,V): numeric vs display (|V| >= 0.05)";
  auto outs = parallel_map(cfg.samples, [&](int i) {
    std::mt19937_64 rng(sample_seed(cfg.seed, i));
    SampleOut out;
    const RealVector u = sample_u(imm, rng, cfg);
    const HypersurfacePoint pt = point_data(imm, ctx.spec, u, cfg.step);
    const StructuralSample probe = sample_at_point(ctx.spec, pt);
    if (probe.sd.V.norm() < kMinV) {
      out.skip(numeric_name, kFdTol);
      return out;
    }
    const NumericCodazzi d = codazzi_numeric(imm, ctx.spec, u, cfg.step);
    const StructuralSample ss = sample_at_point(ctx.spec, d.point());
    const RealVector numeric = d(ss.sd.W, ss.sd.V);
    out.add(numeric_name, fd_rel(numeric, codazzi_w_v(ss)), kFdTol);
    out.stat("numeric norm", numeric.norm());
    return out;
  });
  auto synth = parallel_map(cfg.samples, [&](int i) {
    std::mt19937_64 rng(sample_seed(cfg.seed ^ 0x2545f4914f6cdd1dULL, i));
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    SampleOut out;
    std::array<double, 2> c{};
    do {
      c = {unit(rng), unit(rng)};
    } while (std::abs(c[0] + c[1]) + std::abs(c[0] - c[1]) < 0.01);
    const StructuralSample ss = synth_structural(rng(), ctx.spec.factor1.n, ctx.spec.factor2.n, c);
    if (ss.sd.V.norm() >= kMinV) {
      const RealVector disp = codazzi_w_v(ss);
      out.add("d(W,V) display vs codazzi (synthesized)", scaled(disp, codazzi_rhs_closed_form(ss, ss.sd.W, ss.sd.V)),
              kAlgebraTolTight);
      out.stat("synth norm", disp.norm());
    } else {
      out.skip("d(W,V) display vs codazzi (synthesized)", kAlgebraTolTight);
    }
    const double h = unit(rng);
    const auto sol = solve_obstruction_system(h, {0.0, 0.0});
    out.add("c_1 = c_2 = 0 forced by the linear system", std::hypot(sol[0], sol[1]), kAlgebraTolTight);
    out.stat("det", std::abs(obstruction_system_determinant(h)));
    return out;
  });
  outs.insert(outs.end(), synth.begin(), synth.end());
  accumulate(outs, cfg, doc);
  const auto norms = collect(outs, "numeric norm");
  doc.observations.push_back(observe("min |d(W,V)| over immersed points with |V| >= 0.05", min_of(norms), ">", 0.0));
  doc.observations.push_back(
      observe("immersed points with |V| >= 0.05", static_cast<double>(norms.size()), ">=", 1.0));
  doc.observations.push_back(
      observe("min |d(W,V)| display over synthesized samples", min_of(collect(outs, "synth norm")), ">", 0.0));
  doc.observations.push_back(observe("min |det| of the (c_1, c_2) system", min_of(collect(outs, "det")), ">", 0.0));
}

void suite_lemma2(const Context& ctx, ReportDocument& doc) {
  const RunConfig& cfg = ctx.cfg;
  const auto c = model_c(ctx.spec);
  auto outs = parallel_map(cfg.samples, [&](int i) {
    std::mt19937_64 rng(sample_seed(cfg.seed, i));
    SampleOut out;
    const StructuralSample ss = synth_structural(rng(), ctx.spec.factor1.n, ctx.spec.factor2.n, c);
    const AdaptedFrame fr = adapted_frame(ss.sd, rng());
    for (int j = 0; j < static_cast<int>(fr.e.size()); ++j) {
      const WLambdaTerms t = w_lambda_terms(ss, fr, j);
      out.add("W lambda cancellation", std::abs(t.from_e + t.from_phi_e), kAlgebraTolTight);
      out.add("trace <L phi L e_j, e_j>", max_abs(t.trace_e), kAlgebraTolTight);
      out.add("trace <phi L phi L phi e_j, e_j>", max_abs(t.trace_phi_e), kAlgebraTolTight);
    }
    out.add("grad H formula vs frame derivatives",
            scaled(umbilic_mean_curvature_gradient(ss), gradient_from_frame(ss, fr)), kAlgebraTolTight);
    return out;
  });
  if (ctx.imm) {
    const Immersion& imm = *ctx.imm;
    auto immersed = parallel_map(cfg.samples, [&](int i) {
      std::mt19937_64 rng(sample_seed(cfg.seed ^ 0x5bd1e995ULL, i));
      SampleOut out;
      const RealVector u = sample_u(imm, rng, cfg);
      const HypersurfacePoint pt = point_data(imm, ctx.spec, u, cfg.step);
      const StructuralSample ss = sample_at_point(ctx.spec, pt);
      const RealVector formula = umbilic_mean_curvature_gradient(ss);
      // Only umbilical points are covered by the formula.
      if (umbilicity_deviation(pt) > 1e-6) {
        out.skip("immersed: numeric grad H vs formula (umbilical points)", kGradientTol);
        out.skip("immersed: |grad H formula| where V = 0", 0.0);
        return out;
      }
      const RealVector numeric = mean_curvature_gradient_numeric(imm, ctx.spec, u, cfg.step);
      out.add("immersed: numeric grad H vs formula (umbilical points)", (numeric - formula).norm(), kGradientTol);
      if (ss.sd.V.norm() == 0.0) {
        out.add("immersed: |grad H formula| where V = 0", formula.norm(), 0.0);
      } else {
        out.skip("immersed: |grad H formula| where V = 0", 0.0);
      }
      return out;
    });
    outs.insert(outs.end(), immersed.begin(), immersed.end());
  }
  accumulate(outs, cfg, doc);
}

void suite_umbilic_scan(const Context& ctx, ReportDocument& doc) {
  const RunConfig& cfg = ctx.cfg;
  const Immersion& imm = need_immersion(ctx);
  std::vector<RealVector> params(static_cast<size_t>(cfg.samples));
  for (int i = 0; i < cfg.samples; ++i) {
    std::mt19937_64 rng(sample_seed(cfg.seed, i));
    params[i] = sample_u(imm, rng, cfg);
  }
  auto outs = parallel_map(cfg.samples, [&](int i) {
    SampleOut out;
    const HypersurfacePoint pt = point_data(imm, ctx.spec, params[i], cfg.step);
    const StructuralSample ss = sample_at_point(ctx.spec, pt);
    out.add("A self-adjoint", (pt.A - pt.A.transpose()).norm() / std::max(1.0, pt.A.norm()), kSelfAdjointTol);
    const Endomorphism a2 = shape_operator_second_form(imm, ctx.spec, pt, cfg.step);
    out.add("A vs second fundamental form", (pt.A - a2).norm() / std::max(a2.norm(), 1e-6), kCurvatureFdTol);
    const double dev = umbilicity_deviation(pt);
    const double v = ss.sd.V.norm();
    out.stat("deviation", dev);
    out.stat(v >= kMinV ? "deviation V" : "deviation small V", dev);
    out.stat("H", pt.H);
    return out;
  });
  accumulate(outs, cfg, doc);
  const FInvarianceReport fi = classify_F_invariance(imm, ctx.spec, params, 1e-8, cfg.step);
  const auto at_v = collect(outs, "deviation V");
  doc.observations.push_back(observe("max |V|", fi.max_V, "info", 0.0, false));
  doc.observations.push_back(observe("max |f^2 - I|", fi.max_f2_deviation, "info", 0.0, false));
  doc.observations.push_back(observe("F-invariant (max |V| <= 1e-8)", fi.invariant ? 1.0 : 0.0, "info", 0.0, false));
  doc.observations.push_back(
      observe("F-invariance criteria agree (|V| and f^2 = I)", fi.criteria_agree ? 1.0 : 0.0, ">=", 1.0));
  doc.observations.push_back(observe("min umbilicity deviation", min_of(collect(outs, "deviation")), "info", 0.0, false));
  doc.observations.push_back(observe("min umbilicity deviation where |V| >= 0.05", min_of(at_v), ">", 0.0,
                                     !at_v.empty()));
  const auto hs = collect(outs, "H");
  doc.observations.push_back(observe("min H", min_of(hs), "info", 0.0, false));
  doc.observations.push_back(observe("max H", max_of(hs), "info", 0.0, false));
}

using SuiteFn = void (*)(const Context&, ReportDocument&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r{
      {"structure", suite_structure}, {"product-curvature", suite_product_curvature},
      {"gauss", suite_gauss},         {"codazzi", suite_codazzi},
      {"lemma1", suite_lemma1},       {"eq20", suite_eq20},
      {"obstruction", suite_obstruction}, {"lemma2", suite_lemma2},
      {"umbilic-scan", suite_umbilic_scan},
  };
  return r;
}

SuiteFn find_suite(const std::string& name) {
  for (const auto& [n, fn] : registry())
    if (n == name) return fn;
  std::string list;
  for (const auto& n : suite_names()) list += (list.empty() ? "" : ", ") + n;
  throw UsageError("unknown suite '" + name + "' (one of: " + list + ")");
}

Context make_context(const RunConfig& cfg) {
  find_suite(cfg.suite);
  if (cfg.samples < 1) throw UsageError("--samples must be >= 1");
  require_valid_step(cfg.step);
  if (cfg.tol && !(*cfg.tol >= 0.0)) throw UsageError("--tol must be non-negative");
  ProductSpec spec = parse_product_spec(cfg.model);
  std::optional<Immersion> imm;
  if (cfg.immersion) {
    imm.emplace(parse_immersion(*cfg.immersion));
    if (imm->ambient_dim() != spec.real_dim()) {
      throw UsageError("immersion '" + imm->name() + "' needs a model of real dimension " +
                       std::to_string(imm->ambient_dim()) + ", got " + std::to_string(spec.real_dim()));
    }
  }
  return Context{cfg, spec, std::move(imm)};
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [n, fn] : registry()) v.push_back(n);
    return v;
  }();
  return names;
}

void validate(const RunConfig& config) { make_context(config); }

int worker_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("VERIFY_THREADS"); env && *env) {
    const long long cap = parse_integer(env, "VERIFY_THREADS");
    if (cap < 1) throw UsageError("VERIFY_THREADS must be >= 1");
    n = static_cast<int>(std::min<long long>(n, cap));
  }
  return n;
}

std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 of the pair
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

ReportDocument run(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const Context ctx = make_context(config);
  ReportDocument doc;
  doc.config = nlohmann::ordered_json{
      {"suite", config.suite},
      {"model", ctx.spec.to_string()},
      {"immersion", ctx.imm ? nlohmann::ordered_json(ctx.imm->name()) : nlohmann::ordered_json(nullptr)},
      {"samples", config.samples},
      {"seed", config.seed},
      {"tol", config.tol ? nlohmann::ordered_json(*config.tol) : nlohmann::ordered_json(nullptr)},
      {"step", config.step},
  };
  doc.conventions = default_conventions();
  find_suite(config.suite)(ctx, doc);
  doc.finalize();
  doc.duration_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return doc;
}

}  // namespace cq
