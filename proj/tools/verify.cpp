// SPDX-License-Identifier: Apache-2.0
// verify <suite> --model <spec> [--immersion <spec>] [--samples N] [--seed S]
//        [--tol T] [--step H] [--out PATH] [--format json|csv]
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "cqverify/errors.hpp"
#include "cqverify/suites.hpp"

int main(int argc, char** argv) {
  cq::RunConfig cfg;
  std::string format = "json";

  CLI::App app{"Numerical checks for real hypersurfaces in products of complex space forms"};
  app.add_option("suite", cfg.suite, "suite to run")->required();
  app.add_option("--model", cfg.model, "product model, e.g. cp(1,c=0.0625)xcp(1,c=0.0625)")->required();
  app.add_option("--immersion", cfg.immersion, "e1 | e2(r=..) | e3(seed=..,amp=..)");
  app.add_option("--samples", cfg.samples, "number of random samples")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "64-bit seed");
  app.add_option("--tol", cfg.tol, "override every residual tolerance");
  app.add_option("--step", cfg.step, "finite-difference step in [1e-6, 1e-3]");
  app.add_option("--out", cfg.out, "write the report here instead of stdout");
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cq::kExitUsage;
  }
  cfg.format = format == "csv" ? cq::ReportFormat::csv : cq::ReportFormat::json;

  try {
    // Open the output before running so a bad path fails fast.
    std::ofstream file;
    if (cfg.out) {
      file.open(*cfg.out, std::ios::binary | std::ios::trunc);
      if (!file) throw cq::IoError("cannot open '" + *cfg.out + "' for writing");
    }
    const cq::ReportDocument report = cq::run(cfg);
    const std::string text = cq::emit(report, cfg.format);
    if (cfg.out) {
      file << text;
      file.close();
      if (!file) throw cq::IoError("failed writing '" + *cfg.out + "'");
    } else {
      std::fwrite(text.data(), 1, text.size(), stdout);
      if (std::fflush(stdout) != 0) throw cq::IoError("failed writing to stdout");
    }
    return report.overall_pass ? cq::kExitPass : cq::kExitFail;
  } catch (const cq::UsageError& e) {
    std::cerr << "verify: " << e.what() << "\n";
    return cq::kExitUsage;
  } catch (const cq::IoError& e) {
    std::cerr << "verify: " << e.what() << "\n";
    return cq::kExitIo;
  } catch (const cq::Error& e) {
    std::cerr << "verify: " << e.what() << "\n";
    return cq::kExitFail;
  }
}
