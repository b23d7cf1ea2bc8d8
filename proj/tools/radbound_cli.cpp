// Command-line front end: pattern generation, norm estimation, bound
// evaluation, decomposition certificates, invariant verification and
// calibration campaigns.

#include <chrono>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "radbound/radbound.hpp"

namespace {

using namespace radbound;

int run_items(const std::vector<CampaignConfig>& items) {
  bool ok = true;
  for (const CampaignConfig& cfg : items) {
    std::vector<ReportRecord> records;
    std::vector<double> runtimes;
    for (const std::string& q : cfg.quantities) {
      const auto t0 = std::chrono::steady_clock::now();
      CampaignConfig one = cfg;
      one.quantities = {q};
      std::vector<ReportRecord> rs = run_campaign(one);
      const auto t1 = std::chrono::steady_clock::now();
      for (ReportRecord& r : rs) {
        records.push_back(std::move(r));
        runtimes.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
      }
    }
    ok = ok && all_pass(records);
    if (cfg.out.empty()) {
      write_reports(records, runtimes, cfg, std::cout);
    } else {
      std::ofstream out(cfg.out);
      if (!out) {
        std::cerr << "cannot write " << cfg.out << '\n';
        return 2;
      }
      write_reports(records, runtimes, cfg, out);
    }
    for (const ReportRecord& r : records)
      if (!r.pass) std::cerr << "FAILED: " << r.quantity << '\n';
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"operator-norm bounds for random sign matrices"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  CampaignConfig base;
  std::string pattern;
  app.add_option("--seed", base.seed, "root seed for all sampling")->capture_default_str();
  app.add_option("--samples", base.samples, "Monte Carlo samples")->capture_default_str();
  app.add_option("--threads", base.threads, "worker threads")->capture_default_str();
  app.add_option("--tol", base.tol, "norm solver tolerance")->capture_default_str();
  app.add_option("--format", base.format, "json or csv")->capture_default_str();
  app.add_option("--out", base.out, "report output path (default stdout)");

  auto add_pattern = [&pattern](CLI::App* sub) {
    sub->add_option("--pattern", pattern, "pattern spec, e.g. circulant:n=32,offsets=1,2")
        ->required();
  };

  auto* gen = app.add_subcommand("gen", "generate a pattern and write its text form");
  add_pattern(gen);

  auto* norm = app.add_subcommand("norm", "operator norm of a pattern");
  add_pattern(norm);

  auto* radnorm = app.add_subcommand("radnorm", "Rademacher p-norm estimate");
  double rad_p = 0.0;
  add_pattern(radnorm);
  radnorm->add_option("--p", rad_p, "moment order (default log(n+1))");

  auto* bounds = app.add_subcommand("bounds", "closed-form bound evaluations");
  double bounds_p = 0.0;
  add_pattern(bounds);
  bounds->add_option("--p", bounds_p, "moment order for graph bounds (default log(n+1))");

  auto* decompose = app.add_subcommand("decompose", "cube cover and dyadic split certificates");
  std::string blocks_dir;
  add_pattern(decompose);
  decompose->add_option("--emit-blocks", blocks_dir, "directory for B_k pattern files");

  auto* verify = app.add_subcommand("verify", "invariant and certificate checks");
  std::string config_path;
  verify->add_option("--pattern", pattern, "pattern spec");
  verify->add_option("--config", config_path, "campaign config file ([item] sections)");

  auto* calibrate = app.add_subcommand("calibrate", "write ratio-envelope calibration data");
  std::string calib_out = "data/calibration.json";
  calibrate->add_option("--out", calib_out, "calibration file path")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      const PatternInstance pat = parse_pattern(pattern);
      if (base.out.empty()) {
        pat.matrix.write_text(std::cout);
      } else {
        std::ofstream out(base.out);
        pat.matrix.write_text(out);
      }
      return 0;
    }
    if (calibrate->parsed()) {
      const CalibrationResult res = run_calibration(base.seed, base.threads);
      write_json_file(calib_out, res.doc);
      std::cout << "wrote " << calib_out << '\n';
      return 0;
    }
    if (verify->parsed() && !config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) {
        std::cerr << "cannot open " << config_path << '\n';
        return 2;
      }
      return run_items(parse_campaign_file(in, base));
    }

    base.pattern = pattern;
    if (norm->parsed()) base.quantities = {"norm"};
    if (radnorm->parsed())
      base.quantities = {rad_p > 0.0 ? "radnorm:p=" + std::to_string(rad_p) : "radnorm"};
    if (bounds->parsed())
      base.quantities = {bounds_p > 0.0 ? "bounds:p=" + std::to_string(bounds_p) : "bounds"};
    if (decompose->parsed()) {
      base.quantities = {"decompose"};
      base.emit_blocks_dir = blocks_dir;
    }
    if (verify->parsed()) base.quantities = {"verify"};
    if (base.pattern.empty()) {
      std::cerr << "no pattern given\n";
      return 2;
    }
    return run_items({base});
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  }
}
