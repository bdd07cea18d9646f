// sdsieve: search for (n, M) parameters of spherical 4-distance 7-designs.
//
//   sdsieve scan --n-min 3 --n-max 215 --mode brute --out runs/brute
//   sdsieve check 7 196 --verbose
//   sdsieve bounds 7
//
// Exit status: 0 complete without survivors, 10 survivors found, 1 error or
// incomplete scan.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sdsieve/divisibility.hpp"
#include "sdsieve/formulas.hpp"
#include "sdsieve/scan.hpp"
#include "sdsieve/spectrum.hpp"

namespace {

constexpr int kExitClean = 0;
constexpr int kExitError = 1;
constexpr int kExitSurvivors = 10;

void add_policy_options(CLI::App& app, sdsieve::PrecisionPolicy& policy) {
  app.add_option("--precision-start", policy.start_bits, "Initial root precision in bits")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--precision-max", policy.max_bits, "Maximum root precision in bits")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--confirmation-width", policy.confirmation_width,
                 "Enclosure width 2^-BITS needed to call a value numerically integral")
      ->capture_default_str();
}

int run_scan(sdsieve::ScanOptions options, const std::vector<std::string>& formats,
             bool progress) {
  options.formats.clear();
  for (const auto& f : formats) options.formats.push_back(sdsieve::parse_report_format(f));
  if (options.resume && options.output_dir.empty()) {
    throw CLI::ValidationError("--resume", "requires --out");
  }
  if (progress) {
    options.on_dimension_done = [](std::int64_t n, const sdsieve::StageCounts& c) {
      std::cerr << "n=" << n << " xyzt_integer=" << c.xyzt_integer
                << " survivors=" << c.survivors << '\n';
    };
  }
  const auto report = sdsieve::scan(options);
  std::cout << sdsieve::render_summary(report);
  if (!report.survivors.empty()) return kExitSurvivors;
  if (!report.complete()) {
    std::cerr << "scan stopped before all dimensions completed; rerun with --resume\n";
    return kExitError;
  }
  return kExitClean;
}

int run_check(std::int64_t n, std::int64_t m, const sdsieve::PrecisionPolicy& policy,
              bool k_stage, bool verbose, bool json) {
  const auto report = sdsieve::check(n, m, policy, k_stage);
  if (json) {
    if (report.record) {
      std::cout << sdsieve::to_json_line(*report.record) << '\n';
    } else {
      std::cout << "{\"n\":" << n << ",\"m\":" << m << ",\"rejected\":\""
                << sdsieve::to_string(*report.rejection) << "\"}\n";
    }
  } else {
    std::cout << sdsieve::render_check(report, verbose);
  }
  return report.record && report.record->stage == sdsieve::Stage::Survivor ? kExitSurvivors
                                                                           : kExitClean;
}

int run_bounds(std::int64_t n_min, std::int64_t n_max) {
  std::cout << "n,tight_bound,absolute_bound,candidates,coarse_step,nozaki_bound\n";
  for (std::int64_t n = n_min; n <= n_max; ++n) {
    const auto b = sdsieve::cardinality_bounds(n);
    std::cout << n << ',' << b.lower << ',' << b.upper << ',' << (b.upper - b.lower) << ','
              << sdsieve::coarse_step(n) << ',' << sdsieve::nozaki_bound(n) << '\n';
  }
  return kExitClean;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sieve for spherical 4-distance 7-design parameters"};
  app.require_subcommand(1);

  sdsieve::ScanOptions scan_options;
  std::string mode = "staged";
  std::string out;
  std::vector<std::string> formats = {"jsonl", "csv", "summary"};
  std::size_t stop_after = 0;
  bool progress = false;
  auto* scan = app.add_subcommand("scan", "Scan a range of dimensions");
  scan->add_option("--n-min", scan_options.n_min, "Smallest dimension")->required();
  scan->add_option("--n-max", scan_options.n_max, "Largest dimension")->required();
  scan->add_option("--mode", mode, "staged or brute")
      ->check(CLI::IsMember({"staged", "brute"}))
      ->capture_default_str();
  scan->add_option("--out", out, "Output directory for records, ledger and summary");
  scan->add_option("--format", formats, "Report formats written to --out")
      ->delimiter(',')
      ->check(CLI::IsMember({"jsonl", "csv", "summary"}));
  add_policy_options(*scan, scan_options.policy);
  scan->add_option("--jobs", scan_options.jobs, "Worker threads (0: all cores)")
      ->capture_default_str();
  scan->add_flag("--resume", scan_options.resume, "Skip dimensions recorded in the ledger");
  scan->add_flag("--enable-k-factorization-stage", scan_options.k_factorization_stage,
                 "Refute integer Nozaki products with no bounded factorization");
  scan->add_option("--stop-after", stop_after, "Process at most K new dimensions");
  scan->add_flag("--progress", progress, "Report each finished dimension on stderr");

  std::int64_t check_n = 0, check_m = 0;
  sdsieve::PrecisionPolicy check_policy;
  bool check_k_stage = false, verbose = false, json = false;
  auto* check = app.add_subcommand("check", "Run every stage on one candidate");
  check->add_option("n", check_n, "Dimension")->required();
  check->add_option("M", check_m, "Cardinality")->required();
  add_policy_options(*check, check_policy);
  check->add_flag("--enable-k-factorization-stage", check_k_stage,
                  "Refute integer Nozaki products with no bounded factorization");
  check->add_flag("-v,--verbose", verbose, "Print enclosures and per-quantity verdicts");
  check->add_flag("--json", json, "Print the record as one JSON line");

  std::int64_t bounds_n_min = 0, bounds_n_max = 0;
  auto* bounds = app.add_subcommand("bounds", "Print the cardinality range per dimension");
  bounds->add_option("n", bounds_n_min, "Dimension (or first dimension)")->required();
  bounds->add_option("n_max", bounds_n_max, "Last dimension");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitClean : kExitError;
  }

  try {
    if (*scan) {
      scan_options.mode = sdsieve::parse_scan_mode(mode);
      scan_options.output_dir = out;
      if (stop_after > 0) scan_options.max_new_dimensions = stop_after;
      return run_scan(std::move(scan_options), formats, progress);
    }
    if (*check) return run_check(check_n, check_m, check_policy, check_k_stage, verbose, json);
    if (bounds_n_max == 0) bounds_n_max = bounds_n_min;
    if (bounds_n_min < sdsieve::kMinDimension || bounds_n_max < bounds_n_min ||
        bounds_n_max > sdsieve::kMaxDimension) {
      throw sdsieve::DomainError("invalid dimension range");
    }
    return run_bounds(bounds_n_min, bounds_n_max);
  } catch (const std::exception& e) {
    std::cerr << "sdsieve: " << e.what() << '\n';
    return kExitError;
  }
}
