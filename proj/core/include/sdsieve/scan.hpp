#pragma once

// Staged and brute-force scans over (n, M), single-candidate checks, and
// report persistence.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sdsieve/divisibility.hpp"
#include "sdsieve/formulas.hpp"
#include "sdsieve/record.hpp"
#include "sdsieve/spectrum.hpp"

namespace sdsieve {

enum class ReportFormat { Jsonl, Csv, Summary };
ReportFormat parse_report_format(std::string_view text);

struct ScanOptions {
  std::int64_t n_min = 3;
  std::int64_t n_max = 3;
  ScanMode mode = ScanMode::Staged;
  PrecisionPolicy policy;
  bool k_factorization_stage = false;
  unsigned jobs = 0;  // 0: one worker per hardware thread
  std::filesystem::path output_dir;  // empty: nothing is persisted
  std::vector<ReportFormat> formats = {ReportFormat::Jsonl, ReportFormat::Csv,
                                       ReportFormat::Summary};
  bool resume = false;
  // Stop after this many newly processed dimensions (the rest stay pending).
  std::optional<std::size_t> max_new_dimensions;
  std::function<void(std::int64_t n, const StageCounts&)> on_dimension_done;
};

struct DimensionResult {
  std::int64_t n = 0;
  StageCounts counts;
  std::vector<SieveRecord> records;  // ascending M
};

// Everything one dimension contributes; pure and thread-safe.
DimensionResult scan_dimension(std::int64_t n, ScanMode mode, const PrecisionPolicy& policy,
                               bool k_factorization_stage);

// Throws DomainError on an empty or invalid range, LedgerError on a corrupt
// ledger, std::runtime_error on I/O failure.
ScanReport scan(const ScanOptions& options);

// Full audit of one candidate that reached the XYZT stage.
SieveRecord analyze_candidate(const DesignCandidate& c, const DerivedQuantities& q,
                              const PrecisionPolicy& policy, bool k_factorization_stage,
                              StageCounts* counts = nullptr);

struct CheckReport {
  std::int64_t n = 0;
  std::int64_t m = 0;
  std::optional<RejectReason> rejection;
  std::optional<DerivedQuantities> derived;
  std::optional<FineSieveResult> fine;
  bool coarse_passed = false;
  std::optional<ExactRational> xyzt;
  std::optional<ExactRational> nozaki;
  std::optional<bool> k_factorization_feasible;
  std::optional<SpectrumAnalysis> analysis;
  std::int64_t nozaki_bound = 0;
  std::optional<SieveRecord> record;  // absent when rejected
};

CheckReport check(std::int64_t n, std::int64_t m, const PrecisionPolicy& policy,
                  bool k_factorization_stage = false);
std::string render_check(const CheckReport& report, bool verbose);

std::string render_jsonl(std::span<const SieveRecord> records);
std::string render_csv(std::span<const SieveRecord> records);

// Writes records.jsonl, records.csv and/or summary.txt into dir. Each file is
// written to a temporary name and renamed; on failure temporaries are removed.
void write_report(const ScanReport& report, const std::filesystem::path& dir,
                  std::span<const ReportFormat> formats);

}  // namespace sdsieve
