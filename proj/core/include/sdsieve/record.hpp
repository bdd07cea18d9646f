#pragma once

// Per-candidate audit records and scan reports, with their JSONL, CSV and
// text renderings.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sdsieve {

// First failing stage, or Survivor when no certified refutation triggered.
enum class Stage {
  CoarseSieve,
  FineSieve,
  XYZTIntegrality,
  NozakiIntegrality,
  NozakiFactorization,
  SpectrumAnalysis,
  Survivor,
};

std::string_view to_string(Stage s);
Stage parse_stage(std::string_view text);

enum class ScanMode { Staged, Brute };
std::string_view to_string(ScanMode m);
ScanMode parse_scan_mode(std::string_view text);

struct LemmaRecord {
  std::string case_label;
  bool passed = false;

  friend bool operator==(const LemmaRecord&, const LemmaRecord&) = default;
};

// Decimal endpoints rounded outward.
using EnclosureText = std::pair<std::string, std::string>;

struct SieveRecord {
  std::int64_t n = 0;
  std::int64_t m = 0;
  Stage stage = Stage::CoarseSieve;
  std::optional<LemmaRecord> lemma3;
  std::optional<LemmaRecord> lemma5;
  std::optional<std::string> xyzt;  // exact rational, "p" or "p/q"
  bool xyzt_integer = false;
  std::optional<std::string> nozaki;
  bool nozaki_integer = false;
  std::optional<bool> k_factorization_feasible;  // only with the optional stage enabled
  std::vector<EnclosureText> roots;
  std::vector<EnclosureText> distances;  // X, Y, Z, T
  std::vector<EnclosureText> nozaki_coefficients;
  std::optional<std::string> refutation;
  std::optional<std::string> spectrum;  // outcome of the spectrum analysis, if run
  unsigned precision_bits = 0;

  friend bool operator==(const SieveRecord&, const SieveRecord&) = default;
};

// One JSON object, no trailing newline. Keys are emitted in a fixed order.
std::string to_json_line(const SieveRecord& r);
SieveRecord parse_json_line(const std::string& line);

std::string csv_header();
std::string to_csv_row(const SieveRecord& r);

struct StageCounts {
  std::uint64_t candidates = 0;  // M values in range
  std::uint64_t coarse_rejected = 0;
  std::uint64_t fine_rejected = 0;
  std::uint64_t lemma3_overlaps = 0;   // candidates matching two Lemma-3 guards
  std::uint64_t lemma3_uncovered = 0;  // candidates matching none
  std::uint64_t r_zero = 0;
  std::uint64_t xyzt_rejected = 0;
  std::uint64_t xyzt_integer = 0;
  std::uint64_t nozaki_integer = 0;
  std::uint64_t nozaki_only = 0;  // Nozaki integer while XYZT is not
  std::uint64_t nozaki_rejected = 0;
  std::uint64_t factorization_rejected = 0;
  std::uint64_t spectrum_analyzed = 0;
  std::uint64_t spectrum_refuted = 0;
  std::uint64_t survivors = 0;
  std::uint64_t undecided = 0;

  StageCounts& operator+=(const StageCounts& o);
  friend bool operator==(const StageCounts&, const StageCounts&) = default;
};

std::string to_json(const StageCounts& c);
StageCounts parse_stage_counts(const std::string& json);

struct ScanReport {
  std::int64_t n_min = 0;
  std::int64_t n_max = 0;
  ScanMode mode = ScanMode::Staged;
  bool k_factorization_stage = false;
  StageCounts counts;
  std::vector<SieveRecord> records;  // ordered by (n, M)
  std::vector<std::pair<std::int64_t, std::int64_t>> xyzt_passing;
  std::vector<std::pair<std::int64_t, std::int64_t>> nozaki_passing;
  std::vector<std::pair<std::int64_t, std::int64_t>> survivors;
  std::map<std::int64_t, std::vector<std::int64_t>> multi_m_dimensions;  // >= 2 XYZT-passing M
  std::size_t dimensions_completed = 0;

  bool complete() const {
    return dimensions_completed == static_cast<std::size_t>(n_max - n_min + 1);
  }
};

// Derives the candidate lists from records (counts come from the scan).
void summarize_records(ScanReport& report);

std::string render_summary(const ScanReport& report);

}  // namespace sdsieve
