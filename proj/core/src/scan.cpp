#include "sdsieve/scan.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "sdsieve/ledger.hpp"
#include "sdsieve/stepper.hpp"

namespace sdsieve {

namespace fs = std::filesystem;

ReportFormat parse_report_format(std::string_view text) {
  if (text == "jsonl") return ReportFormat::Jsonl;
  if (text == "csv") return ReportFormat::Csv;
  if (text == "summary") return ReportFormat::Summary;
  throw DomainError("unknown report format '" + std::string(text) + "'");
}

namespace {

std::vector<EnclosureText> enclosure_texts(std::span<const Interval* const> values) {
  std::vector<EnclosureText> out;
  out.reserve(values.size());
  for (const auto* v : values) out.emplace_back(v->lo_decimal(), v->hi_decimal());
  return out;
}

template <class Case>
LemmaRecord lemma_record(const LemmaVerdict<Case>& v) {
  return {std::string(to_string(v.case_label)), v.passed};
}

template <class Case>
std::string lemma_refutation(std::string_view lemma, const LemmaVerdict<Case>& v) {
  return std::string(lemma) + " case " + std::string(to_string(v.case_label)) + " requires " +
         v.required_divisibility;
}

struct Exact {
  ExactRational xyzt;
  ExactRational nozaki;
};

// Fills the nozaki/factorization/spectrum part of a record whose XYZT and
// Nozaki products are defined, given the stage reached so far.
void complete_record(SieveRecord& r, const DesignCandidate& c, const Exact& exact,
                     const SpectrumAnalysis& analysis, bool k_factorization_stage,
                     StageCounts* counts) {
  StageCounts scratch;
  StageCounts& k = counts ? *counts : scratch;

  r.xyzt = exact.xyzt.to_string();
  r.xyzt_integer = exact.xyzt.is_integer();
  r.nozaki = exact.nozaki.to_string();
  r.nozaki_integer = exact.nozaki.is_integer();

  if (analysis.spectrum) r.roots = enclosure_texts(analysis.spectrum->roots());
  if (analysis.distribution) r.distances = enclosure_texts(analysis.distribution->values());
  if (analysis.nozaki) r.nozaki_coefficients = enclosure_texts(analysis.nozaki->values());
  r.spectrum = std::string(to_string(analysis.outcome));
  r.precision_bits = analysis.precision_bits;
  ++k.spectrum_analyzed;
  if (analysis.outcome == AnalysisOutcome::Refuted) ++k.spectrum_refuted;

  if (r.stage != Stage::XYZTIntegrality) return;  // refuted before this point
  if (!r.xyzt_integer) {
    r.refutation = "XYZT is not an integer";
    return;
  }
  if (!r.nozaki_integer) {
    r.stage = Stage::NozakiIntegrality;
    r.refutation = "Nozaki product is not an integer";
    ++k.nozaki_rejected;
    return;
  }
  if (k_factorization_stage) {
    const auto bound = nozaki_bound(c.n());
    r.k_factorization_feasible = nozaki_factorization_feasible(exact.nozaki.numerator(), bound);
    if (!*r.k_factorization_feasible) {
      r.stage = Stage::NozakiFactorization;
      r.refutation = "Nozaki product " + r.nozaki.value() +
                     " has no four factors summing to 1 within bound " + std::to_string(bound);
      ++k.factorization_rejected;
      return;
    }
  }
  if (analysis.outcome == AnalysisOutcome::Refuted) {
    r.stage = Stage::SpectrumAnalysis;
    r.refutation = analysis.refutation;
    return;
  }
  r.stage = Stage::Survivor;
  ++k.survivors;
  if (analysis.outcome == AnalysisOutcome::Undecided) ++k.undecided;
}

}  // namespace

SieveRecord analyze_candidate(const DesignCandidate& c, const DerivedQuantities& q,
                              const PrecisionPolicy& policy, bool k_factorization_stage,
                              StageCounts* counts) {
  SieveRecord r;
  r.n = c.n();
  r.m = c.m();
  r.stage = Stage::XYZTIntegrality;
  const Exact exact{xyzt_product(c, q), nozaki_product(c, q)};
  complete_record(r, c, exact, full_candidate_analysis(c, q, policy), k_factorization_stage,
                  counts);
  return r;
}

namespace {

// Exact XYZT integrality for one dimension with the n-dependent factors
// precomputed; avoids building the reduced fraction.
class XyztTest {
 public:
  explicit XyztTest(std::int64_t n) : r_(r_coefficients(n)), n_term_(big(n) * (n + 1) * (n + 5)) {
    const BigInt bn = big(n);
    num_const_ = pow(bn - 1, 2) * pow(bn + 4, 4);
    den_const_ = 54 * pow(bn, 4) * pow(bn + 1, 2);
  }

  // Returns false when R(n, M) = 0.
  bool operator()(std::int64_t m, bool& integer) {
    r_value_ = evaluate_r(r_, m);
    if (r_value_ == 0) return false;
    a_ = 6 * big(m) - n_term_;
    mpz_pow_ui(num_.get_mpz_t(), a_.get_mpz_t(), 7);
    num_ *= num_const_;
    const BigInt bm = big(m);
    num_ *= bm * bm * bm;
    den_ = den_const_ * r_value_;
    integer = mpz_divisible_p(num_.get_mpz_t(), den_.get_mpz_t()) != 0;
    return true;
  }

 private:
  std::array<BigInt, 7> r_;
  BigInt n_term_, num_const_, den_const_;
  BigInt r_value_, a_, num_, den_;
};

DimensionResult scan_staged(std::int64_t n, const PrecisionPolicy& policy,
                            bool k_factorization_stage) {
  DimensionResult out;
  out.n = n;
  auto& k = out.counts;
  const auto bounds = cardinality_bounds(n);
  k.candidates = static_cast<std::uint64_t>(bounds.upper - bounds.lower);

  const std::int64_t step = coarse_step(n);
  XyztTest xyzt_test(n);
  std::uint64_t coarse_passed = 0;
  for (std::int64_t m = (bounds.lower / step + 1) * step; m <= bounds.upper; m += step) {
    ++coarse_passed;
    const DesignCandidate c(n, m);
    const auto fine = fine_sieve(c);
    if (fine.lemma3.matched_guards.size() > 1) ++k.lemma3_overlaps;
    if (fine.lemma3.case_label == Lemma3Case::Uncovered) ++k.lemma3_uncovered;
    if (!fine.passed) {
      ++k.fine_rejected;
      continue;
    }
    bool integer = false;
    if (!xyzt_test(m, integer)) {
      ++k.r_zero;
      ++k.xyzt_rejected;
      continue;
    }
    if (!integer) {
      ++k.xyzt_rejected;
      continue;
    }
    ++k.xyzt_integer;
    auto record = analyze_candidate(c, derived_quantities(c), policy, k_factorization_stage, &k);
    if (!record.xyzt_integer) {
      throw std::logic_error("XYZT integrality disagrees with the reduced fraction at n=" +
                             std::to_string(n) + " M=" + std::to_string(m));
    }
    record.lemma3 = lemma_record(fine.lemma3);
    record.lemma5 = lemma_record(fine.lemma5);
    if (record.nozaki_integer) ++k.nozaki_integer;
    out.records.push_back(std::move(record));
  }
  k.coarse_rejected = k.candidates - coarse_passed;
  return out;
}

DimensionResult scan_brute(std::int64_t n, const PrecisionPolicy& policy,
                           bool k_factorization_stage) {
  DimensionResult out;
  out.n = n;
  auto& k = out.counts;
  const auto bounds = cardinality_bounds(n);
  k.candidates = static_cast<std::uint64_t>(bounds.upper - bounds.lower);

  IntegralityStepper stepper(n, bounds.lower + 1, bounds.upper);
  for (std::int64_t m = bounds.lower + 1;; ++m) {
    const auto s = stepper.evaluate();
    if (s.r_zero) {
      ++k.r_zero;
      ++k.xyzt_rejected;
    } else {
      if (s.xyzt_integer) ++k.xyzt_integer;
      else ++k.xyzt_rejected;
      if (s.nozaki_integer) ++k.nozaki_integer;
      if (s.nozaki_integer && !s.xyzt_integer) ++k.nozaki_only;
      if (s.xyzt_integer || s.nozaki_integer) {
        const DesignCandidate c(n, m);
        auto record = analyze_candidate(c, derived_quantities(c), policy, k_factorization_stage,
                                        &k);
        if (record.xyzt_integer != s.xyzt_integer || record.nozaki_integer != s.nozaki_integer) {
          throw std::logic_error("stepper disagrees with exact arithmetic at n=" +
                                 std::to_string(n) + " M=" + std::to_string(m));
        }
        out.records.push_back(std::move(record));
      }
    }
    if (m == bounds.upper) break;
    stepper.advance();
  }
  return out;
}

}  // namespace

DimensionResult scan_dimension(std::int64_t n, ScanMode mode, const PrecisionPolicy& policy,
                               bool k_factorization_stage) {
  if (n < kMinDimension || n > kMaxDimension) {
    throw DomainError("dimension " + std::to_string(n) + " outside supported range");
  }
  return mode == ScanMode::Staged ? scan_staged(n, policy, k_factorization_stage)
                                  : scan_brute(n, policy, k_factorization_stage);
}

// ---------------------------------------------------------------------------
// Persistence

std::string render_jsonl(std::span<const SieveRecord> records) {
  std::string out;
  for (const auto& r : records) {
    out += to_json_line(r);
    out += '\n';
  }
  return out;
}

std::string render_csv(std::span<const SieveRecord> records) {
  std::string out = csv_header() + '\n';
  for (const auto& r : records) {
    out += to_csv_row(r);
    out += '\n';
  }
  return out;
}

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

fs::path temporary_for(const fs::path& path) {
  auto tmp = path;
  tmp += ".tmp";
  return tmp;
}

void write_file_atomic(const fs::path& path, const std::string& contents) {
  const auto tmp = temporary_for(path);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << contents;
    out.flush();
    if (!out) {
      out.close();
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw std::runtime_error("cannot write " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw std::runtime_error("cannot rename " + tmp.string() + ": " + ec.message());
  }
}

fs::path dims_dir(const fs::path& dir) { return dir / "dims"; }
fs::path dim_records_path(const fs::path& dir, std::int64_t n) {
  return dims_dir(dir) / ("n" + std::to_string(n) + ".jsonl");
}
fs::path dim_stats_path(const fs::path& dir, std::int64_t n) {
  return dims_dir(dir) / ("n" + std::to_string(n) + ".stats.json");
}
fs::path settings_path(const fs::path& dir) { return dir / "scan.json"; }

constexpr std::string_view kReportFiles[] = {"records.jsonl", "records.csv", "summary.txt"};

std::string settings_json(const ScanOptions& o) {
  nlohmann::ordered_json j;
  j["mode"] = std::string(to_string(o.mode));
  j["k_factorization_stage"] = o.k_factorization_stage;
  j["precision_start"] = o.policy.start_bits;
  j["precision_max"] = o.policy.max_bits;
  j["confirmation_width"] = o.policy.confirmation_width;
  return j.dump() + '\n';
}

void prepare_output(const ScanOptions& o) {
  const auto& dir = o.output_dir;
  std::error_code ec;
  fs::create_directories(dims_dir(dir), ec);
  if (ec) throw std::runtime_error("cannot create " + dims_dir(dir).string() + ": " + ec.message());

  const auto settings = settings_json(o);
  if (o.resume && fs::exists(settings_path(dir))) {
    if (read_file(settings_path(dir)) != settings) {
      throw std::runtime_error("cannot resume: " + settings_path(dir).string() +
                               " records different scan settings");
    }
    return;
  }
  if (!o.resume) {
    // Only files this tool writes are removed.
    fs::remove(ledger_path(dir));
    for (const auto& entry : fs::directory_iterator(dims_dir(dir))) {
      const auto name = entry.path().filename().string();
      if (name.starts_with('n') && (name.ends_with(".jsonl") || name.ends_with(".stats.json") ||
                                    name.ends_with(".tmp"))) {
        fs::remove(entry.path());
      }
    }
    for (const auto name : kReportFiles) fs::remove(dir / name);
  }
  write_file_atomic(settings_path(dir), settings);
}

DimensionResult load_dimension(const fs::path& dir, const LedgerEntry& entry) {
  const auto text = read_file(dim_records_path(dir, entry.n));
  if (crc32(text) != entry.checksum) {
    throw std::runtime_error("checksum mismatch for " + dim_records_path(dir, entry.n).string() +
                             " against the ledger");
  }
  DimensionResult d;
  d.n = entry.n;
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) d.records.push_back(parse_json_line(line));
  if (d.records.size() != entry.records) {
    throw std::runtime_error("record count mismatch for dimension " + std::to_string(entry.n));
  }
  d.counts = parse_stage_counts(read_file(dim_stats_path(dir, entry.n)));
  return d;
}

void commit_dimension(const fs::path& dir, const DimensionResult& d) {
  const auto text = render_jsonl(d.records);
  write_file_atomic(dim_records_path(dir, d.n), text);
  write_file_atomic(dim_stats_path(dir, d.n), to_json(d.counts) + '\n');
  append_ledger(ledger_path(dir), {d.n, d.records.size(), crc32(text)});
}

}  // namespace

void write_report(const ScanReport& report, const fs::path& dir,
                  std::span<const ReportFormat> formats) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  for (const auto format : formats) {
    switch (format) {
      case ReportFormat::Jsonl:
        write_file_atomic(dir / "records.jsonl", render_jsonl(report.records));
        break;
      case ReportFormat::Csv:
        write_file_atomic(dir / "records.csv", render_csv(report.records));
        break;
      case ReportFormat::Summary:
        write_file_atomic(dir / "summary.txt", render_summary(report));
        break;
    }
  }
}

ScanReport scan(const ScanOptions& o) {
  if (o.n_min < kMinDimension) throw DomainError("n_min must be at least 3");
  if (o.n_min > o.n_max) throw DomainError("empty dimension range: n_min > n_max");
  const std::int64_t limit =
      o.mode == ScanMode::Brute ? IntegralityStepper::kMaxDimension : kMaxDimension;
  if (o.n_max > limit) {
    throw DomainError("n_max above the supported maximum " + std::to_string(limit));
  }
  if (o.policy.start_bits == 0 || o.policy.max_bits < o.policy.start_bits) {
    throw DomainError("precision policy requires 0 < start <= max");
  }

  const bool persist = !o.output_dir.empty();
  std::map<std::int64_t, DimensionResult> results;
  if (persist) {
    prepare_output(o);
    if (o.resume) {
      for (const auto& [n, entry] : read_ledger(ledger_path(o.output_dir))) {
        if (n >= o.n_min && n <= o.n_max) results.emplace(n, load_dimension(o.output_dir, entry));
      }
    }
  }

  // Largest dimensions first: they dominate the running time.
  std::vector<std::int64_t> pending;
  for (std::int64_t n = o.n_max; n >= o.n_min; --n)
    if (!results.contains(n)) pending.push_back(n);
  if (o.max_new_dimensions && pending.size() > *o.max_new_dimensions)
    pending.resize(*o.max_new_dimensions);

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex commit;
  auto worker = [&] {
    while (!failed.load()) {
      const auto i = next.fetch_add(1);
      if (i >= pending.size()) return;
      try {
        auto d = scan_dimension(pending[i], o.mode, o.policy, o.k_factorization_stage);
        const std::lock_guard lock(commit);
        if (persist) commit_dimension(o.output_dir, d);
        if (o.on_dimension_done) o.on_dimension_done(d.n, d.counts);
        results.emplace(d.n, std::move(d));
      } catch (...) {
        const std::lock_guard lock(commit);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  unsigned jobs = o.jobs ? o.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(1, pending.size())));
  {
    std::vector<std::jthread> pool;
    for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
  }
  if (error) std::rethrow_exception(error);

  ScanReport report;
  report.n_min = o.n_min;
  report.n_max = o.n_max;
  report.mode = o.mode;
  report.k_factorization_stage = o.k_factorization_stage;
  for (auto& [n, d] : results) {
    report.counts += d.counts;
    std::ranges::move(d.records, std::back_inserter(report.records));
  }
  report.dimensions_completed = results.size();
  summarize_records(report);
  if (persist) write_report(report, o.output_dir, o.formats);
  return report;
}

// ---------------------------------------------------------------------------
// Single-candidate check

CheckReport check(std::int64_t n, std::int64_t m, const PrecisionPolicy& policy,
                  bool k_factorization_stage) {
  CheckReport out;
  out.n = n;
  out.m = m;
  out.rejection = validate_candidate(n, m);
  if (out.rejection) return out;

  const DesignCandidate c(n, m);
  const auto q = derived_quantities(c);
  out.derived = q;
  out.fine = fine_sieve(c);
  out.coarse_passed = coarse_sieve(c);
  out.nozaki_bound = nozaki_bound(n);
  out.analysis = full_candidate_analysis(c, q, policy);

  SieveRecord r;
  r.n = n;
  r.m = m;
  r.lemma3 = lemma_record(out.fine->lemma3);
  r.lemma5 = lemma_record(out.fine->lemma5);
  if (!out.fine->lemma3.passed) {
    r.stage = Stage::FineSieve;
    r.refutation = lemma_refutation("lemma3", out.fine->lemma3);
  } else if (!out.fine->lemma5.passed) {
    r.stage = Stage::FineSieve;
    r.refutation = lemma_refutation("lemma5", out.fine->lemma5);
  } else if (!out.coarse_passed) {
    r.stage = Stage::CoarseSieve;
    r.refutation = "n | 12M and n+1 | 4M^2 do not both hold";
  } else {
    r.stage = Stage::XYZTIntegrality;
  }

  if (q.r == 0) {
    if (r.stage == Stage::XYZTIntegrality) r.refutation = "R(n, M) = 0";
    r.spectrum = std::string(to_string(out.analysis->outcome));
    r.precision_bits = out.analysis->precision_bits;
    out.record = std::move(r);
    return out;
  }
  const Exact exact{xyzt_product(c, q), nozaki_product(c, q)};
  out.xyzt = exact.xyzt;
  out.nozaki = exact.nozaki;
  if (exact.nozaki.is_integer()) {
    out.k_factorization_feasible =
        nozaki_factorization_feasible(exact.nozaki.numerator(), out.nozaki_bound);
  }
  complete_record(r, c, exact, *out.analysis, k_factorization_stage, nullptr);
  out.record = std::move(r);
  return out;
}

namespace {

void print_enclosures(std::ostream& os, std::string_view label,
                      std::span<const std::string_view> names,
                      std::span<const Interval* const> values, bool verbose) {
  os << label << ":\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    os << "  " << names[i] << " = ";
    if (verbose) {
      os << '[' << values[i]->lo_decimal() << ", " << values[i]->hi_decimal() << ']';
    } else {
      os << values[i]->midpoint().get_d();
    }
    os << '\n';
  }
}

}  // namespace

std::string render_check(const CheckReport& report, bool verbose) {
  std::ostringstream os;
  os.precision(10);
  os << "n = " << report.n << ", M = " << report.m << '\n';
  if (report.rejection) {
    os << "rejected: " << to_string(*report.rejection) << '\n';
    return os.str();
  }
  const auto bounds = cardinality_bounds(report.n);
  os << "range: " << bounds.lower << " < M <= " << bounds.upper << '\n';
  const auto& q = *report.derived;
  os << "A = " << q.a << "\nB = " << q.b << '\n';
  os << "quartic: (" << q.quartic[0] << ", " << q.quartic[1] << ", " << q.quartic[2] << ", "
     << q.quartic[3] << ", " << q.quartic[4] << ")\n";
  os << "R(n, M) = " << q.r << '\n';
  const auto& fine = *report.fine;
  os << "lemma3: case " << to_string(fine.lemma3.case_label) << ", "
     << fine.lemma3.required_divisibility << ": " << (fine.lemma3.passed ? "pass" : "fail") << '\n';
  os << "lemma5: case " << to_string(fine.lemma5.case_label) << ", "
     << fine.lemma5.required_divisibility << ": " << (fine.lemma5.passed ? "pass" : "fail") << '\n';
  os << "coarse sieve (n | 12M, n+1 | 4M^2): " << (report.coarse_passed ? "pass" : "fail") << '\n';
  if (report.xyzt) {
    os << "XYZT = " << report.xyzt->to_string() << (report.xyzt->is_integer() ? " (integer)" : "")
       << '\n';
    os << "k_a k_b k_c k_d = " << report.nozaki->to_string()
       << (report.nozaki->is_integer() ? " (integer)" : "") << '\n';
  }
  os << "Nozaki bound: " << report.nozaki_bound << '\n';
  if (report.k_factorization_feasible) {
    os << "k factorization within bound: " << (*report.k_factorization_feasible ? "yes" : "no")
       << '\n';
  }

  const auto& a = *report.analysis;
  os << "spectrum: " << to_string(a.spectrum_status) << " at " << a.precision_bits << " bits\n";
  if (a.spectrum) {
    constexpr std::string_view names[] = {"a", "b", "c", "d"};
    print_enclosures(os, "roots", names, a.spectrum->roots(), verbose);
  }
  if (a.distribution) {
    constexpr std::string_view names[] = {"X", "Y", "Z", "T"};
    print_enclosures(os, "distance distribution", names, a.distribution->values(), verbose);
  }
  if (a.nozaki) {
    constexpr std::string_view names[] = {"k_a", "k_b", "k_c", "k_d"};
    print_enclosures(os, "Nozaki coefficients", names, a.nozaki->values(), verbose);
  }
  if (verbose) {
    for (const auto& v : a.verdicts) {
      os << "  " << v.quantity << ": " << to_string(v.verdict.outcome);
      if (v.verdict.outcome == IntegralityOutcome::NumericallyInteger) os << " " << v.verdict.value;
      os << '\n';
    }
  }
  os << "spectrum analysis: " << to_string(a.outcome);
  if (!a.refutation.empty()) os << " (" << a.refutation << ")";
  os << '\n';

  const auto& r = *report.record;
  os << "stage: " << to_string(r.stage) << '\n';
  os << "verdict: " << (r.refutation ? "refuted, " + *r.refutation : std::string("survivor")) << '\n';
  return os.str();
}

}  // namespace sdsieve
