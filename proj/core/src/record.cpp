#include "sdsieve/record.hpp"

#include <array>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "sdsieve/exact.hpp"

namespace sdsieve {

using json = nlohmann::ordered_json;

namespace {

constexpr std::array<std::pair<Stage, std::string_view>, 7> kStageNames = {{
    {Stage::CoarseSieve, "CoarseSieve"},
    {Stage::FineSieve, "FineSieve"},
    {Stage::XYZTIntegrality, "XYZTIntegrality"},
    {Stage::NozakiIntegrality, "NozakiIntegrality"},
    {Stage::NozakiFactorization, "NozakiFactorization"},
    {Stage::SpectrumAnalysis, "SpectrumAnalysis"},
    {Stage::Survivor, "Survivor"},
}};

json enclosures_to_json(const std::vector<EnclosureText>& v) {
  json out = json::array();
  for (const auto& [lo, hi] : v) out.push_back(json::array({lo, hi}));
  return out;
}

std::vector<EnclosureText> enclosures_from_json(const json& j) {
  std::vector<EnclosureText> out;
  for (const auto& e : j) out.emplace_back(e.at(0).get<std::string>(), e.at(1).get<std::string>());
  return out;
}

json optional_string(const std::optional<std::string>& s) { return s ? json(*s) : json(nullptr); }

std::optional<std::string> string_or_null(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<std::string>();
}

json lemma_to_json(const std::optional<LemmaRecord>& l) {
  if (!l) return nullptr;
  return json{{"case", l->case_label}, {"passed", l->passed}};
}

std::optional<LemmaRecord> lemma_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  return LemmaRecord{j.at("case").get<std::string>(), j.at("passed").get<bool>()};
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string_view to_string(Stage s) {
  for (const auto& [stage, name] : kStageNames)
    if (stage == s) return name;
  return "?";
}

Stage parse_stage(std::string_view text) {
  for (const auto& [stage, name] : kStageNames)
    if (name == text) return stage;
  throw DomainError("unknown stage '" + std::string(text) + "'");
}

std::string_view to_string(ScanMode m) { return m == ScanMode::Staged ? "staged" : "brute"; }

ScanMode parse_scan_mode(std::string_view text) {
  if (text == "staged") return ScanMode::Staged;
  if (text == "brute") return ScanMode::Brute;
  throw DomainError("unknown scan mode '" + std::string(text) + "'");
}

std::string to_json_line(const SieveRecord& r) {
  json j;
  j["n"] = r.n;
  j["m"] = r.m;
  j["stage"] = std::string(to_string(r.stage));
  j["lemma3"] = lemma_to_json(r.lemma3);
  j["lemma5"] = lemma_to_json(r.lemma5);
  j["xyzt"] = optional_string(r.xyzt);
  j["xyzt_integer"] = r.xyzt_integer;
  j["nozaki"] = optional_string(r.nozaki);
  j["nozaki_integer"] = r.nozaki_integer;
  if (r.k_factorization_feasible) j["k_factorization_feasible"] = *r.k_factorization_feasible;
  j["roots"] = enclosures_to_json(r.roots);
  j["xyz_t"] = enclosures_to_json(r.distances);
  j["k"] = enclosures_to_json(r.nozaki_coefficients);
  j["refutation"] = optional_string(r.refutation);
  j["spectrum"] = optional_string(r.spectrum);
  j["precision_bits"] = r.precision_bits;
  return j.dump();
}

SieveRecord parse_json_line(const std::string& line) {
  SieveRecord r;
  try {
    const json j = json::parse(line);
    r.n = j.at("n").get<std::int64_t>();
    r.m = j.at("m").get<std::int64_t>();
    r.stage = parse_stage(j.at("stage").get<std::string>());
    r.lemma3 = lemma_from_json(j.at("lemma3"));
    r.lemma5 = lemma_from_json(j.at("lemma5"));
    r.xyzt = string_or_null(j, "xyzt");
    r.xyzt_integer = j.at("xyzt_integer").get<bool>();
    r.nozaki = string_or_null(j, "nozaki");
    r.nozaki_integer = j.at("nozaki_integer").get<bool>();
    if (j.contains("k_factorization_feasible"))
      r.k_factorization_feasible = j.at("k_factorization_feasible").get<bool>();
    r.roots = enclosures_from_json(j.at("roots"));
    r.distances = enclosures_from_json(j.at("xyz_t"));
    r.nozaki_coefficients = enclosures_from_json(j.at("k"));
    r.refutation = string_or_null(j, "refutation");
    r.spectrum = string_or_null(j, "spectrum");
    r.precision_bits = j.at("precision_bits").get<unsigned>();
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed record: ") + e.what());
  }
  return r;
}

std::string csv_header() { return "n,m,stage,xyzt_integer,nozaki_integer,refutation"; }

std::string to_csv_row(const SieveRecord& r) {
  std::ostringstream os;
  os << r.n << ',' << r.m << ',' << to_string(r.stage) << ',' << (r.xyzt_integer ? "true" : "false")
     << ',' << (r.nozaki_integer ? "true" : "false") << ','
     << (r.refutation ? csv_escape(*r.refutation) : "");
  return os.str();
}

StageCounts& StageCounts::operator+=(const StageCounts& o) {
  candidates += o.candidates;
  coarse_rejected += o.coarse_rejected;
  fine_rejected += o.fine_rejected;
  lemma3_overlaps += o.lemma3_overlaps;
  lemma3_uncovered += o.lemma3_uncovered;
  r_zero += o.r_zero;
  xyzt_rejected += o.xyzt_rejected;
  xyzt_integer += o.xyzt_integer;
  nozaki_integer += o.nozaki_integer;
  nozaki_only += o.nozaki_only;
  nozaki_rejected += o.nozaki_rejected;
  factorization_rejected += o.factorization_rejected;
  spectrum_analyzed += o.spectrum_analyzed;
  spectrum_refuted += o.spectrum_refuted;
  survivors += o.survivors;
  undecided += o.undecided;
  return *this;
}

#define SDSIEVE_COUNT_FIELDS(X)                                                              \
  X(candidates) X(coarse_rejected) X(fine_rejected) X(lemma3_overlaps) X(lemma3_uncovered) \
  X(r_zero) X(xyzt_rejected) X(xyzt_integer) X(nozaki_integer) X(nozaki_only)             \
  X(nozaki_rejected) X(factorization_rejected) X(spectrum_analyzed) X(spectrum_refuted)    \
  X(survivors) X(undecided)

std::string to_json(const StageCounts& c) {
  json j;
#define SDSIEVE_WRITE(field) j[#field] = c.field;
  SDSIEVE_COUNT_FIELDS(SDSIEVE_WRITE)
#undef SDSIEVE_WRITE
  return j.dump();
}

StageCounts parse_stage_counts(const std::string& text) {
  StageCounts c;
  try {
    const json j = json::parse(text);
#define SDSIEVE_READ(field) c.field = j.at(#field).get<std::uint64_t>();
    SDSIEVE_COUNT_FIELDS(SDSIEVE_READ)
#undef SDSIEVE_READ
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed stage counts: ") + e.what());
  }
  return c;
}

void summarize_records(ScanReport& report) {
  report.xyzt_passing.clear();
  report.nozaki_passing.clear();
  report.survivors.clear();
  report.multi_m_dimensions.clear();
  std::map<std::int64_t, std::vector<std::int64_t>> per_dimension;
  for (const auto& r : report.records) {
    if (r.xyzt_integer) {
      report.xyzt_passing.emplace_back(r.n, r.m);
      per_dimension[r.n].push_back(r.m);
    }
    if (r.nozaki_integer) report.nozaki_passing.emplace_back(r.n, r.m);
    if (r.stage == Stage::Survivor) report.survivors.emplace_back(r.n, r.m);
  }
  for (auto& [n, ms] : per_dimension)
    if (ms.size() >= 2) report.multi_m_dimensions.emplace(n, std::move(ms));
}

std::string render_summary(const ScanReport& r) {
  const auto& c = r.counts;
  std::ostringstream os;
  os << "mode: " << to_string(r.mode) << '\n';
  os << "dimensions: " << r.n_min << ".." << r.n_max << " (" << r.dimensions_completed
     << " completed)\n";
  os << "k-factorization stage: " << (r.k_factorization_stage ? "enabled" : "disabled") << '\n';
  os << "candidates (n, M): " << c.candidates << '\n';
  if (r.mode == ScanMode::Staged) {
    os << "rejected by coarse sieve (n | 12M, n+1 | 4M^2): " << c.coarse_rejected << '\n';
    os << "rejected by fine sieve (lemma cases): " << c.fine_rejected << '\n';
    os << "  lemma-3 guard overlaps: " << c.lemma3_overlaps << '\n';
    os << "  lemma-3 uncovered guard patterns: " << c.lemma3_uncovered << '\n';
  }
  os << "R(n,M) = 0: " << c.r_zero << '\n';
  os << "rejected by XYZT integrality: " << c.xyzt_rejected << '\n';
  os << "XYZT integer: " << c.xyzt_integer << '\n';
  os << "Nozaki product integer: " << c.nozaki_integer << '\n';
  if (r.mode == ScanMode::Brute) os << "Nozaki product integer, XYZT not: " << c.nozaki_only << '\n';
  os << "rejected by Nozaki integrality: " << c.nozaki_rejected << '\n';
  if (r.k_factorization_stage) os << "rejected by k factorization: " << c.factorization_rejected << '\n';
  os << "spectrum analyzed: " << c.spectrum_analyzed << '\n';
  os << "  refuted by spectrum analysis: " << c.spectrum_refuted << '\n';
  os << "  undecided at maximum precision: " << c.undecided << '\n';
  os << "survivors: " << c.survivors << '\n';

  std::size_t most = 0;
  std::map<std::int64_t, std::size_t> per_dimension;
  for (const auto& [n, m] : r.xyzt_passing) most = std::max(most, ++per_dimension[n]);
  os << "dimensions with two or more XYZT-integer M: " << r.multi_m_dimensions.size() << '\n';
  os << "most XYZT-integer M in one dimension: " << most << '\n';
  for (const auto& [n, ms] : r.multi_m_dimensions) {
    os << "  n=" << n << ":";
    for (const auto m : ms) os << ' ' << m;
    os << '\n';
  }
  if (!r.nozaki_passing.empty()) {
    os << "smallest Nozaki-integer pair: (" << r.nozaki_passing.front().first << ", "
       << r.nozaki_passing.front().second << ")\n";
  }
  os << "survivor list:";
  if (r.survivors.empty()) os << " none";
  os << '\n';
  for (const auto& [n, m] : r.survivors) {
    os << "  (" << n << ", " << m
       << ") numerically integral; confirm exactly before drawing conclusions\n";
  }
  return os.str();
}

}  // namespace sdsieve
