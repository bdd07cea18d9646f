#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "sdsieve/exact.hpp"
#include "sdsieve/ledger.hpp"
#include "sdsieve/record.hpp"

using namespace sdsieve;
namespace fs = std::filesystem;

namespace {

SieveRecord sample() {
  SieveRecord r;
  r.n = 7;
  r.m = 196;
  r.stage = Stage::SpectrumAnalysis;
  r.lemma3 = LemmaRecord{"A", true};
  r.lemma5 = LemmaRecord{"B", true};
  r.xyzt = "1185921";
  r.xyzt_integer = true;
  r.nozaki = "121";
  r.nozaki_integer = true;
  r.roots = {{"-0.83", "-0.82"}, {"-0.45", "-0.44"}, {"0.05", "0.06"}, {"0.54", "0.55"}};
  r.refutation = "X is not an integer";
  r.spectrum = "refuted";
  r.precision_bits = 128;
  return r;
}

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("sdsieve_record_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

}  // namespace

TEST(Record, JsonRoundTrip) {
  const auto r = sample();
  EXPECT_EQ(parse_json_line(to_json_line(r)), r);
  SieveRecord minimal;
  minimal.n = 3;
  minimal.m = 21;
  EXPECT_EQ(parse_json_line(to_json_line(minimal)), minimal);
  auto with_k = r;
  with_k.k_factorization_feasible = false;
  EXPECT_EQ(parse_json_line(to_json_line(with_k)), with_k);
}

TEST(Record, JsonKeyOrderAndNulls) {
  const auto line = to_json_line(sample());
  EXPECT_TRUE(line.starts_with(R"({"n":7,"m":196,"stage":"SpectrumAnalysis","lemma3":{"case":"A","passed":true})"))
      << line;
  EXPECT_NE(line.find(R"("xyzt":"1185921","xyzt_integer":true,"nozaki":"121")"), std::string::npos);
  EXPECT_EQ(line.find("k_factorization_feasible"), std::string::npos);
  EXPECT_TRUE(line.ends_with(R"("precision_bits":128})"));
  SieveRecord bare;
  EXPECT_NE(to_json_line(bare).find(R"("refutation":null)"), std::string::npos);
}

TEST(Record, RejectsMalformedLines) {
  EXPECT_THROW(parse_json_line("{"), DomainError);
  EXPECT_THROW(parse_json_line(R"({"n":1})"), DomainError);
  auto line = to_json_line(sample());
  line.replace(line.find("SpectrumAnalysis"), 16, "Nowhere");
  EXPECT_THROW(parse_json_line(line), DomainError);
}

TEST(Record, IntegerRationalsSerializeWithoutDenominator) {
  EXPECT_EQ(ExactRational(BigInt(1185921), BigInt(1)).to_string(), "1185921");
}

TEST(Record, Csv) {
  EXPECT_EQ(csv_header(), "n,m,stage,xyzt_integer,nozaki_integer,refutation");
  EXPECT_EQ(to_csv_row(sample()), "7,196,SpectrumAnalysis,true,true,X is not an integer");
  auto r = sample();
  r.refutation = "a, \"b\"";
  EXPECT_EQ(to_csv_row(r), "7,196,SpectrumAnalysis,true,true,\"a, \"\"b\"\"\"");
}

TEST(Record, StageNames) {
  for (auto s : {Stage::CoarseSieve, Stage::FineSieve, Stage::XYZTIntegrality,
                 Stage::NozakiIntegrality, Stage::NozakiFactorization, Stage::SpectrumAnalysis,
                 Stage::Survivor}) {
    EXPECT_EQ(parse_stage(to_string(s)), s);
  }
  EXPECT_EQ(parse_scan_mode("brute"), ScanMode::Brute);
  EXPECT_THROW(parse_scan_mode("fast"), DomainError);
}

TEST(StageCounts, JsonRoundTripAndSum) {
  StageCounts a;
  a.candidates = 10;
  a.xyzt_integer = 2;
  a.survivors = 1;
  StageCounts b = a;
  b += a;
  EXPECT_EQ(b.candidates, 20u);
  EXPECT_EQ(parse_stage_counts(to_json(b)), b);
  EXPECT_THROW(parse_stage_counts("{}"), DomainError);
}

TEST(Summary, EmptyReport) {
  ScanReport r;
  r.n_min = 3;
  r.n_max = 2;
  summarize_records(r);
  const auto text = render_summary(r);
  EXPECT_NE(text.find("survivors: 0"), std::string::npos);
  EXPECT_NE(text.find("survivor list: none"), std::string::npos);
}

TEST(Summary, ListsDerivedFromRecords) {
  ScanReport r;
  auto a = sample();
  auto b = sample();
  b.m = 200;
  b.nozaki_integer = false;
  auto c = sample();
  c.n = 9;
  c.stage = Stage::Survivor;
  r.records = {a, b, c};
  summarize_records(r);
  EXPECT_EQ(r.xyzt_passing.size(), 3u);
  EXPECT_EQ(r.nozaki_passing.size(), 2u);
  ASSERT_EQ(r.survivors.size(), 1u);
  EXPECT_EQ(r.survivors[0], std::make_pair(std::int64_t{9}, std::int64_t{196}));
  ASSERT_EQ(r.multi_m_dimensions.size(), 1u);
  EXPECT_EQ(r.multi_m_dimensions.at(7), (std::vector<std::int64_t>{196, 200}));
}

TEST(Ledger, LineFormat) {
  const LedgerEntry e{101, 3, 0x00ab12cd};
  EXPECT_EQ(format_ledger_line(e), "done n=101 records=3 checksum=00ab12cd");
  EXPECT_EQ(parse_ledger_line(format_ledger_line(e), 1), e);
  EXPECT_THROW(parse_ledger_line("done n=101 records=3", 4), LedgerError);
  EXPECT_THROW(parse_ledger_line("done n=x records=3 checksum=00ab12cd", 4), LedgerError);
  EXPECT_THROW(parse_ledger_line("done n=101 records=3 checksum=00ab12cd ", 4), LedgerError);
}

TEST(Ledger, Crc32) {
  EXPECT_EQ(crc32("123456789"), 0xcbf43926u);
  EXPECT_EQ(crc32(""), 0u);
}

TEST(Ledger, FreshDirectoryIsEmpty) {
  EXPECT_TRUE(resume_ledger(fresh_dir("fresh")).empty());
}

TEST(Ledger, AppendAndRead) {
  const auto dir = fresh_dir("append");
  for (std::int64_t n = 3; n <= 100; ++n) append_ledger(ledger_path(dir), {n, 0, 0});
  const auto done = resume_ledger(dir);
  EXPECT_EQ(done.size(), 98u);
  EXPECT_EQ(*done.begin(), 3);
  EXPECT_EQ(*done.rbegin(), 100);
}

TEST(Ledger, TruncatedFinalLineNamesTheLine) {
  const auto dir = fresh_dir("truncated");
  write(ledger_path(dir), "done n=3 records=0 checksum=00000000\ndone n=4 rec");
  try {
    read_ledger(ledger_path(dir));
    FAIL() << "expected LedgerError";
  } catch (const LedgerError& e) {
    EXPECT_EQ(e.line_number(), 2u);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(Ledger, CorruptedAndDuplicateLines) {
  const auto dir = fresh_dir("corrupt");
  write(ledger_path(dir),
        "done n=3 records=0 checksum=00000000\ngarbage\ndone n=5 records=0 checksum=00000000\n");
  try {
    read_ledger(ledger_path(dir));
    FAIL() << "expected LedgerError";
  } catch (const LedgerError& e) {
    EXPECT_EQ(e.line_number(), 2u);
  }
  write(ledger_path(dir),
        "done n=3 records=0 checksum=00000000\ndone n=3 records=0 checksum=00000000\n");
  EXPECT_THROW(read_ledger(ledger_path(dir)), LedgerError);
}
