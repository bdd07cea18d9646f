#pragma once

// Append-only completion ledger for resumable scans. One line per finished
// dimension: "done n=<n> records=<count> checksum=<hex>", where the checksum
// is the CRC-32 of that dimension's JSONL record file.

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sdsieve {

class LedgerError : public std::runtime_error {
 public:
  LedgerError(const std::string& what, std::size_t line_number)
      : std::runtime_error(what), line_number_(line_number) {}
  std::size_t line_number() const { return line_number_; }

 private:
  std::size_t line_number_;
};

struct LedgerEntry {
  std::int64_t n = 0;
  std::uint64_t records = 0;
  std::uint32_t checksum = 0;

  friend bool operator==(const LedgerEntry&, const LedgerEntry&) = default;
};

std::uint32_t crc32(std::string_view bytes);

std::string format_ledger_line(const LedgerEntry& e);  // without newline
LedgerEntry parse_ledger_line(std::string_view line, std::size_t line_number);

// Reads every entry; a malformed or unterminated line raises LedgerError
// naming its 1-based line number. A missing file is an empty ledger.
std::map<std::int64_t, LedgerEntry> read_ledger(const std::filesystem::path& ledger_file);

// Dimensions already completed in output_dir.
std::set<std::int64_t> resume_ledger(const std::filesystem::path& output_dir);

void append_ledger(const std::filesystem::path& ledger_file, const LedgerEntry& e);

std::filesystem::path ledger_path(const std::filesystem::path& output_dir);

}  // namespace sdsieve
