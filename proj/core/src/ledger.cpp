#include "sdsieve/ledger.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <boost/crc.hpp>

namespace sdsieve {

std::uint32_t crc32(std::string_view bytes) {
  boost::crc_32_type crc;
  crc.process_bytes(bytes.data(), bytes.size());
  return crc.checksum();
}

std::filesystem::path ledger_path(const std::filesystem::path& output_dir) {
  return output_dir / "ledger.txt";
}

std::string format_ledger_line(const LedgerEntry& e) {
  char hex[9];
  std::snprintf(hex, sizeof hex, "%08x", e.checksum);
  return "done n=" + std::to_string(e.n) + " records=" + std::to_string(e.records) +
         " checksum=" + hex;
}

namespace {

template <class T>
bool parse_field(std::string_view& rest, std::string_view key, T& out, int base = 10) {
  if (!rest.starts_with(key)) return false;
  rest.remove_prefix(key.size());
  const auto end = rest.find(' ');
  const std::string_view token = rest.substr(0, end);
  if (token.empty()) return false;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out, base);
  if (ec != std::errc() || ptr != token.data() + token.size()) return false;
  rest.remove_prefix(end == std::string_view::npos ? rest.size() : end + 1);
  return true;
}

}  // namespace

LedgerEntry parse_ledger_line(std::string_view line, std::size_t line_number) {
  LedgerEntry e;
  std::string_view rest = line;
  const bool ok = parse_field(rest, "done n=", e.n) && parse_field(rest, "records=", e.records) &&
                  rest.size() == 17 && parse_field(rest, "checksum=", e.checksum, 16) &&
                  rest.empty();
  if (!ok) {
    throw LedgerError("corrupted ledger line " + std::to_string(line_number) + ": '" +
                          std::string(line) + "'",
                      line_number);
  }
  return e;
}

std::map<std::int64_t, LedgerEntry> read_ledger(const std::filesystem::path& ledger_file) {
  std::map<std::int64_t, LedgerEntry> entries;
  std::ifstream in(ledger_file, std::ios::binary);
  if (!in) return entries;
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  std::size_t start = 0;
  std::size_t line_number = 0;
  while (start < text.size()) {
    ++line_number;
    const auto newline = text.find('\n', start);
    if (newline == std::string::npos) {
      throw LedgerError("truncated ledger line " + std::to_string(line_number) + ": '" +
                            text.substr(start) + "'",
                        line_number);
    }
    const auto entry = parse_ledger_line(std::string_view(text).substr(start, newline - start),
                                         line_number);
    if (!entries.emplace(entry.n, entry).second) {
      throw LedgerError("duplicate ledger entry for n=" + std::to_string(entry.n) + " on line " +
                            std::to_string(line_number),
                        line_number);
    }
    start = newline + 1;
  }
  return entries;
}

std::set<std::int64_t> resume_ledger(const std::filesystem::path& output_dir) {
  std::set<std::int64_t> done;
  for (const auto& [n, entry] : read_ledger(ledger_path(output_dir))) done.insert(n);
  return done;
}

void append_ledger(const std::filesystem::path& ledger_file, const LedgerEntry& e) {
  std::ofstream out(ledger_file, std::ios::binary | std::ios::app);
  out << format_ledger_line(e) << '\n';
  out.flush();
  if (!out) throw std::runtime_error("cannot append to ledger " + ledger_file.string());
}

}  // namespace sdsieve
