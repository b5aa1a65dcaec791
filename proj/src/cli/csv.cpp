#include "wavelab/cli/csv.hpp"

#include <charconv>

#include "wavelab/core/error.hpp"

namespace wavelab::cli {

std::string format_double(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value, std::chars_format::general, 17);
  return std::string(buffer, result.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string> header)
    : path_(path), out_(path, std::ios::binary) {
  if (!out_) throw ValidationError("cannot write " + path.string());
  for (const auto& h : header) cell(h);
  end_row();
}

void CsvWriter::separator() {
  if (!fresh_row_) out_ << ',';
  fresh_row_ = false;
}

CsvWriter& CsvWriter::cell(double value) {
  separator();
  out_ << format_double(value);
  return *this;
}

CsvWriter& CsvWriter::cell(long long value) {
  separator();
  out_ << value;
  return *this;
}

CsvWriter& CsvWriter::cell(unsigned long long value) {
  separator();
  out_ << value;
  return *this;
}

CsvWriter& CsvWriter::cell(const std::string& value) {
  separator();
  out_ << value;
  return *this;
}

void CsvWriter::end_row() {
  out_ << '\n';
  fresh_row_ = true;
}

}  // namespace wavelab::cli
