#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

namespace wavelab::cli {

/// 17 significant digits (round-trips exactly), '.' decimal point regardless
/// of locale.
std::string format_double(double value);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string> header);

  CsvWriter& cell(double value);
  CsvWriter& cell(long long value);
  CsvWriter& cell(unsigned long long value);
  CsvWriter& cell(std::size_t value) { return cell(static_cast<unsigned long long>(value)); }
  CsvWriter& cell(int value) { return cell(static_cast<long long>(value)); }
  CsvWriter& cell(const std::string& value);
  void end_row();

  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  void separator();

  std::filesystem::path path_;
  std::ofstream out_;
  bool fresh_row_ = true;
};

}  // namespace wavelab::cli
