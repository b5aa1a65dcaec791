#pragma once

#include <filesystem>
#include <string>

#include "wavelab/core/field.hpp"

namespace wavelab {

// Flat binary dump: little-endian float64, row-major (x fastest), complex
// values interleaved as (re, im). The sidecar `<stem>.hdr` is plain text:
//
//   dims 2
//   points 768 384
//   extents 10 5
//   origin 0 -2.5
//   kind complex
//   role psi

void write_field(const std::filesystem::path& stem, const RealField& field, const std::string& role);
void write_field(const std::filesystem::path& stem, const ComplexField& field, const std::string& role);

struct FieldHeader {
  int dims = 1;
  std::size_t points[2] = {1, 1};
  double extents[2] = {0, 0};
  double origin[2] = {0, 0};
  std::string kind;
  std::string role;

  Grid grid() const;
};

FieldHeader read_field_header(const std::filesystem::path& stem);
RealField read_real_field(const std::filesystem::path& stem);
ComplexField read_complex_field(const std::filesystem::path& stem);

/// 8-bit binary PGM of |psi|^2 scaled to its maximum. Image row 0 is the
/// largest y. A line grid produces a one-row image.
void write_density_pgm(const std::filesystem::path& path, const ComplexField& psi);

}  // namespace wavelab
