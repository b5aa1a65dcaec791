#include "wavelab/core/field_io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace wavelab {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

void put_f64(std::ostream& out, double v) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  unsigned char bytes[8];
  for (int b = 0; b < 8; ++b) bytes[b] = static_cast<unsigned char>((bits >> (8 * b)) & 0xffu);
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

double get_f64(std::istream& in) {
  unsigned char bytes[8];
  in.read(reinterpret_cast<char*>(bytes), 8);
  if (!in) throw ValidationError("truncated field dump");
  std::uint64_t bits = 0;
  for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(bytes[b]) << (8 * b);
  return std::bit_cast<double>(bits);
}

std::string shortest(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::filesystem::path with_suffix(const std::filesystem::path& stem, const char* suffix) {
  return std::filesystem::path(stem.string() + suffix);
}

void write_header(const std::filesystem::path& stem, const Grid& g, const char* kind, const std::string& role) {
  std::ofstream out(with_suffix(stem, ".hdr"), std::ios::binary);
  if (!out) throw ValidationError("cannot open " + with_suffix(stem, ".hdr").string());
  out << "dims " << g.dims() << '\n' << "points";
  for (int a = 0; a < g.dims(); ++a) out << ' ' << g.points(a);
  out << '\n' << "extents";
  for (int a = 0; a < g.dims(); ++a) out << ' ' << shortest(g.extent(a));
  out << '\n' << "origin";
  for (int a = 0; a < g.dims(); ++a) out << ' ' << shortest(g.origin(a));
  out << '\n' << "kind " << kind << '\n' << "role " << role << '\n';
}

std::ofstream open_binary(const std::filesystem::path& stem) {
  std::ofstream out(with_suffix(stem, ".bin"), std::ios::binary);
  if (!out) throw ValidationError("cannot open " + with_suffix(stem, ".bin").string());
  return out;
}

}  // namespace

Grid FieldHeader::grid() const {
  if (dims == 1) return Grid::line(origin[0], extents[0], points[0]);
  return Grid::plane({origin[0], origin[1]}, {extents[0], extents[1]}, points[0], points[1]);
}

void write_field(const std::filesystem::path& stem, const RealField& field, const std::string& role) {
  write_header(stem, field.grid(), "real", role);
  auto out = open_binary(stem);
  for (double v : field.values()) put_f64(out, v);
}

void write_field(const std::filesystem::path& stem, const ComplexField& field, const std::string& role) {
  write_header(stem, field.grid(), "complex", role);
  auto out = open_binary(stem);
  for (Complex v : field.values()) {
    put_f64(out, v.real());
    put_f64(out, v.imag());
  }
}

FieldHeader read_field_header(const std::filesystem::path& stem) {
  std::ifstream in(with_suffix(stem, ".hdr"));
  if (!in) throw ValidationError("cannot open " + with_suffix(stem, ".hdr").string());
  FieldHeader h;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream words(line);
    std::string key;
    words >> key;
    if (key == "dims") {
      words >> h.dims;
    } else if (key == "points") {
      for (int a = 0; a < h.dims; ++a) words >> h.points[a];
    } else if (key == "extents") {
      for (int a = 0; a < h.dims; ++a) words >> h.extents[a];
    } else if (key == "origin") {
      for (int a = 0; a < h.dims; ++a) words >> h.origin[a];
    } else if (key == "kind") {
      words >> h.kind;
    } else if (key == "role") {
      words >> h.role;
    }
  }
  if (h.dims != 1 && h.dims != 2) throw ValidationError("bad field header");
  return h;
}

RealField read_real_field(const std::filesystem::path& stem) {
  const FieldHeader h = read_field_header(stem);
  if (h.kind != "real") throw ValidationError("field dump is not real-valued");
  const Grid g = h.grid();
  std::ifstream in(with_suffix(stem, ".bin"), std::ios::binary);
  std::vector<double> values(g.size());
  for (double& v : values) v = get_f64(in);
  return RealField(g, std::move(values));
}

ComplexField read_complex_field(const std::filesystem::path& stem) {
  const FieldHeader h = read_field_header(stem);
  if (h.kind != "complex") throw ValidationError("field dump is not complex-valued");
  const Grid g = h.grid();
  std::ifstream in(with_suffix(stem, ".bin"), std::ios::binary);
  std::vector<Complex> values(g.size());
  for (Complex& v : values) {
    const double re = get_f64(in);
    const double im = get_f64(in);
    v = {re, im};
  }
  return ComplexField(g, std::move(values));
}

void write_density_pgm(const std::filesystem::path& path, const ComplexField& psi) {
  const Grid& g = psi.grid();
  const std::size_t width = g.nx();
  const std::size_t height = g.dims() == 2 ? g.ny() : 1;
  double peak = 0.0;
  for (Complex z : psi.values()) peak = std::max(peak, std::norm(z));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open " + path.string());
  out << "P5\n" << width << ' ' << height << "\n255\n";
  std::vector<unsigned char> row(width);
  for (std::size_t r = 0; r < height; ++r) {
    const std::size_t j = height - 1 - r;
    for (std::size_t i = 0; i < width; ++i) {
      const double v = peak > 0.0 ? std::norm(psi.at(i, j)) / peak : 0.0;
      row[i] = static_cast<unsigned char>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
    }
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(width));
  }
}

}  // namespace wavelab
