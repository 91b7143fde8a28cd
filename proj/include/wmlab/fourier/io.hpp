#pragma once

#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "wmlab/fourier/fields.hpp"

namespace wmlab {

static_assert(std::endian::native == std::endian::little, "binary field layout assumes a little-endian host");

// Binary layout: int64 n, int64 N, f64 L, int64 c, int64 M, f64 t0, f64 dt,
// then M*c*N^n (re, im) f64 pairs ordered by snapshot, component, grid point.

namespace detail {
template <class T>
void write_raw(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}
template <class T>
T read_raw(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw IoError("truncated binary field");
  return value;
}
}  // namespace detail

inline void write_binary(std::ostream& out, const SpaceTimeField& field) {
  const auto& grid = field.grid();
  detail::write_raw<std::int64_t>(out, grid.dimension());
  detail::write_raw<std::int64_t>(out, static_cast<std::int64_t>(grid.points()));
  detail::write_raw<double>(out, grid.period());
  detail::write_raw<std::int64_t>(out, static_cast<std::int64_t>(field.components()));
  detail::write_raw<std::int64_t>(out, static_cast<std::int64_t>(field.samples()));
  detail::write_raw<double>(out, field.time().start());
  detail::write_raw<double>(out, field.time().step());
  for (std::size_t j = 0; j < field.samples(); ++j)
    for (const auto& v : field[j].values()) {
      detail::write_raw<double>(out, v.real());
      detail::write_raw<double>(out, v.imag());
    }
}

inline SpaceTimeField read_binary(std::istream& in) {
  const auto n = detail::read_raw<std::int64_t>(in);
  const auto points = detail::read_raw<std::int64_t>(in);
  const auto period = detail::read_raw<double>(in);
  const auto components = detail::read_raw<std::int64_t>(in);
  const auto samples = detail::read_raw<std::int64_t>(in);
  const auto t0 = detail::read_raw<double>(in);
  const auto dt = detail::read_raw<double>(in);
  if (components < 1 || samples < 1) throw IoError("binary field header is corrupt");
  FrequencyGrid grid(static_cast<int>(n), static_cast<std::size_t>(points), period);
  SpaceTimeField field(TimeGrid(t0, dt, static_cast<std::size_t>(samples)), grid, static_cast<std::size_t>(components));
  for (std::size_t j = 0; j < field.samples(); ++j)
    for (auto& v : field[j].values()) {
      const double re = detail::read_raw<double>(in);
      const double im = detail::read_raw<double>(in);
      v = Complex{re, im};
    }
  return field;
}

inline void save_binary(const std::string& path, const SpaceTimeField& field) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_binary(out, field);
  if (!out) throw IoError("write failed for " + path);
}

inline SpaceTimeField load_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return read_binary(in);
}

inline std::string format_real(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

/// One row per (snapshot, component, grid point); meant for small grids.
inline void write_csv(std::ostream& out, const SpaceTimeField& field) {
  out << "sample,t,component,point,x0,x1,x2,re,im\n";
  const auto& grid = field.grid();
  for (std::size_t j = 0; j < field.samples(); ++j)
    for (std::size_t c = 0; c < field.components(); ++c)
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto x = grid.position(i);
        const auto v = field[j].at(c, i);
        out << j << ',' << format_real(field.time().time(j)) << ',' << c << ',' << i << ',' << format_real(x[0]) << ','
            << format_real(x[1]) << ',' << format_real(x[2]) << ',' << format_real(v.real()) << ','
            << format_real(v.imag()) << '\n';
      }
}

}  // namespace wmlab
