#include "polytherm/field_io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace polytherm {

namespace {
constexpr char kMagic[6] = {'P', 'T', 'F', 'L', 'D', '1'};
}

void write_snapshot(const std::string& path, const PeriodicField& field, double time) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(kMagic, sizeof(kMagic));
  const Grid& g = field.grid();
  for (int d = 0; d < 3; ++d) {
    const std::int32_t n = g.dims[d];
    out.write(reinterpret_cast<const char*>(&n), sizeof(n));
  }
  const std::int32_t c = field.components();
  out.write(reinterpret_cast<const char*>(&c), sizeof(c));
  out.write(reinterpret_cast<const char*>(&time), sizeof(time));
  out.write(reinterpret_cast<const char*>(field.values().data()),
            static_cast<std::streamsize>(field.values().size() * sizeof(double)));
  if (!out) throw std::runtime_error("short write: " + path);
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  char magic[6];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("not a PTFLD1 snapshot: " + path);
  std::int32_t dims[3], c;
  for (auto& n : dims) in.read(reinterpret_cast<char*>(&n), sizeof(n));
  in.read(reinterpret_cast<char*>(&c), sizeof(c));
  double time = 0.0;
  in.read(reinterpret_cast<char*>(&time), sizeof(time));
  Grid g(dims[0], dims[1], dims[2]);
  Snapshot s{PeriodicField(g, c), time};
  in.read(reinterpret_cast<char*>(s.field.values().data()),
          static_cast<std::streamsize>(s.field.values().size() * sizeof(double)));
  if (!in) throw std::runtime_error("truncated snapshot: " + path);
  return s;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path, std::ios::binary);  // binary: fixed "\n" endings
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (std::size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw std::invalid_argument("csv row width mismatch");
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
  if (!out) throw std::runtime_error("short write: " + path);
}

void write_csv_numeric(const std::string& path, const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& rows) {
  std::vector<std::vector<std::string>> text;
  text.reserve(rows.size());
  for (const auto& row : rows) {
    std::vector<std::string> cells;
    cells.reserve(row.size());
    for (double v : row) cells.push_back(format_double(v));
    text.push_back(std::move(cells));
  }
  write_csv(path, header, text);
}

}  // namespace polytherm
