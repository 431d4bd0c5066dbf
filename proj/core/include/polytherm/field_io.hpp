#pragma once

#include <string>
#include <vector>

#include "polytherm/grid.hpp"

namespace polytherm {

/// One stored field with its time stamp.
struct Snapshot {
  PeriodicField field;
  double time = 0.0;
};

/// Binary snapshot format "PTFLD1": magic, int32 dims[3], int32 component
/// count, float64 time, then the value array as little-endian float64 in
/// node-major order.
void write_snapshot(const std::string& path, const PeriodicField& field, double time);
Snapshot read_snapshot(const std::string& path);

/// Shortest-exact decimal rendering of a double ("%.17g"); the single
/// formatting used by every CSV emitter so outputs are byte-reproducible.
std::string format_double(double v);

/// RFC-4180 style CSV with a header row. Cells are preformatted strings.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

/// Convenience for all-numeric tables.
void write_csv_numeric(const std::string& path, const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& rows);

}  // namespace polytherm
