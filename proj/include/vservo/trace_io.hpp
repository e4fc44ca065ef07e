#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "vservo/sim.hpp"

namespace vservo::trace_io {

inline constexpr int kSchemaVersion = 1;

// Column names for a trace with this scenario's parameter dimensions.  The
// leading `schema` column carries kSchemaVersion in every row so readers can
// detect layout changes.
std::vector<std::string> csv_columns(const sim::Scenario& scn);

// One header row, then one row per recorded sample, every float at shortest
// round-trip precision.  A zero-duration trace yields only the header.
void write_csv(std::ostream& out, const sim::Trace& tr);
void write_csv_file(const std::string& path, const sim::Trace& tr);
std::string to_csv(const sim::Trace& tr);

// Generic numeric table, for reading traces back (plotting, oracles).
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    // index of a named column, or -1
    long col(const std::string& name) const;
    // same, but throws ConfigError naming the column
    long need(const std::string& name) const;
};

Table read_table(std::istream& in);
Table read_table_file(const std::string& path);

} // namespace vservo::trace_io
