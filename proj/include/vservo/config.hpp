#pragma once

#include <string>
#include <vector>

#include "vservo/sim.hpp"

namespace vservo::config {

// Scenario files are plain `key = value` text: '#' starts a comment, values are
// scalars, bare words, tuples `(a, b, c)`, `diag(a, b, c)`, or
// `mat((a, b), (c, d))`.  Every key is optional; omitted keys keep the values
// of the stock benchmark scenario.  Unknown or duplicate keys are rejected.
sim::Scenario parse(const std::string& text,
                    const std::vector<std::string>& overrides = {});

// Reads and parses a scenario file, applying `key=value` override strings on
// top (same syntax as file lines, later entries win).
sim::Scenario load(const std::string& path,
                   const std::vector<std::string>& overrides = {});

// Canonical emission: every key, fixed order, shortest round-trip numerals.
// parse(emit(s)) reproduces s value-for-value.
std::string emit(const sim::Scenario& scn);

} // namespace vservo::config
