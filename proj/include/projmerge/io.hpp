#pragma once

#include <iosfwd>
#include <string>

#include "projmerge/conductors.hpp"
#include "projmerge/grid.hpp"
#include "projmerge/mergers.hpp"

namespace projmerge {

/// Partition file: {"t", "n", "c", "labels"} with labels the row-major
/// base-c digit string of length N^t (digits 0-9 then a-z, so c <= 36).
std::string partition_to_json(const PartLabeling& p);
PartLabeling partition_from_json(const std::string& text);

/// Merger table file: {"n_vals", "t", "d_vals", "m_vals", "table"} with the
/// table a base-M digit string, row-major over ([N]^t, [D]).
std::string merger_to_json(const MergerTable& e);
MergerTable merger_from_json(const std::string& text);

/// Conductor file: same layout with t = 1.
std::string conductor_to_json(const Conductor& c);
Conductor conductor_from_json(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// Deterministic SVG heatmap of a 2-dim projection: each projected point is
/// colored by the set of parts that project onto it.
std::string render_projection_svg(const PartLabeling& p, const AxisSubset& axes);

}  // namespace projmerge
