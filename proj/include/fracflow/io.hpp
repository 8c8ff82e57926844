#pragma once

#include <string>
#include <vector>

#include "fracflow/flow.hpp"
#include "fracflow/grid.hpp"

namespace fracflow {

/// Shortest round-trip decimal rendering (%.17g) so repeated runs emit
/// byte-identical text.
std::string format_double(double v);

/// Snapshot: flat little-endian binary of 64-bit floats plus a JSON sidecar
/// {d, h, origin, shape, extension, affine coefficients, manifest_hash}.
void save_snapshot(const GridFunction& g, const std::string& path_base,
                   const std::string& manifest_hash);
GridFunction load_snapshot(const std::string& path_base);

/// CSV export, one node per row: coordinates then value.
void write_grid_csv(const GridFunction& g, const std::string& path);

void write_trace_csv(const FlowTrace& t, const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

void ensure_dir(const std::string& path);

}  // namespace fracflow
