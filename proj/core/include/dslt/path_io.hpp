#pragma once

#include <iosfwd>
#include <string>

#include "dslt/fbm.hpp"

namespace dslt {

// Flat binary path container. Little-endian layout:
//   magic "FBMP" | u32 version | f64 H | u32 d | u64 n_steps | u64 n_paths
//   | f64 dt | u64 seed | f64 values (row-major [path][node][coord])
void write_fbmp(std::ostream& os, const PathBatch& batch);
void write_fbmp(const std::string& path, const PathBatch& batch);
PathBatch read_fbmp(std::istream& is);
PathBatch read_fbmp(const std::string& path);

// CSV export: one row per grid node, columns path_id,t,x_1..x_d.
void write_paths_csv(std::ostream& os, const PathBatch& batch);

}  // namespace dslt
