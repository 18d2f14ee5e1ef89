#pragma once

#include <iosfwd>
#include <string>

#include "tude/denoise.hpp"

namespace tude {

// Text config format: one "key = value" pair per line, '#' starts a comment,
// blank lines ignored. Keys mirror DenoiseConfig:
//   k, delta_sim, n_reg, r1, r2, r3, delta_thre, seed_ratio, voxel_size,
//   icp_max_iters, icp_tol, hooi_max_iters, hooi_tol, threads
// Unknown keys and malformed values are parse errors. Values are applied on
// top of `base`, so a file may set any subset.
DenoiseConfig parse_config(std::istream& in, const std::string& origin, DenoiseConfig base = {});

DenoiseConfig load_config(const std::string& path, DenoiseConfig base = {});

// Round-trippable dump of every key.
std::string dump_config(const DenoiseConfig& config);

} // namespace tude
