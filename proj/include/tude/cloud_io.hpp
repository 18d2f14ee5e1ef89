#pragma once

#include "tude/point_cloud.hpp"

#include <string>

namespace tude {

enum class CloudFormat {
    PlyAscii,
    Xyz,
    Auto, // by extension, falling back to content sniffing
};

// Reads vertex positions from an XYZ or ASCII PLY file. Non-position vertex
// attributes are skipped (one warning on stderr). Throws IoError if the file
// cannot be opened, ParseError on malformed content, non-finite coordinates,
// a vertex-count mismatch, or an empty cloud.
PointCloud read_cloud(const std::string& path, CloudFormat format = CloudFormat::Auto);

// Writes positions with 17 significant digits so a re-read reproduces the
// exact double values (write-read-write is byte stable). Throws IoError.
void write_cloud(const PointCloud& cloud, const std::string& path,
                 CloudFormat format = CloudFormat::Auto);

} // namespace tude
