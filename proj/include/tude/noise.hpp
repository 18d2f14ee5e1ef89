#pragma once

#include <cstdint>
#include <string_view>

#include "tude/point_cloud.hpp"

namespace tude {

struct NoiseModel {
    double sigma = 0.0;          // per-coordinate standard deviation, model units
    std::uint64_t rng_seed = 1;  // same seed, same realization
};

// Adds an independent zero-mean Gaussian draw to every coordinate, in point
// order, x then y then z.
PointCloud add_noise(const PointCloud& cloud, const NoiseModel& model);

// Decorrelated per-run stream seed for a (base seed, model, sigma) triple, so
// benchmark rows never share a noise realization.
std::uint64_t derive_stream_seed(std::uint64_t base_seed, std::string_view model_name, double sigma);

} // namespace tude
