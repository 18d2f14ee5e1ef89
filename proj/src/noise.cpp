#include "tude/noise.hpp"

#include <bit>
#include <random>
#include <stdexcept>

namespace tude {
namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

void fnv_mix(std::uint64_t& h, const void* data, size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < len; ++i) {
        h ^= bytes[i];
        h *= kFnvPrime;
    }
}

} // namespace

PointCloud add_noise(const PointCloud& cloud, const NoiseModel& model) {
    if (model.sigma < 0.0) throw std::invalid_argument("add_noise: sigma must be non-negative");
    if (model.sigma == 0.0) return cloud;

    PointCloud out = cloud;
    std::mt19937_64 rng(model.rng_seed);
    std::normal_distribution<double> gauss(0.0, model.sigma);
    for (Point3& p : out.points) {
        p.x += gauss(rng);
        p.y += gauss(rng);
        p.z += gauss(rng);
    }
    return out;
}

std::uint64_t derive_stream_seed(std::uint64_t base_seed, std::string_view model_name, double sigma) {
    std::uint64_t h = kFnvOffset;
    fnv_mix(h, &base_seed, sizeof(base_seed));
    fnv_mix(h, model_name.data(), model_name.size());
    const std::uint64_t sigma_bits = std::bit_cast<std::uint64_t>(sigma);
    fnv_mix(h, &sigma_bits, sizeof(sigma_bits));
    return h;
}

} // namespace tude
