#include "tude/config_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>

#include "tude/errors.hpp"

namespace tude {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

int parse_int(std::string_view value, const std::string& origin, int line) {
    int out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw ParseError(origin, line, "expected an integer, got '" + std::string(value) + "'");
    }
    return out;
}

double parse_real(std::string_view value, const std::string& origin, int line) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw ParseError(origin, line, "expected a number, got '" + std::string(value) + "'");
    }
    return out;
}

void apply(DenoiseConfig& cfg, std::string_view key, std::string_view value,
           const std::string& origin, int line) {
    if (key == "k") cfg.k = parse_int(value, origin, line);
    else if (key == "delta_sim") cfg.delta_sim = parse_real(value, origin, line);
    else if (key == "n_reg") cfg.n_reg = parse_int(value, origin, line);
    else if (key == "r1") cfg.ranks[0] = parse_int(value, origin, line);
    else if (key == "r2") cfg.ranks[1] = parse_int(value, origin, line);
    else if (key == "r3") cfg.ranks[2] = parse_int(value, origin, line);
    else if (key == "delta_thre") cfg.delta_thre = parse_real(value, origin, line);
    else if (key == "seed_ratio") cfg.seed_ratio = parse_real(value, origin, line);
    else if (key == "voxel_size") cfg.voxel_size = parse_real(value, origin, line);
    else if (key == "icp_max_iters") cfg.icp_max_iters = parse_int(value, origin, line);
    else if (key == "icp_tol") cfg.icp_tol = parse_real(value, origin, line);
    else if (key == "hooi_max_iters") cfg.hooi_max_iters = parse_int(value, origin, line);
    else if (key == "hooi_tol") cfg.hooi_tol = parse_real(value, origin, line);
    else if (key == "threads") cfg.threads = parse_int(value, origin, line);
    else throw ParseError(origin, line, "unknown config key '" + std::string(key) + "'");
}

} // namespace

DenoiseConfig parse_config(std::istream& in, const std::string& origin, DenoiseConfig base) {
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string_view s(raw);
        if (const size_t hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        const size_t eq = s.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError(origin, line, "expected 'key = value'");
        }
        const std::string_view key = trim(s.substr(0, eq));
        const std::string_view value = trim(s.substr(eq + 1));
        if (key.empty()) throw ParseError(origin, line, "missing key before '='");
        if (value.empty()) throw ParseError(origin, line, "missing value after '='");
        apply(base, key, value, origin, line);
    }
    return base;
}

DenoiseConfig load_config(const std::string& path, DenoiseConfig base) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    return parse_config(in, path, base);
}

std::string dump_config(const DenoiseConfig& config) {
    char buf[64];
    std::ostringstream out;
    auto real = [&buf](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    out << "k = " << config.k << '\n'
        << "delta_sim = " << real(config.delta_sim) << '\n'
        << "n_reg = " << config.n_reg << '\n'
        << "r1 = " << config.ranks[0] << '\n'
        << "r2 = " << config.ranks[1] << '\n'
        << "r3 = " << config.ranks[2] << '\n'
        << "delta_thre = " << real(config.delta_thre) << '\n'
        << "seed_ratio = " << real(config.seed_ratio) << '\n'
        << "voxel_size = " << real(config.voxel_size) << '\n'
        << "icp_max_iters = " << config.icp_max_iters << '\n'
        << "icp_tol = " << real(config.icp_tol) << '\n'
        << "hooi_max_iters = " << config.hooi_max_iters << '\n'
        << "hooi_tol = " << real(config.hooi_tol) << '\n'
        << "threads = " << config.threads << '\n';
    return out.str();
}

} // namespace tude
