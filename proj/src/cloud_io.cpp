#include "tude/cloud_io.hpp"

#include "tude/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

namespace tude {
namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

CloudFormat format_from_extension(const std::string& path) {
    const std::string ext = lower(std::filesystem::path(path).extension().string());
    if (ext == ".ply") return CloudFormat::PlyAscii;
    if (ext == ".xyz" || ext == ".txt" || ext == ".pts") return CloudFormat::Xyz;
    return CloudFormat::Auto;
}

CloudFormat sniff_format(std::istream& in) {
    std::string first;
    std::getline(in, first);
    in.clear();
    in.seekg(0);
    if (first.rfind("ply", 0) == 0) return CloudFormat::PlyAscii;
    return CloudFormat::Xyz;
}

bool parse_double(const char*& cursor, const char* end, double& out) {
    while (cursor < end && std::isspace(static_cast<unsigned char>(*cursor))) ++cursor;
    if (cursor < end && *cursor == '+') ++cursor;
    auto [ptr, ec] = std::from_chars(cursor, end, out);
    if (ec != std::errc{}) return false;
    cursor = ptr;
    return true;
}

// Splits a data line into doubles; returns how many parsed (up to max_vals).
int parse_doubles(const std::string& line, double* vals, int max_vals, bool& trailing) {
    const char* cur = line.data();
    const char* end = line.data() + line.size();
    int n = 0;
    while (n < max_vals && parse_double(cur, end, vals[n])) ++n;
    while (cur < end && std::isspace(static_cast<unsigned char>(*cur))) ++cur;
    trailing = cur < end;
    return n;
}

bool blank_or_comment(const std::string& line) {
    for (char c : line) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        return c == '#';
    }
    return true;
}

void check_finite(const std::string& path, long line_no, const double* v) {
    for (int i = 0; i < 3; ++i) {
        if (!std::isfinite(v[i])) {
            throw ParseError(path, line_no, "non-finite coordinate");
        }
    }
}

PointCloud read_xyz(std::istream& in, const std::string& path) {
    PointCloud cloud;
    std::string line;
    long line_no = 0;
    bool warned_extra = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank_or_comment(line)) continue;
        double v[3];
        bool trailing = false;
        const int n = parse_doubles(line, v, 3, trailing);
        if (n < 3) {
            throw ParseError(path, line_no, "expected three coordinates");
        }
        if (trailing && !warned_extra) {
            std::cerr << "warning: " << path << ": extra columns ignored\n";
            warned_extra = true;
        }
        check_finite(path, line_no, v);
        cloud.points.push_back({v[0], v[1], v[2]});
    }
    if (cloud.empty()) throw ParseError(path + ": empty cloud");
    return cloud;
}

struct PlyElement {
    std::string name;
    long count = 0;
    std::vector<std::string> properties; // names, in column order
    bool has_list = false;
};

PointCloud read_ply(std::istream& in, const std::string& path) {
    std::string line;
    long line_no = 0;

    auto next_line = [&](const char* what) {
        if (!std::getline(in, line)) {
            throw ParseError(path, line_no, std::string("unexpected end of file, expected ") + what);
        }
        ++line_no;
    };

    next_line("ply magic");
    if (line.rfind("ply", 0) != 0) throw ParseError(path, line_no, "missing ply magic");

    std::vector<PlyElement> elements;
    bool ascii = false;
    while (true) {
        next_line("header line");
        std::istringstream ls(line);
        std::string keyword;
        ls >> keyword;
        if (keyword == "comment" || keyword == "obj_info" || keyword.empty()) continue;
        if (keyword == "format") {
            std::string fmt;
            ls >> fmt;
            ascii = (fmt == "ascii");
            if (!ascii) throw ParseError(path, line_no, "only ascii ply is supported");
        } else if (keyword == "element") {
            PlyElement el;
            ls >> el.name >> el.count;
            if (ls.fail() || el.count < 0) throw ParseError(path, line_no, "bad element declaration");
            elements.push_back(el);
        } else if (keyword == "property") {
            if (elements.empty()) throw ParseError(path, line_no, "property before element");
            std::string type;
            ls >> type;
            if (type == "list") {
                elements.back().has_list = true;
                continue;
            }
            std::string name;
            ls >> name;
            elements.back().properties.push_back(name);
        } else if (keyword == "end_header") {
            break;
        } else {
            throw ParseError(path, line_no, "unknown header keyword '" + keyword + "'");
        }
    }
    if (!ascii) throw ParseError(path + ": missing format declaration");

    auto vertex_it = std::find_if(elements.begin(), elements.end(),
                                  [](const PlyElement& e) { return e.name == "vertex"; });
    if (vertex_it == elements.end()) throw ParseError(path + ": no vertex element");
    if (vertex_it->count == 0) throw ParseError(path + ": empty cloud");

    int col[3] = {-1, -1, -1};
    const char* axes[3] = {"x", "y", "z"};
    for (int a = 0; a < 3; ++a) {
        auto it = std::find(vertex_it->properties.begin(), vertex_it->properties.end(), axes[a]);
        if (it == vertex_it->properties.end()) {
            throw ParseError(path + ": vertex element lacks property " + axes[a]);
        }
        col[a] = static_cast<int>(it - vertex_it->properties.begin());
    }
    const int n_props = static_cast<int>(vertex_it->properties.size());
    if (n_props > 3) {
        std::cerr << "warning: " << path << ": ignoring " << (n_props - 3)
                  << " non-position vertex properties\n";
    }

    // Skip data rows of elements declared before the vertex element.
    for (auto it = elements.begin(); it != vertex_it; ++it) {
        for (long i = 0; i < it->count; ++i) next_line("element row");
    }

    PointCloud cloud;
    cloud.points.reserve(static_cast<size_t>(vertex_it->count));
    std::vector<double> vals(static_cast<size_t>(n_props));
    for (long i = 0; i < vertex_it->count; ++i) {
        do {
            if (!std::getline(in, line)) {
                throw ParseError(path + ": vertex count mismatch: declared " +
                                 std::to_string(vertex_it->count) + ", found " + std::to_string(i));
            }
            ++line_no;
        } while (blank_or_comment(line));
        bool trailing = false;
        const int got = parse_doubles(line, vals.data(), n_props, trailing);
        if (got < n_props) {
            throw ParseError(path, line_no, "vertex row has too few values");
        }
        double v[3] = {vals[static_cast<size_t>(col[0])], vals[static_cast<size_t>(col[1])],
                       vals[static_cast<size_t>(col[2])]};
        check_finite(path, line_no, v);
        cloud.points.push_back({v[0], v[1], v[2]});
    }
    return cloud;
}

void format_row(char* buf, size_t n, const Point3& p) {
    std::snprintf(buf, n, "%.17g %.17g %.17g\n", p.x, p.y, p.z);
}

} // namespace

PointCloud read_cloud(const std::string& path, CloudFormat format) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    if (format == CloudFormat::Auto) {
        format = format_from_extension(path);
        if (format == CloudFormat::Auto) format = sniff_format(in);
    }
    PointCloud cloud = (format == CloudFormat::PlyAscii) ? read_ply(in, path) : read_xyz(in, path);
    cloud.name = std::filesystem::path(path).stem().string();
    return cloud;
}

void write_cloud(const PointCloud& cloud, const std::string& path, CloudFormat format) {
    if (format == CloudFormat::Auto) {
        format = format_from_extension(path);
        if (format == CloudFormat::Auto) format = CloudFormat::Xyz;
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    char buf[128];
    if (format == CloudFormat::PlyAscii) {
        out << "ply\nformat ascii 1.0\nelement vertex " << cloud.size()
            << "\nproperty double x\nproperty double y\nproperty double z\nend_header\n";
    }
    for (const Point3& p : cloud.points) {
        format_row(buf, sizeof(buf), p);
        out << buf;
    }
    out.flush();
    if (!out) throw IoError("write failed for " + path);
}

} // namespace tude
