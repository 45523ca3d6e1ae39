#include "stainlab/fixture_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "binio.hpp"

namespace stainlab::io {

namespace {

metrics::FeatureSet read_feature_set_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open feature set: " + path.string());
    std::string header;
    if (!std::getline(is, header)) throw FormatError("feature CSV: empty file");
    if (header.rfind("id,", 0) != 0)
        throw FormatError("feature CSV: header must start with 'id,'");
    std::size_t d = 0;
    for (char c : header)
        if (c == ',') ++d;  // id plus d feature columns

    metrics::FeatureSet fs;
    fs.d = d;
    fs.source = "csv";
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        if (!std::getline(ss, cell, ',')) throw FormatError("feature CSV: bad row");
        std::size_t cols = 0;
        while (std::getline(ss, cell, ',')) {
            double v;
            try {
                v = std::stod(cell);
            } catch (const std::exception&) {
                throw FormatError("feature CSV: non-numeric cell '" + cell + "'");
            }
            if (!std::isfinite(v)) throw InputError("feature CSV: non-finite value");
            fs.values.push_back(v);
            ++cols;
        }
        if (cols != d)
            throw FormatError("feature CSV: row with " + std::to_string(cols) +
                              " values, expected " + std::to_string(d));
        ++fs.n;
    }
    if (fs.n == 0) throw FormatError("feature CSV: no data rows");
    return fs;
}

}  // namespace

metrics::FeatureSet read_feature_set(const std::filesystem::path& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw IoError("cannot open feature set: " + path.string());
    char magic[4] = {0, 0, 0, 0};
    probe.read(magic, 4);
    if (std::string_view(magic, 4) != "FSET") return read_feature_set_csv(path);

    std::ifstream is(path, std::ios::binary);
    binio::expect_magic(is, "FSET", "feature set");
    metrics::FeatureSet fs;
    fs.n = binio::read_u32(is, "feature set");
    fs.d = binio::read_u32(is, "feature set");
    if (fs.n == 0 || fs.d == 0) throw FormatError("feature set: empty dimensions");
    const auto raw = binio::read_f32_block(is, fs.n * fs.d, "feature set");
    fs.values.resize(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        fs.values[i] = static_cast<double>(raw[i]);
        if (!std::isfinite(fs.values[i]))
            throw InputError("feature set: non-finite value");
    }
    fs.source = "fset";
    return fs;
}

void write_feature_set(const std::filesystem::path& path, const metrics::FeatureSet& fs) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot write feature set: " + path.string());
    os.write("FSET", 4);
    binio::write_u32(os, static_cast<std::uint32_t>(fs.n));
    binio::write_u32(os, static_cast<std::uint32_t>(fs.d));
    for (double v : fs.values) binio::write_f32(os, static_cast<float>(v));
}

void write_feature_set_csv(const std::filesystem::path& path,
                           const metrics::FeatureSet& fs) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot write feature set: " + path.string());
    os << "id";
    for (std::size_t j = 0; j < fs.d; ++j) os << ",f" << j;
    os << "\n";
    char buf[64];
    for (std::size_t i = 0; i < fs.n; ++i) {
        os << i;
        for (std::size_t j = 0; j < fs.d; ++j) {
            std::snprintf(buf, sizeof buf, "%.9g", fs.at(i, j));
            os << ',' << buf;
        }
        os << "\n";
    }
}

Tensor read_fmap(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open feature map: " + path.string());
    binio::expect_magic(is, "FMAP", "feature map");
    const std::uint32_t h = binio::read_u32(is, "feature map");
    const std::uint32_t w = binio::read_u32(is, "feature map");
    const std::uint32_t d = binio::read_u32(is, "feature map");
    if (h == 0 || w == 0 || d == 0) throw FormatError("feature map: empty dimensions");
    const auto raw = binio::read_f32_block(
        is, static_cast<std::size_t>(h) * w * d, "feature map");
    Tensor t({h, w, d});
    for (std::size_t i = 0; i < raw.size(); ++i) {
        t[i] = static_cast<double>(raw[i]);
        if (!std::isfinite(t[i])) throw InputError("feature map: non-finite value");
    }
    return t;
}

void write_fmap(const std::filesystem::path& path, const Tensor& t) {
    require_rank(t, 3, "write_fmap");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot write feature map: " + path.string());
    os.write("FMAP", 4);
    binio::write_u32(os, static_cast<std::uint32_t>(t.extent(0)));
    binio::write_u32(os, static_cast<std::uint32_t>(t.extent(1)));
    binio::write_u32(os, static_cast<std::uint32_t>(t.extent(2)));
    for (std::size_t i = 0; i < t.size(); ++i)
        binio::write_f32(os, static_cast<float>(t[i]));
}

}  // namespace stainlab::io
