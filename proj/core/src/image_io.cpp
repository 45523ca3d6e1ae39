#include "stainlab/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "stainlab/errors.hpp"

namespace stainlab::io {

namespace {

std::string lower_ext(const std::filesystem::path& path) {
    std::string e = path.extension().string();
    for (char& c : e) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return e;
}

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

ImageRGB read_image(const std::filesystem::path& path) {
    const std::string ext = lower_ext(path);
    if (ext == ".png") return read_png(path);
    if (ext == ".tif" || ext == ".tiff") return read_tiff(path);
    throw IoError("unsupported image format '" + ext + "': " + path.string());
}

ImageRGB read_png(const std::filesystem::path& path) {
    FilePtr fp(std::fopen(path.string().c_str(), "rb"));
    if (!fp) throw IoError("cannot open image: " + path.string());

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("libpng info init failed");
    }
    std::vector<png_bytep> row_ptrs;
    ImageRGB img;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("corrupt PNG: " + path.string());
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);

    // Normalize everything to 8-bit RGB.
    png_set_expand(png);
    png_set_strip_16(png);
    png_set_strip_alpha(png);
    png_set_gray_to_rgb(png);
    png_read_update_info(png, info);

    const png_uint_32 w = png_get_image_width(png, info);
    const png_uint_32 h = png_get_image_height(png, info);
    if (png_get_channels(png, info) != 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("PNG did not normalize to RGB: " + path.string());
    }
    img = ImageRGB(w, h);
    row_ptrs.resize(h);
    for (png_uint_32 y = 0; y < h; ++y)
        row_ptrs[y] = img.pixels.data() + static_cast<std::size_t>(y) * w * 3;
    png_read_image(png, row_ptrs.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

void write_png(const std::filesystem::path& path, const ImageRGB& img) {
    if (img.width == 0 || img.height == 0)
        throw DimensionError("write_png: empty image");
    FilePtr fp(std::fopen(path.string().c_str(), "wb"));
    if (!fp) throw IoError("cannot write image: " + path.string());

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("libpng info init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("PNG write failed: " + path.string());
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(img.width),
                 static_cast<png_uint_32>(img.height), 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (std::size_t y = 0; y < img.height; ++y)
        png_write_row(png, const_cast<png_bytep>(img.pixels.data() + y * img.width * 3));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

// --- baseline TIFF (uncompressed, chunky, 8-bit RGB/RGBA) ---

namespace {

struct TiffReader {
    std::vector<std::uint8_t> bytes;
    bool big_endian = false;

    std::uint16_t u16(std::size_t off) const {
        check(off, 2);
        return big_endian
                   ? static_cast<std::uint16_t>(bytes[off] << 8 | bytes[off + 1])
                   : static_cast<std::uint16_t>(bytes[off + 1] << 8 | bytes[off]);
    }
    std::uint32_t u32(std::size_t off) const {
        check(off, 4);
        if (big_endian)
            return (std::uint32_t(bytes[off]) << 24) | (std::uint32_t(bytes[off + 1]) << 16) |
                   (std::uint32_t(bytes[off + 2]) << 8) | bytes[off + 3];
        return (std::uint32_t(bytes[off + 3]) << 24) | (std::uint32_t(bytes[off + 2]) << 16) |
               (std::uint32_t(bytes[off + 1]) << 8) | bytes[off];
    }
    void check(std::size_t off, std::size_t len) const {
        if (off + len > bytes.size()) throw FormatError("TIFF: truncated file");
    }
};

struct TiffTag {
    std::uint16_t id;
    std::uint16_t type;
    std::uint32_t count;
    std::size_t value_off;  // offset of the inline value field
};

std::uint32_t tag_scalar(const TiffReader& r, const TiffTag& t, std::uint32_t index = 0) {
    const std::size_t elem = (t.type == 3) ? 2 : 4;  // SHORT or LONG
    std::size_t base = t.value_off;
    if (elem * t.count > 4) base = r.u32(t.value_off);
    const std::size_t off = base + index * elem;
    return t.type == 3 ? r.u16(off) : r.u32(off);
}

}  // namespace

ImageRGB read_tiff(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open image: " + path.string());
    TiffReader r;
    r.bytes.assign(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
    if (r.bytes.size() < 8) throw FormatError("TIFF: truncated header");
    if (r.bytes[0] == 'I' && r.bytes[1] == 'I')
        r.big_endian = false;
    else if (r.bytes[0] == 'M' && r.bytes[1] == 'M')
        r.big_endian = true;
    else
        throw FormatError("TIFF: bad byte-order mark");
    if (r.u16(2) != 42) throw FormatError("TIFF: bad magic");

    const std::uint32_t ifd = r.u32(4);
    const std::uint16_t n_tags = r.u16(ifd);
    std::uint32_t width = 0, height = 0, samples = 0, rows_per_strip = 0xffffffff;
    std::uint32_t compression = 1, planar = 1, bits = 8;
    TiffTag strip_offsets{}, strip_counts{};
    bool have_offsets = false, have_counts = false;

    for (std::uint16_t i = 0; i < n_tags; ++i) {
        const std::size_t e = ifd + 2 + static_cast<std::size_t>(i) * 12;
        TiffTag tag{r.u16(e), r.u16(e + 2), r.u32(e + 4), e + 8};
        switch (tag.id) {
            case 256: width = tag_scalar(r, tag); break;
            case 257: height = tag_scalar(r, tag); break;
            case 258: bits = tag_scalar(r, tag); break;
            case 259: compression = tag_scalar(r, tag); break;
            case 273: strip_offsets = tag; have_offsets = true; break;
            case 277: samples = tag_scalar(r, tag); break;
            case 278: rows_per_strip = tag_scalar(r, tag); break;
            case 279: strip_counts = tag; have_counts = true; break;
            case 284: planar = tag_scalar(r, tag); break;
            default: break;
        }
    }
    if (width == 0 || height == 0 || !have_offsets || !have_counts)
        throw FormatError("TIFF: missing required tags");
    if (compression != 1)
        throw FormatError("TIFF: only uncompressed baseline files are supported");
    if (planar != 1) throw FormatError("TIFF: planar configuration unsupported");
    if (bits != 8) throw FormatError("TIFF: only 8-bit samples supported");
    if (samples != 3 && samples != 4)
        throw FormatError("TIFF: expected RGB or RGBA samples");
    if (rows_per_strip == 0xffffffff) rows_per_strip = height;

    ImageRGB img(width, height);
    const std::size_t row_bytes = static_cast<std::size_t>(width) * samples;
    std::uint32_t row = 0;
    for (std::uint32_t s = 0; s < strip_offsets.count && row < height; ++s) {
        const std::uint32_t off = tag_scalar(r, strip_offsets, s);
        const std::uint32_t len = tag_scalar(r, strip_counts, s);
        r.check(off, len);
        const std::uint32_t rows_here =
            std::min<std::uint32_t>(rows_per_strip, height - row);
        if (static_cast<std::size_t>(rows_here) * row_bytes > len)
            throw FormatError("TIFF: strip shorter than declared rows");
        for (std::uint32_t y = 0; y < rows_here; ++y, ++row) {
            const std::uint8_t* src = r.bytes.data() + off + static_cast<std::size_t>(y) * row_bytes;
            std::uint8_t* dst = img.pixels.data() + static_cast<std::size_t>(row) * width * 3;
            if (samples == 3) {
                std::memcpy(dst, src, row_bytes);
            } else {
                for (std::uint32_t x = 0; x < width; ++x) {
                    dst[x * 3 + 0] = src[x * 4 + 0];
                    dst[x * 3 + 1] = src[x * 4 + 1];
                    dst[x * 3 + 2] = src[x * 4 + 2];
                }
            }
        }
    }
    if (row != height) throw FormatError("TIFF: strips do not cover the image");
    return img;
}

// --- 16-bit PGM ---

void write_pgm16(const std::filesystem::path& path, const Tensor& values,
                 double od_ref) {
    require_rank(values, 2, "write_pgm16");
    if (od_ref <= 0.0) throw ConfigError("write_pgm16: od_ref must be positive");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot write PGM: " + path.string());
    const std::size_t h = values.extent(0), w = values.extent(1);
    char header[160];
    std::snprintf(header, sizeof header,
                  "P5\n# stainlab fod od_ref=%.9g counts_per_od=%.9g\n%zu %zu\n65535\n",
                  od_ref, 65535.0 / od_ref, w, h);
    os << header;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double unit = std::clamp(values[i] / od_ref, 0.0, 1.0);
        const auto v = static_cast<std::uint16_t>(std::lround(unit * 65535.0));
        // netpbm stores the most significant byte first
        os.put(static_cast<char>(v >> 8));
        os.put(static_cast<char>(v & 0xff));
    }
}

Tensor read_pgm16(const std::filesystem::path& path, double* od_ref) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open PGM: " + path.string());
    std::string magic;
    is >> magic;
    if (magic != "P5") throw FormatError("PGM: expected P5");
    if (od_ref) *od_ref = 0.0;

    auto next_token = [&]() -> std::string {
        std::string tok;
        while (is) {
            is >> std::ws;
            if (is.peek() == '#') {
                std::string comment;
                std::getline(is, comment);
                const auto pos = comment.find("od_ref=");
                if (od_ref && pos != std::string::npos)
                    *od_ref = std::stod(comment.substr(pos + 7));
                continue;
            }
            is >> tok;
            break;
        }
        if (tok.empty()) throw FormatError("PGM: truncated header");
        return tok;
    };

    const std::size_t w = std::stoul(next_token());
    const std::size_t h = std::stoul(next_token());
    const std::size_t maxval = std::stoul(next_token());
    if (maxval != 65535) throw FormatError("PGM: expected 16-bit maxval");
    is.get();  // single whitespace after maxval

    Tensor t({h, w});
    for (std::size_t i = 0; i < t.size(); ++i) {
        const int hi = is.get(), lo = is.get();
        if (hi < 0 || lo < 0) throw FormatError("PGM: truncated payload");
        const double unit = static_cast<double>((hi << 8) | lo) / 65535.0;
        t[i] = od_ref && *od_ref > 0.0 ? unit * *od_ref : unit;
    }
    return t;
}

}  // namespace stainlab::io
