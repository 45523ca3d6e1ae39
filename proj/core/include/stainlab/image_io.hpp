#pragma once

#include <filesystem>

#include "stainlab/image.hpp"
#include "stainlab/tensor.hpp"

namespace stainlab::io {

// Dispatches on extension: .png via libpng, .tif/.tiff via the built-in
// baseline reader (uncompressed 8-bit RGB/RGBA, both byte orders).
ImageRGB read_image(const std::filesystem::path& path);

ImageRGB read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const ImageRGB& img);

ImageRGB read_tiff(const std::filesystem::path& path);

// 16-bit binary PGM. FOD values are scaled so od_ref maps to 65535; the
// scale is recorded in a header comment.
void write_pgm16(const std::filesystem::path& path, const Tensor& values,
                 double od_ref);
Tensor read_pgm16(const std::filesystem::path& path, double* od_ref = nullptr);

}  // namespace stainlab::io
