#pragma once

#include <cstdint>
#include <vector>

#include "stainlab/tensor.hpp"

namespace stainlab {

// 8-bit transmitted-light RGB image, row-major, interleaved channels.
struct ImageRGB {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> pixels;  // height*width*3

    ImageRGB() = default;
    ImageRGB(std::size_t w, std::size_t h)
        : width(w), height(h), pixels(w * h * 3, 0) {}

    std::uint8_t& at(std::size_t y, std::size_t x, std::size_t c) {
        return pixels[(y * width + x) * 3 + c];
    }
    std::uint8_t at(std::size_t y, std::size_t x, std::size_t c) const {
        return pixels[(y * width + x) * 3 + c];
    }

    bool same_shape(const ImageRGB& o) const {
        return width == o.width && height == o.height;
    }
};

// [H,W,3] tensor in [0,1].
Tensor to_unit_tensor(const ImageRGB& img);

// Clamps to [0,1], scales by 255 and rounds half-up.
ImageRGB from_unit_tensor(const Tensor& t);

}  // namespace stainlab
