#include "stainlab/image.hpp"

#include <algorithm>
#include <cmath>

namespace stainlab {

Tensor to_unit_tensor(const ImageRGB& img) {
    Tensor t({img.height, img.width, 3});
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
        t[i] = static_cast<double>(img.pixels[i]) / 255.0;
    return t;
}

ImageRGB from_unit_tensor(const Tensor& t) {
    require_rank(t, 3, "from_unit_tensor");
    if (t.extent(2) != 3)
        throw DimensionError("from_unit_tensor: expected 3 channels");
    ImageRGB img(t.extent(1), t.extent(0));
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double v = std::clamp(t[i], 0.0, 1.0) * 255.0;
        img.pixels[i] = static_cast<std::uint8_t>(std::lround(v));
    }
    return img;
}

}  // namespace stainlab
