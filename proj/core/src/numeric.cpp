#include "stainlab/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stainlab {

Tensor conv2d(const Tensor& input, const Tensor& kernel, Padding padding) {
    require_rank(input, 3, "conv2d input");
    require_rank(kernel, 4, "conv2d kernel");
    const std::size_t h = input.extent(0), w = input.extent(1), cin = input.extent(2);
    const std::size_t kh = kernel.extent(0), kw = kernel.extent(1);
    const std::size_t kcin = kernel.extent(2), cout = kernel.extent(3);
    if (kh % 2 == 0 || kw % 2 == 0)
        throw DimensionError("conv2d: kernel extents must be odd");
    if (kcin != cin)
        throw DimensionError("conv2d: kernel Cin " + std::to_string(kcin) +
                             " != input Cin " + std::to_string(cin));
    const long rh = static_cast<long>(kh) / 2;
    const long rw = static_cast<long>(kw) / 2;

    std::size_t oh, ow;
    long y0, x0;
    if (padding == Padding::same) {
        oh = h;
        ow = w;
        y0 = -rh;
        x0 = -rw;
    } else {
        if (h < kh || w < kw)
            throw DimensionError("conv2d: input smaller than kernel under valid padding");
        oh = h - kh + 1;
        ow = w - kw + 1;
        y0 = 0;
        x0 = 0;
    }

    Tensor out({oh, ow, cout});
    for (std::size_t oy = 0; oy < oh; ++oy) {
        for (std::size_t ox = 0; ox < ow; ++ox) {
            for (std::size_t oc = 0; oc < cout; ++oc) {
                double acc = 0.0;
                for (std::size_t ky = 0; ky < kh; ++ky) {
                    const long iy = y0 + static_cast<long>(oy) + static_cast<long>(ky);
                    if (iy < 0 || iy >= static_cast<long>(h)) continue;
                    for (std::size_t kx = 0; kx < kw; ++kx) {
                        const long ix = x0 + static_cast<long>(ox) + static_cast<long>(kx);
                        if (ix < 0 || ix >= static_cast<long>(w)) continue;
                        for (std::size_t ic = 0; ic < cin; ++ic) {
                            acc += input.at(static_cast<std::size_t>(iy),
                                            static_cast<std::size_t>(ix), ic) *
                                   kernel.at(ky, kx, ic, oc);
                        }
                    }
                }
                out.at(oy, ox, oc) = acc;
            }
        }
    }
    return out;
}

Tensor avg_pool_global(const Tensor& x) {
    require_rank(x, 3, "avg_pool_global");
    const std::size_t h = x.extent(0), w = x.extent(1), c = x.extent(2);
    if (h == 0 || w == 0 || c == 0)
        throw DimensionError("avg_pool_global: empty tensor");
    Tensor out({c});
    const double inv = 1.0 / static_cast<double>(h * w);
    for (std::size_t ch = 0; ch < c; ++ch) {
        double acc = 0.0;
        for (std::size_t i = 0; i < h; ++i)
            for (std::size_t j = 0; j < w; ++j) acc += x.at(i, j, ch);
        out[ch] = acc * inv;
    }
    return out;
}

Tensor max_pool_global(const Tensor& x) {
    require_rank(x, 3, "max_pool_global");
    const std::size_t h = x.extent(0), w = x.extent(1), c = x.extent(2);
    if (h == 0 || w == 0 || c == 0)
        throw DimensionError("max_pool_global: empty tensor");
    Tensor out({c});
    for (std::size_t ch = 0; ch < c; ++ch) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < h; ++i)
            for (std::size_t j = 0; j < w; ++j) best = std::max(best, x.at(i, j, ch));
        out[ch] = best;
    }
    return out;
}

Tensor instance_norm(const Tensor& x, double eps) {
    require_rank(x, 3, "instance_norm");
    const std::size_t h = x.extent(0), w = x.extent(1), c = x.extent(2);
    const double n = static_cast<double>(h * w);
    Tensor out(x.shape());
    for (std::size_t ch = 0; ch < c; ++ch) {
        double mean = 0.0;
        for (std::size_t i = 0; i < h; ++i)
            for (std::size_t j = 0; j < w; ++j) mean += x.at(i, j, ch);
        mean /= n;
        double var = 0.0;
        for (std::size_t i = 0; i < h; ++i)
            for (std::size_t j = 0; j < w; ++j) {
                const double d = x.at(i, j, ch) - mean;
                var += d * d;
            }
        var /= n;
        const double inv_sigma = 1.0 / std::sqrt(var + eps);
        for (std::size_t i = 0; i < h; ++i)
            for (std::size_t j = 0; j < w; ++j)
                out.at(i, j, ch) = (x.at(i, j, ch) - mean) * inv_sigma;
    }
    return out;
}

Tensor layer_norm(const Tensor& x, double eps) {
    require_rank(x, 3, "layer_norm");
    const std::size_t n = x.size();
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += x[i];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - mean;
        var += d * d;
    }
    var /= static_cast<double>(n);
    const double inv_sigma = 1.0 / std::sqrt(var + eps);
    Tensor out(x.shape());
    for (std::size_t i = 0; i < n; ++i) out[i] = (x[i] - mean) * inv_sigma;
    return out;
}

Tensor softmax(const Tensor& scores) {
    if (scores.rank() == 0 || scores.size() == 0)
        throw DimensionError("softmax: empty tensor");
    const std::size_t classes = scores.extent(scores.rank() - 1);
    const std::size_t rows = scores.size() / classes;
    Tensor out(scores.shape());
    for (std::size_t r = 0; r < rows; ++r) {
        const double* in = scores.data() + r * classes;
        double* o = out.data() + r * classes;
        double hi = in[0];
        for (std::size_t c = 1; c < classes; ++c) hi = std::max(hi, in[c]);
        double sum = 0.0;
        for (std::size_t c = 0; c < classes; ++c) {
            o[c] = std::exp(in[c] - hi);
            sum += o[c];
        }
        for (std::size_t c = 0; c < classes; ++c) o[c] /= sum;
    }
    return out;
}

double cosine_sim(const Tensor& a, const Tensor& b) {
    require_same_shape(a, b, "cosine_sim");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0)
        throw DegenerateInputError("cosine_sim: zero-norm vector");
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace stainlab
