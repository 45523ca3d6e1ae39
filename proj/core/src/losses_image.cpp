#include <algorithm>
#include <array>
#include <cmath>

#include "stainlab/losses.hpp"
#include "stainlab/metrics.hpp"

namespace stainlab::losses {

namespace {

std::vector<double> ssim_window(int n, double sigma) {
    std::vector<double> k(static_cast<std::size_t>(n) * n);
    const int r = n / 2;
    double sum = 0.0;
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
            const double dy = y - r, dx = x - r;
            const double v = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
            k[static_cast<std::size_t>(y) * n + x] = v;
            sum += v;
        }
    for (double& v : k) v /= sum;
    return k;
}

Tensor image_to_unit(const ImageRGB& img) {
    Tensor t({img.height, img.width, 3});
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
        t[i] = static_cast<double>(img.pixels[i]) / 255.0;
    return t;
}

}  // namespace

double ssim_loss(const Tensor& k_f, const Tensor& k_r, double peak) {
    return 1.0 - metrics::ssim(k_f, k_r, peak);
}

double ssim_loss(const ImageRGB& k_f, const ImageRGB& k_r) {
    return 1.0 - metrics::ssim(k_f, k_r);
}

Tensor ssim_loss_grad(const Tensor& a, const Tensor& b, double peak) {
    require_same_shape(a, b, "ssim_loss_grad");
    require_rank(a, 3, "ssim_loss_grad");
    const metrics::GaussianWindow window{};
    const std::size_t h = a.extent(0), w = a.extent(1), c = a.extent(2);
    const int n = window.size;
    if (h < static_cast<std::size_t>(n) || w < static_cast<std::size_t>(n))
        throw DimensionError("ssim_loss_grad: image smaller than window");
    const std::vector<double> win = ssim_window(n, window.sigma);
    const double c1 = (0.01 * peak) * (0.01 * peak);
    const double c2 = (0.03 * peak) * (0.03 * peak);
    const std::size_t oh = h - n + 1, ow = w - n + 1;
    const double scale = -1.0 / static_cast<double>(oh * ow * c);  // loss = 1 - mean(S)

    Tensor grad(a.shape());
    for (std::size_t ch = 0; ch < c; ++ch) {
        for (std::size_t oy = 0; oy < oh; ++oy) {
            for (std::size_t ox = 0; ox < ow; ++ox) {
                double mu_a = 0.0, mu_b = 0.0, ea2 = 0.0, eab = 0.0, eb2 = 0.0;
                for (int ky = 0; ky < n; ++ky)
                    for (int kx = 0; kx < n; ++kx) {
                        const double wk = win[static_cast<std::size_t>(ky) * n + kx];
                        const double va = a.at(oy + ky, ox + kx, ch);
                        const double vb = b.at(oy + ky, ox + kx, ch);
                        mu_a += wk * va;
                        mu_b += wk * vb;
                        ea2 += wk * va * va;
                        eb2 += wk * vb * vb;
                        eab += wk * va * vb;
                    }
                const double var_a = ea2 - mu_a * mu_a;
                const double var_b = eb2 - mu_b * mu_b;
                const double cov = eab - mu_a * mu_b;
                const double a1 = 2.0 * mu_a * mu_b + c1;
                const double a2 = 2.0 * cov + c2;
                const double b1 = mu_a * mu_a + mu_b * mu_b + c1;
                const double b2 = var_a + var_b + c2;

                // S as a function of (mu_a, E[a^2], E[ab]) with
                // var_a = E[a^2]-mu_a^2 and cov = E[ab]-mu_a*mu_b.
                const double ds_dea2 = -a1 * a2 / (b1 * b2 * b2);
                const double ds_deab = 2.0 * a1 / (b1 * b2);
                const double ds_dmua = (2.0 * mu_b * a2 * b1 - 2.0 * mu_a * a1 * a2) /
                                           (b1 * b1 * b2) +
                                       ds_dea2 * (-2.0 * mu_a) + ds_deab * (-mu_b);

                for (int ky = 0; ky < n; ++ky)
                    for (int kx = 0; kx < n; ++kx) {
                        const double wk = win[static_cast<std::size_t>(ky) * n + kx];
                        const double va = a.at(oy + ky, ox + kx, ch);
                        const double vb = b.at(oy + ky, ox + kx, ch);
                        grad.at(oy + ky, ox + kx, ch) +=
                            scale * wk * (ds_dmua + 2.0 * va * ds_dea2 + vb * ds_deab);
                    }
            }
        }
    }
    return grad;
}

// --- Gaussian pyramid ---

namespace {

constexpr std::array<double, 5> kBinomial5{1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16,
                                           1.0 / 16};

long clamp_idx(long i, long n) { return std::clamp(i, 0L, n - 1); }

// Separable 5-tap blur with clamped borders; constants are preserved.
Tensor blur5(const Tensor& t) {
    const auto h = static_cast<long>(t.extent(0));
    const auto w = static_cast<long>(t.extent(1));
    const std::size_t c = t.extent(2);
    Tensor tmp(t.shape()), out(t.shape());
    for (long y = 0; y < h; ++y)
        for (long x = 0; x < w; ++x)
            for (std::size_t ch = 0; ch < c; ++ch) {
                double acc = 0.0;
                for (int j = -2; j <= 2; ++j)
                    acc += kBinomial5[static_cast<std::size_t>(j + 2)] *
                           t.at(static_cast<std::size_t>(y),
                                static_cast<std::size_t>(clamp_idx(x + j, w)), ch);
                tmp.at(static_cast<std::size_t>(y), static_cast<std::size_t>(x), ch) = acc;
            }
    for (long y = 0; y < h; ++y)
        for (long x = 0; x < w; ++x)
            for (std::size_t ch = 0; ch < c; ++ch) {
                double acc = 0.0;
                for (int j = -2; j <= 2; ++j)
                    acc += kBinomial5[static_cast<std::size_t>(j + 2)] *
                           tmp.at(static_cast<std::size_t>(clamp_idx(y + j, h)),
                                  static_cast<std::size_t>(x), ch);
                out.at(static_cast<std::size_t>(y), static_cast<std::size_t>(x), ch) = acc;
            }
    return out;
}

// Adjoint of blur5: the two 1-D passes in reverse order, scattering into
// clamped indices.
Tensor blur5_adjoint(const Tensor& g) {
    const auto h = static_cast<long>(g.extent(0));
    const auto w = static_cast<long>(g.extent(1));
    const std::size_t c = g.extent(2);
    Tensor tmp(g.shape()), out(g.shape());
    for (long y = 0; y < h; ++y)
        for (long x = 0; x < w; ++x)
            for (std::size_t ch = 0; ch < c; ++ch) {
                const double v =
                    g.at(static_cast<std::size_t>(y), static_cast<std::size_t>(x), ch);
                for (int j = -2; j <= 2; ++j)
                    tmp.at(static_cast<std::size_t>(clamp_idx(y + j, h)),
                           static_cast<std::size_t>(x), ch) +=
                        kBinomial5[static_cast<std::size_t>(j + 2)] * v;
            }
    for (long y = 0; y < h; ++y)
        for (long x = 0; x < w; ++x)
            for (std::size_t ch = 0; ch < c; ++ch) {
                const double v =
                    tmp.at(static_cast<std::size_t>(y), static_cast<std::size_t>(x), ch);
                for (int j = -2; j <= 2; ++j)
                    out.at(static_cast<std::size_t>(y),
                           static_cast<std::size_t>(clamp_idx(x + j, w)), ch) +=
                        kBinomial5[static_cast<std::size_t>(j + 2)] * v;
            }
    return out;
}

Tensor downsample2(const Tensor& t) {
    const std::size_t h = t.extent(0), w = t.extent(1), c = t.extent(2);
    const std::size_t oh = (h + 1) / 2, ow = (w + 1) / 2;
    Tensor out({oh, ow, c});
    for (std::size_t y = 0; y < oh; ++y)
        for (std::size_t x = 0; x < ow; ++x)
            for (std::size_t ch = 0; ch < c; ++ch)
                out.at(y, x, ch) = t.at(2 * y, 2 * x, ch);
    return out;
}

Tensor upsample2_adjoint(const Tensor& g, std::size_t h, std::size_t w) {
    const std::size_t c = g.extent(2);
    Tensor out({h, w, c});
    for (std::size_t y = 0; y < g.extent(0); ++y)
        for (std::size_t x = 0; x < g.extent(1); ++x)
            for (std::size_t ch = 0; ch < c; ++ch)
                out.at(2 * y, 2 * x, ch) = g.at(y, x, ch);
    return out;
}

void check_gp_args(const Tensor& k_f, const Tensor& k_r, std::size_t levels,
                   std::span<const double> lambdas) {
    require_same_shape(k_f, k_r, "gp_loss");
    require_rank(k_f, 3, "gp_loss");
    if (levels < 1) throw ConfigError("gp_loss: need at least one level");
    if (lambdas.size() != levels)
        throw ConfigError("gp_loss: lambda count must equal level count");
    const std::size_t min_dim = std::size_t{1} << (levels - 1);
    if (k_f.extent(0) < min_dim || k_f.extent(1) < min_dim)
        throw DimensionError("gp_loss: image too small for requested levels");
}

}  // namespace

std::span<const double> gp_default_lambdas() {
    static const std::array<double, 4> l{1.0, 2.0, 4.0, 8.0};
    return {l.data(), l.size()};
}

double gp_loss(const Tensor& k_f, const Tensor& k_r, std::size_t levels,
               std::span<const double> lambdas) {
    check_gp_args(k_f, k_r, levels, lambdas);
    Tensor cur_f = k_f, cur_r = k_r;
    double total = 0.0;
    for (std::size_t lv = 0; lv < levels; ++lv) {
        if (lv > 0) {
            cur_f = downsample2(blur5(cur_f));
            cur_r = downsample2(blur5(cur_r));
        }
        double acc = 0.0;
        for (std::size_t i = 0; i < cur_f.size(); ++i)
            acc += std::abs(cur_r[i] - cur_f[i]);
        total += lambdas[lv] * acc / static_cast<double>(cur_f.size());
    }
    return total;
}

double gp_loss(const ImageRGB& k_f, const ImageRGB& k_r, std::size_t levels,
               std::span<const double> lambdas) {
    if (!k_f.same_shape(k_r)) throw DimensionError("gp_loss: image shape mismatch");
    return gp_loss(image_to_unit(k_f), image_to_unit(k_r), levels, lambdas);
}

Tensor gp_loss_grad(const Tensor& k_f, const Tensor& k_r, std::size_t levels,
                    std::span<const double> lambdas) {
    check_gp_args(k_f, k_r, levels, lambdas);
    std::vector<Tensor> pyr_f, pyr_r;
    pyr_f.push_back(k_f);
    pyr_r.push_back(k_r);
    for (std::size_t lv = 1; lv < levels; ++lv) {
        pyr_f.push_back(downsample2(blur5(pyr_f.back())));
        pyr_r.push_back(downsample2(blur5(pyr_r.back())));
    }

    Tensor grad(k_f.shape());
    for (std::size_t lv = 0; lv < levels; ++lv) {
        const Tensor& lf = pyr_f[lv];
        const Tensor& lr = pyr_r[lv];
        const double coeff = lambdas[lv] / static_cast<double>(lf.size());
        // d mean|R - F| / dF = -sign(R - F)/n, pulled back level by level.
        Tensor g(lf.shape());
        for (std::size_t i = 0; i < lf.size(); ++i) {
            const double diff = lr[i] - lf[i];
            g[i] = -coeff * (diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0));
        }
        for (std::size_t back = lv; back > 0; --back) {
            g = blur5_adjoint(
                upsample2_adjoint(g, pyr_f[back - 1].extent(0), pyr_f[back - 1].extent(1)));
        }
        for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += g[i];
    }
    return grad;
}

}  // namespace stainlab::losses
