#pragma once

// Independent reference implementations used to pin expected values.
// Everything here is written as directly as possible from the definitions
// and must not call into the library paths it checks.

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "stainlab/tensor.hpp"

namespace oracles {

using stainlab::Tensor;

// Direct triple sum for one output position of a cross-correlation with
// valid padding.
inline double conv_at(const Tensor& input, const Tensor& kernel, std::size_t oy,
                      std::size_t ox, std::size_t oc) {
    double acc = 0.0;
    for (std::size_t ky = 0; ky < kernel.extent(0); ++ky)
        for (std::size_t kx = 0; kx < kernel.extent(1); ++kx)
            for (std::size_t ic = 0; ic < kernel.extent(2); ++ic)
                acc += input.at(oy + ky, ox + kx, ic) * kernel.at(ky, kx, ic, oc);
    return acc;
}

inline std::vector<double> channel_means(const Tensor& x) {
    std::vector<double> out(x.extent(2), 0.0);
    for (std::size_t y = 0; y < x.extent(0); ++y)
        for (std::size_t xx = 0; xx < x.extent(1); ++xx)
            for (std::size_t c = 0; c < x.extent(2); ++c) out[c] += x.at(y, xx, c);
    for (double& v : out) v /= static_cast<double>(x.extent(0) * x.extent(1));
    return out;
}

inline std::vector<double> channel_maxima(const Tensor& x) {
    std::vector<double> out(x.extent(2), -1e300);
    for (std::size_t y = 0; y < x.extent(0); ++y)
        for (std::size_t xx = 0; xx < x.extent(1); ++xx)
            for (std::size_t c = 0; c < x.extent(2); ++c)
                out[c] = std::max(out[c], x.at(y, xx, c));
    return out;
}

// Kahan-compensated sum.
inline double compensated_sum(const std::vector<double>& xs) {
    double sum = 0.0, comp = 0.0;
    for (double x : xs) {
        const double y = x - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

// Textbook two-pass Pearson correlation.
inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double num = 0.0, da = 0.0, db = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += (a[i] - ma) * (b[i] - mb);
        da += (a[i] - ma) * (a[i] - ma);
        db += (b[i] - mb) * (b[i] - mb);
    }
    return num / std::sqrt(da * db);
}

inline std::vector<double> prefix_sums(const std::vector<double>& xs) {
    std::vector<double> out;
    double acc = 0.0;
    for (double x : xs) {
        acc += x;
        out.push_back(acc);
    }
    return out;
}

// Gaussian elimination with partial pivoting for a 3x3 system A s = b.
inline std::array<double, 3> solve3(std::array<std::array<double, 3>, 3> a,
                                    std::array<double, 3> b) {
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        if (a[col][col] == 0.0) throw std::runtime_error("singular system");
        for (int r = col + 1; r < 3; ++r) {
            const double f = a[r][col] / a[col][col];
            for (int c = col; c < 3; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::array<double, 3> s{};
    for (int r = 2; r >= 0; --r) {
        double acc = b[r];
        for (int c = r + 1; c < 3; ++c) acc -= a[r][c] * s[c];
        s[r] = acc / a[r][r];
    }
    return s;
}

// Windowed SSIM from the definition: explicit two-pass weighted mean,
// variance and covariance per window, valid support only, single channel.
inline double ssim_plane(const std::vector<std::vector<double>>& a,
                         const std::vector<std::vector<double>>& b, double peak,
                         int win = 11, double sigma = 1.5) {
    const auto h = a.size(), w = a[0].size();
    std::vector<double> kernel(static_cast<std::size_t>(win) * win);
    const int r = win / 2;
    double ksum = 0.0;
    for (int y = 0; y < win; ++y)
        for (int x = 0; x < win; ++x) {
            const double v =
                std::exp(-((x - r) * (x - r) + (y - r) * (y - r)) / (2.0 * sigma * sigma));
            kernel[static_cast<std::size_t>(y) * win + x] = v;
            ksum += v;
        }
    for (double& v : kernel) v /= ksum;
    const double c1 = (0.01 * peak) * (0.01 * peak);
    const double c2 = (0.03 * peak) * (0.03 * peak);

    double total = 0.0;
    std::size_t count = 0;
    for (std::size_t oy = 0; oy + win <= h; ++oy) {
        for (std::size_t ox = 0; ox + win <= w; ++ox) {
            double mu_a = 0.0, mu_b = 0.0;
            for (int ky = 0; ky < win; ++ky)
                for (int kx = 0; kx < win; ++kx) {
                    const double wk = kernel[static_cast<std::size_t>(ky) * win + kx];
                    mu_a += wk * a[oy + ky][ox + kx];
                    mu_b += wk * b[oy + ky][ox + kx];
                }
            double va = 0.0, vb = 0.0, cov = 0.0;
            for (int ky = 0; ky < win; ++ky)
                for (int kx = 0; kx < win; ++kx) {
                    const double wk = kernel[static_cast<std::size_t>(ky) * win + kx];
                    const double da = a[oy + ky][ox + kx] - mu_a;
                    const double db = b[oy + ky][ox + kx] - mu_b;
                    va += wk * da * da;
                    vb += wk * db * db;
                    cov += wk * da * db;
                }
            total += ((2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2)) /
                     ((mu_a * mu_a + mu_b * mu_b + c1) * (va + vb + c2));
            ++count;
        }
    }
    return total / static_cast<double>(count);
}

// Prototypes as plain weighted means.
inline Tensor prototypes(const Tensor& f, const Tensor& p) {
    const std::size_t h = f.extent(0), w = f.extent(1), d = f.extent(2);
    Tensor q({2, d});
    for (std::size_t c = 0; c < 2; ++c) {
        double mass = 0.0;
        for (std::size_t y = 0; y < h; ++y)
            for (std::size_t x = 0; x < w; ++x) mass += p.at(y, x, c);
        for (std::size_t k = 0; k < d; ++k) {
            double acc = 0.0;
            for (std::size_t y = 0; y < h; ++y)
                for (std::size_t x = 0; x < w; ++x)
                    acc += p.at(y, x, c) * f.at(y, x, k);
            q.at(c, k) = acc / mass;
        }
    }
    return q;
}

// Brute-force CPPC straight from its definition.
inline double cppc(const Tensor& f_f, const Tensor& f_r, const Tensor& p_f,
                   const Tensor& p_r, const Tensor& m_f, const Tensor& m_r) {
    const Tensor q_f = prototypes(f_f, p_f);
    const Tensor q_r = prototypes(f_r, p_r);
    const std::size_t h = f_f.extent(0), w = f_f.extent(1), d = f_f.extent(2);

    auto side = [&](const Tensor& feat, const Tensor& q, const Tensor& mask) {
        double acc = 0.0;
        for (std::size_t y = 0; y < h; ++y)
            for (std::size_t x = 0; x < w; ++x) {
                std::array<double, 2> s{};
                for (std::size_t c = 0; c < 2; ++c) {
                    double dot = 0.0, nf = 0.0, nq = 0.0;
                    for (std::size_t k = 0; k < d; ++k) {
                        dot += feat.at(y, x, k) * q.at(c, k);
                        nf += feat.at(y, x, k) * feat.at(y, x, k);
                        nq += q.at(c, k) * q.at(c, k);
                    }
                    s[c] = dot / (std::sqrt(nf) * std::sqrt(nq));
                }
                const double z = std::exp(s[0]) + std::exp(s[1]);
                for (std::size_t c = 0; c < 2; ++c)
                    acc += std::abs(std::exp(s[c]) / z - mask.at(y, x, c));
            }
        return acc;
    };
    return (side(f_f, q_r, m_f) + side(f_r, q_f, m_r)) /
           (2.0 * static_cast<double>(h * w));
}

}  // namespace oracles
