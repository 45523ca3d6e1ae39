#include "stainlab/metrics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "stainlab/errors.hpp"

namespace stainlab::metrics {

void DatasetODSeries::validate(std::size_t min_len) const {
    if (test.size() != label.size())
        throw AlignmentError("OD series: test has " + std::to_string(test.size()) +
                             " entries, label has " + std::to_string(label.size()));
    if (test.size() < min_len)
        throw AlignmentError("OD series: needs at least " + std::to_string(min_len) +
                             " entries");
    for (double v : test)
        if (!std::isfinite(v) || v < 0.0)
            throw InputError("OD series: non-finite or negative test entry");
    for (double v : label)
        if (!std::isfinite(v) || v < 0.0)
            throw InputError("OD series: non-finite or negative label entry");
}

double iod(const DatasetODSeries& series) {
    series.validate(1);
    double st = 0.0, sl = 0.0;
    for (double v : series.test) st += v;
    for (double v : series.label) sl += v;
    return st - sl;
}

double pearson_r(const DatasetODSeries& series) {
    series.validate(2);
    const std::size_t n = series.test.size();
    double mt = 0.0, ml = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mt += series.test[i];
        ml += series.label[i];
    }
    mt /= static_cast<double>(n);
    ml /= static_cast<double>(n);
    double num = 0.0, vt = 0.0, vl = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = series.test[i] - mt;
        const double b = series.label[i] - ml;
        num += a * b;
        vt += a * a;
        vl += b * b;
    }
    if (vt == 0.0 || vl == 0.0)
        throw DegenerateInputError("pearson_r: zero-variance series");
    return num / std::sqrt(vt * vl);
}

CumulativeCurve cumulative_curve(const DatasetODSeries& series, CurveOrder order) {
    series.validate(1);
    const std::size_t n = series.test.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    if (order == CurveOrder::by_label_od) {
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return series.label[a] < series.label[b];
        });
    }
    CumulativeCurve curve;
    curve.test.reserve(n);
    curve.label.reserve(n);
    double ct = 0.0, cl = 0.0;
    for (std::size_t i : idx) {
        ct += series.test[i];
        cl += series.label[i];
        curve.test.push_back(ct);
        curve.label.push_back(cl);
    }
    return curve;
}

double psnr(const ImageRGB& a, const ImageRGB& b, double peak) {
    if (!a.same_shape(b)) throw DimensionError("psnr: image shape mismatch");
    if (a.pixels.empty()) throw DimensionError("psnr: empty image");
    double mse = 0.0;
    for (std::size_t i = 0; i < a.pixels.size(); ++i) {
        const double d = static_cast<double>(a.pixels[i]) - static_cast<double>(b.pixels[i]);
        mse += d * d;
    }
    mse /= static_cast<double>(a.pixels.size());
    if (mse < 1e-12) return kPsnrCap;
    return std::min(kPsnrCap, 10.0 * std::log10(peak * peak / mse));
}

namespace {

std::vector<double> gaussian_window_2d(const GaussianWindow& w) {
    const int n = w.size;
    std::vector<double> k(static_cast<std::size_t>(n) * n);
    const int r = n / 2;
    double sum = 0.0;
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            const double dy = y - r, dx = x - r;
            const double v = std::exp(-(dx * dx + dy * dy) / (2.0 * w.sigma * w.sigma));
            k[static_cast<std::size_t>(y) * n + x] = v;
            sum += v;
        }
    }
    for (double& v : k) v /= sum;
    return k;
}

}  // namespace

double ssim(const Tensor& a, const Tensor& b, double peak, GaussianWindow window) {
    require_same_shape(a, b, "ssim");
    require_rank(a, 3, "ssim");
    const std::size_t h = a.extent(0), w = a.extent(1), c = a.extent(2);
    const int n = window.size;
    if (n < 3 || n % 2 == 0) throw ConfigError("ssim: window size must be odd >= 3");
    if (h < static_cast<std::size_t>(n) || w < static_cast<std::size_t>(n))
        throw DimensionError("ssim: image smaller than window");

    const std::vector<double> win = gaussian_window_2d(window);
    const double c1 = (0.01 * peak) * (0.01 * peak);
    const double c2 = (0.03 * peak) * (0.03 * peak);
    const std::size_t oh = h - n + 1, ow = w - n + 1;

    double total = 0.0;
    for (std::size_t ch = 0; ch < c; ++ch) {
        double acc = 0.0;
        for (std::size_t oy = 0; oy < oh; ++oy) {
            for (std::size_t ox = 0; ox < ow; ++ox) {
                double mu_a = 0.0, mu_b = 0.0, ea2 = 0.0, eb2 = 0.0, eab = 0.0;
                for (int ky = 0; ky < n; ++ky) {
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
                }
                const double var_a = ea2 - mu_a * mu_a;
                const double var_b = eb2 - mu_b * mu_b;
                const double cov = eab - mu_a * mu_b;
                const double s = ((2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2)) /
                                 ((mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2));
                acc += s;
            }
        }
        total += acc / static_cast<double>(oh * ow);
    }
    return total / static_cast<double>(c);
}

double ssim(const ImageRGB& a, const ImageRGB& b, double peak, GaussianWindow window) {
    if (!a.same_shape(b)) throw DimensionError("ssim: image shape mismatch");
    Tensor ta({a.height, a.width, 3});
    Tensor tb({a.height, a.width, 3});
    for (std::size_t i = 0; i < a.pixels.size(); ++i) {
        ta[i] = static_cast<double>(a.pixels[i]);
        tb[i] = static_cast<double>(b.pixels[i]);
    }
    return ssim(ta, tb, peak, window);
}

namespace {

Eigen::MatrixXd covariance(const FeatureSet& fs) {
    const auto n = static_cast<Eigen::Index>(fs.n);
    const auto d = static_cast<Eigen::Index>(fs.d);
    Eigen::MatrixXd x(n, d);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            x(i, j) = fs.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    Eigen::RowVectorXd mu = x.colwise().mean();
    Eigen::MatrixXd centered = x.rowwise() - mu;
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(d, d);
    if (n > 1) sigma = (centered.transpose() * centered) / static_cast<double>(n - 1);
    if (fs.n <= fs.d) {
        const double ridge = 1e-6 * sigma.trace() / static_cast<double>(d);
        sigma += ridge * Eigen::MatrixXd::Identity(d, d);
    }
    return sigma;
}

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        0.5 * (m + m.transpose()));
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

double frechet_distance(const FeatureSet& a, const FeatureSet& b) {
    if (a.d != b.d)
        throw DimensionError("frechet_distance: feature dimensionality mismatch");
    if (a.n == 0 || b.n == 0)
        throw DimensionError("frechet_distance: empty feature set");
    for (double v : a.values)
        if (!std::isfinite(v)) throw InputError("frechet_distance: non-finite feature");
    for (double v : b.values)
        if (!std::isfinite(v)) throw InputError("frechet_distance: non-finite feature");

    const auto d = static_cast<Eigen::Index>(a.d);
    Eigen::VectorXd mu_a = Eigen::VectorXd::Zero(d), mu_b = Eigen::VectorXd::Zero(d);
    for (std::size_t i = 0; i < a.n; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            mu_a(j) += a.at(i, static_cast<std::size_t>(j));
    mu_a /= static_cast<double>(a.n);
    for (std::size_t i = 0; i < b.n; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            mu_b(j) += b.at(i, static_cast<std::size_t>(j));
    mu_b /= static_cast<double>(b.n);

    const Eigen::MatrixXd sa = covariance(a);
    const Eigen::MatrixXd sb = covariance(b);

    // Symmetric form sqrt(sqrt(Sa) Sb sqrt(Sa)) keeps the argument PSD.
    const Eigen::MatrixXd root_a = psd_sqrt(sa);
    const Eigen::MatrixXd cross = psd_sqrt(root_a * sb * root_a);

    const double mean_term = (mu_a - mu_b).squaredNorm();
    const double trace_term = sa.trace() + sb.trace() - 2.0 * cross.trace();
    return mean_term + trace_term;
}

GradeThresholds default_thresholds(const std::string& biomarker) {
    std::string key;
    for (char c : biomarker) key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (key == "her2")
        return {"HER2", {500.0, 2000.0, 5000.0}, {"0", "1+", "2+", "3+"}};
    if (key == "er") return {"ER", {1000.0}, {"negative", "positive"}};
    if (key == "pr") return {"PR", {1000.0}, {"negative", "positive"}};
    if (key == "ki67") return {"Ki67", {2000.0}, {"negative", "positive"}};
    throw ConfigError("unknown biomarker '" + biomarker + "' (expected HER2, ER, PR or Ki67)");
}

std::string grade(const GradeThresholds& thresholds, double cumulative_od) {
    if (thresholds.labels.size() != thresholds.cutoffs.size() + 1)
        throw ConfigError("grade: labels must be cutoffs+1");
    for (std::size_t i = 1; i < thresholds.cutoffs.size(); ++i)
        if (thresholds.cutoffs[i] <= thresholds.cutoffs[i - 1])
            throw ConfigError("grade: cutoffs must be strictly increasing");
    std::size_t tier = 0;
    for (double cut : thresholds.cutoffs)
        if (cumulative_od >= cut) ++tier;  // boundary takes the higher grade
    return thresholds.labels[tier];
}

std::string grade(const std::string& biomarker, double cumulative_od) {
    return grade(default_thresholds(biomarker), cumulative_od);
}

double blur_sigma_for_kernel(int ksize) {
    return 0.3 * ((ksize - 1) / 2.0 - 1.0) + 0.8;
}

ImageRGB gaussian_blur(const ImageRGB& img, int ksize, double sigma) {
    if (ksize < 3 || ksize % 2 == 0)
        throw ConfigError("gaussian_blur: kernel size must be odd >= 3");
    const int r = ksize / 2;
    std::vector<double> k(static_cast<std::size_t>(ksize));
    double sum = 0.0;
    for (int i = -r; i <= r; ++i) {
        const double v = std::exp(-(i * i) / (2.0 * sigma * sigma));
        k[static_cast<std::size_t>(i + r)] = v;
        sum += v;
    }
    for (double& v : k) v /= sum;

    const auto h = static_cast<long>(img.height), w = static_cast<long>(img.width);
    std::vector<double> tmp(img.pixels.size()), out(img.pixels.size());
    // Horizontal pass, clamped indices.
    for (long y = 0; y < h; ++y) {
        for (long x = 0; x < w; ++x) {
            for (int c = 0; c < 3; ++c) {
                double acc = 0.0;
                for (int j = -r; j <= r; ++j) {
                    const long xx = std::clamp(x + j, 0L, w - 1);
                    acc += k[static_cast<std::size_t>(j + r)] *
                           img.pixels[static_cast<std::size_t>((y * w + xx) * 3 + c)];
                }
                tmp[static_cast<std::size_t>((y * w + x) * 3 + c)] = acc;
            }
        }
    }
    // Vertical pass.
    for (long y = 0; y < h; ++y) {
        for (long x = 0; x < w; ++x) {
            for (int c = 0; c < 3; ++c) {
                double acc = 0.0;
                for (int j = -r; j <= r; ++j) {
                    const long yy = std::clamp(y + j, 0L, h - 1);
                    acc += k[static_cast<std::size_t>(j + r)] *
                           tmp[static_cast<std::size_t>((yy * w + x) * 3 + c)];
                }
                out[static_cast<std::size_t>((y * w + x) * 3 + c)] = acc;
            }
        }
    }
    ImageRGB blurred(img.width, img.height);
    for (std::size_t i = 0; i < out.size(); ++i)
        blurred.pixels[i] =
            static_cast<std::uint8_t>(std::clamp(std::lround(out[i]), 0L, 255L));
    return blurred;
}

std::vector<BlurProbePoint> blur_probe(const ImageRGB& img,
                                       const std::vector<int>& kernels) {
    std::vector<BlurProbePoint> probe;
    probe.reserve(kernels.size());
    for (int k : kernels) {
        if (k < 3 || k % 2 == 0)
            throw ConfigError("blur_probe: kernel sizes must be odd >= 3");
        const ImageRGB blurred = gaussian_blur(img, k, blur_sigma_for_kernel(k));
        probe.push_back({k, psnr(img, blurred), ssim(img, blurred)});
    }
    return probe;
}

}  // namespace stainlab::metrics
