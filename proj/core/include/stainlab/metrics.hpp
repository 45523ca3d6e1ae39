#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "stainlab/image.hpp"
#include "stainlab/tensor.hpp"

namespace stainlab::metrics {

inline constexpr double kPsnrCap = 99.0;

// Per-image total DAB OD for a generated set and its reference set,
// aligned by image id.
struct DatasetODSeries {
    std::vector<double> test;
    std::vector<double> label;

    void validate(std::size_t min_len = 1) const;
};

// n x d matrix of per-image embedding vectors.
struct FeatureSet {
    std::size_t n = 0;
    std::size_t d = 0;
    std::vector<double> values;  // row-major
    std::string source;

    double at(std::size_t i, std::size_t j) const { return values[i * d + j]; }
};

struct GradeThresholds {
    std::string biomarker;
    std::vector<double> cutoffs;       // strictly increasing
    std::vector<std::string> labels;   // cutoffs.size() + 1 entries
};

// Signed difference of totals: sum(test) - sum(label).
double iod(const DatasetODSeries& series);

// Sample Pearson correlation of the two OD series.
double pearson_r(const DatasetODSeries& series);

enum class CurveOrder { by_id, by_label_od };

struct CumulativeCurve {
    std::vector<double> test;
    std::vector<double> label;
};

// Running prefix sums in the chosen order; both outputs are non-decreasing.
CumulativeCurve cumulative_curve(const DatasetODSeries& series, CurveOrder order);

// 10*log10(peak^2 / MSE), capped at 99 dB when MSE < 1e-12.
double psnr(const ImageRGB& a, const ImageRGB& b, double peak = 255.0);

struct GaussianWindow {
    int size = 11;
    double sigma = 1.5;
};

// Mean local SSIM over fully supported Gaussian windows, averaged across
// channels. C1 = (0.01*peak)^2, C2 = (0.03*peak)^2.
double ssim(const ImageRGB& a, const ImageRGB& b, double peak = 255.0,
            GaussianWindow window = {});
double ssim(const Tensor& a, const Tensor& b, double peak,
            GaussianWindow window = {});

// |mu_a - mu_b|^2 + Tr(Sa + Sb - 2(Sa Sb)^{1/2}); covariances use 1/(n-1),
// ridge-shrunk when n <= d; the matrix square root clamps negative
// eigenvalues at zero.
double frechet_distance(const FeatureSet& a, const FeatureSet& b);

// Built-in cutoffs: HER2 500/2000/5000 (0,1+,2+,3+); ER and PR binarized at
// 1000; Ki67 at 2000. Boundaries are inclusive upward.
GradeThresholds default_thresholds(const std::string& biomarker);
std::string grade(const GradeThresholds& thresholds, double cumulative_od);
std::string grade(const std::string& biomarker, double cumulative_od);

// sigma for a given odd kernel size, standard size->sigma rule.
double blur_sigma_for_kernel(int ksize);

// Separable Gaussian blur with replicated borders, rounded back to 8 bits.
ImageRGB gaussian_blur(const ImageRGB& img, int ksize, double sigma);

struct BlurProbePoint {
    int kernel;
    double psnr_db;
    double ssim;
};

// PSNR/SSIM of blurred-vs-original across the requested odd kernel sizes.
std::vector<BlurProbePoint> blur_probe(const ImageRGB& img,
                                       const std::vector<int>& kernels);

}  // namespace stainlab::metrics
