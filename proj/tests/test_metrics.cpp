#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "stainlab/metrics.hpp"
#include "stainlab/rng.hpp"

using namespace stainlab;
using namespace stainlab::metrics;

namespace {

ImageRGB constant_image(std::size_t w, std::size_t h, std::uint8_t v) {
    ImageRGB img(w, h);
    for (auto& p : img.pixels) p = v;
    return img;
}

ImageRGB random_image(Rng& rng, std::size_t w, std::size_t h) {
    ImageRGB img(w, h);
    for (auto& p : img.pixels)
        p = static_cast<std::uint8_t>(rng.uniform(0.0, 255.999));
    return img;
}

}  // namespace

TEST_CASE("iod: identical series and per-image +1 shift") {
    DatasetODSeries same{{1.0, 2.5, 3.0}, {1.0, 2.5, 3.0}};
    CHECK(iod(same) == doctest::Approx(0.0));

    DatasetODSeries shifted{{2.0, 3.5, 4.0, 5.0}, {1.0, 2.5, 3.0, 4.0}};
    CHECK(iod(shifted) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("iod matches the compensated-sum oracle on random series") {
    Rng rng(21);
    DatasetODSeries s;
    for (int i = 0; i < 500; ++i) {
        s.test.push_back(rng.uniform(0.0, 1e6));
        s.label.push_back(rng.uniform(0.0, 1e6));
    }
    const double expected =
        oracles::compensated_sum(s.test) - oracles::compensated_sum(s.label);
    CHECK(iod(s) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("iod rejects misaligned series") {
    DatasetODSeries bad{{1.0, 2.0}, {1.0}};
    CHECK_THROWS_AS(iod(bad), AlignmentError);
}

TEST_CASE("pearson_r identities and affine behaviour") {
    DatasetODSeries same{{1.0, 2.0, 5.0}, {1.0, 2.0, 5.0}};
    CHECK(pearson_r(same) == doctest::Approx(1.0).epsilon(1e-12));

    Rng rng(22);
    DatasetODSeries s;
    for (int i = 0; i < 40; ++i) s.label.push_back(rng.uniform(0.0, 10.0));
    s.test.resize(40);
    for (int i = 0; i < 40; ++i) s.test[i] = 3.0 * s.label[i] + 2.0;
    CHECK(pearson_r(s) == doctest::Approx(1.0).epsilon(1e-12));

    // negative scaling flips the sign; entries must stay non-negative
    for (int i = 0; i < 40; ++i) s.test[i] = 50.0 - 3.0 * s.label[i];
    CHECK(pearson_r(s) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("pearson_r matches the textbook oracle") {
    DatasetODSeries s{{1, 2, 3, 4}, {1, 2, 3, 100}};
    const double expected = oracles::pearson({1, 2, 3, 4}, {1, 2, 3, 100});
    CHECK(pearson_r(s) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(0.78502642096301).epsilon(1e-12));
}

TEST_CASE("pearson_r rejects zero variance and misalignment") {
    CHECK_THROWS_AS(pearson_r(DatasetODSeries{{1, 1, 1}, {1, 2, 3}}),
                    DegenerateInputError);
    CHECK_THROWS_AS(pearson_r(DatasetODSeries{{1}, {1}}), AlignmentError);
}

TEST_CASE("cumulative_curve basics and prefix-sum oracle") {
    DatasetODSeries ones{{1, 1, 1}, {1, 1, 1}};
    const auto curve = cumulative_curve(ones, CurveOrder::by_id);
    CHECK(curve.test == std::vector<double>{1, 2, 3});

    DatasetODSeries single{{4.5}, {2.0}};
    const auto one = cumulative_curve(single, CurveOrder::by_id);
    CHECK(one.test == std::vector<double>{4.5});
    CHECK(one.label == std::vector<double>{2.0});

    Rng rng(23);
    DatasetODSeries s;
    for (int i = 0; i < 100; ++i) {
        s.test.push_back(rng.uniform(0.0, 5.0));
        s.label.push_back(rng.uniform(0.0, 5.0));
    }
    const auto by_id = cumulative_curve(s, CurveOrder::by_id);
    const auto expect_t = oracles::prefix_sums(s.test);
    for (std::size_t i = 0; i < expect_t.size(); ++i)
        CHECK(by_id.test[i] == doctest::Approx(expect_t[i]).epsilon(1e-12));

    // both outputs non-decreasing in either order
    const auto by_label = cumulative_curve(s, CurveOrder::by_label_od);
    for (std::size_t i = 1; i < by_label.test.size(); ++i) {
        CHECK(by_label.test[i] >= by_label.test[i - 1]);
        CHECK(by_label.label[i] >= by_label.label[i - 1]);
        CHECK(by_id.test[i] >= by_id.test[i - 1]);
    }
}

TEST_CASE("psnr: identical images cap at 99 dB") {
    const ImageRGB a = constant_image(16, 16, 100);
    CHECK(psnr(a, a) == doctest::Approx(99.0));
}

TEST_CASE("psnr closed form for a constant offset") {
    const ImageRGB a = constant_image(16, 16, 100);
    const ImageRGB b = constant_image(16, 16, 110);
    CHECK(psnr(a, b) == doctest::Approx(20.0 * std::log10(255.0 / 10.0)).epsilon(1e-12));
    CHECK_THROWS_AS(psnr(a, constant_image(8, 8, 0)), DimensionError);
}

TEST_CASE("ssim: self similarity is exactly 1 and symmetric") {
    Rng rng(24);
    const ImageRGB a = random_image(rng, 16, 16);
    const ImageRGB b = random_image(rng, 16, 16);
    CHECK(ssim(a, a) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(ssim(a, b) - ssim(b, a)) <= 1e-12);
}

TEST_CASE("ssim: ramp vs blurred ramp matches the independent oracle") {
    // grayscale ramp with mild texture, blurred by a 5x5 box
    const std::size_t n = 24;
    std::vector<std::vector<double>> plane(n, std::vector<double>(n));
    for (std::size_t y = 0; y < n; ++y)
        for (std::size_t x = 0; x < n; ++x)
            plane[y][x] = std::round(10.0 * static_cast<double>(x) +
                                     30.0 * std::sin(0.7 * static_cast<double>(y)));
    std::vector<std::vector<double>> blurred(n, std::vector<double>(n));
    for (std::size_t y = 0; y < n; ++y)
        for (std::size_t x = 0; x < n; ++x) {
            double acc = 0.0;
            for (int dy = -2; dy <= 2; ++dy)
                for (int dx = -2; dx <= 2; ++dx) {
                    const auto yy = static_cast<std::size_t>(std::clamp<long>(
                        static_cast<long>(y) + dy, 0, static_cast<long>(n) - 1));
                    const auto xx = static_cast<std::size_t>(std::clamp<long>(
                        static_cast<long>(x) + dx, 0, static_cast<long>(n) - 1));
                    acc += plane[yy][xx];
                }
            blurred[y][x] = std::round(acc / 25.0);
        }

    Tensor ta({n, n, 1}), tb({n, n, 1});
    for (std::size_t y = 0; y < n; ++y)
        for (std::size_t x = 0; x < n; ++x) {
            ta.at(y, x, 0) = plane[y][x];
            tb.at(y, x, 0) = blurred[y][x];
        }
    const double expected = oracles::ssim_plane(plane, blurred, 255.0);
    CHECK(ssim(ta, tb, 255.0) == doctest::Approx(expected).epsilon(1e-9));
    CHECK(expected < 1.0);
}

TEST_CASE("frechet_distance: matched sets are ~0") {
    Rng rng(25);
    FeatureSet a;
    a.n = 40;
    a.d = 5;
    for (std::size_t i = 0; i < a.n * a.d; ++i) a.values.push_back(rng.normal());
    CHECK(frechet_distance(a, a) < 1e-6);
}

TEST_CASE("frechet_distance: point masses reduce to squared mean distance") {
    FeatureSet a{1, 3, {1.0, 2.0, 3.0}, ""};
    FeatureSet b{1, 3, {4.0, 6.0, 3.0}, ""};
    CHECK(frechet_distance(a, b) == doctest::Approx(9.0 + 16.0).epsilon(1e-9));
}

TEST_CASE("frechet_distance: diagonal covariance closed form equals 5") {
    // mean-zero sets whose sample covariances are exactly diag(1,4) and diag(9,1)
    auto make = [](double s0, double s1) {
        FeatureSet fs;
        fs.d = 2;
        const std::vector<std::array<double, 2>> base{
            {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
        // 4 points at (+-a, +-b) have covariance (4/(n-1)) diag(a^2, b^2)
        const double a = s0 * std::sqrt(3.0) / 2.0, b = s1 * std::sqrt(3.0) / 2.0;
        for (const auto& p : base) {
            fs.values.push_back(p[0] * a);
            fs.values.push_back(p[1] * b);
        }
        fs.n = 4;
        return fs;
    };
    const FeatureSet a = make(1.0, 2.0);  // cov diag(1,4)
    const FeatureSet b = make(3.0, 1.0);  // cov diag(9,1)
    CHECK(frechet_distance(a, b) == doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("frechet_distance is symmetric and rejects bad input") {
    Rng rng(26);
    FeatureSet a, b;
    a.n = b.n = 20;
    a.d = b.d = 4;
    for (std::size_t i = 0; i < a.n * a.d; ++i) {
        a.values.push_back(rng.normal());
        b.values.push_back(rng.normal() + 0.5);
    }
    CHECK(frechet_distance(a, b) == doctest::Approx(frechet_distance(b, a)).epsilon(1e-9));
    CHECK(frechet_distance(a, b) >= 0.0);

    FeatureSet bad = a;
    bad.values[3] = std::nan("");
    CHECK_THROWS_AS(frechet_distance(bad, b), InputError);
    FeatureSet wrong_d = b;
    wrong_d.d = 2;
    wrong_d.n = 40;
    CHECK_THROWS_AS(frechet_distance(a, wrong_d), DimensionError);
}

TEST_CASE("grade: boundary semantics are inclusive upward") {
    CHECK(grade("HER2", 499.0) == "0");
    CHECK(grade("HER2", 500.0) == "1+");
    CHECK(grade("HER2", 1999.0) == "1+");
    CHECK(grade("HER2", 2000.0) == "2+");
    CHECK(grade("HER2", 4999.0) == "2+");
    CHECK(grade("HER2", 5000.0) == "3+");
    CHECK(grade("ER", 1000.0) == "positive");
    CHECK(grade("ER", 999.0) == "negative");
    CHECK(grade("PR", 1000.0) == "positive");
    CHECK(grade("Ki67", 2000.0) == "positive");
    CHECK(grade("Ki67", 0.0) == "negative");
}

TEST_CASE("grade is monotone in cumulative OD") {
    const auto t = default_thresholds("HER2");
    std::string prev = grade(t, 0.0);
    auto tier = [](const std::string& s) {
        if (s == "0") return 0;
        if (s == "1+") return 1;
        if (s == "2+") return 2;
        return 3;
    };
    for (double od = 0.0; od < 6000.0; od += 37.0) {
        const std::string g = grade(t, od);
        CHECK(tier(g) >= tier(prev));
        prev = g;
    }
}

TEST_CASE("grade rejects unknown biomarkers") {
    CHECK_THROWS_AS(grade("CD3", 100.0), ConfigError);
}

TEST_CASE("blur probe: constant image is blur invariant") {
    const ImageRGB img = constant_image(24, 24, 77);
    for (const auto& p : blur_probe(img, {3, 5, 7})) {
        CHECK(p.psnr_db == doctest::Approx(99.0));
        CHECK(p.ssim == doctest::Approx(1.0));
    }
}

TEST_CASE("blur probe: checkerboard degrades with kernel size") {
    ImageRGB img(32, 32);
    for (std::size_t y = 0; y < 32; ++y)
        for (std::size_t x = 0; x < 32; ++x) {
            const std::uint8_t v = ((x / 4 + y / 4) % 2) ? 220 : 35;
            for (std::size_t c = 0; c < 3; ++c) img.at(y, x, c) = v;
        }
    const auto probe = blur_probe(img, {3, 7});
    CHECK(probe[1].psnr_db < probe[0].psnr_db);
    CHECK(probe[1].ssim < probe[0].ssim);
}

TEST_CASE("kernel-to-sigma rule") {
    CHECK(blur_sigma_for_kernel(3) == doctest::Approx(0.8));
    CHECK(blur_sigma_for_kernel(5) == doctest::Approx(1.1));
    CHECK(blur_sigma_for_kernel(7) == doctest::Approx(1.4));
}
