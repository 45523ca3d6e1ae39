#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>

#include "stainlab/fixture_io.hpp"
#include "stainlab/image_io.hpp"
#include "stainlab/rng.hpp"
#include "stainlab/stain.hpp"

using namespace stainlab;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    const fs::path dir =
        fs::temp_directory_path() / ("stainlab_io_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir;
}

ImageRGB noise_image(Rng& rng, std::size_t w, std::size_t h) {
    ImageRGB img(w, h);
    for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng.uniform(0.0, 255.999));
    return img;
}

// Minimal little-endian uncompressed RGB TIFF, one strip.
void write_test_tiff(const fs::path& path, const ImageRGB& img) {
    std::ofstream os(path, std::ios::binary);
    auto u16 = [&](std::uint16_t v) { os.write(reinterpret_cast<char*>(&v), 2); };
    auto u32 = [&](std::uint32_t v) { os.write(reinterpret_cast<char*>(&v), 4); };
    os << "II";
    u16(42);
    u32(8);  // IFD right after the header
    const std::uint16_t n_tags = 10;
    const std::uint32_t ifd_size = 2 + n_tags * 12 + 4;
    const std::uint32_t bits_off = 8 + ifd_size;
    const std::uint32_t data_off = bits_off + 6;
    u16(n_tags);
    auto tag = [&](std::uint16_t id, std::uint16_t type, std::uint32_t count,
                   std::uint32_t value) {
        u16(id);
        u16(type);
        u32(count);
        u32(value);
    };
    tag(256, 4, 1, static_cast<std::uint32_t>(img.width));
    tag(257, 4, 1, static_cast<std::uint32_t>(img.height));
    tag(258, 3, 3, bits_off);
    tag(259, 3, 1, 1);  // no compression
    tag(262, 3, 1, 2);  // RGB
    tag(273, 4, 1, data_off);
    tag(277, 3, 1, 3);
    tag(278, 4, 1, static_cast<std::uint32_t>(img.height));
    tag(279, 4, 1, static_cast<std::uint32_t>(img.pixels.size()));
    tag(284, 3, 1, 1);  // chunky
    u32(0);             // no next IFD
    u16(8);
    u16(8);
    u16(8);  // bits per sample payload
    os.write(reinterpret_cast<const char*>(img.pixels.data()),
             static_cast<std::streamsize>(img.pixels.size()));
}

}  // namespace

TEST_CASE("FSET binary round trip") {
    const fs::path dir = temp_dir();
    Rng rng(71);
    metrics::FeatureSet fs_in;
    fs_in.n = 7;
    fs_in.d = 5;
    for (std::size_t i = 0; i < 35; ++i)
        fs_in.values.push_back(static_cast<float>(rng.normal()));
    const fs::path path = dir / "feats.fset";
    io::write_feature_set(path, fs_in);
    const auto fs_out = io::read_feature_set(path);
    CHECK(fs_out.n == 7);
    CHECK(fs_out.d == 5);
    for (std::size_t i = 0; i < 35; ++i) CHECK(fs_out.values[i] == fs_in.values[i]);
    fs::remove_all(dir);
}

TEST_CASE("FSET CSV round trip and header validation") {
    const fs::path dir = temp_dir();
    metrics::FeatureSet fs_in;
    fs_in.n = 3;
    fs_in.d = 4;
    for (std::size_t i = 0; i < 12; ++i) fs_in.values.push_back(0.25 * double(i) - 1.0);
    const fs::path path = dir / "feats.csv";
    io::write_feature_set_csv(path, fs_in);
    const auto fs_out = io::read_feature_set(path);
    CHECK(fs_out.n == 3);
    CHECK(fs_out.d == 4);
    for (std::size_t i = 0; i < 12; ++i)
        CHECK(fs_out.values[i] == doctest::Approx(fs_in.values[i]).epsilon(1e-9));

    {
        std::ofstream os(dir / "bad.csv");
        os << "name,f0,f1\nrow,1,2\n";
    }
    CHECK_THROWS_AS(io::read_feature_set(dir / "bad.csv"), FormatError);
    fs::remove_all(dir);
}

TEST_CASE("FMAP round trip and truncation error") {
    const fs::path dir = temp_dir();
    Rng rng(72);
    const Tensor t = rng.normal_tensor({4, 6, 3});
    const fs::path path = dir / "map.fmap";
    io::write_fmap(path, t);
    const Tensor back = io::read_fmap(path);
    REQUIRE(back.shape() == t.shape());
    for (std::size_t i = 0; i < t.size(); ++i)
        CHECK(back[i] == static_cast<double>(static_cast<float>(t[i])));

    {
        std::ofstream os(dir / "short.fmap", std::ios::binary);
        os << "FMAP";
        const std::uint32_t dims[3] = {4, 4, 4};
        os.write(reinterpret_cast<const char*>(dims), 12);
        os << "xx";  // far too short
    }
    CHECK_THROWS_AS(io::read_fmap(dir / "short.fmap"), FormatError);
    fs::remove_all(dir);
}

TEST_CASE("PNG write/read round trip") {
    const fs::path dir = temp_dir();
    Rng rng(73);
    const ImageRGB img = noise_image(rng, 33, 17);
    const fs::path path = dir / "img.png";
    io::write_png(path, img);
    const ImageRGB back = io::read_png(path);
    CHECK(back.width == img.width);
    CHECK(back.height == img.height);
    CHECK(back.pixels == img.pixels);
    CHECK_THROWS_AS(io::read_png(dir / "missing.png"), IoError);
    fs::remove_all(dir);
}

TEST_CASE("TIFF reader handles baseline RGB strips") {
    const fs::path dir = temp_dir();
    Rng rng(74);
    const ImageRGB img = noise_image(rng, 19, 11);
    const fs::path path = dir / "img.tif";
    write_test_tiff(path, img);
    const ImageRGB back = io::read_tiff(path);
    CHECK(back.width == img.width);
    CHECK(back.height == img.height);
    CHECK(back.pixels == img.pixels);

    // read_image dispatches on extension
    const ImageRGB dispatched = io::read_image(path);
    CHECK(dispatched.pixels == img.pixels);

    {
        std::ofstream os(dir / "bad.tif", std::ios::binary);
        os << "XX42";
    }
    CHECK_THROWS_AS(io::read_tiff(dir / "bad.tif"), FormatError);
    fs::remove_all(dir);
}

TEST_CASE("PGM16 round trips FOD values against the recorded scale") {
    const fs::path dir = temp_dir();
    Rng rng(75);
    const double od_ref = stain::kOdCeiling;
    Tensor fodv({9, 13});
    for (std::size_t i = 0; i < fodv.size(); ++i) fodv[i] = rng.uniform(0.0, od_ref);
    const fs::path path = dir / "map.pgm";
    io::write_pgm16(path, fodv, od_ref);

    double recovered_ref = 0.0;
    const Tensor back = io::read_pgm16(path, &recovered_ref);
    CHECK(recovered_ref == doctest::Approx(od_ref).epsilon(1e-9));
    REQUIRE(back.shape() == fodv.shape());
    const double quantum = od_ref / 65535.0;
    for (std::size_t i = 0; i < fodv.size(); ++i)
        CHECK(std::abs(back[i] - fodv[i]) <= 0.5 * quantum + 1e-12);
    fs::remove_all(dir);
}
