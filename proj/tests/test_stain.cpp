#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "stainlab/rng.hpp"
#include "stainlab/stain.hpp"

using namespace stainlab;
using namespace stainlab::stain;

namespace {

ImageRGB single_pixel(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    ImageRGB img(1, 1);
    img.at(0, 0, 0) = r;
    img.at(0, 0, 1) = g;
    img.at(0, 0, 2) = b;
    return img;
}

}  // namespace

TEST_CASE("rgb_to_od: full transmittance maps to zero OD") {
    const auto od = rgb_to_od(single_pixel(255, 255, 255));
    for (std::size_t c = 0; c < 3; ++c) CHECK(od.values.at(0, 0, c) == doctest::Approx(0.0));
}

TEST_CASE("rgb_to_od: tenth transmittance gives OD exactly one") {
    // 25.5 is not an 8-bit count; use i0 = 250 with K = 25 instead
    const auto od = rgb_to_od(single_pixel(25, 25, 25), 250.0);
    for (std::size_t c = 0; c < 3; ++c)
        CHECK(od.values.at(0, 0, c) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rgb_to_od: black pixel hits the one-count floor") {
    const auto od = rgb_to_od(single_pixel(0, 0, 0));
    for (std::size_t c = 0; c < 3; ++c)
        CHECK(od.values.at(0, 0, c) == doctest::Approx(2.4065401804339551).epsilon(1e-12));
}

TEST_CASE("rgb_to_od is antitone per channel") {
    for (int k = 0; k < 255; ++k) {
        const auto darker = rgb_to_od(single_pixel(static_cast<std::uint8_t>(k), 0, 0));
        const auto brighter =
            rgb_to_od(single_pixel(static_cast<std::uint8_t>(k + 1), 0, 0));
        CHECK(darker.values.at(0, 0, 0) >= brighter.values.at(0, 0, 0));
    }
}

TEST_CASE("default H-DAB matrix is a valid unit-row basis") {
    const StainMatrix m = StainMatrix::hdab();
    m.validate();
    for (const auto& row : m.rows) {
        const double n = std::sqrt(row[0] * row[0] + row[1] * row[1] + row[2] * row[2]);
        CHECK(n == doctest::Approx(1.0).epsilon(1e-9));
    }
    CHECK(std::abs(m.det()) > 1e-3);
}

TEST_CASE("deconvolve with the identity matrix returns the OD itself") {
    Rng rng(11);
    ODMap od;
    od.values = rng.uniform_tensor({3, 4, 3}, 0.0, 1.5);
    const StainMatrix identity =
        StainMatrix::from_rows({1, 0, 0, 0, 1, 0, 0, 0, 1}, 2);
    const auto dec = deconvolve(od, identity);
    for (std::size_t i = 0; i < od.values.size(); ++i)
        CHECK(dec.concentrations[i] == doctest::Approx(od.values[i]).epsilon(1e-12));
    CHECK(dec.clamped_pixels == 0);
}

TEST_CASE("deconvolve round trip is exact before clamping") {
    Rng rng(12);
    const StainMatrix m = StainMatrix::hdab();
    ODMap od;
    od.values = rng.uniform_tensor({8, 8, 3}, 0.0, 2.0);
    const auto dec = deconvolve(od, m);
    for (std::size_t y = 0; y < 8; ++y)
        for (std::size_t x = 0; x < 8; ++x) {
            const auto rebuilt = m.reconstruct(
                {dec.raw.at(y, x, 0), dec.raw.at(y, x, 1), dec.raw.at(y, x, 2)});
            for (std::size_t c = 0; c < 3; ++c)
                CHECK(std::abs(rebuilt[c] - od.values.at(y, x, c)) < 1e-9);
        }
}

TEST_CASE("deconvolve of a pure DAB ray matches the 3x3 solve oracle") {
    const StainMatrix m = StainMatrix::hdab();
    const auto& dab_row = m.rows[2];
    ODMap od;
    od.values = Tensor({1, 1, 3});
    for (std::size_t c = 0; c < 3; ++c) od.values.at(0, 0, c) = 0.7 * dab_row[c];

    const auto dec = deconvolve(od, m);
    CHECK(dec.concentrations.at(0, 0, 0) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(dec.concentrations.at(0, 0, 1) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(dec.concentrations.at(0, 0, 2) == doctest::Approx(0.7).epsilon(1e-9));

    // independent route: Gaussian elimination on the transposed system
    std::array<std::array<double, 3>, 3> a{};
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) a[r][c] = m.rows[static_cast<std::size_t>(c)][r];
    const auto s = oracles::solve3(
        a, {od.values.at(0, 0, 0), od.values.at(0, 0, 1), od.values.at(0, 0, 2)});
    CHECK(s[2] == doctest::Approx(0.7).epsilon(1e-9));
    CHECK(dec.raw.at(0, 0, 2) == doctest::Approx(s[2]).epsilon(1e-9));
}

TEST_CASE("deconvolve rejects a singular basis") {
    ODMap od;
    od.values = Tensor({1, 1, 3});
    StainMatrix bad = StainMatrix::hdab();
    bad.rows[1] = bad.rows[0];
    CHECK_THROWS_AS(deconvolve(od, bad), DegenerateInputError);
}

TEST_CASE("dab_od basics and reconstruction oracle") {
    const StainMatrix m = StainMatrix::hdab();

    Tensor conc({2, 2, 3});
    CHECK(dab_od(conc, m).values() == std::vector<double>{0, 0, 0, 0});

    conc.at(0, 1, 2) = 0.5;
    const Tensor d = dab_od(conc, m);
    CHECK(d.at(0, 1) == doctest::Approx(0.5).epsilon(1e-9));

    Rng rng(13);
    Tensor random_conc = rng.uniform_tensor({4, 4, 3}, 0.0, 2.0);
    const Tensor dr = dab_od(random_conc, m);
    for (std::size_t y = 0; y < 4; ++y)
        for (std::size_t x = 0; x < 4; ++x) {
            // rebuild the 3-channel DAB-only OD and take its L2 magnitude
            const double s = random_conc.at(y, x, 2);
            double mag = 0.0;
            for (std::size_t c = 0; c < 3; ++c) {
                const double od_c = s * m.rows[2][c];
                mag += od_c * od_c;
            }
            CHECK(dr.at(y, x) == doctest::Approx(std::sqrt(mag)).epsilon(1e-12));
        }
}

TEST_CASE("fod: alpha=1 is the identity on [0, od_ref]") {
    Rng rng(14);
    const double od_ref = 2.0;
    Tensor dab = rng.uniform_tensor({5, 5}, 0.0, od_ref);
    const auto out = fod(dab, 1.0, od_ref);
    for (std::size_t i = 0; i < dab.size(); ++i) CHECK(out.values[i] == dab[i]);
}

TEST_CASE("fod: frozen power-law value at the midpoint") {
    Tensor dab({1, 1}, {0.5});
    const auto out = fod(dab, 1.8, 1.0);
    CHECK(out.values[0] == doctest::Approx(0.28717458874925875).epsilon(1e-12));

    Tensor scaled({1, 1}, {1.2});  // normalized 0.5 against od_ref 2.4
    const auto out2 = fod(scaled, 1.8, 2.4);
    CHECK(out2.values[0] == doctest::Approx(0.28717458874925875 * 2.4).epsilon(1e-12));
}

TEST_CASE("fod: zero map stays zero for any alpha") {
    const Tensor dab({3, 3});
    for (double alpha : {1.0, 1.4, 1.8, 2.2}) {
        const FODMap out = fod(dab, alpha);
        for (double v : out.values.values()) CHECK(v == 0.0);
    }
}

TEST_CASE("fod monotonicity and alpha suppression") {
    Rng rng(15);
    const double od_ref = 2.4065401804339551;
    for (int trial = 0; trial < 20; ++trial) {
        const double a = rng.uniform(0.01, 0.99), b = rng.uniform(0.01, 0.99);
        Tensor t({1, 2}, {std::min(a, b) * od_ref, std::max(a, b) * od_ref});
        const auto out = fod(t, 1.8, od_ref);
        CHECK(out.values[0] <= out.values[1]);

        // strictly interior normalized values sink as alpha grows
        const auto lo = fod(t, 1.8, od_ref), hi = fod(t, 2.6, od_ref);
        CHECK(hi.values[0] < lo.values[0]);
        CHECK(hi.values[1] < lo.values[1]);
    }
}

TEST_CASE("fod preserves the argmax of the DAB map") {
    Rng rng(16);
    for (int trial = 0; trial < 20; ++trial) {
        Tensor dab = rng.uniform_tensor({6, 6}, 0.0, 2.0);
        const auto out = fod(dab, 1.8, 2.4065401804339551);
        std::size_t arg_in = 0, arg_out = 0;
        for (std::size_t i = 1; i < dab.size(); ++i) {
            if (dab[i] > dab[arg_in]) arg_in = i;
            if (out.values[i] > out.values[arg_out]) arg_out = i;
        }
        CHECK(out.values[arg_out] == doctest::Approx(out.values[arg_in]));
    }
}

TEST_CASE("protein_mask splits against the relative threshold") {
    Tensor fodv({1, 3}, {0.0, 0.3, 2.0});
    const Tensor mask = protein_mask(fodv, 0.15, 2.0);  // cut at 0.3
    CHECK(mask.at(0, 0, 0) == 0.0);
    CHECK(mask.at(0, 0, 1) == 1.0);
    CHECK(mask.at(0, 1, 0) == 1.0);  // boundary inclusive
    CHECK(mask.at(0, 2, 0) == 1.0);
    for (std::size_t x = 0; x < 3; ++x)
        CHECK(mask.at(0, x, 0) + mask.at(0, x, 1) == doctest::Approx(1.0));
}
