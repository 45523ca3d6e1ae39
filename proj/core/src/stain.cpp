#include "stainlab/stain.hpp"

#include <algorithm>
#include <cmath>

namespace stainlab::stain {

namespace {

std::array<double, 3> unit_row(double r, double g, double b) {
    const double n = std::sqrt(r * r + g * g + b * b);
    if (n == 0.0) throw DegenerateInputError("stain matrix: zero row");
    return {r / n, g / n, b / n};
}

}  // namespace

StainMatrix StainMatrix::hdab() {
    StainMatrix m;
    m.rows[0] = unit_row(0.650, 0.704, 0.286);
    m.rows[1] = unit_row(0.072, 0.990, 0.105);
    m.rows[2] = unit_row(0.268, 0.570, 0.776);
    m.dab_row = 2;
    return m;
}

StainMatrix StainMatrix::from_rows(const std::array<double, 9>& values, int dab_row) {
    if (dab_row < 0 || dab_row > 2)
        throw ConfigError("stain matrix: dab_row must be 0, 1 or 2");
    StainMatrix m;
    for (int s = 0; s < 3; ++s)
        m.rows[s] = unit_row(values[s * 3 + 0], values[s * 3 + 1], values[s * 3 + 2]);
    m.dab_row = dab_row;
    m.validate();
    return m;
}

double StainMatrix::det() const {
    const auto& a = rows;
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
           a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

void StainMatrix::validate() const {
    for (const auto& r : rows) {
        const double n = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
        if (std::abs(n - 1.0) > 1e-6)
            throw DegenerateInputError("stain matrix: row norm deviates from 1");
    }
    if (std::abs(det()) <= 1e-6)
        throw DegenerateInputError("stain matrix: singular basis");
}

std::array<double, 3> StainMatrix::reconstruct(const std::array<double, 3>& conc) const {
    std::array<double, 3> od{0.0, 0.0, 0.0};
    for (int s = 0; s < 3; ++s)
        for (int c = 0; c < 3; ++c) od[c] += conc[s] * rows[s][c];
    return od;
}

ODMap rgb_to_od(const ImageRGB& img, double i0) {
    if (i0 <= 0.0) throw ConfigError("rgb_to_od: i0 must be positive");
    ODMap od;
    od.i0 = i0;
    od.values = Tensor({img.height, img.width, 3});
    constexpr double kFloorCounts = 1.0;
    const double inv_ln10 = 1.0 / std::log(10.0);
    for (std::size_t y = 0; y < img.height; ++y) {
        for (std::size_t x = 0; x < img.width; ++x) {
            for (std::size_t c = 0; c < 3; ++c) {
                const double k = std::max(static_cast<double>(img.at(y, x, c)), kFloorCounts);
                od.values.at(y, x, c) = std::max(0.0, -std::log(k / i0) * inv_ln10);
            }
        }
    }
    return od;
}

Deconvolution deconvolve(const ODMap& od, const StainMatrix& m) {
    m.validate();
    require_rank(od.values, 3, "deconvolve");
    if (od.values.extent(2) != 3)
        throw DimensionError("deconvolve: OD map must have 3 channels");

    // Inverse of the transpose: reconstruct() applies od = M^T s, so the
    // solve is s = (M^T)^-1 od. Cofactor inverse of a 3x3 is exact enough
    // at these scales.
    const auto& a = m.rows;
    const double d = m.det();
    // inv(M) with M[s][c] = rows; we need inv(M^T) = inv(M)^T.
    double inv[3][3];
    inv[0][0] = (a[1][1] * a[2][2] - a[1][2] * a[2][1]) / d;
    inv[0][1] = (a[0][2] * a[2][1] - a[0][1] * a[2][2]) / d;
    inv[0][2] = (a[0][1] * a[1][2] - a[0][2] * a[1][1]) / d;
    inv[1][0] = (a[1][2] * a[2][0] - a[1][0] * a[2][2]) / d;
    inv[1][1] = (a[0][0] * a[2][2] - a[0][2] * a[2][0]) / d;
    inv[1][2] = (a[0][2] * a[1][0] - a[0][0] * a[1][2]) / d;
    inv[2][0] = (a[1][0] * a[2][1] - a[1][1] * a[2][0]) / d;
    inv[2][1] = (a[0][1] * a[2][0] - a[0][0] * a[2][1]) / d;
    inv[2][2] = (a[0][0] * a[1][1] - a[0][1] * a[1][0]) / d;

    const std::size_t h = od.values.extent(0), w = od.values.extent(1);
    Deconvolution out;
    out.raw = Tensor({h, w, 3});
    out.concentrations = Tensor({h, w, 3});
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            const double o0 = od.values.at(y, x, 0);
            const double o1 = od.values.at(y, x, 1);
            const double o2 = od.values.at(y, x, 2);
            bool clamped = false;
            for (int s = 0; s < 3; ++s) {
                // s = inv(M^T) od = inv(M)^T od, i.e. column s of inv(M).
                const double v = inv[0][s] * o0 + inv[1][s] * o1 + inv[2][s] * o2;
                out.raw.at(y, x, static_cast<std::size_t>(s)) = v;
                if (v < 0.0) clamped = true;
                out.concentrations.at(y, x, static_cast<std::size_t>(s)) = std::max(0.0, v);
            }
            if (clamped) ++out.clamped_pixels;
        }
    }
    return out;
}

Tensor dab_od(const Tensor& concentrations, const StainMatrix& m) {
    require_rank(concentrations, 3, "dab_od");
    if (concentrations.extent(2) != 3)
        throw DimensionError("dab_od: concentration map must have 3 stains");
    const std::size_t h = concentrations.extent(0), w = concentrations.extent(1);
    const auto& row = m.rows[static_cast<std::size_t>(m.dab_row)];
    const double row_norm =
        std::sqrt(row[0] * row[0] + row[1] * row[1] + row[2] * row[2]);
    Tensor out({h, w});
    for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x)
            out.at(y, x) = std::max(
                0.0, concentrations.at(y, x, static_cast<std::size_t>(m.dab_row)) * row_norm);
    return out;
}

FODMap fod(const Tensor& dab, double alpha, double od_ref) {
    require_rank(dab, 2, "fod");
    if (alpha < 1.0) throw ConfigError("fod: alpha must be >= 1");
    if (od_ref <= 0.0) throw ConfigError("fod: od_ref must be positive");
    FODMap out;
    out.alpha = alpha;
    out.od_ref = od_ref;
    out.values = Tensor(dab.shape());
    if (alpha == 1.0) {
        // exact identity on [0, od_ref]; the normalize/denormalize round
        // trip would cost an ulp
        for (std::size_t i = 0; i < dab.size(); ++i)
            out.values[i] = std::clamp(dab[i], 0.0, od_ref);
        return out;
    }
    for (std::size_t i = 0; i < dab.size(); ++i) {
        const double t = std::clamp(dab[i] / od_ref, 0.0, 1.0);
        out.values[i] = std::pow(t, alpha) * od_ref;
    }
    return out;
}

Tensor protein_mask(const Tensor& fod_values, double tau_m, double od_ref) {
    require_rank(fod_values, 2, "protein_mask");
    const std::size_t h = fod_values.extent(0), w = fod_values.extent(1);
    const double cut = tau_m * od_ref;
    Tensor mask({h, w, 2});
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            const bool protein = fod_values.at(y, x) >= cut;
            mask.at(y, x, 0) = protein ? 1.0 : 0.0;
            mask.at(y, x, 1) = protein ? 0.0 : 1.0;
        }
    }
    return mask;
}

}  // namespace stainlab::stain
