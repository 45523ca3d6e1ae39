#pragma once

#include <array>
#include <cstddef>

#include "stainlab/image.hpp"
#include "stainlab/tensor.hpp"

namespace stainlab::stain {

// -log10(1/255): the largest optical density an 8-bit count can witness
// once the transmittance floor of one count is applied.
inline constexpr double kOdCeiling = 2.4065401804339551;

// 3x3 stain absorption basis. Rows are stains, columns are R,G,B optical
// density coefficients; every row is unit L2 norm.
struct StainMatrix {
    std::array<std::array<double, 3>, 3> rows{};
    int dab_row = 2;

    // Hematoxylin / eosin / DAB basis with rows renormalized to unit norm.
    static StainMatrix hdab();

    // Row-major nine reals; rows are renormalized, zero rows rejected.
    static StainMatrix from_rows(const std::array<double, 9>& values, int dab_row = 2);

    // Unit rows within 1e-6 and |det| > 1e-6, else DegenerateInputError.
    void validate() const;

    double det() const;

    // od = sum_s conc[s] * rows[s]
    std::array<double, 3> reconstruct(const std::array<double, 3>& conc) const;
};

// Per-channel optical density field, [H,W,3], non-negative.
struct ODMap {
    Tensor values;
    double i0 = 255.0;
};

// Focal optical density field, [H,W].
struct FODMap {
    Tensor values;
    double alpha = 1.8;
    double od_ref = kOdCeiling;
};

struct Deconvolution {
    Tensor concentrations;  // [H,W,3], negatives clamped to 0
    Tensor raw;             // [H,W,3], pre-clamp solve result
    std::size_t clamped_pixels = 0;

    double clamped_fraction() const {
        const std::size_t n = concentrations.size() / 3;
        return n == 0 ? 0.0 : static_cast<double>(clamped_pixels) / static_cast<double>(n);
    }
};

// Lambert-Beer: OD = -log10(max(K, 1)/i0) per channel. The one-count floor
// keeps OD finite at K = 0.
ODMap rgb_to_od(const ImageRGB& img, double i0 = 255.0);

// Solves the per-pixel linear system so that the stain contributions
// reconstruct the observed OD; negative concentrations are clamped after
// the solve and the affected pixel count recorded.
Deconvolution deconvolve(const ODMap& od, const StainMatrix& m);

// Scalar DAB optical density per pixel: the L2 magnitude of the DAB-only
// OD reconstruction, which equals the concentration for unit-norm rows.
Tensor dab_od(const Tensor& concentrations, const StainMatrix& m);

// Power-law remap of normalized DAB OD: (clamp(d/od_ref,0,1))^alpha * od_ref.
// alpha = 1 is the identity on [0, od_ref].
FODMap fod(const Tensor& dab, double alpha, double od_ref = kOdCeiling);

// One-hot [H,W,2] class field: channel 0 = protein expression where
// fod >= tau_m * od_ref, channel 1 = normal tissue.
Tensor protein_mask(const Tensor& fod_values, double tau_m, double od_ref);

}  // namespace stainlab::stain
