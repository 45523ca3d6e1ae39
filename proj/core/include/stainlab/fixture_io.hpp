#pragma once

#include <filesystem>

#include "stainlab/metrics.hpp"
#include "stainlab/tensor.hpp"

namespace stainlab::io {

// FSET: magic "FSET", u32 n, u32 d, n*d little-endian float32, row-major.
// The CSV alternative has a header `id,f0..f{d-1}`; ids are kept as the
// row order. Format is chosen by sniffing the magic.
metrics::FeatureSet read_feature_set(const std::filesystem::path& path);
void write_feature_set(const std::filesystem::path& path, const metrics::FeatureSet& fs);
void write_feature_set_csv(const std::filesystem::path& path,
                           const metrics::FeatureSet& fs);

// FMAP: magic "FMAP", u32 H, W, D, float32 payload; carries segmentation
// feature fields [H,W,D] and probability fields [H,W,2].
Tensor read_fmap(const std::filesystem::path& path);
void write_fmap(const std::filesystem::path& path, const Tensor& t);

}  // namespace stainlab::io
