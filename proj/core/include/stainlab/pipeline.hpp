#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "stainlab/image.hpp"
#include "stainlab/losses.hpp"
#include "stainlab/metrics.hpp"
#include "stainlab/stain.hpp"

namespace stainlab::pipeline {

struct RunConfig {
    std::filesystem::path gen_dir;
    std::filesystem::path ref_dir;
    std::filesystem::path out_dir;
    std::string stain_name = "HER2";
    double alpha = 1.8;
    double beta = 0.2;
    std::size_t hist_bins = 20;
    std::size_t blocks = 16;
    std::optional<std::array<double, 9>> stain_matrix;  // row-major, rows = stains
    int dab_row = 2;
    double tau_m = 0.15;
    losses::LossWeights weights;
    std::size_t tile_size = 512;
    std::size_t workers = 0;  // 0 = hardware concurrency; STAINLAB_WORKERS overrides
    std::optional<double> od_ref;  // absent: 99.9th percentile of the reference set
    std::optional<std::filesystem::path> features_gen;  // FSET/CSV for FID
    std::optional<std::filesystem::path> features_ref;
    std::optional<std::filesystem::path> fmap_dir;  // <stem>.feat.fmap / <stem>.prob.fmap
    metrics::CurveOrder curve_order = metrics::CurveOrder::by_label_od;

    void validate() const;
    stain::StainMatrix matrix() const;
    std::size_t effective_workers() const;
};

struct PairEntry {
    std::string id;  // shared filename stem
    std::filesystem::path gen;
    std::filesystem::path ref;
};

struct PairingResult {
    std::vector<PairEntry> pairs;        // sorted by id
    std::vector<std::string> orphans_gen;
    std::vector<std::string> orphans_ref;
};

// Matches files by stem across extensions; nothing is silently dropped.
// Throws InputError when the intersection is empty.
PairingResult pair_images(const std::filesystem::path& gen_dir,
                          const std::filesystem::path& ref_dir);

struct TileRect {
    std::size_t x = 0, y = 0, w = 0, h = 0;
    bool edge = false;  // remainder tile smaller than the nominal size
};

// Row-major tile grid; non-overlapping when stride == size; remainder tiles
// at the right/bottom edges are included and flagged.
std::vector<TileRect> tile(std::size_t width, std::size_t height, std::size_t size,
                           std::size_t stride);
std::vector<TileRect> tile(const ImageRGB& image, std::size_t size,
                           std::size_t stride);
ImageRGB crop(const ImageRGB& image, const TileRect& rect);

struct PairRow {
    std::string id;
    std::size_t width = 0, height = 0;
    double od_sum_gen = 0.0;
    double od_sum_ref = 0.0;
    double psnr_db = 0.0;
    double ssim = 0.0;
    double mlpa_avg = 0.0;
    double mlpa_histo = 0.0;
    double mlpa_block = 0.0;
    double mlpa_total = 0.0;
    std::optional<double> cppc;
    std::string grade_gen;
    std::string grade_ref;
    double clamped_frac_gen = 0.0;
    double clamped_frac_ref = 0.0;
    std::vector<std::string> flags;
    std::size_t tiles = 0;  // OD accumulation tiles across both images
};

struct SkippedPair {
    std::string id;
    std::string reason;
};

struct EvalSummary {
    std::size_t pair_count = 0;
    double od_ref = 0.0;
    double iod = 0.0;
    double iod_per_image = 0.0;
    std::optional<double> pearson;
    std::optional<std::string> pearson_note;
    std::optional<double> fid;
    // wall-clock observations; kept out of the report files so reports stay
    // byte-identical across runs and worker counts
    double wall_seconds = 0.0;
    std::size_t tiles_processed = 0;
};

struct EvalReport {
    int schema = 1;
    std::vector<PairRow> rows;
    std::vector<SkippedPair> skipped;
    std::vector<std::string> orphans_gen, orphans_ref;
    EvalSummary summary;
    metrics::CumulativeCurve curve;

    // 0 = clean, 2 = partial (skipped pairs)
    int exit_code() const { return skipped.empty() ? 0 : 2; }
};

// Single-pair evaluation against a fixed od_ref.
PairRow evaluate_pair(const PairEntry& pair, const RunConfig& cfg, double od_ref);

// Parallel map over pairs, deterministic single-threaded reduce; writes
// report.csv, report.json and curve.csv into cfg.out_dir.
EvalReport evaluate_dataset(const RunConfig& cfg);

// 99.9th percentile of per-pixel DAB OD over the reference images (1e4-bin
// histogram); falls back to the OD ceiling for empty or all-blank sets.
double auto_od_ref(const std::vector<PairEntry>& pairs, const RunConfig& cfg);

void write_report_csv(const EvalReport& report, const std::filesystem::path& path);
void write_report_json(const EvalReport& report, const RunConfig& cfg,
                       const std::filesystem::path& path);
void write_curve_csv(const EvalReport& report, const std::filesystem::path& path);

}  // namespace stainlab::pipeline
