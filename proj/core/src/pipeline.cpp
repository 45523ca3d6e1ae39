#include "stainlab/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <thread>

#include <nlohmann/json.hpp>

#include "stainlab/fixture_io.hpp"
#include "stainlab/image_io.hpp"

namespace stainlab::pipeline {

namespace fs = std::filesystem;

void RunConfig::validate() const {
    if (!gen_dir.empty() && !fs::is_directory(gen_dir))
        throw ConfigError("config: gen dir does not exist: " + gen_dir.string());
    if (!ref_dir.empty() && !fs::is_directory(ref_dir))
        throw ConfigError("config: ref dir does not exist: " + ref_dir.string());
    if (alpha < 1.0) throw ConfigError("config: alpha must be >= 1");
    if (beta < 0.0) throw ConfigError("config: beta must be >= 0");
    if (hist_bins < 2) throw ConfigError("config: hist_bins must be >= 2");
    if (tau_m < 0.0 || tau_m > 1.0) throw ConfigError("config: tau_m must be in [0,1]");
    if (tile_size != 512 && tile_size != 1024)
        throw ConfigError("config: tile_size must be 512 or 1024");
    if (od_ref && *od_ref <= 0.0) throw ConfigError("config: od_ref must be positive");
    const auto g = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(blocks))));
    if (g * g != blocks || g == 0)
        throw ConfigError("config: blocks must be a positive perfect square");
    metrics::default_thresholds(stain_name);  // rejects unknown biomarkers
    matrix();                                 // rejects bad stain bases
}

stain::StainMatrix RunConfig::matrix() const {
    if (stain_matrix) return stain::StainMatrix::from_rows(*stain_matrix, dab_row);
    return stain::StainMatrix::hdab();
}

std::size_t RunConfig::effective_workers() const {
    if (const char* env = std::getenv("STAINLAB_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v >= 1) return static_cast<std::size_t>(v);
    }
    if (workers >= 1) return workers;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : hc;
}

namespace {

bool is_image_file(const fs::path& p) {
    std::string e = p.extension().string();
    for (char& c : e) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return e == ".png" || e == ".tif" || e == ".tiff";
}

std::map<std::string, fs::path> scan_dir(const fs::path& dir) {
    if (!fs::is_directory(dir))
        throw IoError("not a directory: " + dir.string());
    std::map<std::string, fs::path> by_stem;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file() || !is_image_file(entry.path())) continue;
        const std::string stem = entry.path().stem().string();
        auto [it, inserted] = by_stem.emplace(stem, entry.path());
        if (!inserted && entry.path().extension() == ".png")
            it->second = entry.path();  // same stem twice: prefer png, deterministic
    }
    return by_stem;
}

}  // namespace

PairingResult pair_images(const fs::path& gen_dir, const fs::path& ref_dir) {
    const auto gen = scan_dir(gen_dir);
    const auto ref = scan_dir(ref_dir);
    PairingResult result;
    for (const auto& [stem, path] : gen) {
        auto it = ref.find(stem);
        if (it == ref.end())
            result.orphans_gen.push_back(path.filename().string());
        else
            result.pairs.push_back({stem, path, it->second});
    }
    for (const auto& [stem, path] : ref)
        if (!gen.contains(stem)) result.orphans_ref.push_back(path.filename().string());
    if (result.pairs.empty()) {
        std::string msg = "no matching image stems between directories; orphans:";
        for (const auto& o : result.orphans_gen) msg += " gen/" + o;
        for (const auto& o : result.orphans_ref) msg += " ref/" + o;
        throw InputError(msg);
    }
    // std::map iteration already yields sorted stems
    return result;
}

std::vector<TileRect> tile(std::size_t width, std::size_t height, std::size_t size,
                           std::size_t stride) {
    if (size == 0 || stride == 0) throw ConfigError("tile: size and stride must be positive");
    if (size > width || size > height)
        throw DimensionError("tile: tile size exceeds image dimensions");
    std::vector<TileRect> tiles;
    for (std::size_t y = 0; y < height; y += stride) {
        const std::size_t h = std::min(size, height - y);
        for (std::size_t x = 0; x < width; x += stride) {
            const std::size_t w = std::min(size, width - x);
            tiles.push_back({x, y, w, h, w != size || h != size});
        }
        if (y + stride >= height) break;
    }
    return tiles;
}

std::vector<TileRect> tile(const ImageRGB& image, std::size_t size, std::size_t stride) {
    return tile(image.width, image.height, size, stride);
}

ImageRGB crop(const ImageRGB& image, const TileRect& rect) {
    if (rect.x + rect.w > image.width || rect.y + rect.h > image.height)
        throw DimensionError("crop: tile outside image");
    ImageRGB out(rect.w, rect.h);
    for (std::size_t y = 0; y < rect.h; ++y)
        for (std::size_t x = 0; x < rect.w; ++x)
            for (std::size_t c = 0; c < 3; ++c)
                out.at(y, x, c) = image.at(rect.y + y, rect.x + x, c);
    return out;
}

namespace {

struct DabResult {
    Tensor dab;  // [H,W]
    double clamped_frac = 0.0;
    double od_sum = 0.0;
    std::size_t tiles = 0;
};

DabResult dab_map(const ImageRGB& img, const stain::StainMatrix& m,
                  std::size_t tile_size) {
    const auto od = stain::rgb_to_od(img);
    const auto dec = stain::deconvolve(od, m);
    DabResult r;
    r.dab = stain::dab_od(dec.concentrations, m);
    r.clamped_frac = dec.clamped_fraction();
    // OD totals accumulate tile by tile in row-major order; the tile grid
    // is the unit of work for large slides.
    const std::size_t ts = std::min({tile_size, img.width, img.height});
    for (const TileRect& t : tile(img.width, img.height, ts, ts)) {
        double acc = 0.0;
        for (std::size_t y = t.y; y < t.y + t.h; ++y)
            for (std::size_t x = t.x; x < t.x + t.w; ++x) acc += r.dab.at(y, x);
        r.od_sum += acc;
        ++r.tiles;
    }
    return r;
}

losses::MLPAConfig mlpa_config(const RunConfig& cfg, double od_ref) {
    losses::MLPAConfig mc;
    mc.beta = cfg.beta;
    mc.n_hist_bins = cfg.hist_bins;
    mc.n_blocks = cfg.blocks;
    mc.hist_lo = 0.0;
    mc.hist_hi = od_ref;
    return mc;
}

std::optional<double> try_cppc(const PairEntry& pair, const RunConfig& cfg,
                               const Tensor& fod_gen, const Tensor& fod_ref,
                               double od_ref, std::vector<std::string>& flags) {
    if (!cfg.fmap_dir) return std::nullopt;
    const fs::path feat_gen = *cfg.fmap_dir / (pair.id + ".gen.feat.fmap");
    const fs::path prob_gen = *cfg.fmap_dir / (pair.id + ".gen.prob.fmap");
    const fs::path feat_ref = *cfg.fmap_dir / (pair.id + ".ref.feat.fmap");
    const fs::path prob_ref = *cfg.fmap_dir / (pair.id + ".ref.prob.fmap");
    if (!fs::exists(feat_gen) || !fs::exists(prob_gen) || !fs::exists(feat_ref) ||
        !fs::exists(prob_ref))
        return std::nullopt;
    const Tensor f_f = io::read_fmap(feat_gen);
    const Tensor p_f = io::read_fmap(prob_gen);
    const Tensor f_r = io::read_fmap(feat_ref);
    const Tensor p_r = io::read_fmap(prob_ref);
    if (f_f.extent(0) != fod_gen.extent(0) || f_f.extent(1) != fod_gen.extent(1)) {
        flags.push_back("cppc_skipped_fmap_dims");
        return std::nullopt;
    }
    const Tensor m_f = stain::protein_mask(fod_gen, cfg.tau_m, od_ref);
    const Tensor m_r = stain::protein_mask(fod_ref, cfg.tau_m, od_ref);
    return losses::cppc_loss(f_f, f_r, p_f, p_r, m_f, m_r);
}

}  // namespace

PairRow evaluate_pair(const PairEntry& pair, const RunConfig& cfg, double od_ref) {
    const ImageRGB img_gen = io::read_image(pair.gen);
    const ImageRGB img_ref = io::read_image(pair.ref);
    if (!img_gen.same_shape(img_ref))
        throw DimensionError("pair '" + pair.id + "': dimension mismatch " +
                             std::to_string(img_gen.width) + "x" +
                             std::to_string(img_gen.height) + " vs " +
                             std::to_string(img_ref.width) + "x" +
                             std::to_string(img_ref.height));

    const stain::StainMatrix m = cfg.matrix();
    const DabResult gen = dab_map(img_gen, m, cfg.tile_size);
    const DabResult ref = dab_map(img_ref, m, cfg.tile_size);
    const Tensor fod_gen = stain::fod(gen.dab, cfg.alpha, od_ref).values;
    const Tensor fod_ref = stain::fod(ref.dab, cfg.alpha, od_ref).values;

    const losses::MLPAConfig mc = mlpa_config(cfg, od_ref);
    PairRow row;
    row.id = pair.id;
    row.width = img_gen.width;
    row.height = img_gen.height;
    row.od_sum_gen = gen.od_sum;
    row.od_sum_ref = ref.od_sum;
    row.psnr_db = metrics::psnr(img_gen, img_ref);
    row.ssim = metrics::ssim(img_gen, img_ref);
    row.mlpa_avg = losses::mlpa_avg(fod_gen, fod_ref, cfg.beta);
    row.mlpa_histo = losses::mlpa_histo(fod_gen, fod_ref, mc);
    row.mlpa_block = losses::mlpa_block(fod_gen, fod_ref, mc);
    row.mlpa_total = row.mlpa_avg + row.mlpa_histo + row.mlpa_block;
    row.grade_gen = metrics::grade(cfg.stain_name, gen.od_sum);
    row.grade_ref = metrics::grade(cfg.stain_name, ref.od_sum);
    row.clamped_frac_gen = gen.clamped_frac;
    row.clamped_frac_ref = ref.clamped_frac;
    if (gen.clamped_frac > 0.05) row.flags.push_back("clamped_gen>5%");
    if (ref.clamped_frac > 0.05) row.flags.push_back("clamped_ref>5%");
    row.cppc = try_cppc(pair, cfg, fod_gen, fod_ref, od_ref, row.flags);
    row.tiles = gen.tiles + ref.tiles;
    return row;
}

double auto_od_ref(const std::vector<PairEntry>& pairs, const RunConfig& cfg) {
    // Fixed-bin counting histogram: exact percentile up to bin resolution
    // and independent of worker count.
    constexpr std::size_t kBins = 10000;
    const stain::StainMatrix m = cfg.matrix();
    std::vector<std::uint64_t> counts(kBins, 0);
    std::uint64_t total = 0;
    for (const PairEntry& pair : pairs) {
        ImageRGB img;
        try {
            img = io::read_image(pair.ref);
        } catch (const std::exception&) {
            continue;  // unreadable refs surface as skipped pairs later
        }
        const auto od = stain::rgb_to_od(img);
        const auto dec = stain::deconvolve(od, m);
        const Tensor dab = stain::dab_od(dec.concentrations, m);
        for (std::size_t i = 0; i < dab.size(); ++i) {
            const double unit = std::clamp(dab[i] / stain::kOdCeiling, 0.0, 1.0);
            const auto bin = std::min<std::size_t>(
                kBins - 1, static_cast<std::size_t>(unit * static_cast<double>(kBins)));
            ++counts[bin];
            ++total;
        }
    }
    if (total == 0) return stain::kOdCeiling;
    const auto want = static_cast<std::uint64_t>(0.999 * static_cast<double>(total));
    std::uint64_t seen = 0;
    std::size_t bin = 0;
    for (; bin < kBins; ++bin) {
        seen += counts[bin];
        if (seen >= want) break;
    }
    const double value =
        (static_cast<double>(bin) + 1.0) / static_cast<double>(kBins) * stain::kOdCeiling;
    return value > 0.0 ? value : stain::kOdCeiling;
}

EvalReport evaluate_dataset(const RunConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    cfg.validate();
    const PairingResult pairing = pair_images(cfg.gen_dir, cfg.ref_dir);

    EvalReport report;
    report.orphans_gen = pairing.orphans_gen;
    report.orphans_ref = pairing.orphans_ref;

    const double od_ref = cfg.od_ref ? *cfg.od_ref : auto_od_ref(pairing.pairs, cfg);
    report.summary.od_ref = od_ref;

    const std::size_t n = pairing.pairs.size();
    struct Slot {
        bool ok = false;
        PairRow row;
        std::string reason;
    };
    std::vector<Slot> slots(n);

    const std::size_t workers = std::min(cfg.effective_workers(), n);
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                slots[i].row = evaluate_pair(pairing.pairs[i], cfg, od_ref);
                slots[i].ok = true;
            } catch (const std::exception& e) {
                slots[i].reason = e.what();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    // Single-threaded reduce in id order keeps reports byte-identical
    // across worker counts.
    metrics::DatasetODSeries series;
    for (std::size_t i = 0; i < n; ++i) {
        if (slots[i].ok) {
            report.rows.push_back(std::move(slots[i].row));
            series.test.push_back(report.rows.back().od_sum_gen);
            series.label.push_back(report.rows.back().od_sum_ref);
        } else {
            report.skipped.push_back({pairing.pairs[i].id, slots[i].reason});
        }
    }
    report.summary.pair_count = report.rows.size();
    if (!report.rows.empty()) {
        report.summary.iod = metrics::iod(series);
        report.summary.iod_per_image =
            report.summary.iod / static_cast<double>(report.rows.size());
        report.curve = metrics::cumulative_curve(series, cfg.curve_order);
        if (report.rows.size() >= 2) {
            try {
                report.summary.pearson = metrics::pearson_r(series);
            } catch (const DegenerateInputError& e) {
                report.summary.pearson_note = e.what();
            }
        } else {
            report.summary.pearson_note = "needs at least 2 pairs";
        }
    }
    if (cfg.features_gen && cfg.features_ref) {
        const auto fa = io::read_feature_set(*cfg.features_gen);
        const auto fb = io::read_feature_set(*cfg.features_ref);
        report.summary.fid = metrics::frechet_distance(fa, fb);
    }
    for (const PairRow& r : report.rows) report.summary.tiles_processed += r.tiles;
    report.summary.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (!cfg.out_dir.empty()) {
        fs::create_directories(cfg.out_dir);
        write_report_csv(report, cfg.out_dir / "report.csv");
        write_report_json(report, cfg, cfg.out_dir / "report.json");
        write_curve_csv(report, cfg.out_dir / "curve.csv");
    }
    return report;
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string join_flags(const std::vector<std::string>& flags) {
    std::string s;
    for (const auto& f : flags) {
        if (!s.empty()) s += ';';
        s += f;
    }
    return s;
}

}  // namespace

void write_report_csv(const EvalReport& report, const fs::path& path) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot write report: " + path.string());
    os << "schema=" << report.schema << "\n";
    os << "id,width,height,od_sum_gen,od_sum_ref,psnr_db,ssim,mlpa_avg,mlpa_histo,"
          "mlpa_block,mlpa_total,cppc,grade_gen,grade_ref,clamped_frac_gen,"
          "clamped_frac_ref,flags\n";
    for (const PairRow& r : report.rows) {
        os << r.id << ',' << r.width << ',' << r.height << ',' << fmt(r.od_sum_gen)
           << ',' << fmt(r.od_sum_ref) << ',' << fmt(r.psnr_db) << ',' << fmt(r.ssim)
           << ',' << fmt(r.mlpa_avg) << ',' << fmt(r.mlpa_histo) << ','
           << fmt(r.mlpa_block) << ',' << fmt(r.mlpa_total) << ','
           << (r.cppc ? fmt(*r.cppc) : std::string{}) << ',' << r.grade_gen << ','
           << r.grade_ref << ',' << fmt(r.clamped_frac_gen) << ','
           << fmt(r.clamped_frac_ref) << ',' << join_flags(r.flags) << "\n";
    }
    os << "# summary iod=" << fmt(report.summary.iod)
       << " iod_per_image=" << fmt(report.summary.iod_per_image) << " pearson="
       << (report.summary.pearson ? fmt(*report.summary.pearson) : std::string{"na"})
       << " fid=" << (report.summary.fid ? fmt(*report.summary.fid) : std::string{"na"})
       << " od_ref=" << fmt(report.summary.od_ref)
       << " pairs=" << report.summary.pair_count << " skipped=" << report.skipped.size()
       << "\n";
}

void write_report_json(const EvalReport& report, const RunConfig& cfg,
                       const fs::path& path) {
    nlohmann::json j;
    j["schema"] = report.schema;
    j["config"] = {
        {"stain", cfg.stain_name},
        {"alpha", cfg.alpha},
        {"beta", cfg.beta},
        {"hist_bins", cfg.hist_bins},
        {"blocks", cfg.blocks},
        {"tau_m", cfg.tau_m},
        {"tile_size", cfg.tile_size},
    };
    auto& rows = j["rows"] = nlohmann::json::array();
    for (const PairRow& r : report.rows) {
        nlohmann::json row = {
            {"id", r.id},
            {"width", r.width},
            {"height", r.height},
            {"od_sum_gen", r.od_sum_gen},
            {"od_sum_ref", r.od_sum_ref},
            {"psnr_db", r.psnr_db},
            {"ssim", r.ssim},
            {"mlpa_avg", r.mlpa_avg},
            {"mlpa_histo", r.mlpa_histo},
            {"mlpa_block", r.mlpa_block},
            {"mlpa_total", r.mlpa_total},
            {"grade_gen", r.grade_gen},
            {"grade_ref", r.grade_ref},
            {"clamped_frac_gen", r.clamped_frac_gen},
            {"clamped_frac_ref", r.clamped_frac_ref},
            {"flags", r.flags},
        };
        if (r.cppc) row["cppc"] = *r.cppc;
        rows.push_back(std::move(row));
    }
    auto& skipped = j["skipped"] = nlohmann::json::array();
    for (const SkippedPair& s : report.skipped)
        skipped.push_back({{"id", s.id}, {"reason", s.reason}});
    j["orphans"] = {{"gen", report.orphans_gen}, {"ref", report.orphans_ref}};
    j["summary"] = {
        {"pairs", report.summary.pair_count},
        {"od_ref", report.summary.od_ref},
        {"iod", report.summary.iod},
        {"iod_per_image", report.summary.iod_per_image},
    };
    if (report.summary.pearson) j["summary"]["pearson_r"] = *report.summary.pearson;
    if (report.summary.pearson_note)
        j["summary"]["pearson_note"] = *report.summary.pearson_note;
    if (report.summary.fid) j["summary"]["fid"] = *report.summary.fid;

    std::ofstream os(path);
    if (!os) throw IoError("cannot write report: " + path.string());
    os << j.dump(2) << "\n";
}

void write_curve_csv(const EvalReport& report, const fs::path& path) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot write curve: " + path.string());
    os << "index,cum_od_gen,cum_od_ref\n";
    for (std::size_t i = 0; i < report.curve.test.size(); ++i)
        os << i << ',' << fmt(report.curve.test[i]) << ',' << fmt(report.curve.label[i])
           << "\n";
}

}  // namespace stainlab::pipeline
