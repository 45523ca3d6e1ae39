#include "stainlab/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "stainlab/fixture_io.hpp"
#include "stainlab/generator.hpp"
#include "stainlab/gradcheck_suite.hpp"
#include "stainlab/image_io.hpp"
#include "stainlab/pipeline.hpp"

namespace stainlab::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Minimal flag parser: --name value / --name / positionals, in any order.
class Args {
public:
    explicit Args(std::vector<std::string> raw) : raw_(std::move(raw)) {}

    bool flag(const std::string& name) {
        for (std::size_t i = 0; i < raw_.size(); ++i) {
            if (raw_[i] == name) {
                raw_.erase(raw_.begin() + static_cast<long>(i));
                return true;
            }
        }
        return false;
    }

    std::optional<std::string> value(const std::string& name) {
        for (std::size_t i = 0; i < raw_.size(); ++i) {
            if (raw_[i] == name) {
                if (i + 1 >= raw_.size())
                    throw UsageError("flag " + name + " needs a value");
                std::string v = raw_[i + 1];
                raw_.erase(raw_.begin() + static_cast<long>(i),
                           raw_.begin() + static_cast<long>(i) + 2);
                return v;
            }
        }
        return std::nullopt;
    }

    double number(const std::string& name, double fallback) {
        const auto v = value(name);
        if (!v) return fallback;
        try {
            return std::stod(*v);
        } catch (const std::exception&) {
            throw UsageError("flag " + name + " expects a number, got '" + *v + "'");
        }
    }

    long integer(const std::string& name, long fallback) {
        const auto v = value(name);
        if (!v) return fallback;
        try {
            return std::stol(*v);
        } catch (const std::exception&) {
            throw UsageError("flag " + name + " expects an integer, got '" + *v + "'");
        }
    }

    // Remaining entries must all be positionals; any leftover --flag is unknown.
    std::vector<std::string> positionals() {
        for (const auto& a : raw_)
            if (a.rfind("--", 0) == 0) throw UsageError("unknown flag " + a);
        return raw_;
    }

private:
    std::vector<std::string> raw_;
};

constexpr const char* kUsageText =
    "usage: stainlab <command> [options]\n"
    "\n"
    "commands:\n"
    "  deconvolve <image> --out-prefix P   stain separation to 16-bit PGM maps\n"
    "  fod <image> <out.pgm>               focal optical density map (--alpha)\n"
    "  losses --gen A --ref B              loss components for one image pair\n"
    "  evaluate --gen DIR --ref DIR --out DIR   dataset metric report\n"
    "  fid --a SET --b SET                 Frechet distance of two feature sets\n"
    "  generate --input HE --stain NAME --out PNG   prompt-guided toy forward\n"
    "  blur-probe <image>                  PSNR/SSIM degradation under blur\n"
    "  gradcheck --loss NAME               finite-difference gradient audit\n"
    "\n"
    "common flags: --config FILE (JSON, overrides flags), --seed N, --json\n";

std::optional<std::array<double, 9>> parse_matrix(const std::optional<std::string>& spec) {
    if (!spec) return std::nullopt;
    std::array<double, 9> m{};
    std::stringstream ss(*spec);
    std::string cell;
    std::size_t i = 0;
    while (std::getline(ss, cell, ',')) {
        if (i >= 9) throw UsageError("--stain-matrix expects 9 comma-separated reals");
        m[i++] = std::stod(cell);
    }
    if (i != 9) throw UsageError("--stain-matrix expects 9 comma-separated reals");
    return m;
}

json load_config_json(const fs::path& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config: " + path.string());
    json j;
    try {
        is >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config parse error: " + std::string(e.what()));
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    return j;
}

// `--config` values take precedence over flags.
template <typename T>
void override_from(const json& j, const char* key, T& target) {
    if (j.contains(key)) target = j.at(key).get<T>();
}

int cmd_deconvolve(Args& args) {
    const bool as_json = args.flag("--json");
    const auto config_path = args.value("--config");
    auto matrix_spec = args.value("--stain-matrix");
    int dab_row = static_cast<int>(args.integer("--dab-row", 2));
    auto out_prefix = args.value("--out-prefix");
    const auto pos = args.positionals();
    if (pos.size() != 1) throw UsageError("deconvolve needs exactly one input image");
    if (config_path) {
        const json j = load_config_json(*config_path);
        if (j.contains("stain_matrix")) {
            const auto v = j.at("stain_matrix").get<std::vector<double>>();
            if (v.size() != 9) throw ConfigError("config stain_matrix needs 9 values");
            std::string joined;
            for (double x : v) joined += (joined.empty() ? "" : ",") + std::to_string(x);
            matrix_spec = joined;
        }
        override_from(j, "dab_row", dab_row);
    }
    if (!out_prefix) throw UsageError("deconvolve needs --out-prefix");

    const ImageRGB img = io::read_image(pos[0]);
    const auto parsed = parse_matrix(matrix_spec);
    const stain::StainMatrix m = parsed
                                     ? stain::StainMatrix::from_rows(*parsed, dab_row)
                                     : stain::StainMatrix::hdab();
    const auto od = stain::rgb_to_od(img);
    const auto dec = stain::deconvolve(od, m);

    static const std::array<const char*, 3> kNames{"stain0", "stain1", "stain2"};
    for (std::size_t s = 0; s < 3; ++s) {
        Tensor plane({img.height, img.width});
        for (std::size_t y = 0; y < img.height; ++y)
            for (std::size_t x = 0; x < img.width; ++x)
                plane.at(y, x) = dec.concentrations.at(y, x, s);
        const std::string suffix =
            static_cast<int>(s) == m.dab_row ? "dab" : kNames[s];
        io::write_pgm16(fs::path(*out_prefix + "." + suffix + ".pgm"), plane,
                        stain::kOdCeiling);
    }
    if (as_json) {
        json j = {{"clamped_fraction", dec.clamped_fraction()},
                  {"clamped_pixels", dec.clamped_pixels},
                  {"width", img.width},
                  {"height", img.height}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::printf("deconvolved %zux%zu, clamped fraction %.6f\n", img.width,
                    img.height, dec.clamped_fraction());
    }
    return kOk;
}

int cmd_fod(Args& args) {
    const bool as_json = args.flag("--json");
    const auto config_path = args.value("--config");
    double alpha = args.number("--alpha", 1.8);
    double od_ref = args.number("--od-ref", stain::kOdCeiling);
    const auto pos = args.positionals();
    if (pos.size() != 2) throw UsageError("fod needs <input image> <output.pgm>");
    if (config_path) {
        const json j = load_config_json(*config_path);
        override_from(j, "alpha", alpha);
        override_from(j, "od_ref", od_ref);
    }

    const ImageRGB img = io::read_image(pos[0]);
    const stain::StainMatrix m = stain::StainMatrix::hdab();
    const auto dec = stain::deconvolve(stain::rgb_to_od(img), m);
    const Tensor dab = stain::dab_od(dec.concentrations, m);
    const stain::FODMap fodmap = stain::fod(dab, alpha, od_ref);
    io::write_pgm16(pos[1], fodmap.values, od_ref);

    double total = 0.0;
    for (std::size_t i = 0; i < fodmap.values.size(); ++i) total += fodmap.values[i];
    if (as_json) {
        json j = {{"alpha", alpha}, {"od_ref", od_ref}, {"fod_sum", total},
                  {"output", pos[1]}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::printf("fod alpha=%.3g od_ref=%.6g sum=%.6g -> %s\n", alpha, od_ref, total,
                    pos[1].c_str());
    }
    return kOk;
}

pipeline::RunConfig eval_config_from(Args& args, bool need_dirs) {
    pipeline::RunConfig cfg;
    if (auto v = args.value("--gen")) cfg.gen_dir = *v;
    if (auto v = args.value("--ref")) cfg.ref_dir = *v;
    if (auto v = args.value("--out")) cfg.out_dir = *v;
    if (auto v = args.value("--stain")) cfg.stain_name = *v;
    cfg.alpha = args.number("--alpha", cfg.alpha);
    cfg.beta = args.number("--beta", cfg.beta);
    cfg.hist_bins = static_cast<std::size_t>(args.integer("--bins", 20));
    cfg.blocks = static_cast<std::size_t>(args.integer("--blocks", 16));
    cfg.tau_m = args.number("--tau-m", cfg.tau_m);
    cfg.tile_size = static_cast<std::size_t>(args.integer("--tile-size", 512));
    cfg.workers = static_cast<std::size_t>(args.integer("--workers", 0));
    cfg.stain_matrix = parse_matrix(args.value("--stain-matrix"));
    cfg.dab_row = static_cast<int>(args.integer("--dab-row", 2));
    if (auto v = args.value("--od-ref")) cfg.od_ref = std::stod(*v);
    if (auto v = args.value("--features-gen")) cfg.features_gen = *v;
    if (auto v = args.value("--features-ref")) cfg.features_ref = *v;
    if (auto v = args.value("--fmap-dir")) cfg.fmap_dir = *v;
    if (auto v = args.value("--curve-order")) {
        if (*v == "id")
            cfg.curve_order = metrics::CurveOrder::by_id;
        else if (*v == "label")
            cfg.curve_order = metrics::CurveOrder::by_label_od;
        else
            throw UsageError("--curve-order expects 'id' or 'label'");
    }
    cfg.weights.lambda_m = args.number("--lambda-m", cfg.weights.lambda_m);
    cfg.weights.lambda_c = args.number("--lambda-c", cfg.weights.lambda_c);
    cfg.weights.lambda_s = args.number("--lambda-s", cfg.weights.lambda_s);
    cfg.weights.lambda_g = args.number("--lambda-g", cfg.weights.lambda_g);

    if (auto config_path = args.value("--config")) {
        const json j = load_config_json(*config_path);
        std::string s;
        if (j.contains("gen_dir")) cfg.gen_dir = j.at("gen_dir").get<std::string>();
        if (j.contains("ref_dir")) cfg.ref_dir = j.at("ref_dir").get<std::string>();
        if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
        override_from(j, "stain", cfg.stain_name);
        override_from(j, "alpha", cfg.alpha);
        override_from(j, "beta", cfg.beta);
        override_from(j, "hist_bins", cfg.hist_bins);
        override_from(j, "blocks", cfg.blocks);
        override_from(j, "tau_m", cfg.tau_m);
        override_from(j, "tile_size", cfg.tile_size);
        override_from(j, "workers", cfg.workers);
        override_from(j, "dab_row", cfg.dab_row);
        if (j.contains("od_ref")) cfg.od_ref = j.at("od_ref").get<double>();
        if (j.contains("stain_matrix")) {
            const auto v = j.at("stain_matrix").get<std::vector<double>>();
            if (v.size() != 9) throw ConfigError("config stain_matrix needs 9 values");
            std::array<double, 9> m{};
            std::copy(v.begin(), v.end(), m.begin());
            cfg.stain_matrix = m;
        }
        if (j.contains("fmap_dir")) cfg.fmap_dir = j.at("fmap_dir").get<std::string>();
        override_from(j, "lambda_m", cfg.weights.lambda_m);
        override_from(j, "lambda_c", cfg.weights.lambda_c);
        override_from(j, "lambda_s", cfg.weights.lambda_s);
        override_from(j, "lambda_g", cfg.weights.lambda_g);
    }
    if (need_dirs && (cfg.gen_dir.empty() || cfg.ref_dir.empty()))
        throw UsageError("evaluate needs --gen and --ref directories");
    return cfg;
}

int cmd_evaluate(Args& args) {
    const bool as_json = args.flag("--json");
    pipeline::RunConfig cfg = eval_config_from(args, true);
    if (!args.positionals().empty()) throw UsageError("evaluate takes no positionals");
    if (cfg.out_dir.empty()) throw UsageError("evaluate needs --out");

    const pipeline::EvalReport report = pipeline::evaluate_dataset(cfg);
    if (as_json) {
        json j = {{"pairs", report.summary.pair_count},
                  {"skipped", report.skipped.size()},
                  {"iod", report.summary.iod},
                  {"od_ref", report.summary.od_ref},
                  {"out_dir", cfg.out_dir.string()}};
        if (report.summary.pearson) j["pearson_r"] = *report.summary.pearson;
        if (report.summary.fid) j["fid"] = *report.summary.fid;
        j["wall_seconds"] = report.summary.wall_seconds;
        j["tiles"] = report.summary.tiles_processed;
        std::cout << j.dump(2) << "\n";
    } else {
        std::printf("evaluated %zu pairs (%zu skipped), IOD %.6g",
                    report.summary.pair_count, report.skipped.size(), report.summary.iod);
        if (report.summary.pearson) std::printf(", Pearson-R %.6g", *report.summary.pearson);
        if (report.summary.fid) std::printf(", FID %.6g", *report.summary.fid);
        std::printf("; reports in %s\n", cfg.out_dir.string().c_str());
        if (report.summary.tiles_processed > 0)
            std::printf("wall %.2fs over %zu tiles (%.4f s/tile)\n",
                        report.summary.wall_seconds, report.summary.tiles_processed,
                        report.summary.wall_seconds /
                            static_cast<double>(report.summary.tiles_processed));
        for (const auto& s : report.skipped)
            std::fprintf(stderr, "skipped %s: %s\n", s.id.c_str(), s.reason.c_str());
        for (const auto& o : report.orphans_gen)
            std::fprintf(stderr, "orphan gen/%s\n", o.c_str());
        for (const auto& o : report.orphans_ref)
            std::fprintf(stderr, "orphan ref/%s\n", o.c_str());
    }
    return report.exit_code();
}

int cmd_losses(Args& args) {
    const bool as_json = args.flag("--json");
    pipeline::RunConfig cfg = eval_config_from(args, false);
    if (!args.positionals().empty()) throw UsageError("losses takes no positionals");
    // here --gen/--ref name single images, not directories
    const fs::path a = cfg.gen_dir;
    const fs::path b = cfg.ref_dir;
    if (a.empty() || b.empty()) throw UsageError("losses needs --gen and --ref images");

    const ImageRGB img_gen = io::read_image(a);
    const ImageRGB img_ref = io::read_image(b);
    if (!img_gen.same_shape(img_ref))
        throw DimensionError("losses: image dimensions differ");

    const stain::StainMatrix m = cfg.matrix();
    const auto dec_gen = stain::deconvolve(stain::rgb_to_od(img_gen), m);
    const auto dec_ref = stain::deconvolve(stain::rgb_to_od(img_ref), m);
    const double od_ref = cfg.od_ref.value_or(stain::kOdCeiling);
    const Tensor fod_gen =
        stain::fod(stain::dab_od(dec_gen.concentrations, m), cfg.alpha, od_ref).values;
    const Tensor fod_ref =
        stain::fod(stain::dab_od(dec_ref.concentrations, m), cfg.alpha, od_ref).values;

    losses::MLPAConfig mc;
    mc.beta = cfg.beta;
    mc.n_hist_bins = cfg.hist_bins;
    mc.n_blocks = cfg.blocks;
    mc.hist_hi = od_ref;

    losses::LossComponents parts;
    parts.mlpa = losses::mlpa_total(fod_gen, fod_ref, mc);
    parts.ssim = losses::ssim_loss(img_gen, img_ref);
    parts.gp = losses::gp_loss(img_gen, img_ref);
    std::vector<std::string> absent{"adv", "nce"};

    if (cfg.fmap_dir) {
        pipeline::PairEntry pair{a.stem().string(), a, b};
        // reuse the pipeline lookup by evaluating the pair row
        pipeline::RunConfig pc = cfg;
        pc.od_ref = od_ref;
        const pipeline::PairRow row = pipeline::evaluate_pair(pair, pc, od_ref);
        if (row.cppc)
            parts.cppc = *row.cppc;
        else
            absent.push_back("cppc");
    } else {
        absent.push_back("cppc");
    }
    const double total = losses::total_loss(parts, cfg.weights);

    if (as_json) {
        json j = {{"mlpa", parts.mlpa},   {"cppc", parts.cppc}, {"ssim", parts.ssim},
                  {"gp", parts.gp},       {"adv", parts.adv},   {"nce", parts.nce},
                  {"total", total},       {"absent", absent},
                  {"od_ref", od_ref}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::printf("mlpa=%.6g cppc=%.6g ssim=%.6g gp=%.6g total=%.6g", parts.mlpa,
                    parts.cppc, parts.ssim, parts.gp, total);
        std::printf(" (absent:");
        for (const auto& s : absent) std::printf(" %s", s.c_str());
        std::printf(")\n");
    }
    return kOk;
}

int cmd_fid(Args& args) {
    const bool as_json = args.flag("--json");
    const auto a = args.value("--a");
    const auto b = args.value("--b");
    if (!a || !b) throw UsageError("fid needs --a and --b feature sets");
    if (!args.positionals().empty()) throw UsageError("fid takes no positionals");
    const auto fa = io::read_feature_set(*a);
    const auto fb = io::read_feature_set(*b);
    const double d = metrics::frechet_distance(fa, fb);
    if (as_json) {
        json j = {{"frechet", d}, {"n_a", fa.n}, {"n_b", fb.n}, {"dim", fa.d}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::printf("frechet=%.9g (n_a=%zu n_b=%zu d=%zu)\n", d, fa.n, fb.n, fa.d);
    }
    return kOk;
}

int cmd_generate(Args& args) {
    const bool as_json = args.flag("--json");
    const auto config_path = args.value("--config");
    auto input = args.value("--input");
    auto out = args.value("--out");
    auto prompts = args.value("--prompts");
    auto weights_path = args.value("--weights");
    auto save_path = args.value("--save-weights");
    std::string stain_name = args.value("--stain").value_or("HER2");
    gen::GeneratorConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(args.integer("--seed", 0));
    cfg.n_blocks = static_cast<std::size_t>(args.integer("--blocks", 6));
    cfg.channels = static_cast<std::size_t>(args.integer("--channels", 16));
    cfg.embed_dim = static_cast<std::size_t>(args.integer("--embed-dim", 32));
    if (!args.positionals().empty()) throw UsageError("generate takes no positionals");
    if (config_path) {
        const json j = load_config_json(*config_path);
        override_from(j, "seed", cfg.seed);
        override_from(j, "blocks", cfg.n_blocks);
        override_from(j, "channels", cfg.channels);
        override_from(j, "embed_dim", cfg.embed_dim);
        override_from(j, "stain", stain_name);
    }
    if (!input || !out) throw UsageError("generate needs --input and --out");

    const ImageRGB he = io::read_image(*input);
    gen::GeneratorWeights w;
    if (weights_path) {
        w = gen::load_weights(*weights_path, cfg);
    } else {
        w = gen::init_weights(cfg);
    }
    const gen::PromptEmbedding prompt =
        prompts ? gen::load_prompt_embedding(*prompts, stain_name)
                : gen::fallback_prompt_embedding(stain_name, cfg.embed_dim, cfg.seed);
    if (prompt.vec.size() != cfg.embed_dim)
        throw ConfigError("prompt embedding width " + std::to_string(prompt.vec.size()) +
                          " does not match generator embed_dim " +
                          std::to_string(cfg.embed_dim));

    const ImageRGB result = gen::generate_image(he, prompt, cfg, w);
    io::write_png(*out, result);
    if (save_path) gen::save_weights(w, cfg, *save_path);

    if (as_json) {
        json j = {{"stain", prompt.stain}, {"out", *out},
                  {"width", result.width},  {"height", result.height},
                  {"seed", cfg.seed},       {"prompts", prompts ? *prompts : "fallback"}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::printf("generated %zux%zu %s image -> %s\n", result.width, result.height,
                    prompt.stain.c_str(), out->c_str());
    }
    return kOk;
}

int cmd_blur_probe(Args& args) {
    const bool as_json = args.flag("--json");
    std::string kernels_spec = args.value("--kernels").value_or("3,5,7");
    const auto pos = args.positionals();
    if (pos.size() != 1) throw UsageError("blur-probe needs one input image");

    std::vector<int> kernels;
    std::stringstream ss(kernels_spec);
    std::string cell;
    while (std::getline(ss, cell, ',')) kernels.push_back(std::stoi(cell));

    const ImageRGB img = io::read_image(pos[0]);
    const auto probe = metrics::blur_probe(img, kernels);
    if (as_json) {
        json rows = json::array();
        for (const auto& p : probe)
            rows.push_back({{"kernel", p.kernel}, {"psnr_db", p.psnr_db}, {"ssim", p.ssim}});
        std::cout << json{{"probe", rows}}.dump(2) << "\n";
    } else {
        std::printf("kernel  psnr_db   ssim\n");
        for (const auto& p : probe)
            std::printf("%dx%d  %8.4f  %.4f\n", p.kernel, p.kernel, p.psnr_db, p.ssim);
    }
    return kOk;
}

int cmd_gradcheck(Args& args) {
    const bool as_json = args.flag("--json");
    const std::string loss = args.value("--loss").value_or("all");
    const auto trials = static_cast<std::size_t>(args.integer("--trials", 20));
    const auto seed = static_cast<std::uint64_t>(args.integer("--seed", 20260809));
    if (!args.positionals().empty()) throw UsageError("gradcheck takes no positionals");

    std::vector<gradcheck::SuiteResult> results;
    if (loss == "all")
        results = gradcheck::run_all(trials, seed);
    else
        results.push_back(gradcheck::run(loss, trials, seed));

    bool ok = true;
    double worst = 0.0;
    for (const auto& r : results) {
        ok = ok && r.passed();
        worst = std::max(worst, r.max_rel_error);
    }
    if (as_json) {
        json rows = json::array();
        for (const auto& r : results) {
            json targets = json::array();
            for (const auto& t : r.targets)
                targets.push_back({{"target", t.target}, {"max_rel_error", t.max_rel_error}});
            rows.push_back({{"loss", r.loss},
                            {"max_rel_error", r.max_rel_error},
                            {"passed", r.passed()},
                            {"targets", targets}});
        }
        std::cout << json{{"results", rows}, {"max_rel_error", worst}, {"passed", ok}}
                         .dump(2)
                  << "\n";
    } else {
        for (const auto& r : results) {
            std::printf("%-11s max rel error %.3e  [%s]\n", r.loss.c_str(),
                        r.max_rel_error, r.passed() ? "ok" : "FAIL");
            for (const auto& t : r.targets)
                std::printf("    %-16s %.3e\n", t.target.c_str(), t.max_rel_error);
        }
        std::printf("gradcheck max rel error %.3e (%s)\n", worst, ok ? "ok" : "FAIL");
    }
    return ok ? kOk : kFatal;
}

}  // namespace

int run(const std::vector<std::string>& argv) {
    if (argv.empty()) {
        std::fputs(kUsageText, stderr);
        return kUsage;
    }
    const std::string cmd = argv[0];
    Args args(std::vector<std::string>(argv.begin() + 1, argv.end()));
    try {
        if (cmd == "deconvolve") return cmd_deconvolve(args);
        if (cmd == "fod") return cmd_fod(args);
        if (cmd == "losses") return cmd_losses(args);
        if (cmd == "evaluate") return cmd_evaluate(args);
        if (cmd == "fid") return cmd_fid(args);
        if (cmd == "generate") return cmd_generate(args);
        if (cmd == "blur-probe") return cmd_blur_probe(args);
        if (cmd == "gradcheck") return cmd_gradcheck(args);
        if (cmd == "--help" || cmd == "help") {
            std::fputs(kUsageText, stdout);
            return kOk;
        }
        std::fprintf(stderr, "unknown command '%s'\n%s", cmd.c_str(), kUsageText);
        return kUsage;
    } catch (const UsageError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return kUsage;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kConfigError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kFatal;
    }
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

}  // namespace stainlab::cli
