#include "stainlab/generator.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "binio.hpp"

namespace stainlab::gen {

namespace {

std::string lower(const std::string& s) {
    std::string out;
    for (char c : s) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

Tensor affine(const Tensor& w, const Tensor& b, const Tensor& v) {
    const std::size_t rows = w.extent(0), cols = w.extent(1);
    if (v.size() != cols || b.size() != rows)
        throw DimensionError("affine: parameter/input shape mismatch");
    Tensor out({rows});
    for (std::size_t r = 0; r < rows; ++r) {
        double acc = b[r];
        for (std::size_t c = 0; c < cols; ++c) acc += w.at(r, c) * v[c];
        out[r] = acc;
    }
    return out;
}

Tensor relu(Tensor t) {
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = std::max(0.0, t[i]);
    return t;
}

Tensor uniform_fan_in(Rng& rng, std::vector<std::size_t> shape, std::size_t fan_in) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(1, fan_in)));
    return rng.uniform_tensor(std::move(shape), -bound, bound);
}

}  // namespace

// --- PEMB fixtures ---

std::map<std::string, PromptEmbedding> load_prompt_embeddings(
    const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open prompt embedding file: " + path.string());
    binio::expect_magic(is, "PEMB", "prompt embeddings");
    const std::uint32_t n_stains = binio::read_u32(is, "prompt embeddings");
    const std::uint32_t e = binio::read_u32(is, "prompt embeddings");
    if (e == 0) throw FormatError("prompt embeddings: zero embedding width");
    std::map<std::string, PromptEmbedding> out;
    for (std::uint32_t s = 0; s < n_stains; ++s) {
        const std::uint16_t len = binio::read_u16(is, "prompt embeddings");
        std::string name(len, '\0');
        if (!is.read(name.data(), len))
            throw FormatError("prompt embeddings: truncated stain name");
        const auto raw = binio::read_f32_block(is, e, "prompt embeddings");
        Tensor vec({e});
        for (std::uint32_t i = 0; i < e; ++i) {
            vec[i] = static_cast<double>(raw[i]);
            if (!std::isfinite(vec[i]))
                throw FormatError("prompt embeddings: non-finite value for " + name);
        }
        out[name] = PromptEmbedding{name, std::move(vec)};
    }
    return out;
}

PromptEmbedding load_prompt_embedding(const std::filesystem::path& path,
                                      const std::string& stain) {
    auto all = load_prompt_embeddings(path);
    const std::string want = lower(stain);
    for (auto& [name, emb] : all)
        if (lower(name) == want) return emb;
    std::string available;
    for (const auto& [name, emb] : all) {
        if (!available.empty()) available += ", ";
        available += name;
    }
    throw LookupError("stain '" + stain + "' not in prompt file (available: " +
                      available + ")");
}

void write_prompt_embeddings(const std::filesystem::path& path,
                             const std::vector<PromptEmbedding>& entries) {
    if (entries.empty()) throw ConfigError("write_prompt_embeddings: no entries");
    const std::size_t e = entries.front().vec.size();
    for (const auto& entry : entries)
        if (entry.vec.size() != e)
            throw DimensionError("write_prompt_embeddings: inconsistent widths");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot write prompt embedding file: " + path.string());
    os.write("PEMB", 4);
    binio::write_u32(os, static_cast<std::uint32_t>(entries.size()));
    binio::write_u32(os, static_cast<std::uint32_t>(e));
    for (const auto& entry : entries) {
        binio::write_u16(os, static_cast<std::uint16_t>(entry.stain.size()));
        os.write(entry.stain.data(), static_cast<std::streamsize>(entry.stain.size()));
        for (std::size_t i = 0; i < e; ++i)
            binio::write_f32(os, static_cast<float>(entry.vec[i]));
    }
}

std::vector<PromptEmbedding> fallback_prompt_embeddings(std::size_t embed_dim,
                                                        std::uint64_t seed) {
    static const std::array<const char*, 4> kStains{"HER2", "ER", "PR", "Ki67"};
    if (embed_dim < kStains.size())
        throw ConfigError("fallback embeddings need embed_dim >= 4");
    Rng rng(seed);
    std::vector<Tensor> basis;
    while (basis.size() < kStains.size()) {
        Tensor v = rng.normal_tensor({embed_dim});
        for (const Tensor& u : basis) {  // Gram-Schmidt
            double dot = 0.0;
            for (std::size_t i = 0; i < embed_dim; ++i) dot += v[i] * u[i];
            for (std::size_t i = 0; i < embed_dim; ++i) v[i] -= dot * u[i];
        }
        double n2 = 0.0;
        for (std::size_t i = 0; i < embed_dim; ++i) n2 += v[i] * v[i];
        if (n2 < 1e-12) continue;  // redraw a dependent vector
        const double inv = 1.0 / std::sqrt(n2);
        for (std::size_t i = 0; i < embed_dim; ++i) v[i] *= inv;
        basis.push_back(std::move(v));
    }
    std::vector<PromptEmbedding> out;
    for (std::size_t s = 0; s < kStains.size(); ++s)
        out.push_back({kStains[s], basis[s]});
    return out;
}

PromptEmbedding fallback_prompt_embedding(const std::string& stain,
                                          std::size_t embed_dim, std::uint64_t seed) {
    const std::string want = lower(stain);
    for (auto& emb : fallback_prompt_embeddings(embed_dim, seed))
        if (lower(emb.stain) == want) return emb;
    throw LookupError("stain '" + stain +
                      "' has no fallback embedding (HER2, ER, PR, Ki67)");
}

// --- prompt bias ---

PromptBiasParams PromptBiasParams::init(std::size_t channels, std::size_t embed_dim,
                                        Rng& rng) {
    PromptBiasParams p;
    p.mlp_w1 = uniform_fan_in(rng, {channels, channels}, channels);
    p.mlp_b1 = uniform_fan_in(rng, {channels}, channels);
    p.mlp_w2 = uniform_fan_in(rng, {embed_dim, channels}, channels);
    p.mlp_b2 = uniform_fan_in(rng, {embed_dim}, channels);
    p.mix_w = uniform_fan_in(rng, {embed_dim, 2 * embed_dim}, 2 * embed_dim);
    p.mix_b = uniform_fan_in(rng, {embed_dim}, 2 * embed_dim);
    return p;
}

Tensor prompt_bias(const Tensor& x, const PromptBiasParams& params) {
    require_rank(x, 3, "prompt_bias");
    const Tensor pooled_avg = avg_pool_global(x);
    const Tensor pooled_max = max_pool_global(x);
    const Tensor branch_avg =
        affine(params.mlp_w2, params.mlp_b2, relu(affine(params.mlp_w1, params.mlp_b1, pooled_avg)));
    const Tensor branch_max =
        affine(params.mlp_w2, params.mlp_b2, relu(affine(params.mlp_w1, params.mlp_b1, pooled_max)));
    const std::size_t e = branch_avg.size();
    Tensor cat({2 * e});
    for (std::size_t i = 0; i < e; ++i) {
        cat[i] = branch_avg[i];
        cat[e + i] = branch_max[i];
    }
    return affine(params.mix_w, params.mix_b, cat);
}

Tensor modulate(const Tensor& t_b, const Tensor& bias) {
    if (t_b.size() != bias.size())
        throw DimensionError("modulate: embedding length mismatch");
    Tensor out(t_b.shape());
    for (std::size_t i = 0; i < t_b.size(); ++i) out[i] = t_b[i] + bias[i];
    return out;
}

// --- PGSN ---

double PgsnParams::rho() const { return 1.0 / (1.0 + std::exp(-rho_raw)); }

PgsnParams PgsnParams::init(std::size_t channels, std::size_t embed_dim, Rng& rng) {
    PgsnParams p;
    p.gamma_w = uniform_fan_in(rng, {channels, embed_dim}, embed_dim);
    p.gamma_b = uniform_fan_in(rng, {channels}, embed_dim);
    p.beta_w = uniform_fan_in(rng, {channels, embed_dim}, embed_dim);
    p.beta_b = uniform_fan_in(rng, {channels}, embed_dim);
    p.rho_raw = rng.uniform(-1.0, 1.0);
    return p;
}

Tensor pgsn_apply(const Tensor& x, const Tensor& gamma, const Tensor& beta,
                  double rho, double eps, PgsnCache* cache) {
    require_rank(x, 3, "pgsn_apply");
    const std::size_t h = x.extent(0), w = x.extent(1), c = x.extent(2);
    if (gamma.size() != c || beta.size() != c)
        throw DimensionError("pgsn_apply: gamma/beta must be per-channel");

    const double n_in = static_cast<double>(h * w);
    Tensor in_hat(x.shape());
    std::vector<double> inv_sigma_in(c);
    for (std::size_t ch = 0; ch < c; ++ch) {
        double mean = 0.0;
        for (std::size_t y = 0; y < h; ++y)
            for (std::size_t xx = 0; xx < w; ++xx) mean += x.at(y, xx, ch);
        mean /= n_in;
        double var = 0.0;
        for (std::size_t y = 0; y < h; ++y)
            for (std::size_t xx = 0; xx < w; ++xx) {
                const double d = x.at(y, xx, ch) - mean;
                var += d * d;
            }
        var /= n_in;
        const double inv = 1.0 / std::sqrt(var + eps);
        inv_sigma_in[ch] = inv;
        for (std::size_t y = 0; y < h; ++y)
            for (std::size_t xx = 0; xx < w; ++xx)
                in_hat.at(y, xx, ch) = (x.at(y, xx, ch) - mean) * inv;
    }

    const double n_ln = static_cast<double>(x.size());
    double mean_ln = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) mean_ln += x[i];
    mean_ln /= n_ln;
    double var_ln = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - mean_ln;
        var_ln += d * d;
    }
    var_ln /= n_ln;
    const double inv_sigma_ln = 1.0 / std::sqrt(var_ln + eps);
    Tensor ln_hat(x.shape());
    for (std::size_t i = 0; i < x.size(); ++i) ln_hat[i] = (x[i] - mean_ln) * inv_sigma_ln;

    Tensor out(x.shape());
    for (std::size_t y = 0; y < h; ++y)
        for (std::size_t xx = 0; xx < w; ++xx)
            for (std::size_t ch = 0; ch < c; ++ch)
                out.at(y, xx, ch) =
                    gamma[ch] * (rho * in_hat.at(y, xx, ch) +
                                 (1.0 - rho) * ln_hat.at(y, xx, ch)) +
                    beta[ch];

    if (cache) {
        cache->in_hat = std::move(in_hat);
        cache->ln_hat = std::move(ln_hat);
        cache->inv_sigma_in = std::move(inv_sigma_in);
        cache->inv_sigma_ln = inv_sigma_ln;
        cache->gamma = gamma;
        cache->beta = beta;
        cache->rho = rho;
        cache->eps = eps;
    }
    return out;
}

Tensor pgsn_forward(const Tensor& x, const Tensor& t_i, const PgsnParams& params,
                    PgsnCache* cache) {
    const Tensor gamma = affine(params.gamma_w, params.gamma_b, t_i);
    const Tensor beta = affine(params.beta_w, params.beta_b, t_i);
    return pgsn_apply(x, gamma, beta, params.rho(), kNormEps, cache);
}

PgsnGrads pgsn_backward(const Tensor& upstream, const PgsnCache& cache) {
    require_same_shape(upstream, cache.in_hat, "pgsn_backward");
    const std::size_t h = upstream.extent(0), w = upstream.extent(1),
                      c = upstream.extent(2);
    const double rho = cache.rho;

    PgsnGrads g;
    g.d_gamma = Tensor({c});
    g.d_beta = Tensor({c});
    for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x)
            for (std::size_t ch = 0; ch < c; ++ch) {
                const double u = upstream.at(y, x, ch);
                const double mix = rho * cache.in_hat.at(y, x, ch) +
                                   (1.0 - rho) * cache.ln_hat.at(y, x, ch);
                g.d_gamma[ch] += u * mix;
                g.d_beta[ch] += u;
                g.d_rho += u * cache.gamma[ch] *
                           (cache.in_hat.at(y, x, ch) - cache.ln_hat.at(y, x, ch));
            }

    // dL/d in_hat and dL/d ln_hat.
    Tensor g_in(upstream.shape()), g_ln(upstream.shape());
    for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x)
            for (std::size_t ch = 0; ch < c; ++ch) {
                const double u = upstream.at(y, x, ch) * cache.gamma[ch];
                g_in.at(y, x, ch) = u * rho;
                g_ln.at(y, x, ch) = u * (1.0 - rho);
            }

    // Standardization backward: dx = inv_sigma*(g - mean(g) - y_hat*mean(g*y_hat)).
    g.d_x = Tensor(upstream.shape());
    const double n_in = static_cast<double>(h * w);
    for (std::size_t ch = 0; ch < c; ++ch) {
        double mg = 0.0, mgy = 0.0;
        for (std::size_t y = 0; y < h; ++y)
            for (std::size_t x = 0; x < w; ++x) {
                mg += g_in.at(y, x, ch);
                mgy += g_in.at(y, x, ch) * cache.in_hat.at(y, x, ch);
            }
        mg /= n_in;
        mgy /= n_in;
        for (std::size_t y = 0; y < h; ++y)
            for (std::size_t x = 0; x < w; ++x)
                g.d_x.at(y, x, ch) = cache.inv_sigma_in[ch] *
                                     (g_in.at(y, x, ch) - mg -
                                      cache.in_hat.at(y, x, ch) * mgy);
    }
    const double n_ln = static_cast<double>(upstream.size());
    double mg = 0.0, mgy = 0.0;
    for (std::size_t i = 0; i < upstream.size(); ++i) {
        mg += g_ln[i];
        mgy += g_ln[i] * cache.ln_hat[i];
    }
    mg /= n_ln;
    mgy /= n_ln;
    for (std::size_t i = 0; i < upstream.size(); ++i)
        g.d_x[i] += cache.inv_sigma_ln * (g_ln[i] - mg - cache.ln_hat[i] * mgy);

    return g;
}

// --- generator stack ---

void GeneratorConfig::validate() const {
    if (n_blocks < 1 || n_blocks > 6)
        throw ConfigError("generator: n_blocks must be in [1,6]");
    if (channels < 1 || channels > 32)
        throw ConfigError("generator: channels must be in [1,32]");
    if (embed_dim < 1) throw ConfigError("generator: embed_dim must be positive");
}

namespace {

ConvLayer init_conv(Rng& rng, std::size_t cin, std::size_t cout) {
    ConvLayer layer;
    const std::size_t fan_in = 9 * cin;
    layer.w = uniform_fan_in(rng, {3, 3, cin, cout}, fan_in);
    layer.b = uniform_fan_in(rng, {cout}, fan_in);
    return layer;
}

Tensor conv_bias(const Tensor& x, const ConvLayer& layer) {
    Tensor out = conv2d(x, layer.w, Padding::same);
    const std::size_t c = out.extent(2);
    for (std::size_t y = 0; y < out.extent(0); ++y)
        for (std::size_t xx = 0; xx < out.extent(1); ++xx)
            for (std::size_t ch = 0; ch < c; ++ch) out.at(y, xx, ch) += layer.b[ch];
    return out;
}

Tensor relu_map(Tensor t) {
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = std::max(0.0, t[i]);
    return t;
}

void check_toy_scale(const ImageRGB& input) {
    if (input.width == 0 || input.height == 0)
        throw DimensionError("generator: empty input image");
    if (input.width > 64 || input.height > 64)
        throw ConfigError("generator: toy-scale forward accepts at most 64x64 inputs");
}

}  // namespace

GeneratorWeights init_weights(const GeneratorConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);
    GeneratorWeights w;
    w.enc = init_conv(rng, 3, cfg.channels);
    w.blocks.resize(cfg.n_blocks);
    for (auto& block : w.blocks) {
        block.conv1 = init_conv(rng, cfg.channels, cfg.channels);
        block.conv2 = init_conv(rng, cfg.channels, cfg.channels);
        block.pgsn = PgsnParams::init(cfg.channels, cfg.embed_dim, rng);
    }
    w.dec = init_conv(rng, cfg.channels, 3);
    w.bias_head = PromptBiasParams::init(cfg.channels, cfg.embed_dim, rng);
    return w;
}

Tensor encode(const ImageRGB& input, const GeneratorConfig& cfg,
              const GeneratorWeights& w) {
    cfg.validate();
    check_toy_scale(input);
    return relu_map(conv_bias(to_unit_tensor(input), w.enc));
}

ImageRGB generator_forward(const ImageRGB& input, const Tensor& t_i,
                           const GeneratorConfig& cfg, const GeneratorWeights& w) {
    cfg.validate();
    check_toy_scale(input);
    if (t_i.size() != cfg.embed_dim)
        throw DimensionError("generator: embedding length does not match config");

    Tensor h = relu_map(conv_bias(to_unit_tensor(input), w.enc));
    for (const auto& block : w.blocks) {
        Tensor res = conv_bias(relu_map(conv_bias(h, block.conv1)), block.conv2);
        for (std::size_t i = 0; i < h.size(); ++i) res[i] += h[i];
        h = pgsn_forward(res, t_i, block.pgsn);
    }
    Tensor y = conv_bias(h, w.dec);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = 1.0 / (1.0 + std::exp(-y[i]));
    return from_unit_tensor(y);
}

ImageRGB generate_image(const ImageRGB& input, const PromptEmbedding& prompt,
                        const GeneratorConfig& cfg, const GeneratorWeights& w) {
    const Tensor features = encode(input, cfg, w);
    const Tensor bias = prompt_bias(features, w.bias_head);
    const Tensor t_i = modulate(prompt.vec, bias);
    return generator_forward(input, t_i, cfg, w);
}

// --- checkpoints ---

namespace {

struct NamedTensor {
    std::string name;
    const Tensor* tensor;
};

std::vector<NamedTensor> weight_table(const GeneratorWeights& w,
                                      std::vector<Tensor>& scalar_storage) {
    // Fill the scalar tensors first so the table's pointers stay stable.
    scalar_storage.clear();
    scalar_storage.reserve(w.blocks.size());
    for (const auto& blk : w.blocks)
        scalar_storage.emplace_back(std::vector<std::size_t>{1},
                                    std::vector<double>{blk.pgsn.rho_raw});

    std::vector<NamedTensor> table;
    table.push_back({"enc.w", &w.enc.w});
    table.push_back({"enc.b", &w.enc.b});
    for (std::size_t i = 0; i < w.blocks.size(); ++i) {
        const std::string p = "block" + std::to_string(i) + ".";
        const auto& blk = w.blocks[i];
        table.push_back({p + "conv1.w", &blk.conv1.w});
        table.push_back({p + "conv1.b", &blk.conv1.b});
        table.push_back({p + "conv2.w", &blk.conv2.w});
        table.push_back({p + "conv2.b", &blk.conv2.b});
        table.push_back({p + "pgsn.gamma_w", &blk.pgsn.gamma_w});
        table.push_back({p + "pgsn.gamma_b", &blk.pgsn.gamma_b});
        table.push_back({p + "pgsn.beta_w", &blk.pgsn.beta_w});
        table.push_back({p + "pgsn.beta_b", &blk.pgsn.beta_b});
        table.push_back({p + "pgsn.rho_raw", &scalar_storage[i]});
    }
    table.push_back({"dec.w", &w.dec.w});
    table.push_back({"dec.b", &w.dec.b});
    table.push_back({"bias.mlp_w1", &w.bias_head.mlp_w1});
    table.push_back({"bias.mlp_b1", &w.bias_head.mlp_b1});
    table.push_back({"bias.mlp_w2", &w.bias_head.mlp_w2});
    table.push_back({"bias.mlp_b2", &w.bias_head.mlp_b2});
    table.push_back({"bias.mix_w", &w.bias_head.mix_w});
    table.push_back({"bias.mix_b", &w.bias_head.mix_b});
    return table;
}

}  // namespace

void save_weights(const GeneratorWeights& w, const GeneratorConfig& cfg,
                  const std::filesystem::path& manifest_path) {
    // rho_raw is serialized as a one-element tensor held in scalar_storage,
    // which must outlive the table.
    std::vector<Tensor> scalar_storage;
    const auto table = weight_table(w, scalar_storage);

    std::filesystem::path bin_path = manifest_path;
    bin_path.replace_extension(".bin");

    nlohmann::json manifest;
    manifest["data"] = bin_path.filename().string();
    manifest["dtype"] = "f32";
    manifest["n_blocks"] = cfg.n_blocks;
    manifest["channels"] = cfg.channels;
    manifest["embed_dim"] = cfg.embed_dim;
    manifest["seed"] = cfg.seed;
    auto& tensors = manifest["tensors"] = nlohmann::json::array();

    std::ofstream bin(bin_path, std::ios::binary);
    if (!bin) throw IoError("cannot write checkpoint blob: " + bin_path.string());
    std::size_t offset = 0;
    for (const auto& entry : table) {
        nlohmann::json t;
        t["name"] = entry.name;
        t["shape"] = entry.tensor->shape();
        t["offset"] = offset;
        tensors.push_back(t);
        for (std::size_t i = 0; i < entry.tensor->size(); ++i)
            binio::write_f32(bin, static_cast<float>((*entry.tensor)[i]));
        offset += entry.tensor->size() * sizeof(float);
    }
    std::ofstream mf(manifest_path);
    if (!mf) throw IoError("cannot write checkpoint manifest: " + manifest_path.string());
    mf << manifest.dump(2) << "\n";
}

GeneratorWeights load_weights(const std::filesystem::path& manifest_path,
                              GeneratorConfig& cfg_out) {
    std::ifstream mf(manifest_path);
    if (!mf) throw IoError("cannot open checkpoint manifest: " + manifest_path.string());
    nlohmann::json manifest;
    try {
        mf >> manifest;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("checkpoint manifest: " + std::string(e.what()));
    }
    cfg_out.n_blocks = manifest.at("n_blocks").get<std::size_t>();
    cfg_out.channels = manifest.at("channels").get<std::size_t>();
    cfg_out.embed_dim = manifest.at("embed_dim").get<std::size_t>();
    cfg_out.seed = manifest.value("seed", std::uint64_t{0});
    cfg_out.validate();

    const std::filesystem::path bin_path =
        manifest_path.parent_path() / manifest.at("data").get<std::string>();
    std::ifstream bin(bin_path, std::ios::binary);
    if (!bin) throw IoError("cannot open checkpoint blob: " + bin_path.string());

    std::map<std::string, Tensor> loaded;
    for (const auto& t : manifest.at("tensors")) {
        const auto name = t.at("name").get<std::string>();
        const auto shape = t.at("shape").get<std::vector<std::size_t>>();
        const auto offset = t.at("offset").get<std::size_t>();
        std::size_t count = shape.empty() ? 0 : 1;
        for (std::size_t e : shape) count *= e;
        bin.seekg(static_cast<std::streamoff>(offset));
        const auto raw = binio::read_f32_block(bin, count, "checkpoint blob");
        Tensor tensor(shape);
        for (std::size_t i = 0; i < count; ++i) tensor[i] = static_cast<double>(raw[i]);
        loaded[name] = std::move(tensor);
    }

    auto take = [&](const std::string& name) -> Tensor {
        auto it = loaded.find(name);
        if (it == loaded.end())
            throw LookupError("checkpoint missing tensor '" + name + "'");
        return std::move(it->second);
    };

    GeneratorWeights w;
    w.enc = {take("enc.w"), take("enc.b")};
    w.blocks.resize(cfg_out.n_blocks);
    for (std::size_t i = 0; i < cfg_out.n_blocks; ++i) {
        const std::string p = "block" + std::to_string(i) + ".";
        auto& blk = w.blocks[i];
        blk.conv1 = {take(p + "conv1.w"), take(p + "conv1.b")};
        blk.conv2 = {take(p + "conv2.w"), take(p + "conv2.b")};
        blk.pgsn.gamma_w = take(p + "pgsn.gamma_w");
        blk.pgsn.gamma_b = take(p + "pgsn.gamma_b");
        blk.pgsn.beta_w = take(p + "pgsn.beta_w");
        blk.pgsn.beta_b = take(p + "pgsn.beta_b");
        blk.pgsn.rho_raw = take(p + "pgsn.rho_raw")[0];
    }
    w.dec = {take("dec.w"), take("dec.b")};
    w.bias_head.mlp_w1 = take("bias.mlp_w1");
    w.bias_head.mlp_b1 = take("bias.mlp_b1");
    w.bias_head.mlp_w2 = take("bias.mlp_w2");
    w.bias_head.mlp_b2 = take("bias.mlp_b2");
    w.bias_head.mix_w = take("bias.mix_w");
    w.bias_head.mix_b = take("bias.mix_b");
    return w;
}

}  // namespace stainlab::gen
