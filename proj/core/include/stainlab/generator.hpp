#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "stainlab/image.hpp"
#include "stainlab/numeric.hpp"
#include "stainlab/rng.hpp"
#include "stainlab/tensor.hpp"

namespace stainlab::gen {

// Text-prompt embedding for one stain, supplied by fixture files; the
// upstream language model is not part of this library.
struct PromptEmbedding {
    std::string stain;
    Tensor vec;  // [E]
};

// All embeddings of a PEMB fixture, keyed by stain name.
std::map<std::string, PromptEmbedding> load_prompt_embeddings(
    const std::filesystem::path& path);

// Case-insensitive stain lookup; LookupError lists the available keys.
PromptEmbedding load_prompt_embedding(const std::filesystem::path& path,
                                      const std::string& stain);

void write_prompt_embeddings(const std::filesystem::path& path,
                             const std::vector<PromptEmbedding>& entries);

// Script-free fallback: seeded orthonormal vectors for HER2, ER, PR and
// Ki67, usable wherever a real embedding fixture is absent.
std::vector<PromptEmbedding> fallback_prompt_embeddings(std::size_t embed_dim,
                                                        std::uint64_t seed);
PromptEmbedding fallback_prompt_embedding(const std::string& stain,
                                          std::size_t embed_dim, std::uint64_t seed);

// Image-conditioned bias head: shared two-layer MLP over the average- and
// max-pooled feature vectors, concatenated and mixed down to E.
struct PromptBiasParams {
    Tensor mlp_w1;  // [C,C]
    Tensor mlp_b1;  // [C]
    Tensor mlp_w2;  // [E,C]
    Tensor mlp_b2;  // [E]
    Tensor mix_w;   // [E,2E]
    Tensor mix_b;   // [E]

    static PromptBiasParams init(std::size_t channels, std::size_t embed_dim, Rng& rng);
};

Tensor prompt_bias(const Tensor& x, const PromptBiasParams& params);

// Elementwise refinement of the base embedding.
Tensor modulate(const Tensor& t_b, const Tensor& bias);

// Prompt-guided style normalization parameters. gamma/beta come from 1x1
// projections of the modulated embedding; the IN/LN mixing weight is stored
// pre-sigmoid so rho stays in (0,1) by construction.
struct PgsnParams {
    Tensor gamma_w;  // [C,E]
    Tensor gamma_b;  // [C]
    Tensor beta_w;   // [C,E]
    Tensor beta_b;   // [C]
    double rho_raw = 0.0;

    double rho() const;
    static PgsnParams init(std::size_t channels, std::size_t embed_dim, Rng& rng);
};

struct PgsnCache {
    Tensor in_hat;          // instance-normalized input
    Tensor ln_hat;          // layer-normalized input
    std::vector<double> inv_sigma_in;  // per channel
    double inv_sigma_ln = 0.0;
    Tensor gamma;           // [C]
    Tensor beta;            // [C]
    double rho = 0.0;
    double eps = 0.0;
};

// gamma_c * (rho*IN(x) + (1-rho)*LN(x)) + beta_c.
Tensor pgsn_apply(const Tensor& x, const Tensor& gamma, const Tensor& beta,
                  double rho, double eps = kNormEps, PgsnCache* cache = nullptr);

Tensor pgsn_forward(const Tensor& x, const Tensor& t_i, const PgsnParams& params,
                    PgsnCache* cache = nullptr);

struct PgsnGrads {
    Tensor d_x;
    Tensor d_gamma;
    Tensor d_beta;
    double d_rho = 0.0;
};

PgsnGrads pgsn_backward(const Tensor& upstream, const PgsnCache& cache);

struct GeneratorConfig {
    std::size_t n_blocks = 6;
    std::size_t channels = 16;
    std::size_t embed_dim = 32;
    std::uint64_t seed = 0;

    void validate() const;  // toy-scale bounds: blocks in [1,6], channels <= 32
};

struct ConvLayer {
    Tensor w;  // [3,3,Cin,Cout]
    Tensor b;  // [Cout]
};

struct ResPgsnBlock {
    ConvLayer conv1;
    ConvLayer conv2;
    PgsnParams pgsn;
};

struct GeneratorWeights {
    ConvLayer enc;                    // 3 -> channels
    std::vector<ResPgsnBlock> blocks;
    ConvLayer dec;                    // channels -> 3
    PromptBiasParams bias_head;
};

// Deterministic init: every tensor uniform in +-1/sqrt(fan_in), drawn from
// the config seed in a fixed traversal order.
GeneratorWeights init_weights(const GeneratorConfig& cfg);

// Encoder feature map used both by the residual stack and the bias head.
Tensor encode(const ImageRGB& input, const GeneratorConfig& cfg,
              const GeneratorWeights& w);

// Encoder conv -> N x (residual block -> PGSN) -> decoder conv -> sigmoid,
// quantized to 8 bits. Pure function of its arguments.
ImageRGB generator_forward(const ImageRGB& input, const Tensor& t_i,
                           const GeneratorConfig& cfg, const GeneratorWeights& w);

// Full prompt path: encode, bias-modulate the base embedding, then run the
// stack with the modulated embedding.
ImageRGB generate_image(const ImageRGB& input, const PromptEmbedding& prompt,
                        const GeneratorConfig& cfg, const GeneratorWeights& w);

// Checkpoint: raw little-endian float32 blob plus a JSON manifest naming
// each tensor with shape and byte offset.
void save_weights(const GeneratorWeights& w, const GeneratorConfig& cfg,
                  const std::filesystem::path& manifest_path);
GeneratorWeights load_weights(const std::filesystem::path& manifest_path,
                              GeneratorConfig& cfg_out);

}  // namespace stainlab::gen
