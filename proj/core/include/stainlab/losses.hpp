#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "stainlab/image.hpp"
#include "stainlab/stain.hpp"
#include "stainlab/tensor.hpp"

namespace stainlab::losses {

// The per-bin / per-block / per-pixel-class operands are scalars, so the
// L2 norm collapses to an absolute value; the squared reading stays
// available for ablation.
enum class NormMode { absolute, squared };

// Hard binning for evaluation parity; triangular soft binning for
// gradient flow.
enum class HistoMode { hard, soft };

struct MLPAConfig {
    double beta = 0.2;
    std::size_t n_hist_bins = 20;
    std::size_t n_blocks = 16;  // perfect square, laid out as a sqrt x sqrt grid
    double hist_lo = 0.0;
    double hist_hi = stain::kOdCeiling;
    NormMode norm = NormMode::absolute;
    HistoMode histo = HistoMode::hard;

    void validate() const;
    std::size_t grid() const;  // sqrt(n_blocks)
};

struct LossWeights {
    double lambda_m = 1.0;
    double lambda_c = 2.5;
    double lambda_s = 0.05;
    double lambda_g = 10.0;
};

struct LossComponents {
    double adv = 0.0;
    double nce = 0.0;
    double mlpa = 0.0;
    double cppc = 0.0;
    double ssim = 0.0;
    double gp = 0.0;
};

// --- MLPA (multi-level protein awareness) on FOD value maps [H,W] ---

// Dead-zoned global term: |mean(F)-mean(R)| when the gap reaches
// beta*mean(R), exactly 0 (value and gradient) inside the tolerance band.
double mlpa_avg(const Tensor& o_f, const Tensor& o_r, double beta,
                NormMode norm = NormMode::absolute);
Tensor mlpa_avg_grad(const Tensor& o_f, const Tensor& o_r, double beta,
                     NormMode norm = NormMode::absolute);

double mlpa_histo(const Tensor& o_f, const Tensor& o_r, const MLPAConfig& cfg);
// d/d o_f; requires cfg.histo == soft.
Tensor mlpa_histo_grad(const Tensor& o_f, const Tensor& o_r, const MLPAConfig& cfg);

double mlpa_block(const Tensor& o_f, const Tensor& o_r, const MLPAConfig& cfg);
Tensor mlpa_block_grad(const Tensor& o_f, const Tensor& o_r, const MLPAConfig& cfg);

double mlpa_total(const Tensor& o_f, const Tensor& o_r, const MLPAConfig& cfg);

// --- CPPC (cross-protein prototype consistency) ---

// Confidence-weighted class prototypes: q_c = sum_i p_c(i) f(i) / sum_i p_c(i).
// A class with zero total mass raises DegenerateClassError.
Tensor extract_prototypes(const Tensor& f, const Tensor& p);

// Falls back to the unweighted mean feature for empty classes; sets
// *degenerate when the fallback fired.
Tensor extract_prototypes_or_uniform(const Tensor& f, const Tensor& p,
                                     bool* degenerate = nullptr);

// Bidirectional prototype consistency: cosine similarity of each side's
// features against the other side's prototypes, softmaxed over the class
// axis and compared against the FOD-derived one-hot masks.
double cppc_loss(const Tensor& f_f, const Tensor& f_r, const Tensor& p_f,
                 const Tensor& p_r, const Tensor& m_f, const Tensor& m_r);

struct CppcGrads {
    Tensor d_f_f;
    Tensor d_f_r;
};
CppcGrads cppc_grad(const Tensor& f_f, const Tensor& f_r, const Tensor& p_f,
                    const Tensor& p_r, const Tensor& m_f, const Tensor& m_r);

// --- image-quality losses ---

double ssim_loss(const Tensor& k_f, const Tensor& k_r, double peak = 1.0);
double ssim_loss(const ImageRGB& k_f, const ImageRGB& k_r);
// d/d k_f.
Tensor ssim_loss_grad(const Tensor& k_f, const Tensor& k_r, double peak = 1.0);

inline constexpr std::size_t kGpDefaultLevels = 4;
// Coarser scales weighted higher, matching the pyramid loss convention.
std::span<const double> gp_default_lambdas();

// Sum over levels of lambda_i * mean |G_i(k_r) - G_i(k_f)| where G_i is an
// i-fold 5x5 binomial blur followed by a 2x downsample; level 0 is identity.
double gp_loss(const Tensor& k_f, const Tensor& k_r, std::size_t levels,
               std::span<const double> lambdas);
double gp_loss(const ImageRGB& k_f, const ImageRGB& k_r,
               std::size_t levels = kGpDefaultLevels,
               std::span<const double> lambdas = gp_default_lambdas());
Tensor gp_loss_grad(const Tensor& k_f, const Tensor& k_r, std::size_t levels,
                    std::span<const double> lambdas);

// --- contrastive / adversarial values ---

inline constexpr double kNceDefaultTau = 0.07;

// Patch InfoNCE; all vectors are L2-normalized internally.
double nce_loss(const Tensor& anchor, const Tensor& positive,
                const std::vector<Tensor>& negatives, double tau = kNceDefaultTau);

struct NceGrads {
    Tensor d_anchor;
    Tensor d_positive;
    std::vector<Tensor> d_negatives;
};
NceGrads nce_grad(const Tensor& anchor, const Tensor& positive,
                  const std::vector<Tensor>& negatives, double tau = kNceDefaultTau);

// mean log d_real + mean log(1 - d_fake); inputs must lie strictly in (0,1).
double adversarial_value(const Tensor& d_real, const Tensor& d_fake);

// L_adv + L_NCE + lm*L_MLPA + lc*L_CPPC + ls*L_SSIM + lg*L_GP.
double total_loss(const LossComponents& parts, const LossWeights& w);

}  // namespace stainlab::losses
