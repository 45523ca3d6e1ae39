#include "stainlab/losses.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "stainlab/numeric.hpp"

namespace stainlab::losses {

void MLPAConfig::validate() const {
    if (beta < 0.0) throw ConfigError("MLPA: beta must be >= 0");
    if (n_hist_bins < 2) throw ConfigError("MLPA: need at least 2 histogram bins");
    if (hist_hi <= hist_lo) throw ConfigError("MLPA: empty histogram range");
    const std::size_t g = grid();
    if (g * g != n_blocks)
        throw ConfigError("MLPA: n_blocks must be a perfect square");
    if (g == 0) throw ConfigError("MLPA: n_blocks must be positive");
}

std::size_t MLPAConfig::grid() const {
    auto g = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n_blocks))));
    return g;
}

namespace {

double mean_of(const Tensor& t) {
    double s = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) s += t[i];
    return s / static_cast<double>(t.size());
}

double scalar_norm(double delta, NormMode norm) {
    return norm == NormMode::absolute ? std::abs(delta) : delta * delta;
}

}  // namespace

double mlpa_avg(const Tensor& o_f, const Tensor& o_r, double beta, NormMode norm) {
    require_same_shape(o_f, o_r, "mlpa_avg");
    require_rank(o_f, 2, "mlpa_avg");
    const double delta = mean_of(o_f) - mean_of(o_r);
    if (std::abs(delta) < beta * mean_of(o_r)) return 0.0;
    return scalar_norm(delta, norm);
}

Tensor mlpa_avg_grad(const Tensor& o_f, const Tensor& o_r, double beta, NormMode norm) {
    require_same_shape(o_f, o_r, "mlpa_avg");
    Tensor grad(o_f.shape());
    const double delta = mean_of(o_f) - mean_of(o_r);
    if (std::abs(delta) < beta * mean_of(o_r)) return grad;  // dead zone: exact zero
    const double d_delta = norm == NormMode::absolute
                               ? (delta >= 0.0 ? 1.0 : -1.0)
                               : 2.0 * delta;
    const double per_pixel = d_delta / static_cast<double>(o_f.size());
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] = per_pixel;
    return grad;
}

namespace {

std::vector<double> hard_histogram(const Tensor& t, const MLPAConfig& cfg) {
    const std::size_t nb = cfg.n_hist_bins;
    const double width = (cfg.hist_hi - cfg.hist_lo) / static_cast<double>(nb);
    std::vector<double> h(nb, 0.0);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double pos = (t[i] - cfg.hist_lo) / width;
        const auto bin = static_cast<std::size_t>(
            std::clamp(static_cast<long>(std::floor(pos)), 0L, static_cast<long>(nb) - 1));
        h[bin] += 1.0;
    }
    const double inv = 1.0 / static_cast<double>(t.size());
    for (double& v : h) v *= inv;
    return h;
}

// Triangular kernel over the two adjacent bin centers; each sample keeps
// total mass 1 after edge clamping.
std::vector<double> soft_histogram(const Tensor& t, const MLPAConfig& cfg) {
    const std::size_t nb = cfg.n_hist_bins;
    const double width = (cfg.hist_hi - cfg.hist_lo) / static_cast<double>(nb);
    std::vector<double> h(nb, 0.0);
    for (std::size_t i = 0; i < t.size(); ++i) {
        double pos = (t[i] - cfg.hist_lo) / width - 0.5;  // bin-center coordinates
        pos = std::clamp(pos, 0.0, static_cast<double>(nb - 1));
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const double frac = pos - static_cast<double>(lo);
        h[lo] += 1.0 - frac;
        if (lo + 1 < nb) h[lo + 1] += frac;
    }
    const double inv = 1.0 / static_cast<double>(t.size());
    for (double& v : h) v *= inv;
    return h;
}

}  // namespace

double mlpa_histo(const Tensor& o_f, const Tensor& o_r, const MLPAConfig& cfg) {
    require_same_shape(o_f, o_r, "mlpa_histo");
    require_rank(o_f, 2, "mlpa_histo");
    cfg.validate();
    const auto hf = cfg.histo == HistoMode::hard ? hard_histogram(o_f, cfg)
                                                 : soft_histogram(o_f, cfg);
    const auto hr = cfg.histo == HistoMode::hard ? hard_histogram(o_r, cfg)
                                                 : soft_histogram(o_r, cfg);
    double acc = 0.0;
    for (std::size_t i = 0; i < hf.size(); ++i)
        acc += scalar_norm(hf[i] - hr[i], cfg.norm);
    return acc / static_cast<double>(cfg.n_hist_bins);
}

Tensor mlpa_histo_grad(const Tensor& o_f, const Tensor& o_r, const MLPAConfig& cfg) {
    require_same_shape(o_f, o_r, "mlpa_histo_grad");
    cfg.validate();
    if (cfg.histo != HistoMode::soft)
        throw ConfigError("mlpa_histo_grad: hard binning is not differentiable; use soft mode");
    const auto hf = soft_histogram(o_f, cfg);
    const auto hr = soft_histogram(o_r, cfg);
    const std::size_t nb = cfg.n_hist_bins;
    std::vector<double> d_h(nb);
    for (std::size_t i = 0; i < nb; ++i) {
        const double diff = hf[i] - hr[i];
        d_h[i] = (cfg.norm == NormMode::absolute ? (diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0))
                                                 : 2.0 * diff) /
                 static_cast<double>(nb);
    }
    const double width = (cfg.hist_hi - cfg.hist_lo) / static_cast<double>(nb);
    const double inv_count = 1.0 / static_cast<double>(o_f.size());
    Tensor grad(o_f.shape());
    for (std::size_t i = 0; i < o_f.size(); ++i) {
        const double pos = (o_f[i] - cfg.hist_lo) / width - 0.5;
        if (pos <= 0.0 || pos >= static_cast<double>(nb - 1)) continue;  // clamped: flat
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        // d h_lo / d value = -1/(width*count), d h_{lo+1} / d value = +1/(width*count)
        grad[i] = (d_h[lo + 1] - d_h[lo]) * inv_count / width;
    }
    return grad;
}

namespace {

struct BlockGrid {
    std::size_t g, bh, bw, off_h, off_w;
};

BlockGrid block_grid(const Tensor& t, const MLPAConfig& cfg) {
    const std::size_t g = cfg.grid();
    const std::size_t h = t.extent(0), w = t.extent(1);
    if (h < g || w < g)
        throw DimensionError("mlpa_block: image smaller than the block grid");
    BlockGrid bg;
    bg.g = g;
    bg.bh = h / g;
    bg.bw = w / g;
    bg.off_h = (h - g * bg.bh) / 2;  // symmetric remainder truncation
    bg.off_w = (w - g * bg.bw) / 2;
    return bg;
}

double block_mean(const Tensor& t, const BlockGrid& bg, std::size_t r, std::size_t c) {
    double acc = 0.0;
    for (std::size_t y = 0; y < bg.bh; ++y)
        for (std::size_t x = 0; x < bg.bw; ++x)
            acc += t.at(bg.off_h + r * bg.bh + y, bg.off_w + c * bg.bw + x);
    return acc / static_cast<double>(bg.bh * bg.bw);
}

}  // namespace

double mlpa_block(const Tensor& o_f, const Tensor& o_r, const MLPAConfig& cfg) {
    require_same_shape(o_f, o_r, "mlpa_block");
    require_rank(o_f, 2, "mlpa_block");
    cfg.validate();
    const BlockGrid bg = block_grid(o_f, cfg);
    double acc = 0.0;
    for (std::size_t r = 0; r < bg.g; ++r)
        for (std::size_t c = 0; c < bg.g; ++c)
            acc += scalar_norm(block_mean(o_f, bg, r, c) - block_mean(o_r, bg, r, c),
                               cfg.norm);
    return acc / static_cast<double>(cfg.n_blocks);
}

Tensor mlpa_block_grad(const Tensor& o_f, const Tensor& o_r, const MLPAConfig& cfg) {
    require_same_shape(o_f, o_r, "mlpa_block_grad");
    cfg.validate();
    const BlockGrid bg = block_grid(o_f, cfg);
    Tensor grad(o_f.shape());
    const double inv_area = 1.0 / static_cast<double>(bg.bh * bg.bw);
    for (std::size_t r = 0; r < bg.g; ++r) {
        for (std::size_t c = 0; c < bg.g; ++c) {
            const double diff = block_mean(o_f, bg, r, c) - block_mean(o_r, bg, r, c);
            const double d = (cfg.norm == NormMode::absolute
                                  ? (diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0))
                                  : 2.0 * diff) /
                             static_cast<double>(cfg.n_blocks);
            const double per_pixel = d * inv_area;
            for (std::size_t y = 0; y < bg.bh; ++y)
                for (std::size_t x = 0; x < bg.bw; ++x)
                    grad.at(bg.off_h + r * bg.bh + y, bg.off_w + c * bg.bw + x) = per_pixel;
        }
    }
    return grad;
}

double mlpa_total(const Tensor& o_f, const Tensor& o_r, const MLPAConfig& cfg) {
    return mlpa_avg(o_f, o_r, cfg.beta, cfg.norm) + mlpa_histo(o_f, o_r, cfg) +
           mlpa_block(o_f, o_r, cfg);
}

// --- CPPC ---

namespace {

void check_feature_prob_shapes(const Tensor& f, const Tensor& p, const char* what) {
    require_rank(f, 3, what);
    require_rank(p, 3, what);
    if (p.extent(2) != 2)
        throw DimensionError(std::string(what) + ": probability map must have 2 classes");
    if (f.extent(0) != p.extent(0) || f.extent(1) != p.extent(1))
        throw DimensionError(std::string(what) + ": feature/probability grid mismatch");
}

}  // namespace

Tensor extract_prototypes(const Tensor& f, const Tensor& p) {
    check_feature_prob_shapes(f, p, "extract_prototypes");
    const std::size_t h = f.extent(0), w = f.extent(1), d = f.extent(2);
    Tensor q({2, d});
    for (std::size_t c = 0; c < 2; ++c) {
        double mass = 0.0;
        for (std::size_t y = 0; y < h; ++y)
            for (std::size_t x = 0; x < w; ++x) mass += p.at(y, x, c);
        if (mass <= 0.0)
            throw DegenerateClassError("extract_prototypes: class " + std::to_string(c) +
                                       " has zero probability mass");
        for (std::size_t y = 0; y < h; ++y)
            for (std::size_t x = 0; x < w; ++x) {
                const double pc = p.at(y, x, c);
                for (std::size_t k = 0; k < d; ++k)
                    q.at(c, k) += pc * f.at(y, x, k);
            }
        for (std::size_t k = 0; k < d; ++k) q.at(c, k) /= mass;
    }
    return q;
}

Tensor extract_prototypes_or_uniform(const Tensor& f, const Tensor& p, bool* degenerate) {
    if (degenerate) *degenerate = false;
    try {
        return extract_prototypes(f, p);
    } catch (const DegenerateClassError&) {
        if (degenerate) *degenerate = true;
        Tensor uniform(p.shape());
        const double v = 1.0 / 2.0;
        for (std::size_t i = 0; i < uniform.size(); ++i) uniform[i] = v;
        return extract_prototypes(f, uniform);
    }
}

namespace {

struct SideEval {
    // One direction of the consistency term: features a against prototypes q,
    // softmaxed over classes, compared with mask m. Accumulates the raw sum
    // of |p_hat - m| and, when requested, gradients w.r.t. a and q.
    double sum = 0.0;
    Tensor d_a;  // same shape as a
    Tensor d_q;  // [2,D]
};

SideEval eval_side(const Tensor& a, const Tensor& q, const Tensor& m, bool with_grad) {
    const std::size_t h = a.extent(0), w = a.extent(1), d = a.extent(2);
    SideEval ev;
    if (with_grad) {
        ev.d_a = Tensor(a.shape());
        ev.d_q = Tensor(q.shape());
    }
    std::array<double, 2> qn{};  // prototype norms
    for (std::size_t c = 0; c < 2; ++c) {
        double n2 = 0.0;
        for (std::size_t k = 0; k < d; ++k) n2 += q.at(c, k) * q.at(c, k);
        if (n2 == 0.0)
            throw DegenerateInputError("cppc: zero-norm prototype");
        qn[c] = std::sqrt(n2);
    }
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            double an2 = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                const double v = a.at(y, x, k);
                an2 += v * v;
            }
            if (an2 == 0.0)
                throw DegenerateInputError("cppc: zero-norm feature vector");
            const double an = std::sqrt(an2);

            std::array<double, 2> s{}, dot{};
            for (std::size_t c = 0; c < 2; ++c) {
                double dp = 0.0;
                for (std::size_t k = 0; k < d; ++k) dp += a.at(y, x, k) * q.at(c, k);
                dot[c] = dp;
                s[c] = dp / (an * qn[c]);
            }
            // 2-class softmax, max-stabilized.
            const double hi = std::max(s[0], s[1]);
            const double e0 = std::exp(s[0] - hi), e1 = std::exp(s[1] - hi);
            const double z = e0 + e1;
            const std::array<double, 2> p_hat{e0 / z, e1 / z};

            std::array<double, 2> d_phat{};
            for (std::size_t c = 0; c < 2; ++c) {
                const double diff = p_hat[c] - m.at(y, x, c);
                ev.sum += std::abs(diff);
                d_phat[c] = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
            }
            if (!with_grad) continue;

            // softmax backward
            const double inner = d_phat[0] * p_hat[0] + d_phat[1] * p_hat[1];
            std::array<double, 2> d_s{};
            for (std::size_t c = 0; c < 2; ++c)
                d_s[c] = p_hat[c] * (d_phat[c] - inner);

            // cosine backward
            for (std::size_t c = 0; c < 2; ++c) {
                const double inv_aq = 1.0 / (an * qn[c]);
                const double s_c = s[c];
                for (std::size_t k = 0; k < d; ++k) {
                    const double ak = a.at(y, x, k);
                    const double qk = q.at(c, k);
                    ev.d_a.at(y, x, k) += d_s[c] * (qk * inv_aq - s_c * ak / an2);
                    ev.d_q.at(c, k) += d_s[c] * (ak * inv_aq - s_c * qk / (qn[c] * qn[c]));
                }
            }
        }
    }
    return ev;
}

// dL/dF given dL/dq for prototypes built from (F, P).
void prototype_backward(const Tensor& f, const Tensor& p, const Tensor& d_q,
                        Tensor& d_f) {
    const std::size_t h = f.extent(0), w = f.extent(1), d = f.extent(2);
    for (std::size_t c = 0; c < 2; ++c) {
        double mass = 0.0;
        for (std::size_t y = 0; y < h; ++y)
            for (std::size_t x = 0; x < w; ++x) mass += p.at(y, x, c);
        const double inv = 1.0 / mass;
        for (std::size_t y = 0; y < h; ++y)
            for (std::size_t x = 0; x < w; ++x) {
                const double wgt = p.at(y, x, c) * inv;
                if (wgt == 0.0) continue;
                for (std::size_t k = 0; k < d; ++k)
                    d_f.at(y, x, k) += wgt * d_q.at(c, k);
            }
    }
}

void check_cppc_inputs(const Tensor& f_f, const Tensor& f_r, const Tensor& p_f,
                       const Tensor& p_r, const Tensor& m_f, const Tensor& m_r) {
    check_feature_prob_shapes(f_f, p_f, "cppc");
    check_feature_prob_shapes(f_r, p_r, "cppc");
    require_same_shape(f_f, f_r, "cppc features");
    require_same_shape(p_f, m_f, "cppc mask F");
    require_same_shape(p_r, m_r, "cppc mask R");
}

}  // namespace

double cppc_loss(const Tensor& f_f, const Tensor& f_r, const Tensor& p_f,
                 const Tensor& p_r, const Tensor& m_f, const Tensor& m_r) {
    check_cppc_inputs(f_f, f_r, p_f, p_r, m_f, m_r);
    const Tensor q_f = extract_prototypes(f_f, p_f);
    const Tensor q_r = extract_prototypes(f_r, p_r);
    const SideEval fr = eval_side(f_f, q_r, m_f, false);
    const SideEval rf = eval_side(f_r, q_f, m_r, false);
    const double denom = 2.0 * static_cast<double>(f_f.extent(0) * f_f.extent(1));
    return (fr.sum + rf.sum) / denom;
}

CppcGrads cppc_grad(const Tensor& f_f, const Tensor& f_r, const Tensor& p_f,
                    const Tensor& p_r, const Tensor& m_f, const Tensor& m_r) {
    check_cppc_inputs(f_f, f_r, p_f, p_r, m_f, m_r);
    const Tensor q_f = extract_prototypes(f_f, p_f);
    const Tensor q_r = extract_prototypes(f_r, p_r);
    const SideEval fr = eval_side(f_f, q_r, m_f, true);
    const SideEval rf = eval_side(f_r, q_f, m_r, true);

    CppcGrads grads;
    grads.d_f_f = fr.d_a;
    grads.d_f_r = rf.d_a;
    prototype_backward(f_f, p_f, rf.d_q, grads.d_f_f);
    prototype_backward(f_r, p_r, fr.d_q, grads.d_f_r);

    const double inv = 1.0 / (2.0 * static_cast<double>(f_f.extent(0) * f_f.extent(1)));
    for (std::size_t i = 0; i < grads.d_f_f.size(); ++i) grads.d_f_f[i] *= inv;
    for (std::size_t i = 0; i < grads.d_f_r.size(); ++i) grads.d_f_r[i] *= inv;
    return grads;
}

// --- contrastive / adversarial ---

namespace {

double vec_norm(const Tensor& t) {
    double n2 = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) n2 += t[i] * t[i];
    if (n2 == 0.0) throw DegenerateInputError("nce: zero-norm vector");
    return std::sqrt(n2);
}

}  // namespace

double nce_loss(const Tensor& anchor, const Tensor& positive,
                const std::vector<Tensor>& negatives, double tau) {
    if (tau <= 0.0) throw ConfigError("nce_loss: tau must be positive");
    require_same_shape(anchor, positive, "nce_loss");
    const double na = vec_norm(anchor), np = vec_norm(positive);
    double dot_ap = 0.0;
    for (std::size_t i = 0; i < anchor.size(); ++i) dot_ap += anchor[i] * positive[i];
    const double l_pos = dot_ap / (na * np * tau);

    double hi = l_pos;
    std::vector<double> l_neg(negatives.size());
    for (std::size_t j = 0; j < negatives.size(); ++j) {
        require_same_shape(anchor, negatives[j], "nce_loss");
        const double nn = vec_norm(negatives[j]);
        double dp = 0.0;
        for (std::size_t i = 0; i < anchor.size(); ++i) dp += anchor[i] * negatives[j][i];
        l_neg[j] = dp / (na * nn * tau);
        hi = std::max(hi, l_neg[j]);
    }
    double z = std::exp(l_pos - hi);
    for (double l : l_neg) z += std::exp(l - hi);
    return -(l_pos - hi) + std::log(z);
}

NceGrads nce_grad(const Tensor& anchor, const Tensor& positive,
                  const std::vector<Tensor>& negatives, double tau) {
    if (tau <= 0.0) throw ConfigError("nce_grad: tau must be positive");
    require_same_shape(anchor, positive, "nce_grad");
    const std::size_t d = anchor.size();
    const double na = vec_norm(anchor), np = vec_norm(positive);

    Tensor a_hat(anchor.shape()), p_hat(positive.shape());
    for (std::size_t i = 0; i < d; ++i) {
        a_hat[i] = anchor[i] / na;
        p_hat[i] = positive[i] / np;
    }
    std::vector<Tensor> n_hat(negatives.size());
    std::vector<double> nn(negatives.size());
    for (std::size_t j = 0; j < negatives.size(); ++j) {
        require_same_shape(anchor, negatives[j], "nce_grad");
        nn[j] = vec_norm(negatives[j]);
        n_hat[j] = Tensor(negatives[j].shape());
        for (std::size_t i = 0; i < d; ++i) n_hat[j][i] = negatives[j][i] / nn[j];
    }

    double s_pos = 0.0;
    for (std::size_t i = 0; i < d; ++i) s_pos += a_hat[i] * p_hat[i];
    std::vector<double> s_neg(negatives.size(), 0.0);
    for (std::size_t j = 0; j < negatives.size(); ++j)
        for (std::size_t i = 0; i < d; ++i) s_neg[j] += a_hat[i] * n_hat[j][i];

    // softmax over logits s/tau; dL/dl = softmax - e_pos
    double hi = s_pos / tau;
    for (std::size_t j = 0; j < negatives.size(); ++j) hi = std::max(hi, s_neg[j] / tau);
    double z = std::exp(s_pos / tau - hi);
    std::vector<double> ez(negatives.size());
    for (std::size_t j = 0; j < negatives.size(); ++j) {
        ez[j] = std::exp(s_neg[j] / tau - hi);
        z += ez[j];
    }
    const double d_l_pos = std::exp(s_pos / tau - hi) / z - 1.0;
    std::vector<double> d_l_neg(negatives.size());
    for (std::size_t j = 0; j < negatives.size(); ++j) d_l_neg[j] = ez[j] / z;

    NceGrads g;
    g.d_anchor = Tensor(anchor.shape());
    g.d_positive = Tensor(positive.shape());
    g.d_negatives.resize(negatives.size());

    // through the anchor normalization: d(a_hat . v)/da = (v - (a_hat.v) a_hat)/|a|
    for (std::size_t i = 0; i < d; ++i) {
        double acc = (d_l_pos / tau) * (p_hat[i] - s_pos * a_hat[i]) / na;
        for (std::size_t j = 0; j < negatives.size(); ++j)
            acc += (d_l_neg[j] / tau) * (n_hat[j][i] - s_neg[j] * a_hat[i]) / na;
        g.d_anchor[i] = acc;
    }
    for (std::size_t i = 0; i < d; ++i)
        g.d_positive[i] = (d_l_pos / tau) * (a_hat[i] - s_pos * p_hat[i]) / np;
    for (std::size_t j = 0; j < negatives.size(); ++j) {
        g.d_negatives[j] = Tensor(negatives[j].shape());
        for (std::size_t i = 0; i < d; ++i)
            g.d_negatives[j][i] =
                (d_l_neg[j] / tau) * (a_hat[i] - s_neg[j] * n_hat[j][i]) / nn[j];
    }
    return g;
}

double adversarial_value(const Tensor& d_real, const Tensor& d_fake) {
    if (d_real.size() == 0 || d_fake.size() == 0)
        throw DimensionError("adversarial_value: empty discriminator map");
    double lr = 0.0, lf = 0.0;
    for (std::size_t i = 0; i < d_real.size(); ++i) {
        const double v = d_real[i];
        if (!(v > 0.0 && v < 1.0))
            throw InputError("adversarial_value: d_real outside (0,1)");
        lr += std::log(v);
    }
    for (std::size_t i = 0; i < d_fake.size(); ++i) {
        const double v = d_fake[i];
        if (!(v > 0.0 && v < 1.0))
            throw InputError("adversarial_value: d_fake outside (0,1)");
        lf += std::log(1.0 - v);
    }
    return lr / static_cast<double>(d_real.size()) + lf / static_cast<double>(d_fake.size());
}

double total_loss(const LossComponents& parts, const LossWeights& w) {
    if (w.lambda_m < 0.0 || w.lambda_c < 0.0 || w.lambda_s < 0.0 || w.lambda_g < 0.0)
        throw ConfigError("total_loss: weights must be non-negative");
    for (double v : {parts.adv, parts.nce, parts.mlpa, parts.cppc, parts.ssim, parts.gp})
        if (!std::isfinite(v)) throw InputError("total_loss: non-finite component");
    return parts.adv + parts.nce + w.lambda_m * parts.mlpa + w.lambda_c * parts.cppc +
           w.lambda_s * parts.ssim + w.lambda_g * parts.gp;
}

}  // namespace stainlab::losses
