#include "stainlab/gradcheck_suite.hpp"

#include <algorithm>
#include <cmath>

#include "stainlab/generator.hpp"
#include "stainlab/grad_check.hpp"
#include "stainlab/losses.hpp"
#include "stainlab/rng.hpp"
#include "stainlab/stain.hpp"

namespace stainlab::gradcheck {

namespace {

void fold(SuiteResult& suite, const std::string& target, double err) {
    for (auto& t : suite.targets) {
        if (t.target == target) {
            t.max_rel_error = std::max(t.max_rel_error, err);
            suite.max_rel_error = std::max(suite.max_rel_error, err);
            return;
        }
    }
    suite.targets.push_back({target, err});
    suite.max_rel_error = std::max(suite.max_rel_error, err);
}

// im [H,W,2] probabilities that sum to 1 per pixel.
Tensor random_probs(Rng& rng, std::size_t h, std::size_t w) {
    Tensor p({h, w, 2});
    for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x) {
            const double a = rng.uniform(0.05, 0.95);
            p.at(y, x, 0) = a;
            p.at(y, x, 1) = 1.0 - a;
        }
    return p;
}

Tensor random_onehot_mask(Rng& rng, std::size_t h, std::size_t w) {
    Tensor m({h, w, 2});
    for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x) {
            const bool protein = rng.uniform() < 0.5;
            m.at(y, x, 0) = protein ? 1.0 : 0.0;
            m.at(y, x, 1) = protein ? 0.0 : 1.0;
        }
    return m;
}

void check_pgsn(SuiteResult& suite, std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t h = 6, w = 5, c = 4;
    const Tensor x = rng.normal_tensor({h, w, c}, 0.0, 3.0);
    const Tensor gamma = rng.uniform_tensor({c}, 0.5, 1.5);
    const Tensor beta = rng.uniform_tensor({c}, -0.5, 0.5);
    const double rho = rng.uniform(0.1, 0.9);
    const Tensor probe = rng.normal_tensor({h, w, c});  // linear readout weights

    auto scalar_out = [&](const Tensor& xx, const Tensor& g, const Tensor& b,
                          double r) {
        const Tensor out = gen::pgsn_apply(xx, g, b, r);
        double acc = 0.0;
        for (std::size_t i = 0; i < out.size(); ++i) acc += probe[i] * out[i];
        return acc;
    };

    gen::PgsnCache cache;
    gen::pgsn_apply(x, gamma, beta, rho, kNormEps, &cache);
    const gen::PgsnGrads grads = gen::pgsn_backward(probe, cache);

    fold(suite, "pgsn.x",
         finite_diff_check([&](const Tensor& t) { return scalar_out(t, gamma, beta, rho); },
                           x, grads.d_x));
    fold(suite, "pgsn.gamma",
         finite_diff_check([&](const Tensor& t) { return scalar_out(x, t, beta, rho); },
                           gamma, grads.d_gamma));
    fold(suite, "pgsn.beta",
         finite_diff_check([&](const Tensor& t) { return scalar_out(x, gamma, t, rho); },
                           beta, grads.d_beta));
    fold(suite, "pgsn.rho",
         finite_diff_check_scalar(
             [&](double r) { return scalar_out(x, gamma, beta, r); }, rho, grads.d_rho));
}

void check_cppc(SuiteResult& suite, std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t h = 4, w = 4, d = 6;
    const Tensor f_f = rng.normal_tensor({h, w, d});
    const Tensor f_r = rng.normal_tensor({h, w, d});
    const Tensor p_f = random_probs(rng, h, w);
    const Tensor p_r = random_probs(rng, h, w);
    const Tensor m_f = random_onehot_mask(rng, h, w);
    const Tensor m_r = random_onehot_mask(rng, h, w);

    const losses::CppcGrads grads = losses::cppc_grad(f_f, f_r, p_f, p_r, m_f, m_r);
    fold(suite, "cppc.f_f",
         finite_diff_check(
             [&](const Tensor& t) {
                 return losses::cppc_loss(t, f_r, p_f, p_r, m_f, m_r);
             },
             f_f, grads.d_f_f));
    fold(suite, "cppc.f_r",
         finite_diff_check(
             [&](const Tensor& t) {
                 return losses::cppc_loss(f_f, t, p_f, p_r, m_f, m_r);
             },
             f_r, grads.d_f_r));
}

void check_mlpa_histo(SuiteResult& suite, std::uint64_t seed) {
    Rng rng(seed);
    losses::MLPAConfig cfg;
    cfg.histo = losses::HistoMode::soft;
    const double width = (cfg.hist_hi - cfg.hist_lo) / static_cast<double>(cfg.n_hist_bins);

    // Keep samples clear of the triangular-kernel kinks so the finite
    // difference stays on one linear piece.
    auto sample_away_from_kinks = [&](double lo, double hi) {
        double v = rng.uniform(lo * cfg.hist_hi, hi * cfg.hist_hi);
        const double t = v / width - 0.5;
        const double frac = t - std::floor(t);
        constexpr double tol = 5e-3;
        if (frac < tol || frac > 1.0 - tol) v += 2.0 * tol * width;
        return v;
    };
    Tensor o_f({12, 12}), o_r({12, 12});
    for (std::size_t i = 0; i < o_f.size(); ++i) o_f[i] = sample_away_from_kinks(0.05, 0.60);
    for (std::size_t i = 0; i < o_r.size(); ++i) o_r[i] = sample_away_from_kinks(0.30, 0.90);

    const Tensor grad = losses::mlpa_histo_grad(o_f, o_r, cfg);
    fold(suite, "mlpa-histo.o_f",
         finite_diff_check(
             [&](const Tensor& t) { return losses::mlpa_histo(t, o_r, cfg); }, o_f, grad));
}

void check_mlpa_block(SuiteResult& suite, std::uint64_t seed) {
    Rng rng(seed);
    losses::MLPAConfig cfg;
    const Tensor o_f = rng.uniform_tensor({16, 16}, 0.1, 0.8);
    Tensor o_r = rng.uniform_tensor({16, 16}, 0.1, 0.8);
    // Guarantee every block-mean gap clears the finite-difference step.
    for (std::size_t i = 0; i < o_r.size(); ++i) o_r[i] += 0.4;
    const Tensor grad = losses::mlpa_block_grad(o_f, o_r, cfg);
    fold(suite, "mlpa-block.o_f",
         finite_diff_check(
             [&](const Tensor& t) { return losses::mlpa_block(t, o_r, cfg); }, o_f, grad));
}

void check_ssim(SuiteResult& suite, std::uint64_t seed) {
    Rng rng(seed);
    const Tensor a = rng.uniform_tensor({14, 14, 1}, 0.2, 0.8);
    const Tensor b = rng.uniform_tensor({14, 14, 1}, 0.2, 0.8);
    const Tensor grad = losses::ssim_loss_grad(a, b, 1.0);
    fold(suite, "ssim.k_f",
         finite_diff_check([&](const Tensor& t) { return losses::ssim_loss(t, b, 1.0); },
                           a, grad));
}

void check_gp(SuiteResult& suite, std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t levels = 3;
    const std::vector<double> lambdas{1.0, 2.0, 4.0};
    const Tensor k_r = rng.uniform_tensor({16, 16, 2}, 0.3, 0.7);
    Tensor k_f(k_r.shape());
    // A one-sided offset keeps every pyramid level's difference bounded away
    // from the |.| kink.
    for (std::size_t i = 0; i < k_f.size(); ++i)
        k_f[i] = k_r[i] - rng.uniform(0.1, 0.3);
    const Tensor grad = losses::gp_loss_grad(k_f, k_r, levels, lambdas);
    fold(suite, "gp.k_f",
         finite_diff_check(
             [&](const Tensor& t) { return losses::gp_loss(t, k_r, levels, lambdas); },
             k_f, grad));
}

void check_nce(SuiteResult& suite, std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t d = 8;
    const Tensor anchor = rng.normal_tensor({d});
    const Tensor positive = rng.normal_tensor({d});
    std::vector<Tensor> negatives;
    for (int i = 0; i < 5; ++i) negatives.push_back(rng.normal_tensor({d}));

    const losses::NceGrads grads = losses::nce_grad(anchor, positive, negatives);
    fold(suite, "nce.anchor",
         finite_diff_check(
             [&](const Tensor& t) { return losses::nce_loss(t, positive, negatives); },
             anchor, grads.d_anchor));
    fold(suite, "nce.positive",
         finite_diff_check(
             [&](const Tensor& t) { return losses::nce_loss(anchor, t, negatives); },
             positive, grads.d_positive));
    fold(suite, "nce.negative0",
         finite_diff_check(
             [&](const Tensor& t) {
                 std::vector<Tensor> negs = negatives;
                 negs[0] = t;
                 return losses::nce_loss(anchor, positive, negs);
             },
             negatives[0], grads.d_negatives[0]));
}

}  // namespace

std::vector<std::string> known_losses() {
    return {"pgsn", "cppc", "mlpa-histo", "mlpa-block", "ssim", "gp", "nce"};
}

SuiteResult run(const std::string& loss, std::size_t trials, std::uint64_t seed) {
    SuiteResult suite;
    suite.loss = loss;
    for (std::size_t t = 0; t < trials; ++t) {
        const std::uint64_t s = seed + 0x9e3779b97f4a7c15ull * (t + 1);
        if (loss == "pgsn")
            check_pgsn(suite, s);
        else if (loss == "cppc")
            check_cppc(suite, s);
        else if (loss == "mlpa-histo")
            check_mlpa_histo(suite, s);
        else if (loss == "mlpa-block")
            check_mlpa_block(suite, s);
        else if (loss == "ssim")
            check_ssim(suite, s);
        else if (loss == "gp")
            check_gp(suite, s);
        else if (loss == "nce")
            check_nce(suite, s);
        else
            throw ConfigError("gradcheck: unknown loss '" + loss + "'");
    }
    return suite;
}

std::vector<SuiteResult> run_all(std::size_t trials, std::uint64_t seed) {
    std::vector<SuiteResult> all;
    for (const auto& name : known_losses()) all.push_back(run(name, trials, seed));
    return all;
}

}  // namespace stainlab::gradcheck
