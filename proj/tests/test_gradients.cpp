#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stainlab/grad_check.hpp"
#include "stainlab/gradcheck_suite.hpp"
#include "stainlab/losses.hpp"
#include "stainlab/rng.hpp"

using namespace stainlab;

// Quick per-loss audits (3 trials); the acceptance suite runs the full
// 20-trial budget.
TEST_CASE("gradient suite passes at the 1e-4 tolerance") {
    for (const auto& name : gradcheck::known_losses()) {
        const auto result = gradcheck::run(name, 3, 77);
        INFO(name, " max rel error ", result.max_rel_error);
        CHECK(result.max_rel_error < gradcheck::kTolerance);
        CHECK(result.passed());
    }
}

TEST_CASE("gradcheck rejects unknown losses") {
    CHECK_THROWS_AS(gradcheck::run("bogus", 1, 0), ConfigError);
}

TEST_CASE("finite differences agree with mlpa_avg_grad outside the dead zone") {
    Rng rng(78);
    const Tensor o_r = rng.uniform_tensor({8, 8}, 0.5, 1.0);
    Tensor o_f(o_r.shape());
    for (std::size_t i = 0; i < o_f.size(); ++i) o_f[i] = o_r[i] + 0.5;
    const Tensor grad = losses::mlpa_avg_grad(o_f, o_r, 0.2);
    const double err = finite_diff_check(
        [&](const Tensor& t) { return losses::mlpa_avg(t, o_r, 0.2); }, o_f, grad);
    CHECK(err < 1e-6);
}

TEST_CASE("squared-norm ablation modes also pass gradient checks") {
    Rng rng(79);
    losses::MLPAConfig cfg;
    cfg.norm = losses::NormMode::squared;
    const Tensor o_f = rng.uniform_tensor({16, 16}, 0.1, 0.8);
    Tensor o_r = rng.uniform_tensor({16, 16}, 0.1, 0.8);
    for (std::size_t i = 0; i < o_r.size(); ++i) o_r[i] += 0.3;
    const Tensor grad = losses::mlpa_block_grad(o_f, o_r, cfg);
    const double err = finite_diff_check(
        [&](const Tensor& t) { return losses::mlpa_block(t, o_r, cfg); }, o_f, grad);
    CHECK(err < 1e-6);

    losses::MLPAConfig scfg;
    scfg.norm = losses::NormMode::squared;
    scfg.histo = losses::HistoMode::soft;
    const Tensor a = rng.uniform_tensor({12, 12}, 0.2, 2.0);
    const Tensor b = rng.uniform_tensor({12, 12}, 0.2, 2.0);
    const Tensor hgrad = losses::mlpa_histo_grad(a, b, scfg);
    const double herr = finite_diff_check(
        [&](const Tensor& t) { return losses::mlpa_histo(t, b, scfg); }, a, hgrad, 1e-6);
    CHECK(herr < 1e-3);  // squared soft bins still have triangular-kernel kinks
}

TEST_CASE("hard-histogram gradients are refused") {
    losses::MLPAConfig cfg;  // hard mode
    CHECK_THROWS_AS(losses::mlpa_histo_grad(Tensor({4, 4}), Tensor({4, 4}), cfg),
                    ConfigError);
}
