#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "smgan/adam.hpp"
#include "smgan/losses.hpp"
#include "smgan/matrix.hpp"
#include "smgan/mlp.hpp"
#include "smgan/rng.hpp"
#include "test_support.hpp"

using namespace smgan;
using namespace test_support;

TEST_CASE("matmul agrees with a naive triple loop") {
  Rng rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t m = 1 + rng.uniform_index(6);
    const std::size_t k = 1 + rng.uniform_index(6);
    const std::size_t n = 1 + rng.uniform_index(6);
    const Matrix a = random_matrix(m, k, rng);
    const Matrix b = random_matrix(k, n, rng);
    const Matrix c = matmul(a, b);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double want = 0.0;
        for (std::size_t p = 0; p < k; ++p) want += a(i, p) * b(p, j);
        CHECK(c(i, j) == doctest::Approx(want).epsilon(1e-12));
      }
    const Matrix at = transpose(a);
    CHECK(bits_equal(matmul_tn(at, b), c));
    const Matrix bt = transpose(b);
    CHECK(bits_equal(matmul_nt(a, bt), c));
  }
}

TEST_CASE("identity dense layer passes the batch through") {
  MlpModel m = make_mlp({LayerSpec::dense(3, 3)}, 1);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) m.dense[0].w(i, j) = i == j ? 1.0 : 0.0;
  Rng rng(2);
  const Matrix x = random_matrix(4, 3, rng);
  CHECK(bits_equal(predict(m, x), x));
}

TEST_CASE("leaky relu forward uses the configured slope") {
  MlpModel m = make_mlp({LayerSpec::leaky_relu(2, 0.2)}, 1);
  Matrix x(1, 2);
  x(0, 0) = -1.0;
  x(0, 1) = 2.0;
  const Matrix y = predict(m, x);
  CHECK(y(0, 0) == doctest::Approx(-0.2));
  CHECK(y(0, 1) == doctest::Approx(2.0));
}

TEST_CASE("training-mode batchnorm normalizes the batch column") {
  MlpModel m = make_mlp({LayerSpec::batchnorm(1)}, 1);
  Matrix x(3, 1);
  x(0, 0) = 1.0;
  x(1, 0) = 2.0;
  x(2, 0) = 3.0;
  ForwardCache cache;
  const Matrix y = forward_pass(m, x, true, cache);
  double mean = 0.0, var = 0.0;
  for (std::size_t i = 0; i < 3; ++i) mean += y(i, 0);
  mean /= 3.0;
  for (std::size_t i = 0; i < 3; ++i) var += (y(i, 0) - mean) * (y(i, 0) - mean);
  var /= 3.0;
  CHECK(std::abs(mean) < 1e-6);
  CHECK(std::abs(var - 1.0) < 1e-3);  // eps in the denominator shrinks it slightly
}

TEST_CASE("forward rejects a batch of the wrong width") {
  MlpModel m = make_mlp({LayerSpec::dense(3, 2)}, 1);
  Rng rng(3);
  const Matrix bad = random_matrix(2, 4, rng);
  CHECK_THROWS_AS(predict(m, bad), std::invalid_argument);
}

TEST_CASE("bce with logits hits the textbook values") {
  Matrix z(1, 1), t(1, 1);
  z(0, 0) = 0.0;
  t(0, 0) = 1.0;
  LossGrad lg = bce_with_logits(z, t);
  CHECK(std::abs(lg.loss - std::log(2.0)) < 1e-12);
  CHECK(lg.grad(0, 0) == doctest::Approx(-0.5));

  z(0, 0) = 100.0;
  lg = bce_with_logits(z, t);
  CHECK(lg.loss < 1e-9);
  CHECK(std::isfinite(lg.loss));
}

TEST_CASE("bce with logits matches the scalar softplus oracle") {
  Matrix z(2, 1), t(2, 1);
  z(0, 0) = 2.0;
  z(1, 0) = -1.0;
  t(0, 0) = 1.0;
  t(1, 0) = 0.0;
  const LossGrad lg = bce_with_logits(z, t);
  const double want = (softplus_oracle(-2.0) + softplus_oracle(-1.0)) / 2.0;
  CHECK(lg.loss == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("bce stays finite and exact at |z| = 1e4") {
  Matrix z(1, 1), t(1, 1);
  for (double sign : {1.0, -1.0}) {
    for (double target : {0.0, 1.0}) {
      z(0, 0) = sign * 1e4;
      t(0, 0) = target;
      const LossGrad lg = bce_with_logits(z, t);
      CHECK(std::isfinite(lg.loss));
      CHECK(std::isfinite(lg.grad(0, 0)));
    }
  }
}

TEST_CASE("bce equals -log sigmoid compositions over |z| <= 30") {
  Matrix z(1, 1), t(1, 1);
  for (double x = -30.0; x <= 30.0; x += 0.37) {
    z(0, 0) = x;
    t(0, 0) = 1.0;
    CHECK(std::abs(bce_with_logits(z, t).loss - (-std::log(sigmoid(x)))) < 1e-9);
    t(0, 0) = 0.0;
    CHECK(std::abs(bce_with_logits(z, t).loss - (-std::log(sigmoid(-x)))) < 1e-9);
  }
}

TEST_CASE("bce validates shapes and targets") {
  Matrix z(1, 2), t(2, 1);
  CHECK_THROWS_AS(bce_with_logits(z, t), std::invalid_argument);
  Matrix t2(1, 2);
  t2(0, 0) = 0.5;
  CHECK_THROWS_AS(bce_with_logits(z, t2), std::invalid_argument);
}

TEST_CASE("mae loss basics") {
  Matrix p(1, 1), t(1, 1);
  p(0, 0) = 0.2;
  t(0, 0) = 1.0;
  LossGrad lg = mae_loss(p, t);
  CHECK(lg.loss == doctest::Approx(0.8));
  CHECK(lg.grad(0, 0) == doctest::Approx(-1.0));

  lg = mae_loss(t, t);
  CHECK(lg.loss == 0.0);
  CHECK(lg.grad(0, 0) == 0.0);
}

TEST_CASE("mae matches an elementwise scalar recomputation") {
  Rng rng(11);
  const Matrix p = random_matrix(4, 1, rng);
  const Matrix t = random_matrix(4, 1, rng);
  const LossGrad lg = mae_loss(p, t);
  double want = 0.0;
  for (std::size_t i = 0; i < 4; ++i) want += std::abs(p(i, 0) - t(i, 0));
  want /= 4.0;
  CHECK(lg.loss == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("single dense layer gradient matches the hand formula under mae") {
  MlpModel m = make_mlp({LayerSpec::dense(2, 1)}, 5);
  Matrix x(1, 2), t(1, 1);
  x(0, 0) = 0.3;
  x(0, 1) = -0.7;
  t(0, 0) = 10.0;  // prediction is far below the target, so d|.|/dpred = -1
  ForwardCache cache;
  const Matrix out = forward_pass(m, x, false, cache);
  const LossGrad lg = mae_loss(out, t);
  const BackwardResult bw = backward(m, cache, lg.grad);
  CHECK(bw.grads.dw[0](0, 0) == doctest::Approx(-x(0, 0)));
  CHECK(bw.grads.dw[0](1, 0) == doctest::Approx(-x(0, 1)));
  CHECK(bw.grads.db[0][0] == doctest::Approx(-1.0));
}

namespace {

// Random inputs can land on relu/leaky kinks where finite differences are
// meaningless; retry seeds until every pre-activation clears them.
bool preactivations_clear(const MlpModel& m, const ForwardCache& cache, double margin) {
  for (std::size_t li = 0; li < m.layers.size(); ++li) {
    const LayerKind k = m.layers[li].kind;
    if (k != LayerKind::Relu && k != LayerKind::LeakyRelu) continue;
    for (double v : cache.inputs[li].data)
      if (std::abs(v) < margin) return false;
  }
  return true;
}

void fd_check_layers(const std::vector<LayerSpec>& layers, double rtol, bool training) {
  for (std::uint64_t seed = 1;; ++seed) {
    REQUIRE(seed < 50);
    MlpModel m = make_mlp(layers, seed);
    Rng rng(seed + 100);
    const Matrix x = random_matrix(5, layers.front().in, rng);
    Matrix t = random_matrix(5, m.output_width(), rng, 2.0, 3.0);  // keep pred != target

    ForwardCache cache;
    forward_pass(m, x, training, cache);
    if (!preactivations_clear(m, cache, 1e-3)) continue;

    const LossGrad lg = mae_loss(cache.output, t);
    const BackwardResult bw = backward(m, cache, lg.grad);
    auto loss = [&]() {
      ForwardCache c;
      return mae_loss(forward_pass(m, x, training, c), t).loss;
    };
    const FdReport rep = check_gradients_fd(m, bw.grads, loss, 1e-5, rtol);
    CHECK_MESSAGE(rep.violations == 0, "worst exact=", rep.worst_exact,
                  " numeric=", rep.worst_numeric, " of ", rep.checked);
    return;
  }
}

}  // namespace

TEST_CASE("finite differences confirm gradients for every layer kind") {
  fd_check_layers({LayerSpec::dense(3, 4), LayerSpec::relu(4), LayerSpec::dense(4, 2)}, 1e-4, false);
  fd_check_layers({LayerSpec::dense(3, 4), LayerSpec::leaky_relu(4), LayerSpec::dense(4, 2)}, 1e-4,
                  false);
  fd_check_layers({LayerSpec::dense(3, 4), LayerSpec::sigmoid(4), LayerSpec::dense(4, 2)}, 1e-4,
                  false);
  // batchnorm in both batch-statistics and running-statistics mode
  fd_check_layers({LayerSpec::dense(3, 4), LayerSpec::batchnorm(4), LayerSpec::relu(4),
                   LayerSpec::dense(4, 2)},
                  1e-3, true);
  fd_check_layers({LayerSpec::dense(3, 4), LayerSpec::batchnorm(4), LayerSpec::relu(4),
                   LayerSpec::dense(4, 2)},
                  1e-3, false);
  // a deeper mixed stack
  fd_check_layers({LayerSpec::dense(4, 6), LayerSpec::batchnorm(6), LayerSpec::relu(6),
                   LayerSpec::dense(6, 5), LayerSpec::leaky_relu(5), LayerSpec::dense(5, 1),
                   LayerSpec::sigmoid(1)},
                  1e-3, true);
}

TEST_CASE("zero grad_output yields all-zero gradients") {
  MlpModel m = make_mlp({LayerSpec::dense(3, 4), LayerSpec::relu(4), LayerSpec::dense(4, 2)}, 9);
  Rng rng(9);
  const Matrix x = random_matrix(4, 3, rng);
  ForwardCache cache;
  forward_pass(m, x, false, cache);
  const BackwardResult bw = backward(m, cache, Matrix(4, 2, 0.0));
  for (const Matrix& dw : bw.grads.dw)
    for (double v : dw.data) CHECK(v == 0.0);
  for (const auto& db : bw.grads.db)
    for (double v : db) CHECK(v == 0.0);
  for (double v : bw.input_grad.data) CHECK(v == 0.0);
}

TEST_CASE("backward rejects a stale cache") {
  MlpModel m = make_mlp({LayerSpec::dense(3, 2)}, 1);
  MlpModel other = make_mlp({LayerSpec::dense(3, 4), LayerSpec::relu(4)}, 1);
  Rng rng(4);
  const Matrix x = random_matrix(2, 3, rng);
  ForwardCache cache;
  forward_pass(m, x, false, cache);
  CHECK_THROWS_AS(backward(other, cache, Matrix(2, 4, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(backward(m, cache, Matrix(3, 2, 0.0)), std::invalid_argument);
}

TEST_CASE("adam first step moves parameters by about the learning rate") {
  MlpModel m = make_mlp({LayerSpec::dense(2, 2)}, 3);
  const std::vector<double> before = m.dense[0].w.data;
  AdamState st = make_adam(m, AdamConfig{0.001, 0.9, 0.999, 1e-8});
  ModelGrads g = zero_grads(m);
  for (double& v : g.dw[0].data) v = 1.0;
  for (double& v : g.db[0]) v = 1.0;
  adam_step(m, g, st);
  CHECK(st.t == 1);
  for (std::size_t i = 0; i < before.size(); ++i)
    CHECK(m.dense[0].w.data[i] == doctest::Approx(before[i] - 0.001).epsilon(1e-6));
}

TEST_CASE("adam with zero gradient and zero state is a no-op") {
  MlpModel m = make_mlp({LayerSpec::dense(2, 2)}, 3);
  const std::vector<double> before = m.dense[0].w.data;
  AdamState st = make_adam(m, AdamConfig{});
  adam_step(m, zero_grads(m), st);
  CHECK(m.dense[0].w.data == before);
}

TEST_CASE("three adam steps match the scalar reference") {
  std::vector<double> params = {0.4, -0.2, 1.5};
  std::vector<double> oracle_params = params;
  const std::vector<double> grads = {0.5, 0.5, 0.5};

  std::vector<double> m(3, 0.0), v(3, 0.0);
  const AdamConfig cfg{1e-5, 0.9, 0.999, 1e-8};
  ScalarAdam oracle(3, cfg.learning_rate, cfg.beta1, cfg.beta2, cfg.eps);
  for (std::uint64_t t = 1; t <= 3; ++t) {
    adam_update(params, grads, m, v, t, cfg);
    oracle.step(oracle_params, grads);
  }
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(params[i] == doctest::Approx(oracle_params[i]).epsilon(1e-15));
}

TEST_CASE("adam with beta1=beta2=0 reduces to sign-scaled sgd") {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> params = {rng.uniform01() * 4 - 2};
    const double p0 = params[0];
    std::vector<double> grads = {rng.uniform01() * 4 - 2};
    std::vector<double> m(1, 0.0), v(1, 0.0);
    const AdamConfig cfg{0.01, 0.0, 0.0, 1e-8};
    adam_update(params, grads, m, v, 1, cfg);
    const double want = p0 - cfg.learning_rate * grads[0] / (std::abs(grads[0]) + cfg.eps);
    CHECK(params[0] == doctest::Approx(want).epsilon(1e-14));
  }
}

TEST_CASE("checkpoint json round trip is bit exact") {
  MlpModel m = make_mlp({LayerSpec::dense(3, 4), LayerSpec::batchnorm(4), LayerSpec::relu(4),
                         LayerSpec::dense(4, 2), LayerSpec::leaky_relu(2, 0.3)},
                        17);
  Rng rng(23);
  forward(m, random_matrix(6, 3, rng), true);  // perturb running stats
  const MlpModel back = model_from_json(model_to_json(m));
  CHECK(params_bits_equal(m, back));
  REQUIRE(back.norms.size() == 1);
  CHECK(back.norms[0].running_mean == m.norms[0].running_mean);
  CHECK(back.norms[0].running_var == m.norms[0].running_var);
  CHECK(back.layers.size() == m.layers.size());
  CHECK(back.layers[4].alpha == m.layers[4].alpha);
}

TEST_CASE("inference is deterministic and row-order independent") {
  MlpModel m = make_mlp({LayerSpec::dense(3, 8), LayerSpec::batchnorm(8), LayerSpec::relu(8),
                         LayerSpec::dense(8, 2)},
                        31);
  Rng rng(31);
  forward(m, random_matrix(16, 3, rng), true);
  const Matrix x = random_matrix(6, 3, rng);
  const Matrix y1 = predict(m, x);
  const Matrix y2 = predict(m, x);
  CHECK(bits_equal(y1, y2));

  std::vector<std::size_t> perm = {3, 0, 5, 1, 4, 2};
  const Matrix shuffled = take_rows(x, perm);
  const Matrix ys = predict(m, shuffled);
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = 0; j < 2; ++j) CHECK(ys(i, j) == y1(perm[i], j));
}

TEST_CASE("forward output stays finite on random models") {
  Rng rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    MlpModel m = make_mlp({LayerSpec::dense(5, 9), LayerSpec::batchnorm(9), LayerSpec::relu(9),
                           LayerSpec::dense(9, 3), LayerSpec::sigmoid(3)},
                          rng.next_u64());
    const Matrix x = random_matrix(7, 5, rng, -3.0, 3.0);
    CHECK(all_finite(predict(m, x)));
  }
}
