#include "doctest.h"
#include "oracles.hpp"

#include <cmath>

#include "macgan/relation.hpp"

using namespace macgan;

TEST_CASE("supervised_relation examples") {
  CHECK(supervised_relation(std::vector<int>{0, 0, 1}).data ==
        Matrix::from_rows({{1, 1, 0}, {1, 1, 0}, {0, 0, 1}}));
  CHECK(supervised_relation(std::vector<int>{2, 2, 2}).data == Matrix(3, 3, 1.0));
  CHECK(supervised_relation(std::vector<int>{0, 1, 2, 3}).data == Matrix::identity(4));
  CHECK_THROWS_AS(supervised_relation(std::vector<int>{}), InputError);
  CHECK(identity_relation(3).data == Matrix::identity(3));
  CHECK(identity_relation(3).kind == RelationKind::SelfSupervisedIdentity);
}

TEST_CASE("supervised_relation is an equivalence relation") {
  Rng rng(1);
  for (int t = 0; t < 10; ++t) {
    std::vector<int> lab(2 + rng.below(12));
    for (int& l : lab) l = static_cast<int>(rng.below(4));
    const Matrix c = supervised_relation(lab).data;
    const Matrix c2 = oracle::naive_matmul(c, c);
    for (std::size_t i = 0; i < lab.size(); ++i) {
      CHECK(c(i, i) == 1.0);
      for (std::size_t j = 0; j < lab.size(); ++j) {
        CHECK(c(i, j) == c(j, i));
        CHECK((c2(i, j) > 0) == (c(i, j) > 0));
      }
    }
  }
}

TEST_CASE("prior_relation examples") {
  const Matrix same = Matrix::from_rows({{0.3, 0.3}, {-1, -1}});
  const PriorRelation p = prior_relation(FeatureBatch(same), 2.0);
  for (double v : p.data.values()) CHECK(v == doctest::Approx(0.5));

  // Squared distance equal to tau.
  const Matrix pair = Matrix::from_rows({{0.0, std::sqrt(1.7)}});
  const PriorRelation q = prior_relation(FeatureBatch(pair), 1.7);
  const double e = std::exp(-1.0);
  CHECK(q.data(0, 0) == doctest::Approx(1 / (1 + e)).epsilon(1e-12));
  CHECK(q.data(0, 1) == doctest::Approx(e / (1 + e)).epsilon(1e-12));
  CHECK(q.data(0, 0) == doctest::Approx(0.7311).epsilon(1e-4));

  const Matrix line = Matrix::from_rows({{0.0, 1.0, 10.0}});
  const PriorRelation r = prior_relation(FeatureBatch(line), 1.0);
  CHECK(r.data(1, 0) > 1e6 * r.data(1, 2));

  CHECK_THROWS_AS(prior_relation(FeatureBatch(line), 0.0), InputError);
  CHECK_THROWS_AS(prior_relation(FeatureBatch(Matrix(2, 1)), 1.0), InputError);
  Matrix bad = line;
  bad(0, 0) = std::nan("");
  CHECK_THROWS_AS(prior_relation(FeatureBatch(bad), 1.0), NumericalError);
}

TEST_CASE("prior_relation rows sum to one and ignore rotations") {
  Rng rng(2);
  for (double tau : {0.1, 1.0, 10.0}) {
    for (int t = 0; t < 10; ++t) {
      const std::size_t d = 1 + rng.below(8), n = 2 + rng.below(20);
      const Matrix e = random_normal(d, n, rng);
      const PriorRelation p = prior_relation(FeatureBatch(e), tau);
      for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (double v : p.data.row(i)) {
          CHECK(v > 0.0);
          CHECK(v <= 1.0);
          s += v;
        }
        CHECK(std::abs(s - 1.0) <= 1e-12);
      }
      const Matrix rot = oracle::orthonormal_columns(d, d, rng);
      const PriorRelation pr = prior_relation(FeatureBatch(oracle::naive_matmul(rot, e)), tau);
      CHECK(max_abs(pr.data - p.data) <= 1e-10);
    }
  }
}

TEST_CASE("positive kernel sign grows with distance and overflows loudly") {
  const Matrix line = Matrix::from_rows({{0.0, 1.0, 2.0}});
  const PriorRelation p = prior_relation(FeatureBatch(line), 1.0, KernelSign::Positive);
  CHECK(p.data(0, 2) > p.data(0, 1));
  const Matrix far = Matrix::from_rows({{0.0, 100.0}});
  CHECK_THROWS_AS(prior_relation(FeatureBatch(far), 1.0, KernelSign::Positive), NumericalError);
}

TEST_CASE("prior encoders are frozen and deterministic") {
  Rng rng(3);
  const Matrix x = random_normal(3, 5, rng);
  CHECK(PriorEncoder::identity().encode(x) == x);
  const PriorEncoder a = PriorEncoder::random_projection(3, 4, 99);
  const PriorEncoder b = PriorEncoder::random_projection(3, 4, 99);
  CHECK(a.encode(x) == b.encode(x));
  CHECK(a.encode(x).rows() == 4);
  CHECK(a.seed() == 99);
  const std::size_t widths[] = {3, 2};
  MlpNetwork net = MlpNetwork::build(widths, Activation::Tanh, Activation::Tanh, rng);
  const PriorEncoder m = PriorEncoder::frozen_mlp(net);
  CHECK(m.encode(x) == net.predict(x));
}

TEST_CASE("relation_forward examples") {
  Rng rng(4);
  MlpNetwork f = build_relation_net(2, 4, rng);
  CHECK(f.input_width() == 4);
  CHECK(f.layer_count() == 3);
  const RelationMatrix one = relation_forward(f, FeatureBatch(random_normal(2, 1, rng)));
  CHECK(one.data == Matrix::identity(1));

  for (Layer& l : f.mutable_layers()) {
    l.weight.fill(0.0);
    l.bias.fill(0.0);
  }
  const RelationMatrix half = relation_forward(f, FeatureBatch(random_normal(2, 4, rng)));
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) CHECK(half.data(i, j) == (i == j ? 1.0 : 0.5));
  }
  CHECK_THROWS_AS(relation_forward(f, FeatureBatch(random_normal(3, 2, rng))), DimensionError);
}

TEST_CASE("relation_forward is symmetric with unit diagonal and swap invariant") {
  Rng rng(5);
  MlpNetwork f = build_relation_net(3, 8, rng);
  Matrix z = random_normal(3, 6, rng);
  const RelationMatrix c = relation_forward(f, FeatureBatch(z));
  CHECK(c.kind == RelationKind::Learned);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(c.data(i, i) == 1.0);
    for (std::size_t j = 0; j < 6; ++j) {
      CHECK(c.data(i, j) == c.data(j, i));
      CHECK(c.data(i, j) >= 0.0);
      CHECK(c.data(i, j) <= 1.0);
    }
  }
  // Swapping samples 1 and 4 permutes the matrix accordingly.
  Matrix zs = z;
  for (std::size_t r = 0; r < 3; ++r) std::swap(zs(r, 1), zs(r, 4));
  const RelationMatrix cs = relation_forward(f, FeatureBatch(zs));
  CHECK(cs.data(1, 0) == doctest::Approx(c.data(4, 0)).epsilon(1e-15));
  CHECK(cs.data(1, 4) == doctest::Approx(c.data(4, 1)).epsilon(1e-15));
}

TEST_CASE("relation_loss examples") {
  const Matrix prior = Matrix::from_rows({{1.0, 0.3}, {0.3, 1.0}});
  const RelationMatrix c{prior, RelationKind::Learned};
  const RelationLossResult same = relation_loss(c, PriorRelation{prior}, 1.0);
  CHECK(same.value == 0.0);
  CHECK(max_abs(same.grad) == 0.0);

  const RelationMatrix gap{Matrix::from_rows({{1.0, 0.4}, {0.4, 1.0}}), RelationKind::Learned};
  CHECK(relation_loss(gap, PriorRelation{prior}, 1.0).value == doctest::Approx(0.02));
  CHECK(relation_loss(gap, PriorRelation{prior}, 0.0).value == 0.0);
  CHECK_THROWS_AS(relation_loss(gap, PriorRelation{Matrix::identity(3)}, 1.0), DimensionError);
}

TEST_CASE("relation loss gradients through F match finite differences") {
  Rng rng(6);
  for (int t = 0; t < 20; ++t) {
    const std::size_t d = 1 + rng.below(4), n = 2 + rng.below(5);
    MlpNetwork f = build_relation_net(d, 2 + rng.below(6), rng);
    // Zero biases put ReLU inputs exactly on the kink.
    for (Layer& l : f.mutable_layers()) {
      for (double& v : l.bias.values()) v = 0.1 * rng.normal();
    }
    Matrix z = random_normal(d, n, rng);
    const PriorRelation prior = prior_relation(FeatureBatch(random_normal(2, n, rng)), 1.0);
    auto loss = [&] { return relation_loss(relation_forward(f, FeatureBatch(z)), prior, 1.3).value; };
    const RelationLossResult rl = relation_loss(relation_forward(f, FeatureBatch(z)), prior, 1.3);
    Matrix gz;
    const Gradients g = relation_backward(f, rl.grad, &gz);
    CHECK(oracle::relative_error(gz, oracle::numeric_gradient(z, loss)) < 1e-6);
    for (std::size_t l = 0; l < f.layer_count(); ++l) {
      const Matrix fw = oracle::numeric_gradient(f.mutable_layers()[l].weight, loss);
      const Matrix fb = oracle::numeric_gradient(f.mutable_layers()[l].bias, loss);
      CHECK(oracle::relative_error(g.weight[l], fw) < 1e-6);
      CHECK(oracle::relative_error(g.bias[l], fb) < 1e-6);
    }
  }
}

TEST_CASE("gradient descent on F shrinks the prior gap") {
  Rng rng(7);
  for (int t = 0; t < 3; ++t) {
    MlpNetwork f = build_relation_net(2, 16, rng);
    const Matrix z = random_normal(2, 6, rng);
    const PriorRelation prior = prior_relation(FeatureBatch(z), 1.0);
    double prev = relation_loss(relation_forward(f, FeatureBatch(z)), prior, 1.0).value;
    for (int step = 0; step < 50; ++step) {
      const RelationLossResult rl = relation_loss(relation_forward(f, FeatureBatch(z)), prior, 1.0);
      const Gradients g = relation_backward(f, rl.grad);
      for (std::size_t l = 0; l < f.layer_count(); ++l) {
        f.mutable_layers()[l].weight.add_scaled(g.weight[l], -1e-3);
        f.mutable_layers()[l].bias.add_scaled(g.bias[l], -1e-3);
      }
      const double now = relation_loss(relation_forward(f, FeatureBatch(z)), prior, 1.0).value;
      CHECK(now <= prev);
      prev = now;
    }
  }
}
