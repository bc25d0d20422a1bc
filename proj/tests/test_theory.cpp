#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "iwal/theory.hpp"

using namespace iwal;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

FiniteInstance two_atoms() {
  FiniteInstance inst;
  inst.atoms.push_back({vec({1}), 0.3, {{1.0, 1.0}}});
  inst.atoms.push_back({vec({-1}), 0.7, {{-1.0, 0.8}, {1.0, 0.2}}});
  return inst;
}

}  // namespace

TEST_CASE("rho is zero on identical hypotheses and symmetric") {
  const auto inst = two_atoms();
  const LossFunction loss(LossKind::logistic, 1.0);
  const Hypothesis f = LinearPredictor{vec({0.4})}, g = LinearPredictor{vec({-0.2})};
  CHECK(rho(f, f, inst, loss) == 0.0);
  CHECK(rho(f, g, inst, loss) == rho(g, f, inst, loss));
}

TEST_CASE("rho on a single disagreeing atom") {
  // Two constant classifiers that disagree on an atom of mass 0.3 only.
  FiniteInstance inst;
  inst.atoms.push_back({vec({1}), 0.3, {{1.0, 1.0}}});
  inst.atoms.push_back({vec({-1}), 0.7, {{1.0, 1.0}}});
  const Hypothesis f = StumpPredictor{0, 0.0, 1.0};
  const Hypothesis g = ConstantPredictor{-1.0};
  CHECK(rho(f, g, inst, LossFunction(LossKind::zero_one)) == doctest::Approx(0.3));
}

TEST_CASE("rho matches enumeration and satisfies the triangle inequality") {
  Rng rng(50);
  const auto inst = two_atoms();
  const LossFunction loss(LossKind::squared, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Hypothesis f = LinearPredictor{vec({uniform01(rng) * 2 - 1})};
    const Hypothesis g = LinearPredictor{vec({uniform01(rng) * 2 - 1})};
    const Hypothesis h = LinearPredictor{vec({uniform01(rng) * 2 - 1})};
    double expected = 0.0;
    for (const auto& atom : inst.atoms) {
      const double zf = predict(f, atom.x, loss), zg = predict(g, atom.x, loss);
      double worst = 0.0;
      for (double y : {-1.0, 1.0}) worst = std::max(worst, std::abs((zf - y) * (zf - y) - (zg - y) * (zg - y)) / 4.0);
      expected += atom.mass * worst;
    }
    CHECK(rho(f, g, inst, loss) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(rho(f, h, inst, loss) <= rho(f, g, inst, loss) + rho(g, h, inst, loss) + 1e-12);
  }
}

TEST_CASE("Monte-Carlo rho brackets the exact value") {
  Rng rng(51);
  const auto inst = two_atoms();
  const LossFunction loss(LossKind::logistic, 1.0);
  const Hypothesis f = LinearPredictor{vec({0.8})}, g = LinearPredictor{vec({-0.5})};
  std::vector<Vector> draws;
  for (int i = 0; i < 20000; ++i) draws.push_back(sample(inst, rng).x);
  const auto mc = rho(f, g, draws, loss);
  CHECK(std::abs(mc.mean - rho(f, g, inst, loss)) <= 4.0 * mc.standard_error + 1e-12);
}

TEST_CASE("rho upper check holds for zero-one and logistic") {
  Rng rng(52);
  for (int trial = 0; trial < 30; ++trial) {
    const auto lb = lower_bound_instance(6, 0.2, 0.05, rng);
    for (int k = 0; k < 10; ++k) {
      Vector w(6);
      for (auto& v : w) v = standard_normal(rng);
      const Hypothesis h = LinearPredictor{w};
      CHECK(rho_upper_check(h, *lb.instance.optimal, LossFunction(LossKind::zero_one), lb.instance));
      CHECK(rho_upper_check(h, *lb.instance.optimal, LossFunction(LossKind::logistic, 1.0), lb.instance));
    }
  }
  // Hinge has no finite K, so the check is vacuous.
  const auto inst = two_atoms();
  CHECK(rho_upper_check(ConstantPredictor{1}, ConstantPredictor{-1}, LossFunction(LossKind::hinge, 1.0), inst));
}

TEST_CASE("disagreement coefficient: a ball holding only h* gives zero") {
  const auto inst = two_atoms();
  const LossFunction loss(LossKind::zero_one);
  const Hypothesis star = ConstantPredictor{1.0};
  std::vector<Hypothesis> hs{star, ConstantPredictor{-1.0}};
  const std::vector<double> radii{0.5, 2.0};
  const auto est = disagreement_coefficient_exact(star, hs, inst, radii, loss);
  REQUIRE(est.rows.size() == 2);
  CHECK(est.rows[0].ball_size == 1);
  CHECK(*est.rows[0].theta == 0.0);
  // At r = 2 the flipped constant is inside: E sup = 1, theta = 1/2.
  CHECK(est.rows[1].ball_size == 2);
  CHECK(*est.rows[1].theta == doctest::Approx(0.5));
  CHECK(est.sup == doctest::Approx(0.5));
}

TEST_CASE("disagreement coefficient on a hand-built two-atom case") {
  // h1 differs from h* on the 0.3 atom only, h2 on the 0.7 atom only.
  const auto inst = two_atoms();
  const LossFunction loss(LossKind::zero_one);
  const Hypothesis star = ConstantPredictor{1.0};
  const Hypothesis h1 = StumpPredictor{0, 0.0, -1.0};  // -1 at x = 1, +1 at x = -1
  const Hypothesis h2 = StumpPredictor{0, 0.0, 1.0};   // +1 at x = 1, -1 at x = -1
  std::vector<Hypothesis> hs{h1, h2};
  const std::vector<double> radii{0.3, 0.7, 1.0};
  const auto est = disagreement_coefficient_exact(star, hs, inst, radii, loss);
  CHECK(*est.rows[0].theta == doctest::Approx(0.3 / 0.3));
  CHECK(*est.rows[1].theta == doctest::Approx(1.0 / 0.7));
  CHECK(*est.rows[2].theta == doctest::Approx(1.0));
  CHECK(est.sup == doctest::Approx(1.0 / 0.7));
}

TEST_CASE("empty balls are reported, not divided by") {
  const auto inst = two_atoms();
  const Hypothesis star = ConstantPredictor{1.0};
  std::vector<Hypothesis> hs{ConstantPredictor{-1.0}};
  const std::vector<double> radii{0.5};
  const auto est = disagreement_coefficient_exact(star, hs, inst, radii, LossFunction(LossKind::zero_one));
  CHECK_FALSE(est.rows[0].theta.has_value());
  CHECK_FALSE(est.warnings.empty());
}

TEST_CASE("Monte-Carlo theta needs enough draws") {
  const Hypothesis star = ConstantPredictor{1.0};
  std::vector<Hypothesis> hs{star};
  std::vector<Vector> draws(10, vec({0}));
  const std::vector<double> radii{0.5};
  CHECK_THROWS_AS(estimate_disagreement_coefficient(star, hs, draws, radii, LossFunction(LossKind::zero_one)),
                  DomainError);
}

TEST_CASE("perturbation sample stays in the ball and starts at the center") {
  Rng rng(53);
  const Vector center = vec({0.5, 0.5});
  const auto hs = perturbation_sample(center, 500, 1.0, 1e-3, 2.0, rng);
  CHECK(hs.size() == 500);
  CHECK(std::get<LinearPredictor>(hs[0]).weights == center);
  for (const auto& h : hs) CHECK(std::get<LinearPredictor>(h).weights.squaredNorm() <= 1.0 + 1e-12);
}

TEST_CASE("safety bound closed form and scaling") {
  // ln 1 + ln(2 / delta) = 1 with delta = 2 / e.
  CHECK(safety_bound(1.0, 1.0, 2.0 / std::exp(1.0), 1) == doctest::Approx(std::sqrt(2.0)));
  const double base = safety_bound(0.5, 8.0, 0.2, 500);
  CHECK(safety_bound(0.25, 8.0, 0.2, 500) == doctest::Approx(2.0 * base));
  CHECK(safety_bound(0.5, 8.0, 0.2, 2000) == doctest::Approx(base / 2.0));
  CHECK_THROWS_AS(safety_bound(0.0, 8.0, 0.2, 500), DomainError);
}

TEST_CASE("label complexity bound terms") {
  const auto b = label_complexity_bound(1.0, 1.0, 0.1, 1000, 8.0, 0.1);
  CHECK(b.linear_term == doctest::Approx(400.0));
  CHECK(b.sublinear_term == doctest::Approx(4.0 * std::sqrt(1000.0 * std::log(80000.0))));
  CHECK(b.total() == doctest::Approx(b.linear_term + b.sublinear_term));
  CHECK_THROWS_AS(label_complexity_bound(kInfinity, 1.0, 0.1, 1000, 8.0, 0.1), UnsupportedError);
  CHECK_THROWS_AS(label_complexity_bound(1.0, kInfinity, 0.1, 1000, 8.0, 0.1), UnsupportedError);
}

TEST_CASE("per-step bound is at most T and grows with T") {
  CHECK(per_step_label_bound(1.0, 1.0, 0.0, 1, 8.0, 0.1) == 1.0);
  const double a = per_step_label_bound(0.1, 1.0, 0.0, 1000, 8.0, 0.1);
  const double b = per_step_label_bound(0.1, 1.0, 0.0, 2000, 8.0, 0.1);
  CHECK(a <= 1000.0);
  CHECK(b > a);
}

TEST_CASE("lower-bound instance parameters and label marginals") {
  Rng rng(54);
  const auto lb = lower_bound_instance(5, 0.2, 0.05, rng);
  CHECK(lb.beta == doctest::Approx(0.6));
  CHECK(lb.gamma == doctest::Approx(1.0 / 6.0));
  CHECK(lb.bits.size() == 4);
  CHECK_NOTHROW(validate(lb.instance));
  CHECK(lb.instance.optimal_loss == doctest::Approx(0.2).epsilon(1e-12));

  const int n = 200000;
  std::vector<int> hits(5, 0), positive(5, 0);
  for (int i = 0; i < n; ++i) {
    const auto e = sample(lb.instance, rng);
    Eigen::Index atom;
    e.x.maxCoeff(&atom);
    ++hits[atom];
    if (e.y > 0) ++positive[atom];
  }
  for (std::size_t i = 1; i < 5; ++i) {
    const double p = 0.5 + lb.gamma * lb.bits[i - 1];
    const double sigma = std::sqrt(p * (1 - p) / hits[i]);
    CHECK(std::abs(positive[i] / double(hits[i]) - p) <= 4.0 * sigma);
  }
  CHECK(positive[0] == hits[0]);
  CHECK_THROWS_AS(lower_bound_instance(5, 0.3, 0.05, rng), DomainError);
}

TEST_CASE("point-mass and sphere instances") {
  const auto pm = point_mass_instance(0.1, 3);
  CHECK_NOTHROW(validate(pm));
  CHECK(pm.atoms[0].x.isZero());
  CHECK(pm.atoms[0].mass == doctest::Approx(0.9));
  CHECK(pm.atoms[1].mass == doctest::Approx(0.1));

  Rng rng(55);
  const auto sphere = sphere_instance(4, 0.1, rng);
  CHECK(sphere.hidden.norm() == doctest::Approx(1.0));
  Vector mean = Vector::Zero(4);
  const int n = 20000;
  int flips = 0;
  for (int i = 0; i < n; ++i) {
    const auto e = sphere.sample(rng);
    CHECK(e.x.norm() == doctest::Approx(1.0));
    mean += e.x;
    flips += (sphere.hidden.dot(e.x) >= 0 ? 1.0 : -1.0) != e.y ? 1 : 0;
  }
  mean /= n;
  CHECK(mean.norm() < 0.05);
  CHECK(std::abs(flips / double(n) - 0.1) < 0.01);
  CHECK_THROWS_AS(sphere_instance(1, 0.1, rng), DomainError);
}

TEST_CASE("validate rejects bad masses") {
  auto inst = two_atoms();
  inst.atoms[0].mass = 0.5;
  CHECK_THROWS_AS(validate(inst), DomainError);
}
