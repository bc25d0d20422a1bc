#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "iwal/losses.hpp"
#include "iwal/random.hpp"

using namespace iwal;

namespace {

const LossKind kAllKinds[] = {LossKind::zero_one, LossKind::hinge, LossKind::logistic,
                              LossKind::squared, LossKind::absolute};

}  // namespace

TEST_CASE("point evaluations") {
  CHECK(LossFunction(LossKind::zero_one).eval(1.0, -1.0) == 1.0);
  CHECK(LossFunction(LossKind::zero_one).eval(1.0, 1.0) == 0.0);
  CHECK(LossFunction(LossKind::squared, 1.0).eval(1.0, 1.0) == 0.0);
  // ln 2 / ln(1 + e), computed independently of the implementation's softplus.
  CHECK(LossFunction(LossKind::logistic, 1.0).eval(0.0, 1.0) ==
        doctest::Approx(std::log(2.0) / std::log(1.0 + std::exp(1.0))).epsilon(1e-14));
  CHECK(LossFunction(LossKind::logistic, 1.0).eval(0.0, 1.0) == doctest::Approx(0.5278).epsilon(1e-4));
  CHECK(LossFunction(LossKind::hinge, 2.0).eval(-2.0, 1.0) == 1.0);
  CHECK(LossFunction(LossKind::absolute, 1.0).eval(-1.0, 1.0) == 1.0);
}

TEST_CASE("eval rejects predictions outside Z and bad labels") {
  CHECK_THROWS_AS(LossFunction(LossKind::logistic, 1.0).eval(1.5, 1.0), DomainError);
  CHECK_THROWS_AS(LossFunction(LossKind::zero_one).eval(0.5, 1.0), DomainError);
  CHECK_THROWS_AS(LossFunction(LossKind::hinge, 1.0).eval(0.0, 0.0), DomainError);
  CHECK_NOTHROW(LossFunction(LossKind::squared, 1.0).eval(0.0, 0.0));
  CHECK_THROWS_AS(LossFunction(LossKind::logistic, -1.0), DomainError);
}

TEST_CASE("normalized values stay in [0, 1] and the normalizer is attained") {
  for (auto kind : kAllKinds) {
    for (double b : {0.5, 1.0, 3.0}) {
      const LossFunction loss(kind, b);
      double largest = 0.0;
      for (double y : {-1.0, 1.0}) {
        if (kind == LossKind::zero_one) {
          for (double z : {-1.0, 1.0}) largest = std::max(largest, loss.eval(z, y));
          continue;
        }
        for (int i = 0; i <= 400; ++i) {
          const double z = -b + 2.0 * b * i / 400.0;
          const double v = loss.eval(z, y);
          CHECK(v >= 0.0);
          CHECK(v <= 1.0 + 1e-15);
          largest = std::max(largest, v);
        }
      }
      CHECK(largest == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("margin losses are nonincreasing in yz") {
  for (auto kind : {LossKind::hinge, LossKind::logistic}) {
    const LossFunction loss(kind, 2.0);
    double previous = loss.phi(-2.0);
    for (int i = 1; i <= 200; ++i) {
      const double v = -2.0 + 4.0 * i / 200.0;
      CHECK(loss.phi(v) <= previous + 1e-15);
      previous = loss.phi(v);
    }
  }
}

TEST_CASE("fused evaluation agrees with the separate derivatives") {
  Rng rng(3);
  for (auto kind : {LossKind::logistic, LossKind::squared}) {
    const LossFunction loss(kind, 2.0);
    for (int i = 0; i < 200; ++i) {
      const double z = -6.0 + 12.0 * uniform01(rng);
      const double y = bernoulli(rng, 0.5) ? 1.0 : -1.0;
      const auto t = loss.taylor(z, y);
      CHECK(t.value == doctest::Approx(loss.value(z, y)).epsilon(1e-13));
      CHECK(t.first == doctest::Approx(loss.derivative(z, y)).epsilon(1e-13));
      CHECK(t.second == doctest::Approx(loss.second_derivative(z, y)).epsilon(1e-13));
    }
  }
}

TEST_CASE("derivative bounds") {
  const auto logistic = derivative_bounds(LossFunction(LossKind::logistic, 1.0));
  CHECK(logistic.lower == doctest::Approx(0.2689414213699951));
  CHECK(logistic.upper == doctest::Approx(0.7310585786300049));
  const auto flat = derivative_bounds(LossFunction(LossKind::logistic, 0.0));
  CHECK(flat.lower == doctest::Approx(0.5));
  CHECK(flat.upper == doctest::Approx(0.5));
  const auto absolute = derivative_bounds(LossFunction(LossKind::absolute, 1.0));
  CHECK(absolute.lower == 1.0);
  CHECK(absolute.upper == 1.0);
  CHECK_THROWS_AS(derivative_bounds(LossFunction(LossKind::hinge, 1.0)), UnsupportedError);
  CHECK_THROWS_AS(derivative_bounds(LossFunction(LossKind::zero_one)), UnsupportedError);
}

TEST_CASE("finite-difference slopes lie within the derivative bounds") {
  Rng rng(11);
  for (double b : {0.5, 1.0, 2.0}) {
    const LossFunction loss(LossKind::logistic, b);
    const auto [c0, c1] = derivative_bounds(loss);
    for (int i = 0; i < 2000; ++i) {
      const double z = -b + 2.0 * b * uniform01(rng);
      const double w = -b + 2.0 * b * uniform01(rng);
      if (std::abs(z - w) < 1e-6) continue;
      // Raw phi slope: normalized difference times the normalizer.
      const double slope = std::abs(loss.raw(z, 1.0) - loss.raw(w, 1.0)) / std::abs(z - w);
      CHECK(slope >= c0 * (1.0 - 1e-6));
      CHECK(slope <= c1 * (1.0 + 1e-6));
    }
  }
}

TEST_CASE("slope asymmetry") {
  CHECK(slope_asymmetry(LossFunction(LossKind::zero_one)) == 1.0);
  CHECK(std::isinf(slope_asymmetry(LossFunction(LossKind::hinge, 1.0))));
  const double k = slope_asymmetry(LossFunction(LossKind::logistic, 1.0));
  CHECK(k == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
  CHECK(k <= 1.0 + std::exp(1.0));
}

TEST_CASE("empirical slope asymmetry never exceeds K_l") {
  Rng rng(5);
  for (double b : {0.5, 1.0, 2.0}) {
    const LossFunction loss(LossKind::logistic, b);
    const double k = slope_asymmetry(loss);
    for (int i = 0; i < 5000; ++i) {
      const double z = -b + 2.0 * b * uniform01(rng);
      const double w = -b + 2.0 * b * uniform01(rng);
      const double up = std::abs(loss.value(z, 1.0) - loss.value(w, 1.0));
      const double down = std::abs(loss.value(z, -1.0) - loss.value(w, -1.0));
      if (std::min(up, down) < 1e-9) continue;
      CHECK(std::max(up, down) / std::min(up, down) <= k + 1e-9);
    }
  }
}

TEST_CASE("names round-trip") {
  for (auto kind : kAllKinds) CHECK(parse_loss_kind(to_string(kind)) == kind);
}
