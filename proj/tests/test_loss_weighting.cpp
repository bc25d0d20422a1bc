#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "iwal/loss_weighting.hpp"
#include "oracles.hpp"

using namespace iwal;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

double softplus(double v) { return std::log1p(std::exp(v)); }

}  // namespace

TEST_CASE("slack closed form and monotonicity") {
  CHECK(slack(1, 2.0, 0.1) == doctest::Approx(std::sqrt(8.0 * std::log(160.0))).epsilon(1e-12));
  CHECK(slack(1, 2.0, 0.1) == doctest::Approx(6.3718).epsilon(1e-4));
  CHECK(std::isinf(slack(0, 2.0, 0.1)));
  for (std::size_t t = 2; t < 500; ++t) CHECK(slack(t, 16.0, 0.1) < slack(t - 1, 16.0, 0.1));
  CHECK(slack(10, 32.0, 0.1) > slack(10, 16.0, 0.1));
  CHECK(slack(10, 16.0, 0.05) > slack(10, 16.0, 0.1));
  CHECK(optimistic_slack(4) == 0.5);
  CHECK_THROWS_AS(slack(1, 2.0, 1.0), DomainError);
  CHECK_THROWS_AS(slack(1, 0.5, 0.1), DomainError);
  CHECK(parse_slack_mode("optimistic") == SlackMode::optimistic);
  CHECK_THROWS_AS(parse_slack_mode("tight"), ConfigError);
}

TEST_CASE("shrink_finite keeps members within delta of the best survivor") {
  const std::vector<double> losses{0.10, 0.30, 0.15, 0.50, 0.05};
  SurvivorSetFinite all(5);
  const auto kept = shrink_finite(all, losses, 0.1);
  CHECK(std::vector<std::size_t>(kept.members().begin(), kept.members().end()) ==
        std::vector<std::size_t>{0, 2, 4});
  CHECK(kept.subset_of(all));
  // The best survivor is measured among survivors only.
  const auto again = shrink_finite(SurvivorSetFinite({1, 3}), losses, 0.1);
  CHECK(std::vector<std::size_t>(again.members().begin(), again.members().end()) ==
        std::vector<std::size_t>{1});
  CHECK(shrink_finite(all, losses, kInfinity).size() == 5);
}

TEST_CASE("survivor sets never grow during a run") {
  Rng rng(31);
  FiniteClass cls;
  for (int i = 0; i < 32; ++i) cls.members.push_back(StumpPredictor{0, uniform01(rng) * 2 - 1, 1.0});
  const LossFunction loss(LossKind::zero_one);
  LossWeightingFinite threshold(cls, loss, SlackOptions{SlackMode::optimistic, 0.1});
  std::vector<double> sums(cls.members.size(), 0.0);
  SurvivorSetFinite previous(cls.members.size());
  std::vector<WeightedExample> sample;
  for (std::size_t t = 0; t < 400; ++t) {
    Vector x = vec({uniform01(rng) * 2 - 1});
    const double y = (x[0] > 0.2) != bernoulli(rng, 0.1) ? 1.0 : -1.0;
    const double p = threshold.probability(x, History{t, sample, nullptr});
    const auto& current = threshold.survivors();
    CHECK(current.subset_of(previous));

    // Independent recomputation of the survivor set from the running sums.
    if (t >= 1) {
      double best = kInfinity;
      for (auto i : previous.members()) best = std::min(best, sums[i] / static_cast<double>(t));
      for (std::size_t i = 0; i < sums.size(); ++i) {
        const bool expected = previous.contains(i) &&
                              sums[i] / static_cast<double>(t) <= best + optimistic_slack(t);
        CHECK(current.contains(i) == expected);
      }
    }
    // p_finite is the largest pairwise loss gap among survivors.
    double brute = 0.0;
    for (auto i : current.members()) {
      for (auto j : current.members()) {
        for (double label : {-1.0, 1.0}) {
          brute = std::max(brute, loss_of(cls.members[i], x, label, loss) -
                                      loss_of(cls.members[j], x, label, loss));
        }
      }
    }
    CHECK(p == brute);
    previous = current;

    const bool queried = bernoulli(rng, std::max(p, 0.1));
    const double q = std::max(p, 0.1);
    if (queried) {
      threshold.observe(x, q, y);
      sample.push_back({x, y, 1.0 / q});
      for (std::size_t i = 0; i < sums.size(); ++i) sums[i] += loss_of(cls.members[i], x, y, loss) / q;
    } else {
      threshold.observe(x, q, std::nullopt);
    }
  }
  for (std::size_t i = 0; i < sums.size(); ++i) {
    CHECK(threshold.weighted_sums()[i] == doctest::Approx(sums[i]).epsilon(1e-12));
  }
}

TEST_CASE("p_finite edge cases") {
  const LossFunction loss(LossKind::zero_one);
  FiniteClass cls{{ConstantPredictor{1.0}, ConstantPredictor{-1.0}}};
  const Vector x = vec({0.0});
  CHECK(p_finite(x, cls, SurvivorSetFinite({0}), loss) == 0.0);
  CHECK(p_finite(x, cls, SurvivorSetFinite(2), loss) == 1.0);
}

TEST_CASE("A(x) over the whole ball and at the origin") {
  const SurvivorSetLinear ball{4.0, LossFunction(LossKind::logistic, 4.0), {}, kInfinity};
  CHECK(a_of_x(vec({3, 4}), ball, vec({0, 0})) == doctest::Approx(-10.0));
  CHECK(a_of_x(vec({0, 0}), ball, vec({0, 0})) == 0.0);
  CHECK(p_linear(vec({0, 0}), ball, vec({0, 0})) == 0.0);
}

TEST_CASE("p_linear over the full ball has a closed form") {
  for (double norm_bound : {0.25, 1.0, 9.0}) {
    for (double range : {1.0, 3.0}) {
      const SurvivorSetLinear ball{norm_bound, LossFunction(LossKind::logistic, range), {}, kInfinity};
      const Vector x = vec({0.6, -0.3});
      const double m = std::min(std::sqrt(norm_bound) * x.norm(), range);
      const double expected = (softplus(m) - softplus(-m)) / softplus(range);
      CHECK(p_linear(x, ball, vec({0, 0})) == doctest::Approx(expected).epsilon(1e-9));
    }
  }
}

TEST_CASE("p_linear agrees with a dense finite cover of the survivor set") {
  Rng rng(32);
  const LossFunction loss(LossKind::logistic, 1.0);
  std::vector<WeightedExample> s;
  for (int i = 0; i < 12; ++i) {
    const Vector x = vec({uniform01(rng) * 2 - 1, uniform01(rng) * 2 - 1});
    s.push_back({x, x[0] + 0.3 * x[1] > 0 ? 1.0 : -1.0, 1.0 + uniform01(rng)});
  }
  const auto erm = minimize_weighted_loss(loss, s, 2, 1.0);
  const SurvivorSetLinear survivors{1.0, loss, s, erm.objective + 0.4};

  FiniteClass cover;
  for (const auto& u : oracle::disc_cover(1.0, 0.01)) {
    if (weighted_loss_value(loss, s, u) <= survivors.bound) cover.members.push_back(LinearPredictor{u});
  }
  REQUIRE(cover.members.size() > 100);
  for (int trial = 0; trial < 10; ++trial) {
    Vector x = vec({uniform01(rng) * 2 - 1, uniform01(rng) * 2 - 1});
    x /= std::max(1.0, x.norm());
    const double linear = p_linear(x, survivors, erm.solution);
    const double finite = p_finite(x, cover, SurvivorSetFinite(cover.members.size()), loss);
    // The cover is inside the set, so it can only underestimate.
    CHECK(finite <= linear + 1e-9);
    CHECK(linear - finite < 0.02);
  }
}

TEST_CASE("shrinking the constraint shrinks p_linear") {
  Rng rng(33);
  const LossFunction loss(LossKind::logistic, 2.0);
  std::vector<WeightedExample> s;
  for (int i = 0; i < 20; ++i) {
    const Vector x = vec({uniform01(rng) * 2 - 1, uniform01(rng) * 2 - 1});
    s.push_back({x, x[1] > 0 ? 1.0 : -1.0, 1.0});
  }
  const auto erm = minimize_weighted_loss(loss, s, 2, 4.0);
  const Vector x = vec({0.3, 0.8});
  double previous = 1.0 + 1e-9;
  for (double slack_amount : {100.0, 3.0, 1.0, 0.3, 0.1}) {
    const SurvivorSetLinear survivors{4.0, loss, s, erm.objective + slack_amount};
    const double p = p_linear(x, survivors, erm.solution);
    CHECK(p >= 0.0);
    CHECK(p <= previous + 1e-7);
    previous = p;
  }
}

TEST_CASE("interval spread for non-margin losses") {
  const LossFunction squared(LossKind::squared, 1.0);
  // Predictions over [-1, 1]: y = 1 ranges over (z - 1)^2 / 4 in [0, 1].
  CHECK(interval_loss_spread(-1.0, 1.0, squared) == doctest::Approx(1.0));
  CHECK(interval_loss_spread(0.5, 0.5, squared) == doctest::Approx(0.0));
}

TEST_CASE("linear threshold requires a smooth loss") {
  CHECK_THROWS_AS(LossWeightingLinear(LinearBall{2, 1.0}, LossFunction(LossKind::hinge, 1.0),
                                      SlackOptions{}, 10.0),
                  UnsupportedError);
}
