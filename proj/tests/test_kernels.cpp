#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>

#include "iwal/kernels.hpp"
#include "iwal/random.hpp"

using namespace iwal;
using kernels::Execution;

namespace {

std::vector<Hypothesis> random_linear(Rng& rng, std::size_t count, std::size_t d) {
  std::vector<Hypothesis> out;
  for (std::size_t i = 0; i < count; ++i) {
    Vector w(static_cast<Eigen::Index>(d));
    for (auto& v : w) v = standard_normal(rng);
    out.push_back(LinearPredictor{w});
  }
  return out;
}

std::vector<Vector> random_points(Rng& rng, std::size_t count, std::size_t d) {
  std::vector<Vector> out;
  for (std::size_t i = 0; i < count; ++i) {
    Vector x(static_cast<Eigen::Index>(d));
    for (auto& v : x) v = 2.0 * uniform01(rng) - 1.0;
    out.push_back(x);
  }
  return out;
}

}  // namespace

TEST_CASE("max label deviation by hand") {
  const LossFunction zero_one(LossKind::zero_one);
  CHECK(kernels::max_label_deviation(1.0, -1.0, zero_one) == 1.0);
  CHECK(kernels::max_label_deviation(1.0, 1.0, zero_one) == 0.0);
  const LossFunction squared(LossKind::squared, 1.0);
  // (z - y)^2 / 4: y = -1 gives |4 - 0| / 4 = 1 for z = 1 vs z = -1.
  CHECK(kernels::max_label_deviation(1.0, -1.0, squared) == doctest::Approx(1.0));
  CHECK(kernels::max_label_deviation(0.0, 0.5, squared) == doctest::Approx(0.25 * (2.25 - 1.0)));
}

TEST_CASE("parallel kernels reproduce the serial reference bitwise") {
  Rng rng(21);
  const LossFunction loss(LossKind::logistic, 2.0);
  const auto members = random_linear(rng, 257, 4);
  const auto points = random_points(rng, 301, 4);
  std::vector<double> weights;
  for (std::size_t i = 0; i < points.size(); ++i) weights.push_back(uniform01(rng));
  std::vector<WeightedExample> sample;
  for (const auto& x : points) sample.push_back({x, bernoulli(rng, 0.5) ? 1.0 : -1.0, 1.0 + uniform01(rng)});

  CHECK(kernels::weighted_loss_sums(members, sample, loss, Execution::serial) ==
        kernels::weighted_loss_sums(members, sample, loss, Execution::parallel));

  const auto z = kernels::predictions(members, points[0], loss, Execution::serial);
  CHECK(z == kernels::predictions(members, points[0], loss, Execution::parallel));
  CHECK(kernels::loss_spread(z, loss, Execution::serial) ==
        kernels::loss_spread(z, loss, Execution::parallel));

  const Hypothesis center = members[0];
  CHECK(kernels::weighted_deviation_to_center(members, center, points, weights, loss, Execution::serial) ==
        kernels::weighted_deviation_to_center(members, center, points, weights, loss, Execution::parallel));

  const std::vector<std::size_t> cuts{0, 1, 5, 5, 100, 257};
  const auto serial = kernels::prefix_sup_deviation(members, center, points, weights, cuts, loss,
                                                    Execution::serial);
  CHECK(serial == kernels::prefix_sup_deviation(members, center, points, weights, cuts, loss,
                                                Execution::parallel));
  CHECK(serial[0] == 0.0);
  for (std::size_t i = 1; i < serial.size(); ++i) CHECK(serial[i] >= serial[i - 1]);
}

TEST_CASE("loss sums match a direct loop") {
  Rng rng(22);
  const LossFunction loss(LossKind::squared, 1.5);
  const auto members = random_linear(rng, 5, 3);
  std::vector<WeightedExample> sample;
  for (const auto& x : random_points(rng, 20, 3)) sample.push_back({x, -1.0, 2.0});
  const auto sums = kernels::weighted_loss_sums(members, sample, loss, Execution::serial);
  for (std::size_t i = 0; i < members.size(); ++i) {
    double expected = 0.0;
    for (const auto& e : sample) expected += e.weight * loss.value(predict(members[i], e.x, loss), e.y);
    CHECK(sums[i] == doctest::Approx(expected).epsilon(1e-14));
  }
}

TEST_CASE("loss spread of degenerate inputs is zero") {
  const LossFunction loss(LossKind::logistic, 1.0);
  CHECK(kernels::loss_spread(std::vector<double>{}, loss) == 0.0);
  CHECK(kernels::loss_spread(std::vector<double>{0.3}, loss) == 0.0);
}

TEST_CASE("prefix sup rejects unsorted cuts and mismatched weights") {
  const LossFunction loss(LossKind::zero_one);
  std::vector<Hypothesis> members{ConstantPredictor{1.0}};
  std::vector<Vector> points{Vector::Zero(1)};
  std::vector<double> weights{1.0};
  const std::vector<std::size_t> bad{1, 0};
  CHECK_THROWS_AS(kernels::prefix_sup_deviation(members, members[0], points, weights, bad, loss),
                  DomainError);
  CHECK_THROWS_AS(kernels::weighted_deviation_to_center(members, members[0], points,
                                                        std::vector<double>{}, loss),
                  DomainError);
}

TEST_CASE("map_indexed keeps order and rethrows failures") {
  const auto squares = kernels::map_indexed<std::size_t>(100, [](std::size_t i) { return i * i; });
  for (std::size_t i = 0; i < 100; ++i) CHECK(squares[i] == i * i);
  CHECK_THROWS_AS(kernels::map_indexed<int>(10,
                                            [](std::size_t i) -> int {
                                              if (i == 7) throw std::runtime_error("seven");
                                              return 0;
                                            }),
                  std::runtime_error);
}
