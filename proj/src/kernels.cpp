#include "iwal/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace iwal::kernels {

double max_label_deviation(double zf, double zg, const LossFunction& loss) {
  return std::max(std::abs(loss.value(zf, 1.0) - loss.value(zg, 1.0)),
                  std::abs(loss.value(zf, -1.0) - loss.value(zg, -1.0)));
}

std::vector<double> weighted_loss_sums(std::span<const Hypothesis> members,
                                       std::span<const WeightedExample> sample,
                                       const LossFunction& loss, Execution exec) {
  std::vector<double> sums(members.size(), 0.0);
  const auto n = static_cast<long long>(members.size());
  auto body = [&](long long i) {
    const auto& h = members[static_cast<std::size_t>(i)];
    double total = 0.0;
    for (const auto& e : sample) total += e.weight * loss_of(h, e.x, e.y, loss);
    sums[static_cast<std::size_t>(i)] = total;
  };
  if (exec == Execution::serial) {
    for (long long i = 0; i < n; ++i) body(i);
  } else {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i) body(i);
  }
  return sums;
}

double loss_spread(std::span<const double> predictions, const LossFunction& loss, Execution exec) {
  if (predictions.size() < 2) return 0.0;
  double max_pos = -kInfinity, min_pos = kInfinity;
  double max_neg = -kInfinity, min_neg = kInfinity;
  const auto n = static_cast<long long>(predictions.size());
  if (exec == Execution::serial) {
    for (long long i = 0; i < n; ++i) {
      const double z = predictions[static_cast<std::size_t>(i)];
      const double lp = loss.value(z, 1.0), ln = loss.value(z, -1.0);
      max_pos = std::max(max_pos, lp);
      min_pos = std::min(min_pos, lp);
      max_neg = std::max(max_neg, ln);
      min_neg = std::min(min_neg, ln);
    }
  } else {
#pragma omp parallel for schedule(static) reduction(max : max_pos, max_neg) \
    reduction(min : min_pos, min_neg)
    for (long long i = 0; i < n; ++i) {
      const double z = predictions[static_cast<std::size_t>(i)];
      const double lp = loss.value(z, 1.0), ln = loss.value(z, -1.0);
      max_pos = std::max(max_pos, lp);
      min_pos = std::min(min_pos, lp);
      max_neg = std::max(max_neg, ln);
      min_neg = std::min(min_neg, ln);
    }
  }
  return std::max(max_pos - min_pos, max_neg - min_neg);
}

std::vector<double> predictions(std::span<const Hypothesis> members, const Vector& x,
                                const LossFunction& loss, Execution exec) {
  std::vector<double> out(members.size());
  const auto n = static_cast<long long>(members.size());
  if (exec == Execution::serial) {
    for (long long i = 0; i < n; ++i) {
      out[static_cast<std::size_t>(i)] = predict(members[static_cast<std::size_t>(i)], x, loss);
    }
  } else {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i) {
      out[static_cast<std::size_t>(i)] = predict(members[static_cast<std::size_t>(i)], x, loss);
    }
  }
  return out;
}

std::vector<double> weighted_deviation_to_center(std::span<const Hypothesis> hypotheses,
                                                 const Hypothesis& center,
                                                 std::span<const Vector> points,
                                                 std::span<const double> weights,
                                                 const LossFunction& loss, Execution exec) {
  if (weights.size() != points.size()) throw DomainError("one weight per point required");
  std::vector<double> center_pred(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) center_pred[k] = predict(center, points[k], loss);

  std::vector<double> out(hypotheses.size(), 0.0);
  const auto n = static_cast<long long>(hypotheses.size());
  auto body = [&](long long i) {
    const auto& h = hypotheses[static_cast<std::size_t>(i)];
    double total = 0.0;
    for (std::size_t k = 0; k < points.size(); ++k) {
      total += weights[k] * max_label_deviation(predict(h, points[k], loss), center_pred[k], loss);
    }
    out[static_cast<std::size_t>(i)] = total;
  };
  if (exec == Execution::serial) {
    for (long long i = 0; i < n; ++i) body(i);
  } else {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i) body(i);
  }
  return out;
}

std::vector<double> prefix_sup_deviation(std::span<const Hypothesis> ordered,
                                         const Hypothesis& center,
                                         std::span<const Vector> points,
                                         std::span<const double> weights,
                                         std::span<const std::size_t> cuts,
                                         const LossFunction& loss, Execution exec) {
  if (weights.size() != points.size()) throw DomainError("one weight per point required");
  if (!std::is_sorted(cuts.begin(), cuts.end())) throw DomainError("cuts must be nondecreasing");
  const std::size_t ncuts = cuts.size();
  // Per-point table, reduced in point order afterwards for schedule independence.
  std::vector<double> table(points.size() * ncuts, 0.0);
  const auto npoints = static_cast<long long>(points.size());

  auto body = [&](long long kk) {
    const auto k = static_cast<std::size_t>(kk);
    const double zc = predict(center, points[k], loss);
    double running = 0.0;
    std::size_t next_cut = 0;
    while (next_cut < ncuts && cuts[next_cut] == 0) table[k * ncuts + next_cut++] = 0.0;
    for (std::size_t i = 0; i < ordered.size() && next_cut < ncuts; ++i) {
      running = std::max(running, max_label_deviation(predict(ordered[i], points[k], loss), zc, loss));
      while (next_cut < ncuts && cuts[next_cut] == i + 1) table[k * ncuts + next_cut++] = running;
    }
    while (next_cut < ncuts) table[k * ncuts + next_cut++] = running;
  };
  if (exec == Execution::serial) {
    for (long long k = 0; k < npoints; ++k) body(k);
  } else {
#pragma omp parallel for schedule(static)
    for (long long k = 0; k < npoints; ++k) body(k);
  }

  std::vector<double> out(ncuts, 0.0);
  for (std::size_t k = 0; k < points.size(); ++k) {
    for (std::size_t c = 0; c < ncuts; ++c) out[c] += weights[k] * table[k * ncuts + c];
  }
  return out;
}

}  // namespace iwal::kernels
