#pragma once

// Data-parallel inner loops. Every kernel has a serial reference path and an
// OpenMP path; both accumulate in the same order, so their results agree
// bitwise and the serial path doubles as the test oracle.

#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <vector>

#include "iwal/hypotheses.hpp"
#include "iwal/losses.hpp"
#include "iwal/types.hpp"

namespace iwal::kernels {

enum class Execution { serial, parallel };

// max over y in {-1,+1} of |l(zf, y) - l(zg, y)|
double max_label_deviation(double zf, double zg, const LossFunction& loss);

// sum_{(x,y,c) in S} c * l(h(x), y) for each member h.
std::vector<double> weighted_loss_sums(std::span<const Hypothesis> members,
                                       std::span<const WeightedExample> sample,
                                       const LossFunction& loss,
                                       Execution exec = Execution::parallel);

// max over y in {-1,+1} of (max_i l(z_i, y) - min_i l(z_i, y)); 0 for an
// empty or single-element input. Predictions must already lie in Z.
double loss_spread(std::span<const double> predictions, const LossFunction& loss,
                   Execution exec = Execution::parallel);

// h(x) in Z for every member.
std::vector<double> predictions(std::span<const Hypothesis> members, const Vector& x,
                                const LossFunction& loss, Execution exec = Execution::parallel);

// sum_k w_k * max_y |l(h(x_k), y) - l(center(x_k), y)| for each h.
std::vector<double> weighted_deviation_to_center(std::span<const Hypothesis> hypotheses,
                                                 const Hypothesis& center,
                                                 std::span<const Vector> points,
                                                 std::span<const double> weights,
                                                 const LossFunction& loss,
                                                 Execution exec = Execution::parallel);

// For each prefix length n in `cuts` (nondecreasing):
//   sum_k w_k * max_{i < n} max_y |l(h_i(x_k), y) - l(center(x_k), y)|.
// An empty prefix contributes 0.
std::vector<double> prefix_sup_deviation(std::span<const Hypothesis> ordered,
                                         const Hypothesis& center,
                                         std::span<const Vector> points,
                                         std::span<const double> weights,
                                         std::span<const std::size_t> cuts,
                                         const LossFunction& loss,
                                         Execution exec = Execution::parallel);

// results[i] = fn(i); exceptions from any index are rethrown on the caller.
template <class Result, class Fn>
std::vector<Result> map_indexed(std::size_t count, Fn&& fn, Execution exec = Execution::parallel) {
  std::vector<Result> results(count);
  if (exec == Execution::serial) {
    for (std::size_t i = 0; i < count; ++i) results[i] = fn(i);
    return results;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < n; ++i) {
    try {
      results[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace iwal::kernels
