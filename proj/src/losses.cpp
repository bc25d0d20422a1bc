#include "iwal/losses.hpp"

#include <algorithm>
#include <cmath>

#include "iwal/types.hpp"

namespace iwal {
namespace {

// ln(1 + e^v) without overflow.
double softplus(double v) {
  return v > 0.0 ? v + std::log1p(std::exp(-v)) : std::log1p(std::exp(v));
}

double sigmoid(double v) {
  if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
  const double e = std::exp(v);
  return e / (1.0 + e);
}

double raw_normalizer(LossKind kind, double b) {
  switch (kind) {
    case LossKind::zero_one: return 1.0;
    case LossKind::hinge: return 1.0 + b;
    case LossKind::logistic: return softplus(b);
    case LossKind::squared: return (1.0 + b) * (1.0 + b);
    case LossKind::absolute: return 1.0 + b;
  }
  return 1.0;
}

}  // namespace

std::string_view to_string(LossKind kind) {
  switch (kind) {
    case LossKind::zero_one: return "zero-one";
    case LossKind::hinge: return "hinge";
    case LossKind::logistic: return "logistic";
    case LossKind::squared: return "squared";
    case LossKind::absolute: return "absolute";
  }
  return "unknown";
}

LossKind parse_loss_kind(std::string_view name) {
  if (name == "zero-one" || name == "zero_one" || name == "01") return LossKind::zero_one;
  if (name == "hinge") return LossKind::hinge;
  if (name == "logistic") return LossKind::logistic;
  if (name == "squared") return LossKind::squared;
  if (name == "absolute") return LossKind::absolute;
  throw ConfigError("unknown loss kind '" + std::string(name) + "'");
}

LossFunction::LossFunction(LossKind kind, double range_bound)
    : kind_(kind), range_bound_(range_bound) {
  if (!(range_bound >= 0.0) || !std::isfinite(range_bound)) {
    throw DomainError("loss range bound must be finite and nonnegative");
  }
  normalizer_ = raw_normalizer(kind, range_bound);
}

bool LossFunction::accepts_label(double y) const noexcept {
  switch (kind_) {
    case LossKind::squared:
    case LossKind::absolute:
      return y >= -1.0 && y <= 1.0;
    default:
      return y == 1.0 || y == -1.0;
  }
}

double LossFunction::eval(double z, double y) const {
  if (!accepts_label(y)) throw DomainError("label outside the label space");
  if (kind_ == LossKind::zero_one) {
    if (z != 1.0 && z != -1.0) throw DomainError("zero-one prediction must be -1 or +1");
  } else if (!(std::abs(z) <= range_bound_ * (1.0 + 1e-12) + 1e-15)) {
    throw DomainError("prediction outside [-B, B]");
  }
  return value(z, y);
}

double LossFunction::raw(double z, double y) const {
  switch (kind_) {
    case LossKind::zero_one: return y * z < 0.0 ? 1.0 : 0.0;
    case LossKind::hinge: return std::max(0.0, 1.0 - y * z);
    case LossKind::logistic: return softplus(-y * z);
    case LossKind::squared: return (y - z) * (y - z);
    case LossKind::absolute: return std::abs(y - z);
  }
  return 0.0;
}

double LossFunction::derivative(double z, double y) const {
  switch (kind_) {
    case LossKind::logistic: return -y * sigmoid(-y * z) / normalizer_;
    case LossKind::squared: return 2.0 * (z - y) / normalizer_;
    case LossKind::absolute: return (z > y ? 1.0 : (z < y ? -1.0 : 0.0)) / normalizer_;
    case LossKind::hinge: return (y * z < 1.0 ? -y : 0.0) / normalizer_;
    case LossKind::zero_one: return 0.0;
  }
  return 0.0;
}

double LossFunction::second_derivative(double z, double y) const {
  switch (kind_) {
    case LossKind::logistic: {
      const double s = sigmoid(y * z);
      return s * (1.0 - s) / normalizer_;
    }
    case LossKind::squared: return 2.0 / normalizer_;
    default: return 0.0;
  }
}

LossFunction::Taylor LossFunction::taylor(double z, double y) const {
  if (kind_ == LossKind::logistic) {
    // One exponential: with v = -yz, e = e^{-|v|}.
    const double v = -y * z;
    const double e = std::exp(-std::abs(v));
    const double value = std::max(v, 0.0) + std::log1p(e);
    const double s = v >= 0.0 ? 1.0 / (1.0 + e) : e / (1.0 + e);  // sigmoid(v)
    return {value / normalizer_, -y * s / normalizer_, s * (1.0 - s) / normalizer_};
  }
  return {value(z, y), derivative(z, y), second_derivative(z, y)};
}

double LossFunction::phi(double margin) const {
  return raw(margin, 1.0) / normalizer_;
}

double LossFunction::to_prediction(double output) const {
  if (kind_ == LossKind::zero_one) return output >= 0.0 ? 1.0 : -1.0;
  return std::clamp(output, -range_bound_, range_bound_);
}

bool LossFunction::is_smooth() const noexcept {
  return kind_ == LossKind::logistic || kind_ == LossKind::squared;
}

bool LossFunction::is_margin_nonincreasing() const noexcept {
  return kind_ == LossKind::zero_one || kind_ == LossKind::hinge || kind_ == LossKind::logistic;
}

DerivativeBounds derivative_bounds(const LossFunction& loss) {
  const double b = loss.range_bound();
  switch (loss.kind()) {
    case LossKind::logistic:
      // |phi'(v)| = 1 / (1 + e^v), extremes at v = +-B.
      return {1.0 / (1.0 + std::exp(b)), 1.0 / (1.0 + std::exp(-b))};
    case LossKind::squared:
      // |phi'(v)| = 2 |1 - v| on [-B, B].
      return {b >= 1.0 ? 0.0 : 2.0 * (1.0 - b), 2.0 * (1.0 + b)};
    case LossKind::absolute:
      return {1.0, 1.0};
    case LossKind::zero_one:
    case LossKind::hinge:
      break;
  }
  throw UnsupportedError("derivative bounds undefined for " + std::string(to_string(loss.kind())) +
                         " loss");
}

double slope_asymmetry(const LossFunction& loss) {
  switch (loss.kind()) {
    case LossKind::zero_one: return 1.0;
    case LossKind::hinge: return kInfinity;
    // Kinks of |1 - yz| sit at z = +-1; inside Z they make the ratio unbounded.
    case LossKind::absolute: return loss.range_bound() <= 1.0 ? 1.0 : kInfinity;
    case LossKind::logistic:
    case LossKind::squared: {
      const auto [c0, c1] = derivative_bounds(loss);
      return c0 > 0.0 ? c1 / c0 : kInfinity;
    }
  }
  return kInfinity;
}

}  // namespace iwal
