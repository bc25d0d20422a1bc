#pragma once

#include <string>
#include <string_view>

#include "iwal/types.hpp"

namespace iwal {

enum class LossKind { zero_one, hinge, logistic, squared, absolute };

std::string_view to_string(LossKind kind);
// Accepts "zero-one", "hinge", "logistic", "squared", "absolute".
LossKind parse_loss_kind(std::string_view name);

/// A binary loss l(z, y) normalized to [0, 1] on the prediction space
/// Z = [-B, B] (Z = {-1, +1} for zero-one).
///
/// `eval` is the checked entry point. The unchecked `value`/`derivative`
/// family is what the convex solver uses: it evaluates the same formula
/// without clamping z, so it stays smooth and convex outside Z.
class LossFunction {
 public:
  explicit LossFunction(LossKind kind, double range_bound = 1.0);

  LossKind kind() const noexcept { return kind_; }
  double range_bound() const noexcept { return range_bound_; }
  // Supremum of the raw loss over Z x Y.
  double normalizer() const noexcept { return normalizer_; }

  // Normalized loss; throws DomainError for z outside Z or an invalid label.
  double eval(double z, double y) const;

  double raw(double z, double y) const;
  double value(double z, double y) const { return raw(z, y) / normalizer_; }
  // d/dz and d2/dz2 of the normalized loss; smooth kinds only.
  double derivative(double z, double y) const;
  double second_derivative(double z, double y) const;

  // Normalized value and first two z-derivatives in one evaluation.
  struct Taylor {
    double value;
    double first;
    double second;
  };
  Taylor taylor(double z, double y) const;

  // Normalized phi(v) for the margin form l(z, y) = phi(yz).
  double phi(double margin) const;

  // Maps a raw predictor output into Z: sign for zero-one, clamp otherwise.
  double to_prediction(double output) const;

  bool is_smooth() const noexcept;
  // phi nonincreasing in the margin (zero-one, hinge, logistic).
  bool is_margin_nonincreasing() const noexcept;
  bool accepts_label(double y) const noexcept;

 private:
  LossKind kind_;
  double range_bound_;
  double normalizer_;
};

// Infimum and supremum of |phi'| over Z for the raw phi.
struct DerivativeBounds {
  double lower;
  double upper;
};

// Throws UnsupportedError for zero-one and hinge.
DerivativeBounds derivative_bounds(const LossFunction& loss);

// K_l. Exactly 1 for zero-one, +infinity for hinge, C1/C0 for the smooth kinds
// (infinite when C0 = 0).
double slope_asymmetry(const LossFunction& loss);

}  // namespace iwal
