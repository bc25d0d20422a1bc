#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace iwal {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// A label is +1/-1 for classification losses. Squared and absolute loss also
// accept real responses in [-1, 1] (the point-mass instance uses a 0 response).
struct LabeledExample {
  Vector x;
  double y = 1.0;
};

// A queried example carrying its importance weight c = 1/p_t.
struct WeightedExample {
  Vector x;
  double y = 1.0;
  double weight = 1.0;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A component returned a value that violates its own contract.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class UnsupportedError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace iwal
