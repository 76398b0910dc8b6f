#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fseval {

template <typename Scalar, int Rows = Eigen::Dynamic>
using Vector = Eigen::Matrix<Scalar, Rows, 1>;

template <typename Scalar, int Rows = Eigen::Dynamic, int Cols = Eigen::Dynamic>
using Matrix = Eigen::Matrix<Scalar, Rows, Cols>;

using MatrixXd = Matrix<double>;
using VectorXd = Vector<double>;

// Integer class labels in [0, n_classes).
using Labels = Vector<int>;

using Index = Eigen::Index;

template <typename Derived>
using ScalarOf = typename Eigen::DenseBase<Derived>::Scalar;

// Raised on contract violations (bad input, bad configuration).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Orientation { higher_is_better, lower_is_better };

inline const char* to_string(Orientation o) {
  return o == Orientation::higher_is_better ? "higher" : "lower";
}

}  // namespace fseval
