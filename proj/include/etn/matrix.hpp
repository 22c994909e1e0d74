#ifndef ETN_MATRIX_HPP
#define ETN_MATRIX_HPP

#include <Eigen/Core>

namespace etn {

// Double precision throughout; finite-difference checks need the headroom.
using Scalar = double;

// Row-major: one example per row, serialization walks rows.
using Matrix =
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;
using ColVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using Index = Eigen::Index;

}  // namespace etn

#endif  // ETN_MATRIX_HPP
