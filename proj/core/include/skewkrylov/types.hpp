#pragma once

#include <Eigen/Dense>

namespace skewkrylov {

/// Dense real vector. Houses right-hand sides, iterates, residuals and search directions.
using Vector = Eigen::VectorXd;

/// Dense real matrix, column-major (Eigen default).
using Matrix = Eigen::MatrixXd;

using Index = Eigen::Index;

}  // namespace skewkrylov
