#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace bnls {

using Scalar = double;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<Scalar>;

// extended-precision scalar used to accumulate ill-conditioned sums
// (fourth-order stencils scale like 1/h^4, so plain double loses ~8 digits)
using XScalar = long double;
using XVector = Eigen::Matrix<XScalar, Eigen::Dynamic, 1>;

} // namespace bnls
