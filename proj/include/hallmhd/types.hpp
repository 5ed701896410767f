#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <functional>

namespace hallmhd {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vector = Eigen::VectorXd;

/// Compressed sparse row storage; the building block of every assembled operator.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;
/// Integer incidence matrices (entries in {-1, 0, 1}).
using IntSparse = Eigen::SparseMatrix<int, Eigen::RowMajor, int>;

/// Analytic fields evaluated in physical coordinates at time t.
using VectorField = std::function<Vec3(const Vec3& x, double t)>;
using ScalarField = std::function<double(const Vec3& x, double t)>;

}  // namespace hallmhd
