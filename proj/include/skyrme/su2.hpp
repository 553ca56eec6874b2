#pragma once

#include <Eigen/Dense>
#include <complex>

namespace skyrme::su2 {

using Mat2c = Eigen::Matrix2cd;
using cd = std::complex<double>;

/// Basis element I_a = -i sigma_a (a = 0, 1, 2).
Mat2c basis(int a);

/// x^a I_a.
Mat2c from_coeffs(const Eigen::Vector3d& x);

/// Coefficients x^a = (i/2) tr(X sigma_a) of the traceless anti-hermitian part.
Eigen::Vector3d coeffs(const Mat2c& X);

/// Quaternion form U = a0 + a^j I_j of a matrix in the real span of 1, I_j.
Eigen::Vector4d quat(const Mat2c& U);
Mat2c from_quat(const Eigen::Vector4d& q);

/// exp(x^a I_a).
Mat2c exp(const Eigen::Vector3d& x);

/// Matrix R with coeffs(g X g^{-1}) = R coeffs(X) for unit quaternion g.
Eigen::Matrix3d adjoint(const Mat2c& g);

/// (X, Y) = -1/2 tr(XY).
double inner(const Mat2c& X, const Mat2c& Y);

}  // namespace skyrme::su2
