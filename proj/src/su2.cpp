#include "skyrme/su2.hpp"

#include <cmath>

namespace skyrme::su2 {

Mat2c basis(int a)
{
    const cd i(0.0, 1.0);
    Mat2c m;
    switch (a) {
    case 0: m << 0.0, -i, -i, 0.0; break;
    case 1: m << 0.0, -1.0, 1.0, 0.0; break;
    default: m << -i, 0.0, 0.0, i; break;
    }
    return m;
}

Mat2c from_coeffs(const Eigen::Vector3d& x)
{
    return x[0] * basis(0) + x[1] * basis(1) + x[2] * basis(2);
}

Eigen::Vector3d coeffs(const Mat2c& X)
{
    // (i/2) tr(X sigma_a) = -(1/2) tr(X I_a)
    Eigen::Vector3d x;
    for (int a = 0; a < 3; ++a) x[a] = -0.5 * (X * basis(a)).trace().real();
    return x;
}

Eigen::Vector4d quat(const Mat2c& U)
{
    Eigen::Vector4d q;
    q[0] = 0.5 * U.trace().real();
    Eigen::Vector3d v = coeffs(U);
    q.tail<3>() = v;
    return q;
}

Mat2c from_quat(const Eigen::Vector4d& q)
{
    return q[0] * Mat2c::Identity() + from_coeffs(q.tail<3>());
}

Mat2c exp(const Eigen::Vector3d& x)
{
    double r = x.norm();
    double c = std::cos(r);
    double s = r > 1e-12 ? std::sin(r) / r : 1.0 - r * r / 6.0;
    return c * Mat2c::Identity() + s * from_coeffs(x);
}

Eigen::Matrix3d adjoint(const Mat2c& g)
{
    Mat2c gi = g.adjoint();
    Eigen::Matrix3d R;
    for (int b = 0; b < 3; ++b) R.col(b) = coeffs(g * basis(b) * gi);
    return R;
}

double inner(const Mat2c& X, const Mat2c& Y)
{
    return -0.5 * (X * Y).trace().real();
}

}  // namespace skyrme::su2
