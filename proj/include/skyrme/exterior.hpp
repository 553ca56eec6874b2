#pragma once

#include <Eigen/Dense>
#include <vector>

#include "skyrme/grid.hpp"

namespace skyrme {

using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;

/// Symmetric metric components with a computed positivity flag.
struct Metric3 {
    Mat3 g = Mat3::Identity();
    bool riemannian = true;

    Metric3() = default;
    explicit Metric3(const Mat3& m);
};

/// Sylvester criterion: all leading principal minors positive.
bool is_positive_definite(const Mat3& g);

/// Linear map from 1-forms to 2-forms. Row i holds the epsilon-dual
/// components of the image of dx^i.
struct StarMap {
    Mat3 m = Mat3::Zero();
};

/// Levi-Civita symbol on {0,1,2}.
inline int eps3(int i, int j, int k)
{
    return ((i - j) * (j - k) * (k - i)) / 2;
}

/// Star on 1-forms for the given metric and orientation (+1 or -1).
StarMap hodge_star(const Metric3& metric, int orientation);

/// Companion star from 2-forms (dual components) back to 1-forms.
Mat3 hodge_star_2to1(const Metric3& metric, int orientation);

/// Star on 0-forms: returns the coefficient of dx^123.
double hodge_star0(const Metric3& metric, int orientation);

/// Star on 3-forms: coefficient of dx^123 to a function.
double hodge_star3(const Metric3& metric, int orientation, double c);

/// Applies a StarMap to a 1-form given as a row of components.
inline Vec3 apply_star(const StarMap& s, const Vec3& a) { return s.m.transpose() * a; }

/// max over basis V of |tr(iota_V o s)|.
double star_trace_residual(const StarMap& s);
double star_trace_residual(const std::vector<StarMap>& field);

struct RecoveredMetric {
    Metric3 metric;
    int orientation = 1;  ///< sign of det of the map
};

/// Quadratic left inverse of hodge_star. Throws ConstraintViolated when the
/// trace residual exceeds tol * max(1, |s|).
RecoveredMetric recover_metric(const StarMap& s, double tol = 1e-10);

/// Inner product of 1-forms u G^{-1} v.
double pairing1(const Metric3& metric, const Vec3& u, const Vec3& v);

/// Inner product of 2-forms given by dual components: u^T G v / det G.
double pairing2(const Metric3& metric, const Vec3& u, const Vec3& v);

// Pointwise wedge products on compact storage.
inline Vec3 wedge11(const Vec3& a, const Vec3& b) { return a.cross(b); }
inline double wedge12(const Vec3& a, const Vec3& w) { return a.dot(w); }

/// Wedge of two form fields without slots (or with a slot on at most one side).
FormField wedge(const FormField& a, const FormField& b);

}  // namespace skyrme
