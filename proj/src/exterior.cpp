#include "skyrme/exterior.hpp"

#include <cmath>

namespace skyrme {

bool is_positive_definite(const Mat3& g)
{
    double m1 = g(0, 0);
    double m2 = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
    double m3 = g.determinant();
    return m1 > 0.0 && m2 > 0.0 && m3 > 0.0;
}

Metric3::Metric3(const Mat3& m) : g(0.5 * (m + m.transpose())), riemannian(is_positive_definite(g)) {}

StarMap hodge_star(const Metric3& metric, int orientation)
{
    double det = metric.g.determinant();
    if (!(det > 0.0)) throw SingularMetric("hodge_star needs det(g) > 0");
    StarMap s;
    s.m = orientation * std::sqrt(det) * metric.g.inverse();
    return s;
}

Mat3 hodge_star_2to1(const Metric3& metric, int orientation)
{
    double det = metric.g.determinant();
    if (!(det > 0.0)) throw SingularMetric("hodge_star needs det(g) > 0");
    return metric.g / (orientation * std::sqrt(det));
}

double hodge_star0(const Metric3& metric, int orientation)
{
    double det = metric.g.determinant();
    if (!(det > 0.0)) throw SingularMetric("hodge_star needs det(g) > 0");
    return orientation * std::sqrt(det);
}

double hodge_star3(const Metric3& metric, int orientation, double c)
{
    return c / hodge_star0(metric, orientation);
}

double star_trace_residual(const StarMap& s)
{
    double r = 0.0;
    for (int l = 0; l < 3; ++l) {
        double t = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int k = 0; k < 3; ++k) t += s.m(i, k) * eps3(k, l, i);
        r = std::max(r, std::abs(t));
    }
    return r;
}

double star_trace_residual(const std::vector<StarMap>& field)
{
    double r = 0.0;
    for (const auto& s : field) r = std::max(r, star_trace_residual(s));
    return r;
}

RecoveredMetric recover_metric(const StarMap& s, double tol)
{
    double scale = std::max(1.0, s.m.cwiseAbs().maxCoeff());
    double res = star_trace_residual(s);
    if (!(res <= tol * scale))
        throw ConstraintViolated("star-like map fails the trace identity (residual " + std::to_string(res) + ")");
    // g_{ls} = 1/2 sum_{ij} (*e^j)(E_l, E_i) (*e^i)(E_j, E_s)
    Mat3 g = Mat3::Zero();
    for (int l = 0; l < 3; ++l)
        for (int sg = 0; sg < 3; ++sg) {
            double acc = 0.0;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    double a = 0.0, b = 0.0;
                    for (int k = 0; k < 3; ++k) {
                        a += s.m(j, k) * eps3(k, l, i);
                        b += s.m(i, k) * eps3(k, j, sg);
                    }
                    acc += a * b;
                }
            g(l, sg) = 0.5 * acc;
        }
    RecoveredMetric out;
    out.metric = Metric3(g);
    double d = s.m.determinant();
    out.orientation = d < 0.0 ? -1 : 1;
    return out;
}

double pairing1(const Metric3& metric, const Vec3& u, const Vec3& v)
{
    return u.dot(metric.g.inverse() * v);
}

double pairing2(const Metric3& metric, const Vec3& u, const Vec3& v)
{
    return u.dot(metric.g * v) / metric.g.determinant();
}

FormField wedge(const FormField& a, const FormField& b)
{
    if (!a.grid || !b.grid || *a.grid != *b.grid) throw GridMismatch("wedge operands live on different grids");
    int p = a.degree, q = b.degree;
    if (p + q > 3) throw DegreeOverflow("wedge of degree " + std::to_string(p) + " and " + std::to_string(q));
    if (a.slot != Slot::None && b.slot != Slot::None) throw DegreeOverflow("wedge supports a slot on at most one factor");
    Slot slot = a.slot != Slot::None ? a.slot : b.slot;
    int sdim = a.slot != Slot::None ? a.slot_dim : b.slot_dim;
    FormField out(a.grid, p + q, slot, sdim);
    const int na = a.ncomp(), nb = b.ncomp();
    parallel_for(a.grid->size(), [&](std::size_t i) {
        for (int s = 0; s < sdim; ++s) {
            int sa = a.slot != Slot::None ? s : 0;
            int sb = b.slot != Slot::None ? s : 0;
            const double* x = &a.v[i * a.stride() + sa * na];
            const double* y = &b.v[i * b.stride() + sb * nb];
            double* o = &out.v[i * out.stride() + s * out.ncomp()];
            if (p == 0) {
                for (int c = 0; c < nb; ++c) o[c] = x[0] * y[c];
            } else if (q == 0) {
                for (int c = 0; c < na; ++c) o[c] = x[c] * y[0];
            } else if (p == 1 && q == 1) {
                Vec3 r = wedge11(Vec3(x[0], x[1], x[2]), Vec3(y[0], y[1], y[2]));
                for (int c = 0; c < 3; ++c) o[c] = r[c];
            } else {
                // 1-form with 2-form in either order; sign (+1) since p*q is even.
                o[0] = x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
            }
        }
    });
    return out;
}

}  // namespace skyrme
