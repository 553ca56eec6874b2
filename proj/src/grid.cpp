#include "skyrme/grid.hpp"

#include <Eigen/Dense>

#include <sstream>

namespace skyrme {

namespace {

std::vector<double> axis_weights(int n, double h, bool periodic)
{
    std::vector<double> w(n, 0.0);
    if (periodic) {
        for (auto& x : w) x = h;
        return w;
    }
    int intervals = n - 1;
    // Composite Simpson; an odd interval count closes with a 3/8 panel.
    int simpson = (intervals % 2 == 0) ? intervals : intervals - 3;
    for (int i = 0; i < simpson; i += 2) {
        w[i] += h / 3.0;
        w[i + 1] += 4.0 * h / 3.0;
        w[i + 2] += h / 3.0;
    }
    if (simpson != intervals) {
        int b = simpson;
        w[b] += 3.0 * h / 8.0;
        w[b + 1] += 9.0 * h / 8.0;
        w[b + 2] += 9.0 * h / 8.0;
        w[b + 3] += 3.0 * h / 8.0;
    }
    return w;
}

Stencil make_stencil(std::initializer_list<int> shifts, std::initializer_list<double> coef, double h)
{
    Stencil s;
    s.count = static_cast<int>(shifts.size());
    int j = 0;
    for (int sh : shifts) s.shift[j++] = sh;
    j = 0;
    for (double c : coef) s.w[j++] = c / (12.0 * h);
    return s;
}

std::vector<Stencil> axis_stencils(int n, double h, bool periodic)
{
    std::vector<Stencil> st(n);
    Stencil central = make_stencil({-2, -1, 0, 1, 2}, {1, -8, 0, 8, -1}, h);
    for (int k = 0; k < n; ++k) st[k] = central;
    if (!periodic) {
        st[0] = make_stencil({0, 1, 2, 3, 4}, {-25, 48, -36, 16, -3}, h);
        st[1] = make_stencil({-1, 0, 1, 2, 3}, {-3, -10, 18, -6, 1}, h);
        st[n - 2] = make_stencil({-3, -2, -1, 0, 1}, {-1, 6, -18, 10, 3}, h);
        st[n - 1] = make_stencil({-4, -3, -2, -1, 0}, {3, -16, 36, -48, 25}, h);
    }
    return st;
}

}  // namespace

PatchGrid::PatchGrid(Vec3d lo, Vec3d hi, std::array<int, 3> n, std::array<bool, 3> periodic, double margin)
    : chart_lo_(lo), chart_hi_(hi), n_(n), periodic_(periodic), margin_(margin)
{
    for (int a = 0; a < 3; ++a) {
        if (!(hi[a] > lo[a]) || !std::isfinite(lo[a]) || !std::isfinite(hi[a])) {
            std::ostringstream os;
            os << "axis " << a << ": need lo < hi, got [" << lo[a] << ", " << hi[a] << "]";
            throw BoundsError(os.str());
        }
        if (n[a] < 5) throw ResolutionError("axis " + std::to_string(a) + ": need at least 5 points");
        if (!(margin >= 0.0)) throw BoundsError("margin must be non-negative");
        if (!periodic[a] && !(margin < (hi[a] - lo[a]) / 4.0))
            throw BoundsError("axis " + std::to_string(a) + ": margin must be below a quarter of the axis length");
        lo_[a] = periodic[a] ? lo[a] : lo[a] + margin;
        hi_[a] = periodic[a] ? hi[a] : hi[a] - margin;
        h_[a] = (hi_[a] - lo_[a]) / (periodic[a] ? n[a] : n[a] - 1);
        w_[a] = axis_weights(n[a], h_[a], periodic[a]);
        st_[a] = axis_stencils(n[a], h_[a], periodic[a]);
    }
    stride_ = {static_cast<std::size_t>(n[1]) * n[2], static_cast<std::size_t>(n[2]), 1};
}

std::array<int, 3> PatchGrid::unravel(std::size_t idx) const
{
    int k = static_cast<int>(idx % n_[2]);
    std::size_t r = idx / n_[2];
    int j = static_cast<int>(r % n_[1]);
    int i = static_cast<int>(r / n_[1]);
    return {i, j, k};
}

Vec3d PatchGrid::point(std::size_t idx) const
{
    auto ijk = unravel(idx);
    return {coord(0, ijk[0]), coord(1, ijk[1]), coord(2, ijk[2])};
}

double PatchGrid::weight(std::size_t idx) const
{
    auto ijk = unravel(idx);
    return w_[0][ijk[0]] * w_[1][ijk[1]] * w_[2][ijk[2]];
}

double PatchGrid::box_volume() const
{
    return (hi_[0] - lo_[0]) * (hi_[1] - lo_[1]) * (hi_[2] - lo_[2]);
}

std::size_t PatchGrid::neighbour(std::size_t idx, int axis, int k, int shift) const
{
    int kk = k + shift;
    if (periodic_[axis]) {
        kk %= n_[axis];
        if (kk < 0) kk += n_[axis];
    }
    return idx + static_cast<std::ptrdiff_t>(kk - k) * static_cast<std::ptrdiff_t>(stride_[axis]);
}

bool PatchGrid::operator==(const PatchGrid& o) const
{
    return lo_ == o.lo_ && hi_ == o.hi_ && n_ == o.n_ && periodic_ == o.periodic_;
}

GridPtr build_patch(Vec3d lo, Vec3d hi, std::array<int, 3> n, std::array<bool, 3> periodic, double margin)
{
    return std::make_shared<const PatchGrid>(lo, hi, n, periodic, margin);
}

FormField::FormField(GridPtr g, int deg, Slot s, int sdim) : grid(std::move(g)), degree(deg), slot(s), slot_dim(sdim)
{
    if (deg < 0 || deg > 3) throw DegreeOverflow("form degree must be 0..3");
    if (s == Slot::None) slot_dim = 1;
    v.assign(grid->size() * stride(), 0.0);
}

bool FormField::all_finite() const
{
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

ScalarField partial_derivative(const ScalarField& f, int axis, double period)
{
    const PatchGrid& g = *f.grid;
    ScalarField out(f.grid);
    parallel_for(g.size(), [&](std::size_t i) {
        out.v[i] = diff_at(g, i, axis, [&](std::size_t j) { return f.v[j]; }, period);
    });
    return out;
}

double integrate(const ScalarField& f, const ScalarField& density)
{
    if (!f.grid || !density.grid || *f.grid != *density.grid) throw GridMismatch("integrand and density live on different grids");
    return integrate_points(*f.grid, [&](std::size_t i) { return f.v[i] * density.v[i]; });
}

double integrate(const ScalarField& f)
{
    return integrate_points(*f.grid, [&](std::size_t i) { return f.v[i]; });
}

double richardson_margin(double m1, double v1, double m2, double v2, double p)
{
    double a = std::pow(m1, p), b = std::pow(m2, p);
    if (a == b) return v1;
    return (b * v1 - a * v2) / (b - a);
}

double extrapolate_margin(const std::vector<double>& m, const std::vector<double>& v, double p)
{
    const std::size_t k = m.size();
    if (k == 0 || v.size() != k) throw BoundsError("extrapolation needs matching, non-empty margin and value lists");
    if (k == 1) return v[0];
    Eigen::MatrixXd V(k, k);
    Eigen::VectorXd b(k);
    for (std::size_t i = 0; i < k; ++i) {
        V(i, 0) = 1.0;
        for (std::size_t j = 1; j < k; ++j) V(i, j) = std::pow(m[i], p + double(j - 1));
        b[i] = v[i];
    }
    return V.fullPivLu().solve(b)[0];
}

}  // namespace skyrme
