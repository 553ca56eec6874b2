#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <memory>
#include <vector>

#include "skyrme/errors.hpp"
#include "skyrme/parallel.hpp"

namespace skyrme {

using Vec3d = std::array<double, 3>;

/// Finite-difference stencil for one point along one axis.
struct Stencil {
    int count = 0;
    std::array<int, 5> shift{};  ///< signed offset in points along the axis
    std::array<double, 5> w{};   ///< weights, already divided by h
};

/// Structured 3D coordinate box. Non-periodic axes are shrunk by the margin.
class PatchGrid {
public:
    PatchGrid(Vec3d lo, Vec3d hi, std::array<int, 3> n, std::array<bool, 3> periodic, double margin);

    const Vec3d& lo() const { return lo_; }
    const Vec3d& hi() const { return hi_; }
    const Vec3d& chart_lo() const { return chart_lo_; }
    const Vec3d& chart_hi() const { return chart_hi_; }
    const std::array<int, 3>& n() const { return n_; }
    const std::array<bool, 3>& periodic() const { return periodic_; }
    double margin() const { return margin_; }
    double h(int axis) const { return h_[axis]; }
    /// Period of a periodic axis, 0 otherwise.
    double period(int axis) const { return periodic_[axis] ? hi_[axis] - lo_[axis] : 0.0; }

    std::size_t size() const { return static_cast<std::size_t>(n_[0]) * n_[1] * n_[2]; }
    std::size_t stride(int axis) const { return stride_[axis]; }
    std::size_t index(int i, int j, int k) const { return i * stride_[0] + j * stride_[1] + k; }
    std::array<int, 3> unravel(std::size_t idx) const;

    double coord(int axis, int k) const { return lo_[axis] + k * h_[axis]; }
    Vec3d point(std::size_t idx) const;

    /// 1D quadrature weights along an axis.
    const std::vector<double>& weights(int axis) const { return w_[axis]; }
    double weight(std::size_t idx) const;
    /// Volume of the (shrunk) coordinate box.
    double box_volume() const;

    const Stencil& stencil(int axis, int k) const { return st_[axis][k]; }

    /// Index of the neighbour `shift` points away along `axis`, wrapping periodic axes.
    std::size_t neighbour(std::size_t idx, int axis, int k, int shift) const;

    bool operator==(const PatchGrid& o) const;
    bool operator!=(const PatchGrid& o) const { return !(*this == o); }

private:
    Vec3d lo_, hi_, chart_lo_, chart_hi_;
    std::array<int, 3> n_;
    std::array<bool, 3> periodic_;
    double margin_;
    Vec3d h_;
    std::array<std::size_t, 3> stride_;
    std::array<std::vector<double>, 3> w_;
    std::array<std::vector<Stencil>, 3> st_;
};

using GridPtr = std::shared_ptr<const PatchGrid>;

/// Validates the box and returns a shared grid.
GridPtr build_patch(Vec3d lo, Vec3d hi, std::array<int, 3> n, std::array<bool, 3> periodic, double margin);

/// Wraps x into (-P/2, P/2]; identity when P == 0.
inline double wrap_diff(double x, double P)
{
    if (P <= 0.0) return x;
    return x - P * std::round(x / P);
}

/// d/dx_axis of the sampled function get(idx) at grid point idx.
/// With period > 0 the values are treated as angles with that period.
template <class Get>
double diff_at(const PatchGrid& g, std::size_t idx, int axis, Get&& get, double period = 0.0)
{
    int k = g.unravel(idx)[axis];
    const Stencil& st = g.stencil(axis, k);
    double f0 = get(idx);
    double s = 0.0;
    for (int j = 0; j < st.count; ++j) {
        if (st.shift[j] == 0) continue;
        double fj = get(g.neighbour(idx, axis, k, st.shift[j]));
        s += st.w[j] * wrap_diff(fj - f0, period);
    }
    return s;
}

/// Scalar samples on a grid.
struct ScalarField {
    GridPtr grid;
    std::vector<double> v;

    ScalarField() = default;
    ScalarField(GridPtr g, double fill = 0.0) : grid(std::move(g)), v(grid->size(), fill) {}
    template <class F>
    static ScalarField sample(GridPtr g, F&& f)
    {
        ScalarField s(g);
        parallel_for(g->size(), [&](std::size_t i) { s.v[i] = f(g->point(i)); });
        return s;
    }
};

enum class Slot { None, Tangent, Lie };

/// Degree-p form with an optional vector slot. Degree-2 forms hold the
/// epsilon-dual components: w_{ls} = eps_{kls} w~_k. Layout per point is
/// [slot index][component].
struct FormField {
    GridPtr grid;
    int degree = 0;
    Slot slot = Slot::None;
    int slot_dim = 1;
    std::vector<double> v;

    FormField() = default;
    FormField(GridPtr g, int deg, Slot s = Slot::None, int sdim = 1);

    static int components(int deg) { return (deg == 0 || deg == 3) ? 1 : 3; }
    int ncomp() const { return components(degree); }
    int stride() const { return slot_dim * ncomp(); }
    double& at(std::size_t idx, int a, int c) { return v[idx * stride() + a * ncomp() + c]; }
    double at(std::size_t idx, int a, int c) const { return v[idx * stride() + a * ncomp() + c]; }
    bool all_finite() const;
};

ScalarField partial_derivative(const ScalarField& f, int axis, double period = 0.0);

/// Sum of f * density * weights over the grid.
double integrate(const ScalarField& f, const ScalarField& density);
double integrate(const ScalarField& f);

/// Weighted sum of per-point values val(idx) with deterministic order.
template <class F>
double integrate_points(const PatchGrid& g, F&& val)
{
    std::vector<double> buf(g.size());
    parallel_for(g.size(), [&](std::size_t i) { buf[i] = val(i) * g.weight(i); });
    return pairwise_sum(buf);
}

/// Same as integrate_points for K simultaneous integrands.
template <std::size_t K, class F>
std::array<double, K> integrate_points_many(const PatchGrid& g, F&& val)
{
    std::size_t n = g.size();
    std::vector<double> buf(n * K);
    parallel_for(n, [&](std::size_t i) {
        std::array<double, K> r = val(i);
        double w = g.weight(i);
        for (std::size_t c = 0; c < K; ++c) buf[c * n + i] = r[c] * w;
    });
    std::array<double, K> out{};
    for (std::size_t c = 0; c < K; ++c) out[c] = pairwise_sum(buf.data() + c * n, n);
    return out;
}

/// Max over points of val(idx), deterministic.
template <class F>
double max_points(const PatchGrid& g, F&& val)
{
    std::vector<double> buf(g.size());
    parallel_for(g.size(), [&](std::size_t i) { buf[i] = val(i); });
    double m = 0.0;
    for (double x : buf) {
        if (std::isnan(x)) return x;
        m = std::max(m, x);
    }
    return m;
}

/// Extrapolates V(m) = V0 + c m^p to m = 0 from two margins.
double richardson_margin(double m1, double v1, double m2, double v2, double p = 2.0);

/// Value at margin 0 of v(m) = a + b_0 m^p + b_1 m^(p+1) + ... fitted exactly
/// through all (m_i, v_i); two points reduce to richardson_margin.
double extrapolate_margin(const std::vector<double>& m, const std::vector<double>& v, double p = 2.0);

}  // namespace skyrme
