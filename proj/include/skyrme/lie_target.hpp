#pragma once

#include <array>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "skyrme/exterior.hpp"
#include "skyrme/su2.hpp"

namespace skyrme {

/// Structure constants f^a_bc stored as f[a][b][c].
struct LieAlgebraSpec {
    int dim = 1;
    std::string name;
    std::array<std::array<std::array<double, 3>, 3>, 3> f{};

    static LieAlgebraSpec su2();
    static LieAlgebraSpec u1();

    /// Coefficients of [x, y].
    Vec3 bracket(const Vec3& x, const Vec3& y) const;
    double antisymmetry_residual() const;
    double jacobi_residual() const;
};

/// Scalar profile on an interval with an optional analytic derivative.
struct Profile {
    std::function<double(double)> f;
    std::function<double(double)> df;

    double operator()(double x) const { return f(x); }
    double derivative(double x) const;
    static Profile constant(double c);
};

struct MomentCheck {
    double def_residual = 0;         ///< max |d mu(X) - iota_nu(X) V_N|
    double constraint_residual = 0;  ///< max |iota_nu(X) mu(X)|
    double homomorphism_residual = 0;
    double mu_equivariance = 0;
    double sigma_equivariance = 0;
    double sigma_duality = 0;
};

/// All geometric data of (N, g_N, G-action) in target coordinates y.
class TargetGeometry {
public:
    virtual ~TargetGeometry() = default;

    const LieAlgebraSpec& algebra() const { return alg_; }
    const std::string& name() const { return name_; }
    /// Chart box; `period` is > 0 on angular coordinates.
    const Vec3d& chart_lo() const { return lo_; }
    const Vec3d& chart_hi() const { return hi_; }
    double period(int axis) const { return period_[axis]; }
    /// Margin needed to stay clear of chart singularities.
    double singular_margin() const { return singular_margin_; }

    virtual Mat3 metric(const Vec3& y) const = 0;
    /// Signed coefficient v of V_N = v dy^1 ^ dy^2 ^ dy^3.
    virtual double volume_density(const Vec3& y) const = 0;
    /// Column a holds the components I_a^mu of nu(I_a).
    virtual Mat3 killing(const Vec3& y) const = 0;
    /// Row a holds the components mu_{a;mu} of mu(I_a).
    virtual Mat3 moment(const Vec3& y) const = 0;
    /// Image of y under exp(-lambda), i.e. the time-one flow of nu(lambda).
    virtual Vec3 flow(const Vec3& y, const Vec3& lambda) const = 0;
    virtual bool in_chart(const Vec3& y) const;
    /// Total volume of N (not only of the chart box).
    virtual double volume() const = 0;

    /// Group element U(y) for targets that are SU(2) itself.
    virtual std::optional<su2::Mat2c> su2_element(const Vec3&) const { return std::nullopt; }
    /// True for the round SU(2) with the adjoint action and the Maurer-Cartan moment map.
    virtual bool is_round_adjoint_s3() const { return false; }

    /// Column a holds mu^sharp(I_a) = G^{-1} mu_a.
    Mat3 mu_sharp(const Vec3& y) const;
    /// Dual components: Sigma^mu_{nu rho} = eps_{k nu rho} Sigma~(mu, k) = v G^{-1}.
    Mat3 sigma_dual(const Vec3& y) const;

    /// Cached moment-map diagnostics on the default grid.
    const MomentCheck& moment_status() const;

protected:
    TargetGeometry(std::string name, LieAlgebraSpec alg, Vec3d lo, Vec3d hi, Vec3d period, double margin)
        : alg_(std::move(alg)), name_(std::move(name)), lo_(lo), hi_(hi), period_(period), singular_margin_(margin)
    {
    }

private:
    LieAlgebraSpec alg_;
    std::string name_;
    Vec3d lo_, hi_, period_;
    double singular_margin_;
    mutable std::once_flag once_;
    mutable std::shared_ptr<MomentCheck> status_;
};

using TargetPtr = std::shared_ptr<const TargetGeometry>;

/// Full components Sigma^mu_{nu rho} as sigma[mu][nu][rho].
using SigmaComponents = std::array<std::array<std::array<double, 3>, 3>, 3>;
SigmaComponents sigma_eval(const TargetGeometry& t, const Vec3& y);

/// Max over basis triples of |g_N(u, Sigma(v, w)) - V_N(u, v, w)|.
double sigma_duality_residual(const TargetGeometry& t, const Vec3& y);

/// Finite-difference evaluation of the moment-map conditions on an n^3 grid
/// covering the chart (shrunk by the target's singular margin).
MomentCheck verify_moment_conditions(const TargetGeometry& t, int n = 64);

/// Fixed-U(1) fibred target over coordinates (theta, x, y).
struct U1FiberedSpec {
    std::function<double(double, double)> mu_x, mu_y, h, omega_x;
    Vec3d lo{0.0, 0.0, 0.0};
    Vec3d hi{2 * M_PI, M_PI / 2, 4 * M_PI};
    std::array<bool, 3> periodic{true, false, true};
    double margin = 0.05;
    int check_n = 32;
    double tol = 1e-5;
};

TargetPtr make_u1_fibered_target(const U1FiberedSpec& spec);
/// The round three-sphere with the adjoint U(1) action: mu = 1/4 sin^2 x dy.
TargetPtr make_u1_round_s3();

enum class Compactification { S3, S1xS2, Open };

/// Profiles defining an SU(2)-invariant metric and moment map on I x S^2.
struct AdjointIntervalFamily {
    Profile h1, h2, eta1, eta2;
    double xi_lo = 0.0, xi_hi = M_PI;
    Compactification mode = Compactification::S3;
    double margin = 0.05;

    static AdjointIntervalFamily round_s3();
};

/// Polar chart on S^2 with axis e_1: x = (cos u, sin u cos v, sin u sin v).
Vec3 s2_point(double u, double v);
Vec3 s2_du(double u, double v);
Vec3 s2_dv(double u, double v);
/// Inverse of s2_point; v in [0, 2 pi).
std::pair<double, double> s2_angles(const Vec3& x);

/// Target with coordinates (xi, u, v).
TargetPtr make_adjoint_interval_target(const AdjointIntervalFamily& fam);

/// Result of checking 2 h1 h2^2 = eta2' - eta1 and related profile conditions.
struct ProfileCheck {
    double constraint = 0;     ///< max |2 h1 h2^2 - eta2' + eta1|
    double min_h = 0;          ///< min(h1, h2) on the sample
    double eta1_integral = 0;  ///< int eta1 dxi
    double volume = 0;         ///< 4 pi int h1 h2^2 dxi
};
ProfileCheck check_adjoint_profiles(const AdjointIntervalFamily& fam);

/// SU(2) with the left action, volume K times the round one and
/// mu(X) = (K/4) tr(X theta_R). Coordinates (xi, u, v).
TargetPtr make_su2_left_target(double K);

/// iota_{nu_L(X)} mu(X) at a point for the left-action target.
double left_action_contraction(const TargetGeometry& t, const Vec3& X, const Vec3& y);

/// Mean contraction over unit basis X and sample points; K/2 for a valid target.
double left_action_obstruction(double K);

/// Static target (no action): metric evaluator only, u(1) with nu = 0, mu = 0.
TargetPtr make_static_target(std::function<Mat3(const Vec3&)> metric, Vec3d lo, Vec3d hi);

}  // namespace skyrme
