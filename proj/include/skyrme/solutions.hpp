#pragma once

#include <complex>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "skyrme/energy_degree.hpp"

namespace skyrme {

/// Riemann surface in a conformal chart (s, t): g_C = Omega (ds^2 + dt^2).
/// With `mercator` set, s spans [-S(m), S(m)] with S(m) = -ln tan(m/2), so a
/// margin m removes polar caps of angle m; t is 2 pi periodic.
struct SurfaceGeometry {
    std::string name;
    std::function<double(double, double)> omega;
    std::function<double(double, double)> gauss;  ///< declared K
    int chi = 2;
    bool mercator = true;
    double s_lo = 0, s_hi = 0;  ///< chart range when not mercator

    /// Round sphere of radius R (K = 1/R^2).
    static SurfaceGeometry sphere(double R = 1.0);
    /// Sphere with Omega = sech^2(s) exp(2 eps tanh s); non-constant K.
    static SurfaceGeometry deformed_sphere(double eps);

    /// s range for a given margin.
    std::array<double, 2> s_range(double margin) const;
    /// K = -Laplacian(ln Omega) / (2 Omega) by a pointwise 4th-order stencil.
    double gauss_fd(double s, double t, double h = 1e-3) const;
    /// Max |K_fd - K| on an n x n sample of the window.
    double gauss_consistency(int n, double margin) const;
    /// Integral of K omega_C over the window and the window area.
    std::array<double, 2> gauss_bonnet(int n, double margin) const;
};

/// Family output: configuration plus family-specific scalar diagnostics.
struct Solution {
    std::string family;
    Configuration config;
    BPSParams params;
    std::vector<unsigned char> nonriemannian;  ///< per point, 1 where the metric coefficient is <= 0
    std::size_t nonriemannian_count = 0;
    std::map<std::string, double> checks;
    std::string topology;  ///< closure of M implied by the metric, when the family decides it
};

// ------------------------------------------------------------- principal orbit S^1

/// Metric solving the first BPS equation for the identity map on a fibred
/// U(1) target: g_mu + (1 + 3 *_N(F ^ mu)) g_C, evaluated from d^A phi and F~.
Mat3 identity_u1_metric(const TargetGeometry& t, const Vec3& y, const Mat3& D, const Vec3& Ft);

/// Identity map with A = A_x(theta, x) dx on the target chart shrunk by margin.
/// Throws NotRiemannian if the conformal factor is not positive.
Solution identity_u1_solution(TargetPtr target, std::function<double(double, double)> Ax, int n, double margin);

// ------------------------------------------------------------- principal orbit S^2

/// Interval target with h1 = 1, eta1 = -1/3, eta2 = 0, h2^2 = 1/6 on [0.25, 1].
TargetPtr dirac_target(double xi_lo = 0.25, double xi_hi = 1.0);

/// Dirac monopole xi = 1/(2r) on a log-radial spherical chart (rho = ln r,
/// theta, varphi), r in [r_min, r_max], with the upper-patch connection.
Solution dirac_monopole(int n, double margin, double r_min = 0.5, double r_max = 2.0, double beta = 0.0);

/// Target with h1 = 1, h2 = sin, eta1 = -2 sin^2, eta2 = 0 (round metric, eta2 = 0 moment map).
TargetPtr eta2_free_s3_target();

/// Spinor-bundle connection on I x C with constant Phi; target must have h1 = 1.
Solution spinorial_solution(const SurfaceGeometry& surface, const AdjointIntervalFamily& fam, int n, double margin,
                            double gamma = 0.0);

/// Spinorial connection plus B Phi dxi with B = alpha / (2 gamma). Target needs
/// h1 = 1 and eta2 = 0. Throws ParamInconsistent if gamma = 0 or alpha != 0
/// without constant K and h2^2 = beta eta1 (K - 1) / (2 alpha).
Solution twisted_spinorial_solution(const SurfaceGeometry& surface, const AdjointIntervalFamily& fam, double alpha,
                                    double beta, double gamma, int n, double margin);

struct SphericalParams {
    double C1 = 1, C2 = -1, alpha = 1, beta = 2, gamma = 0;
    double xi_lo = 0.2, xi_hi = 1.5;
    /// h1 profile; h2 follows from h1 h2^2. Default h1 = 1.
    std::function<double(double)> h1;
};
/// Target profiles of the spherical family: f, eta1, eta2 and h1 h2^2 from (C1, C2, alpha, beta).
AdjointIntervalFamily spherical_target_family(const SphericalParams& p);
/// Identity map with A = (f - 1)/2 x dx. Throws ParamInconsistent for excluded parameters.
Solution spherical_solution(const SphericalParams& p, int n, double margin);

/// Data of the symplectic family on I x C: U(1) connection a = a_s ds + a_t dt,
/// section w = w_s ds + w_t dt (may depend on xi), and the chart.
struct SymplecticData {
    SurfaceGeometry chart;
    std::function<std::array<double, 2>(double, double)> a;                          ///< (a_s, a_t)(s, t)
    std::function<double(double, double)> da;                                        ///< d a_t/ds - d a_s/dt; FD if empty
    std::function<std::array<std::complex<double>, 2>(double, double, double)> w;    ///< (w_s, w_t)(xi, s, t)

    /// Round S^2 data in Mercator coordinates; w is rescaled by lambda(xi) =
    /// exp(kappa sin xi) along s and 1/lambda along t (kappa = 0: xi-independent).
    static SymplecticData round_sphere(double kappa = 0.0);
};
/// Throws NormalizationFailed if 2i w ^ w_bar != -2 da beyond 1e-10 (relative).
Solution symplectic_solution(const SymplecticData& data, const AdjointIntervalFamily& fam, double beta, int n,
                             double margin, double norm_scale = 1.0);

}  // namespace skyrme
