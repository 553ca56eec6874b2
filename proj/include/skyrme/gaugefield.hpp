#pragma once

#include <functional>
#include <string>
#include <vector>

#include "skyrme/exterior.hpp"
#include "skyrme/grid.hpp"
#include "skyrme/lie_target.hpp"

namespace skyrme {

/// Gauged Skyrme pair (phi, A) over a patch, plus the base metric.
struct Configuration {
    GridPtr grid;
    TargetPtr target;
    std::vector<double> phi;  ///< 3 per point: phi^mu
    std::vector<double> A;    ///< 9 per point: A^a_lambda at [a * 3 + lambda]
    std::vector<Mat3> gM;     ///< base metric per point; empty when unknown
    int orientation = 1;
    std::string label;

    Configuration() = default;
    Configuration(GridPtr g, TargetPtr t);

    std::size_t size() const { return grid->size(); }
    Vec3 phi_at(std::size_t i) const { return {phi[3 * i], phi[3 * i + 1], phi[3 * i + 2]}; }
    /// Row a holds A^a.
    Mat3 A_at(std::size_t i) const;
    void set_phi(std::size_t i, const Vec3& y);
    void set_A(std::size_t i, const Mat3& a);
    bool has_metric() const { return !gM.empty(); }

    /// Throws ChartExit if some phi(x) is outside the target chart.
    void check_chart() const;
};

/// Derived quantities at one grid point. D(mu, lambda) = d^A phi, Ft(a, k)
/// holds the dual components of F^a.
struct PointFields {
    Vec3 y;
    Mat3 dphi, D, Ft, A;
    Mat3 H, Hi;  ///< g_N(phi) and its inverse
    double v = 0;  ///< signed V_N coefficient at phi
    Mat3 I, mu;    ///< Killing columns and moment rows at phi
};

PointFields point_fields(const Configuration& c, std::size_t idx);

/// Curvature dual components F~^a_k = eps_{kls} d_l A^a_s + 1/2 f^a_bc (A^b x A^c)_k.
FormField curvature(const Configuration& c);

/// d^A phi as a tangent-valued 1-form: at(i, mu, lambda).
FormField covariant_differential(const Configuration& c);

/// max |d F^a + f^a_bc A^b ^ F^c| over points (3-form coefficient).
double bianchi_residual(const Configuration& c);

/// Equivariant form of bidegree (p, q) given by coefficient evaluators at y.
/// Coefficient layout: [tangent index mu if tangent-valued][a if p = 1][form component].
struct EquivariantForm {
    std::string name;
    int p = 0, q = 0;
    bool tangent = false;
    std::function<void(const TargetGeometry&, const Vec3&, double*)> coeff;

    int degree() const { return 2 * p + q; }
    int coeff_size(int dim) const;

    static EquivariantForm volume();       ///< V_N, (0,3)
    static EquivariantForm moment();       ///< mu, (1,1)
    static EquivariantForm sigma();        ///< Sigma, (0,2) tangent-valued
    static EquivariantForm killing();      ///< nu, (1,0) tangent-valued
    static EquivariantForm moment_sharp(); ///< mu^sharp, (1,0) tangent-valued
    static EquivariantForm identity();     ///< I, (0,1) tangent-valued
    /// mu(I_a) viewed as an invariant 1-form; only equivariant for abelian algebras.
    static EquivariantForm moment_slice(int a);
    /// Invariant q-form with coefficients from an evaluator (p = 0, scalar-valued).
    static EquivariantForm invariant(std::string name, int q, std::function<void(const Vec3&, double*)> f);
};

/// phi^{*A} beta as a form of degree 2p + q on M.
FormField equivariant_pullback(const Configuration& c, const EquivariantForm& beta);

/// max |phi^{*A}(d_g beta) - d(phi^{*A} beta)| for scalar-valued beta of degree <= 2.
double pullback_naturality_residual(const Configuration& c, const EquivariantForm& beta);

/// Gauge parameter lambda^a(x), 3 values per point (only the first dim used).
struct GaugeTransform {
    GridPtr grid;
    std::vector<double> lambda;

    static GaugeTransform sample(GridPtr g, const std::function<Vec3(const Vec3d&)>& f);
    Vec3 at(std::size_t i) const { return {lambda[3 * i], lambda[3 * i + 1], lambda[3 * i + 2]}; }
    GaugeTransform scaled(double t) const;
};

/// Finite transform: phi -> exp(-lambda).phi, A -> g^{-1} dg + g^{-1} A g with g = exp(lambda).
Configuration gauge_transform(const Configuration& c, const GaugeTransform& g);

/// First-order variation: phi_dot = nu(lambda), A_dot = d lambda + [A, lambda].
struct GaugeVariation {
    std::vector<double> phi_dot;  ///< 3 per point
    std::vector<double> A_dot;    ///< 9 per point
};
GaugeVariation gauge_variation(const Configuration& c, const GaugeTransform& g);

struct RankProfile {
    std::vector<int> rank_D;      ///< rank of d^A phi per point
    std::vector<int> rank_sigma;  ///< rank of phi^{*A} Sigma per point
    std::array<std::size_t, 4> histogram{};
    std::size_t lemma_violations = 0;  ///< points with rk < 3 and rk(Sigma) != max(rk - 1, 0)
    double max_trace_residual = 0;     ///< trace residual of D^{-1}(S + 3 M) where rk = 3
    double max_sigma = 0;              ///< max |phi^{*A} Sigma| where rk < 3
};
RankProfile rank_profile(const Configuration& c, double rel_threshold = 1e-8);

/// Numerical rank from singular values with a threshold relative to `scale`.
int numerical_rank(const Mat3& m, double abs_threshold);

/// Self-describing snapshots; loading needs the matching target.
void save_snapshot_json(const Configuration& c, const std::string& path);
Configuration load_snapshot_json(const std::string& path, TargetPtr target);
void save_snapshot_binary(const Configuration& c, const std::string& path);
Configuration load_snapshot_binary(const std::string& path, TargetPtr target);

}  // namespace skyrme
