#pragma once

#include <array>
#include <string>
#include <vector>

#include "skyrme/gaugefield.hpp"

namespace skyrme {

/// BPS parameters (alpha, beta, gamma) and the matched energy coefficients.
struct BPSParams {
    double alpha = 0, beta = 0, gamma = 0;
    std::array<double, 6> c{1, 1, 0, 9, 0, 6};
};

/// c = (1, 1 + a^2, g^2, 9 + b^2, 2 a g, 2 (3 + a b)).
BPSParams bps_coefficients(double alpha, double beta, double gamma);

/// Pointwise densities at one grid point (all multiplied by sqrt det g_M
/// where they are energy densities).
struct PointEnergy {
    std::array<double, 6> terms{};  ///< the six c-weighted energy terms
    double sos = 0;                 ///< sum-of-squares form of the same density
    double charge = 0;              ///< phi^{*A}(V_N + mu) coordinate coefficient
    double charge_ip = 0;           ///< 1/3 <*d^A phi, phi^{*A}(Sigma + 3 mu#)> coefficient
    double orthogonality = 0;       ///< |<phi^{*A} nu, phi^{*A} mu#>| (no volume factor)
    double r1 = 0, r2 = 0;          ///< pointwise norms of the two BPS residuals
};

/// Requires c.gM; throws NotRiemannian if it is missing or not positive definite.
PointEnergy point_energy(const Configuration& c, std::size_t idx, const BPSParams& p);

struct EnergyReport {
    double energy = 0;
    std::array<double, 6> terms{};
    double energy_sos = 0;
    double sos_pointwise = 0;     ///< max |density - sos| / max(1, |density|)
    double orthogonality = 0;     ///< max pointwise |<nu, mu#>|
    double charge = 0;            ///< oriented integral of phi^{*A}(V_N + mu)
    double charge_crosscheck = 0; ///< max |q - q_ip|
    double volume_N = 0;
    double degree = 0;
    double bound = 0;             ///< 6 Vol(N) |deg|
    double gap = 0;
    double general_bound = 0;     ///< report only; NaN when undefined
    double r1 = 0, r2 = 0;
    BPSParams params;
};

/// Energy, terms and pointwise orthogonality (degree fields left at zero).
EnergyReport energy(const Configuration& c, const BPSParams& p);

struct BPSResiduals {
    double r1 = 0, r2 = 0;
};
BPSResiduals bps_residuals(const Configuration& c, const BPSParams& p);

/// Integrated charge and the pointwise density cross-check.
struct ChargeReport {
    double charge = 0, degree = 0, crosscheck = 0, volume_N = 0;
};
/// Throws MomentConditionFailed when the target fails its moment-map checks.
ChargeReport charge(const Configuration& c, double moment_tol = 1e-4);
double degree(const Configuration& c, double moment_tol = 1e-4);

/// E - 6 Vol(N) |deg|; throws ConstraintViolated if the sum-of-squares total
/// disagrees with the energy beyond rounding.
double bound_gap(const Configuration& c, const BPSParams& p);

/// Everything above in one pass.
EnergyReport full_report(const Configuration& c, const BPSParams& p, double moment_tol = 1e-4);

/// 6 sqrt(c1 (c3 (4 c2 c4 - c6^2) - c4 c5^2) / (4 c3 (9 c2 + c4 - 3 c6) - 9 c5^2)) Vol(N) |deg|.
double general_bound(const std::array<double, 6>& c, double volume_N, double degree);

/// Metric solving the first BPS equation for g_M.
struct BaseMetricSolution {
    std::vector<Metric3> metric;
    int orientation = 1;
    std::size_t nonriemannian = 0;
    std::size_t orientation_flips = 0;  ///< points whose orientation differs from the majority
    double max_trace_residual = 0;
};
/// Throws RankDeficient unless d^A phi has rank 3 everywhere and
/// TraceConstraintFailed if the trace residual exceeds tol * max(1, |m|).
BaseMetricSolution solve_base_metric(const Configuration& c, double tol = 1e-8);

/// Maurer-Cartan form of the energy for the round adjoint S^3 target.
/// Throws TargetMismatch for other targets.
double energy_su2_reduced(const Configuration& c, const BPSParams& p);

std::string report_json(const EnergyReport& r, int indent = 2);
std::string csv_header();
std::string csv_row(const std::string& family, const std::string& params, int n, double margin, const EnergyReport& r,
                    int exit_code);

}  // namespace skyrme
