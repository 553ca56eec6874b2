#include "skyrme/energy_degree.hpp"

#include <cmath>
#include <iomanip>
#include <json.hpp>
#include <limits>
#include <sstream>

namespace skyrme {

namespace {

Mat3 cofactor(const Mat3& D)
{
    Mat3 c;
    for (int i = 0; i < 3; ++i) c.row(i) = Vec3(D.row((i + 1) % 3)).cross(Vec3(D.row((i + 2) % 3))).transpose();
    return c;
}

void require_metric(const Configuration& c)
{
    if (!c.has_metric() || c.gM.size() != c.size()) throw NotRiemannian("configuration has no base metric");
}

Metric3 checked_metric(const Configuration& c, std::size_t i)
{
    Metric3 m(c.gM[i]);
    if (!m.riemannian) throw NotRiemannian("base metric is not positive definite at grid point " + std::to_string(i));
    return m;
}

}  // namespace

BPSParams bps_coefficients(double alpha, double beta, double gamma)
{
    BPSParams p;
    p.alpha = alpha;
    p.beta = beta;
    p.gamma = gamma;
    p.c = {1.0, 1.0 + alpha * alpha, gamma * gamma, 9.0 + beta * beta, 2.0 * alpha * gamma, 2.0 * (3.0 + alpha * beta)};
    return p;
}

PointEnergy point_energy(const Configuration& c, std::size_t i, const BPSParams& p)
{
    const Metric3 met = checked_metric(c, i);
    const Mat3& G = met.g;
    const double detG = G.determinant();
    const double s = std::sqrt(detG);
    const Mat3 Gi = G.inverse();
    const int o = c.orientation;
    const int dim = c.target->algebra().dim;
    PointFields pf = point_fields(c, i);
    const Mat3& D = pf.D;
    const Mat3& H = pf.H;

    Mat3 S = pf.v * pf.Hi * cofactor(D);
    Mat3 Nu = Mat3::Zero(), Ms = Mat3::Zero();
    Mat3 sharp = pf.Hi * pf.mu.transpose();
    for (int a = 0; a < dim; ++a) {
        Nu += pf.I.col(a) * pf.Ft.row(a);
        Ms += sharp.col(a) * pf.Ft.row(a);
    }
    // pairing of TN-valued 2-forms times the volume factor
    auto pair = [&](const Mat3& X, const Mat3& Y) { return (H * X * G * Y.transpose()).trace() / s; };

    PointEnergy e;
    const auto& cc = p.c;
    e.terms[0] = cc[0] * s * (H * D * Gi * D.transpose()).trace();
    e.terms[1] = cc[1] * pair(S, S);
    e.terms[2] = cc[2] * pair(Nu, Nu);
    e.terms[3] = cc[3] * pair(Ms, Ms);
    e.terms[4] = cc[4] * pair(Nu, S);
    e.terms[5] = cc[5] * pair(Ms, S);

    Mat3 P = S + 3 * Ms;
    Mat3 starD = o * s * D * Gi;
    Mat3 R1 = starD - P;
    Mat3 R2 = p.alpha * S + p.beta * Ms + p.gamma * Nu;
    e.charge = pf.v * D.determinant();
    for (int a = 0; a < dim; ++a) e.charge += pf.mu.row(a) * D * pf.Ft.row(a).transpose();
    e.charge_ip = (H * D * P.transpose()).trace() / 3.0;
    e.sos = pair(R1, R1) + pair(R2, R2) + 6.0 * o * e.charge_ip;
    e.orthogonality = std::abs(pair(Nu, Ms) / s);
    // g_N length of each M-chart component; gauge transforms act only on the TN index
    auto comp_norm = [&](const Mat3& R) {
        double m = 0;
        for (int k = 0; k < 3; ++k) m = std::max(m, std::sqrt(std::max(0.0, R.col(k).dot(H * R.col(k)))));
        return m;
    };
    e.r1 = comp_norm(R1);
    e.r2 = comp_norm(R2);
    return e;
}

EnergyReport energy(const Configuration& c, const BPSParams& p)
{
    require_metric(c);
    const PatchGrid& g = *c.grid;
    const std::size_t N = c.size();
    std::vector<PointEnergy> pe(N);
    parallel_for(N, [&](std::size_t i) { pe[i] = point_energy(c, i, p); });
    auto ints = integrate_points_many<7>(g, [&](std::size_t i) {
        std::array<double, 7> v;
        for (int k = 0; k < 6; ++k) v[k] = pe[i].terms[k];
        v[6] = pe[i].sos;
        return v;
    });
    EnergyReport r;
    r.params = p;
    for (int k = 0; k < 6; ++k) {
        r.terms[k] = ints[k];
        r.energy += ints[k];
    }
    r.energy_sos = ints[6];
    for (std::size_t i = 0; i < N; ++i) {
        double dens = 0;
        for (double t : pe[i].terms) dens += t;
        r.sos_pointwise = std::max(r.sos_pointwise, std::abs(dens - pe[i].sos) / std::max(1.0, std::abs(dens)));
        r.orthogonality = std::max(r.orthogonality, pe[i].orthogonality);
        r.r1 = std::max(r.r1, pe[i].r1);
        r.r2 = std::max(r.r2, pe[i].r2);
    }
    return r;
}

BPSResiduals bps_residuals(const Configuration& c, const BPSParams& p)
{
    require_metric(c);
    BPSResiduals r;
    r.r1 = max_points(*c.grid, [&](std::size_t i) { return point_energy(c, i, p).r1; });
    r.r2 = max_points(*c.grid, [&](std::size_t i) { return point_energy(c, i, p).r2; });
    return r;
}

ChargeReport charge(const Configuration& c, double moment_tol)
{
    const TargetGeometry& t = *c.target;
    const MomentCheck& m = t.moment_status();
    if (m.def_residual > moment_tol || m.constraint_residual > moment_tol)
        throw MomentConditionFailed("target '" + t.name() + "' fails the moment-map conditions (definition residual " +
                                    std::to_string(m.def_residual) + ", constraint residual " +
                                    std::to_string(m.constraint_residual) + ")");
    const int dim = t.algebra().dim;
    const std::size_t N = c.size();
    std::vector<double> q(N), cross(N);
    parallel_for(N, [&](std::size_t i) {
        PointFields pf = point_fields(c, i);
        double v = pf.v * pf.D.determinant();
        Mat3 P = pf.v * pf.Hi * cofactor(pf.D);
        Mat3 sharp = pf.Hi * pf.mu.transpose();
        for (int a = 0; a < dim; ++a) {
            v += pf.mu.row(a) * pf.D * pf.Ft.row(a).transpose();
            P += 3 * sharp.col(a) * pf.Ft.row(a);
        }
        q[i] = v;
        cross[i] = std::abs(v - (pf.H * pf.D * P.transpose()).trace() / 3.0);
    });
    ChargeReport r;
    r.charge = c.orientation * integrate_points(*c.grid, [&](std::size_t i) { return q[i]; });
    r.volume_N = t.volume();
    r.degree = r.charge / r.volume_N;
    for (double x : cross) r.crosscheck = std::max(r.crosscheck, x);
    return r;
}

double degree(const Configuration& c, double moment_tol) { return charge(c, moment_tol).degree; }

double general_bound(const std::array<double, 6>& c, double volume_N, double deg)
{
    double num = c[0] * (c[2] * (4 * c[1] * c[3] - c[5] * c[5]) - c[3] * c[4] * c[4]);
    double den = 4 * c[2] * (9 * c[1] + c[3] - 3 * c[5]) - 9 * c[4] * c[4];
    if (den == 0.0 || num / den < 0) return std::numeric_limits<double>::quiet_NaN();
    return 6 * std::sqrt(num / den) * volume_N * std::abs(deg);
}

EnergyReport full_report(const Configuration& c, const BPSParams& p, double moment_tol)
{
    EnergyReport r = energy(c, p);
    ChargeReport q = charge(c, moment_tol);
    r.charge = q.charge;
    r.degree = q.degree;
    r.volume_N = q.volume_N;
    r.charge_crosscheck = q.crosscheck;
    r.bound = 6 * q.volume_N * std::abs(q.degree);
    r.gap = r.energy - r.bound;
    r.general_bound = general_bound(p.c, q.volume_N, q.degree);
    return r;
}

double bound_gap(const Configuration& c, const BPSParams& p)
{
    EnergyReport r = full_report(c, p);
    if (std::abs(r.energy - r.energy_sos) > 1e-9 * std::max(1.0, std::abs(r.energy)))
        throw ConstraintViolated("sum-of-squares total " + std::to_string(r.energy_sos) + " differs from energy " +
                                 std::to_string(r.energy));
    return r.gap;
}

BaseMetricSolution solve_base_metric(const Configuration& c, double tol)
{
    const std::size_t N = c.size();
    RankProfile rp = rank_profile(c);
    if (rp.histogram[3] != N)
        throw RankDeficient(std::to_string(N - rp.histogram[3]) + " grid points where d^A phi has rank below 3");
    const int dim = c.target->algebra().dim;
    std::vector<StarMap> stars(N);
    std::vector<double> res(N);
    parallel_for(N, [&](std::size_t i) {
        PointFields pf = point_fields(c, i);
        Mat3 P = pf.v * pf.Hi * cofactor(pf.D);
        Mat3 sharp = pf.Hi * pf.mu.transpose();
        for (int a = 0; a < dim; ++a) P += 3 * sharp.col(a) * pf.Ft.row(a);
        stars[i].m = pf.D.inverse() * P;
        res[i] = star_trace_residual(stars[i]);
    });
    BaseMetricSolution sol;
    for (std::size_t i = 0; i < N; ++i) {
        sol.max_trace_residual = std::max(sol.max_trace_residual, res[i]);
        if (res[i] > tol * std::max(1.0, stars[i].m.norm()))
            throw TraceConstraintFailed("trace residual " + std::to_string(res[i]) + " at grid point " + std::to_string(i));
    }
    sol.metric.resize(N);
    std::vector<int> orient(N);
    parallel_for(N, [&](std::size_t i) {
        RecoveredMetric rm = recover_metric(stars[i], 1.0);
        sol.metric[i] = rm.metric;
        orient[i] = rm.orientation;
    });
    std::size_t pos = 0;
    for (std::size_t i = 0; i < N; ++i) {
        if (orient[i] > 0) ++pos;
        if (!sol.metric[i].riemannian) ++sol.nonriemannian;
    }
    sol.orientation = 2 * pos >= N ? 1 : -1;
    for (std::size_t i = 0; i < N; ++i)
        if (orient[i] != sol.orientation) ++sol.orientation_flips;
    return sol;
}

double energy_su2_reduced(const Configuration& c, const BPSParams& p)
{
    if (!c.target->is_round_adjoint_s3()) throw TargetMismatch("reduced energy needs the round adjoint S^3 target");
    require_metric(c);
    const PatchGrid& g = *c.grid;
    const std::size_t N = c.size();
    std::vector<double> q(4 * N);
    parallel_for(N, [&](std::size_t i) {
        Eigen::Vector4d qi = su2::quat(*c.target->su2_element(c.phi_at(i)));
        for (int k = 0; k < 4; ++k) q[4 * i + k] = qi[k];
    });
    const auto& cc = p.c;
    return integrate_points(g, [&](std::size_t i) {
        const Metric3 met = checked_metric(c, i);
        const Mat3& G = met.g;
        const double s = std::sqrt(G.determinant());
        PointFields pf = point_fields(c, i);
        su2::Mat2c U = su2::from_quat(Eigen::Vector4d(q[4 * i], q[4 * i + 1], q[4 * i + 2], q[4 * i + 3]));
        su2::Mat2c Ui = U.adjoint();
        Mat3 L;  // L(b, lambda)
        for (int l = 0; l < 3; ++l) {
            Eigen::Vector4d dq;
            for (int k = 0; k < 4; ++k) dq[k] = diff_at(g, i, l, [&](std::size_t j) { return q[4 * j + k]; });
            su2::Mat2c Al = su2::from_coeffs(pf.A.col(l));
            L.col(l) = su2::coeffs(Ui * (su2::from_quat(dq) + Al * U - U * Al));
        }
        Mat3 W = Mat3::Zero();  // dual components of L ^ L
        for (int a = 0; a < 3; ++a)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l)
                    for (int t = 0; t < 3; ++t) {
                        double e1 = eps3(k, l, t);
                        if (e1 == 0) continue;
                        for (int b = 0; b < 3; ++b)
                            for (int d = 0; d < 3; ++d) W(a, k) += e1 * eps3(a, b, d) * L(b, l) * L(d, t);
                    }
        const Mat3& F = pf.Ft;
        Mat3 UFU = su2::adjoint(Ui) * F;
        auto pair = [&](const Mat3& X, const Mat3& Y) { return (X * G * Y.transpose()).trace() / s; };
        return cc[0] * s * (L * G.inverse() * L.transpose()).trace() + cc[1] / 4 * pair(W, W) +
               0.5 * (4 * cc[2] + cc[3]) * pair(F, F) + 0.5 * (cc[3] - 4 * cc[2]) * pair(F, UFU) +
               0.25 * pair((2 * cc[4] - cc[5]) * F - (2 * cc[4] + cc[5]) * UFU, W);
    });
}

// ------------------------------------------------------------------ output

namespace {

nlohmann::json num(double x)
{
    if (!std::isfinite(x)) return nullptr;
    return x;
}

std::string fmt(double x)
{
    if (!std::isfinite(x)) return "nan";
    std::ostringstream os;
    os << std::setprecision(12) << x;
    return os.str();
}

}  // namespace

std::string report_json(const EnergyReport& r, int indent)
{
    nlohmann::json j;
    j["energy"] = num(r.energy);
    nlohmann::json terms = nlohmann::json::array();
    for (double t : r.terms) terms.push_back(num(t));
    j["terms"] = terms;
    j["energy_sos"] = num(r.energy_sos);
    j["sos_pointwise"] = num(r.sos_pointwise);
    j["orthogonality"] = num(r.orthogonality);
    j["charge"] = num(r.charge);
    j["charge_crosscheck"] = num(r.charge_crosscheck);
    j["volume_N"] = num(r.volume_N);
    j["degree"] = num(r.degree);
    j["bound"] = num(r.bound);
    j["gap"] = num(r.gap);
    j["general_bound"] = num(r.general_bound);
    j["r1"] = num(r.r1);
    j["r2"] = num(r.r2);
    j["params"] = {{"alpha", r.params.alpha}, {"beta", r.params.beta}, {"gamma", r.params.gamma}, {"c", r.params.c}};
    return j.dump(indent);
}

std::string csv_header() { return "family,params,n,margin,E,deg,bound,gap,r1,r2,exit"; }

std::string csv_row(const std::string& family, const std::string& params, int n, double margin, const EnergyReport& r,
                    int exit_code)
{
    auto quote = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string o = "\"";
        for (char ch : s) o += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        return o + "\"";
    };
    std::ostringstream os;
    os << quote(family) << ',' << quote(params) << ',' << n << ',' << fmt(margin) << ',' << fmt(r.energy) << ','
       << fmt(r.degree) << ',' << fmt(r.bound) << ',' << fmt(r.gap) << ',' << fmt(r.r1) << ',' << fmt(r.r2) << ','
       << exit_code;
    return os.str();
}

}  // namespace skyrme
