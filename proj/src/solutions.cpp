#include "skyrme/solutions.hpp"

#include <cmath>

namespace skyrme {

namespace {

using cd = std::complex<double>;

template <class F>
double d4(F&& f, double x, double h = 1e-3)
{
    return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
}

template <class F>
double dd4(F&& f, double x, double h = 1e-3)
{
    return (-f(x - 2 * h) + 16 * f(x - h) - 30 * f(x) + 16 * f(x + h) - f(x + 2 * h)) / (12 * h * h);
}

double mercator_extent(double m)
{
    if (!(m > 0)) throw BoundsError("a Mercator sphere chart needs a positive margin");
    return -std::log(std::tan(m / 2));
}

// Grid on I x C with axes (xi, s, t); xi is shrunk by the margin only when its
// ends are singular, the surface axis follows its chart policy.
GridPtr interval_surface_grid(double xi_lo, double xi_hi, bool xi_singular, const SurfaceGeometry& S, int n, double m)
{
    auto sr = S.s_range(m);
    double s_lo = S.mercator ? sr[0] - m : S.s_lo;
    double s_hi = S.mercator ? sr[1] + m : S.s_hi;
    double x_lo = xi_singular ? xi_lo : xi_lo - m;
    double x_hi = xi_singular ? xi_hi : xi_hi + m;
    return build_patch({x_lo, s_lo, 0.0}, {x_hi, s_hi, 2 * M_PI}, {n, n, n}, {false, false, true}, m);
}

const Vec3 kPhiE3{0.0, M_PI / 2, M_PI / 2};  // chart point of Phi = I_3

// su(2) coefficients of [[-i a, -conj w], [w, i a]] along one direction.
Vec3 block_coeffs(double a, cd w) { return {-w.imag(), w.real(), a}; }

void check_unit_h1(const AdjointIntervalFamily& fam, const char* who)
{
    for (double t : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        double x = fam.xi_lo + t * (fam.xi_hi - fam.xi_lo);
        if (std::abs(fam.h1(x) - 1) > 1e-12) throw ParamInconsistent(std::string(who) + " needs a target with h1 = 1");
    }
}

void check_eta2_zero(const AdjointIntervalFamily& fam, const char* who)
{
    for (double t : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        double x = fam.xi_lo + t * (fam.xi_hi - fam.xi_lo);
        if (std::abs(fam.eta2(x)) > 1e-12) throw ParamInconsistent(std::string(who) + " needs a target with eta2 = 0");
    }
}

void mark_metric(Solution& sol, std::size_t i, double coeff)
{
    if (coeff <= 0) {
        sol.nonriemannian[i] = 1;
        ++sol.nonriemannian_count;
    }
}

// Spinor-bundle connection in the explicit gauge with optional B Phi dxi term.
Solution spinor_bundle_configuration(const std::string& family, const SurfaceGeometry& S, const AdjointIntervalFamily& fam,
                                     double B, int n, double m, const BPSParams& p)
{
    TargetPtr target = make_adjoint_interval_target(fam);
    bool singular = fam.mode != Compactification::Open;
    GridPtr g = interval_surface_grid(fam.xi_lo, fam.xi_hi, singular, S, n, m);
    Solution sol;
    sol.family = family;
    sol.params = p;
    sol.config = Configuration(g, target);
    sol.config.label = family;
    sol.config.gM.resize(g->size());
    sol.nonriemannian.assign(g->size(), 0);
    for (std::size_t i = 0; i < g->size(); ++i) {
        auto x = g->point(i);
        double xi = x[0], s = x[1], t = x[2];
        double Om = S.omega(s, t);
        auto lnO = [&](double a, double b) { return std::log(S.omega(a, b)); };
        double Ls = d4([&](double a) { return lnO(a, t); }, s);
        double Lt = d4([&](double b) { return lnO(s, b); }, t);
        cd w_s = 0.5 * std::sqrt(Om), w_t = cd(0, 0.5 * std::sqrt(Om));
        Mat3 A;
        A.col(0) = Vec3(0, 0, B);
        A.col(1) = block_coeffs(-0.25 * Lt, w_s);
        A.col(2) = block_coeffs(0.25 * Ls, w_t);
        sol.config.set_phi(i, Vec3(xi, kPhiE3[1], kPhiE3[2]));
        sol.config.set_A(i, A);
        double h2 = fam.h2(xi);
        double coeff = h2 * h2 + 1.5 * fam.eta1(xi) * (1 - S.gauss(s, t));
        sol.config.gM[i] = Vec3(1.0, coeff * Om, coeff * Om).asDiagonal();
        mark_metric(sol, i, coeff);
    }
    return sol;
}

// max |F~ - 1/2 (1 - K) Omega e_xi (x) Phi| and max |d^A Phi - sqrt(Omega)(e1 ds + e2 dt)|.
void spinor_identities(Solution& sol, const SurfaceGeometry& S, double B)
{
    const Configuration& c = sol.config;
    const PatchGrid& g = *c.grid;
    Vec3 xu = s2_du(kPhiE3[1], kPhiE3[2]), xv = s2_dv(kPhiE3[1], kPhiE3[2]);
    double curv = 0, dphi = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        auto x = g.point(i);
        PointFields pf = point_fields(c, i);
        double Om = S.omega(x[1], x[2]);
        Mat3 Fe = Mat3::Zero();
        Fe(2, 0) = 0.5 * (1 - S.gauss(x[1], x[2])) * Om;
        // -B dxi ^ d^A Phi: dxi ^ ds has dual index t, dxi ^ dt has dual index s (with sign)
        Vec3 e1(1, 0, 0), e2(0, 1, 0);
        Fe.col(2) -= B * std::sqrt(Om) * e1;
        Fe.col(1) += B * std::sqrt(Om) * e2;
        curv = std::max(curv, (pf.Ft - Fe).cwiseAbs().maxCoeff());
        Mat3 Dphi;  // su(2) coefficients of d^A Phi, column lambda
        for (int l = 0; l < 3; ++l) Dphi.col(l) = xu * pf.D(1, l) + xv * pf.D(2, l);
        Mat3 De = Mat3::Zero();
        De.col(1) = std::sqrt(Om) * e1;
        De.col(2) = std::sqrt(Om) * e2;
        dphi = std::max(dphi, (Dphi - De).cwiseAbs().maxCoeff());
    }
    sol.checks["curvature_identity"] = curv;
    sol.checks["dphi_identity"] = dphi;
}

}  // namespace

// ------------------------------------------------------------------ surfaces

SurfaceGeometry SurfaceGeometry::sphere(double R)
{
    SurfaceGeometry s;
    s.name = "s2-round";
    s.omega = [R](double x, double) { return R * R / (std::cosh(x) * std::cosh(x)); };
    s.gauss = [R](double, double) { return 1.0 / (R * R); };
    s.chi = 2;
    return s;
}

SurfaceGeometry SurfaceGeometry::deformed_sphere(double eps)
{
    SurfaceGeometry s;
    s.name = "s2-deformed";
    s.omega = [eps](double x, double) { return std::exp(2 * eps * std::tanh(x)) / (std::cosh(x) * std::cosh(x)); };
    s.gauss = [eps](double x, double) { return (1 + 2 * eps * std::tanh(x)) * std::exp(-2 * eps * std::tanh(x)); };
    s.chi = 2;
    return s;
}

std::array<double, 2> SurfaceGeometry::s_range(double margin) const
{
    if (mercator) {
        double S = mercator_extent(margin);
        return {-S, S};
    }
    return {s_lo + margin, s_hi - margin};
}

double SurfaceGeometry::gauss_fd(double s, double t, double h) const
{
    auto L = [&](double a, double b) { return std::log(omega(a, b)); };
    double lap = dd4([&](double a) { return L(a, t); }, s, h) + dd4([&](double b) { return L(s, b); }, t, h);
    return -lap / (2 * omega(s, t));
}

double SurfaceGeometry::gauss_consistency(int n, double margin) const
{
    auto r = s_range(margin);
    double e = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = r[0] + (r[1] - r[0]) * i / (n - 1), t = 2 * M_PI * j / n;
            e = std::max(e, std::abs(gauss_fd(s, t) - gauss(s, t)));
        }
    return e;
}

std::array<double, 2> SurfaceGeometry::gauss_bonnet(int n, double margin) const
{
    auto r = s_range(margin);
    auto g = build_patch({r[0], 0, 0}, {r[1], 2 * M_PI, 1}, {n, n, 5}, {false, true, false}, 0.0);
    auto v = integrate_points_many<2>(*g, [&](std::size_t i) {
        auto p = g->point(i);
        double om = omega(p[0], p[1]);
        return std::array<double, 2>{gauss(p[0], p[1]) * om, om};
    });
    return v;
}

// ------------------------------------------------------------------ U(1) family

Mat3 identity_u1_metric(const TargetGeometry& t, const Vec3& y, const Mat3& D, const Vec3& Ft)
{
    Mat3 H = t.metric(y);
    Vec3 mu = t.moment(y).row(0).transpose();
    double muy = mu.dot(H.inverse() * mu);
    Vec3 muD = D.transpose() * mu;
    Mat3 gmu = muD * muD.transpose() / muy;
    Mat3 gC = D.transpose() * H * D - gmu;
    double lam = 1 + 3 * Ft.dot(muD) / (t.volume_density(y) * D.determinant());
    return gmu + lam * gC;
}

Solution identity_u1_solution(TargetPtr target, std::function<double(double, double)> Ax, int n, double margin)
{
    if (target->algebra().dim != 1) throw TargetMismatch("identity family needs a U(1) target");
    Vec3d lo = target->chart_lo(), hi = target->chart_hi();
    std::array<bool, 3> per{};
    for (int a = 0; a < 3; ++a) per[a] = target->period(a) > 0;
    GridPtr g = build_patch(lo, hi, {n, n, n}, per, margin);
    Solution sol;
    sol.family = "identity-u1";
    sol.params = bps_coefficients(0, 0, 0);
    sol.config = Configuration(g, target);
    sol.config.label = sol.family;
    sol.config.gM.resize(g->size());
    sol.nonriemannian.assign(g->size(), 0);
    double min_factor = INFINITY;
    for (std::size_t i = 0; i < g->size(); ++i) {
        auto p = g->point(i);
        Vec3 y(p[0], p[1], p[2]);
        Mat3 A = Mat3::Zero();
        A(0, 1) = Ax(p[0], p[1]);
        sol.config.set_phi(i, y);
        sol.config.set_A(i, A);
        Mat3 D = Mat3::Identity() - target->killing(y).col(0) * A.row(0);
        Vec3 Ft(0, 0, d4([&](double th) { return Ax(th, p[1]); }, p[0]));
        Vec3 mu = target->moment(y).row(0).transpose();
        double factor = 1 + 3 * Ft.dot(D.transpose() * mu) / (target->volume_density(y) * D.determinant());
        min_factor = std::min(min_factor, factor);
        mark_metric(sol, i, factor);
        sol.config.gM[i] = identity_u1_metric(*target, y, D, Ft);
    }
    sol.checks["conformal_factor_min"] = min_factor;
    if (sol.nonriemannian_count > 0)
        throw NotRiemannian("conformal factor 1 + 3 *(F ^ mu) is not positive at " + std::to_string(sol.nonriemannian_count) +
                            " grid points (min " + std::to_string(min_factor) + ")");
    return sol;
}

// ------------------------------------------------------------------ Dirac

TargetPtr dirac_target(double xi_lo, double xi_hi)
{
    AdjointIntervalFamily f;
    f.h1 = Profile::constant(1.0);
    f.h2 = Profile::constant(std::sqrt(1.0 / 6.0));
    f.eta1 = Profile::constant(-1.0 / 3.0);
    f.eta2 = Profile::constant(0.0);
    f.xi_lo = xi_lo;
    f.xi_hi = xi_hi;
    f.mode = Compactification::Open;
    return make_adjoint_interval_target(f);
}

Solution dirac_monopole(int n, double margin, double r_min, double r_max, double beta)
{
    if (!(0 < r_min && r_min < r_max)) throw BoundsError("Dirac window needs 0 < r_min < r_max");
    // pad the target window so rounding in exp(-rho) never leaves it
    TargetPtr target = dirac_target(0.5 / r_max * (1 - 1e-9), 0.5 / r_min * (1 + 1e-9));
    GridPtr g = build_patch({std::log(r_min) - margin, 0.0, 0.0}, {std::log(r_max) + margin, M_PI, 2 * M_PI}, {n, n, n},
                            {false, false, true}, margin);
    Solution sol;
    sol.family = "dirac";
    sol.params = bps_coefficients(0, beta, 0);
    sol.config = Configuration(g, target);
    sol.config.label = sol.family;
    sol.config.gM.resize(g->size());
    sol.nonriemannian.assign(g->size(), 0);
    for (std::size_t i = 0; i < g->size(); ++i) {
        auto p = g->point(i);
        double r = std::exp(p[0]), th = p[1];
        sol.config.set_phi(i, Vec3(0.5 / r, kPhiE3[1], kPhiE3[2]));
        Mat3 A = Mat3::Zero();
        A(2, 2) = 0.5 * (1 - std::cos(th));
        sol.config.set_A(i, A);
        sol.config.gM[i] = (r * r * Vec3(1.0, 1.0, std::sin(th) * std::sin(th))).asDiagonal();
    }
    double mono = 0, sig = 0;
    const Configuration& c = sol.config;
    for (std::size_t i = 0; i < g->size(); ++i) {
        PointFields pf = point_fields(c, i);
        StarMap st = hodge_star(Metric3(c.gM[i]), c.orientation);
        Vec3 dxi = pf.dphi.row(0).transpose();
        mono = std::max(mono, (apply_star(st, dxi) + Vec3(pf.Ft.row(2))).cwiseAbs().maxCoeff());
        Mat3 S = pf.v * pf.Hi * [&] {
            Mat3 cof;
            for (int k = 0; k < 3; ++k) cof.row(k) = Vec3(pf.D.row((k + 1) % 3)).cross(Vec3(pf.D.row((k + 2) % 3))).transpose();
            return cof;
        }();
        sig = std::max(sig, S.cwiseAbs().maxCoeff());
    }
    sol.checks["monopole_residual"] = mono;
    sol.checks["sigma_max"] = sig;
    return sol;
}

// ------------------------------------------------------------------ spinorial

TargetPtr eta2_free_s3_target()
{
    AdjointIntervalFamily f;
    f.h1 = Profile::constant(1.0);
    f.h2 = {[](double x) { return std::sin(x); }, [](double x) { return std::cos(x); }};
    f.eta1 = {[](double x) { return -2 * std::sin(x) * std::sin(x); }, [](double x) { return -2 * std::sin(2 * x); }};
    f.eta2 = Profile::constant(0.0);
    return make_adjoint_interval_target(f);
}

Solution spinorial_solution(const SurfaceGeometry& S, const AdjointIntervalFamily& fam, int n, double margin, double gamma)
{
    check_unit_h1(fam, "spinorial family");
    Solution sol = spinor_bundle_configuration("spinorial", S, fam, 0.0, n, margin, bps_coefficients(0, 0, gamma));
    spinor_identities(sol, S, 0.0);
    // closure: the metric stays non-degenerate where h2 -> 0 iff eta1 (1 - K) < 0 there
    if (fam.mode == Compactification::S3) {
        double c_lo = 1.5 * fam.eta1(fam.xi_lo) * (1 - S.gauss(0, 0));
        sol.topology = c_lo > 1e-12 ? "S1xS2" : (c_lo < -1e-12 ? "degenerate" : "S3");
    }
    // signed, so non-riemannian regions enter the volume identity with their sign
    double vol = integrate_points(*sol.config.grid, [&](std::size_t i) {
        return (sol.nonriemannian[i] ? -1.0 : 1.0) * std::sqrt(std::abs(sol.config.gM[i].determinant()));
    });
    sol.checks["volume_M"] = vol;
    return sol;
}

Solution twisted_spinorial_solution(const SurfaceGeometry& S, const AdjointIntervalFamily& fam, double alpha, double beta,
                                    double gamma, int n, double margin)
{
    if (gamma == 0.0) throw ParamInconsistent("twisted spinorial family needs gamma != 0");
    check_unit_h1(fam, "twisted spinorial family");
    check_eta2_zero(fam, "twisted spinorial family");
    const double B = alpha / (2 * gamma);
    Solution sol = spinor_bundle_configuration("twisted", S, fam, B, n, margin, bps_coefficients(alpha, beta, gamma));
    spinor_identities(sol, S, B);
    double e1 = 0;
    const PatchGrid& g = *sol.config.grid;
    for (std::size_t i = 0; i < g.size(); ++i) {
        auto p = g.point(i);
        double h2 = fam.h2(p[0]);
        e1 = std::max(e1, std::abs(alpha * h2 * h2 + 0.5 * beta * fam.eta1(p[0]) * (1 - S.gauss(p[1], p[2]))));
    }
    double e3 = 0;
    for (std::size_t i = 0; i < g.size(); ++i) e3 = std::max(e3, std::abs(B * beta * fam.eta2(g.point(i)[0])));
    if (alpha != 0.0 && e1 > 1e-9)
        throw ParamInconsistent("alpha h2^2 + beta eta1 (1 - K) / 2 = 0 fails by " + std::to_string(e1) +
                                " (needs constant K and h2^2 = beta eta1 (K - 1) / (2 alpha))");
    sol.checks["B"] = B;
    sol.checks["bps2_first"] = e1;
    sol.checks["bps2_second"] = std::abs(2 * gamma * B - alpha);
    sol.checks["bps2_third"] = e3;
    return sol;
}

// ------------------------------------------------------------------ spherical

AdjointIntervalFamily spherical_target_family(const SphericalParams& p)
{
    if (p.gamma != 0.0) throw ParamInconsistent("spherical family needs gamma = 0 (gamma != 0 forces constant f)");
    if (p.alpha == 0.0 || p.beta == 0.0) throw ParamInconsistent("spherical family needs alpha != 0 and beta != 0");
    if (std::abs(3 * p.alpha / p.beta - 1) < 1e-14) throw ParamInconsistent("spherical family needs 3 alpha / beta != 1");
    if (p.C1 == 0.0) throw ParamInconsistent("C1 = 0 gives f = 1 and F = 0 (excluded branch)");
    if (!(-(p.beta / (2 * p.alpha)) * p.C1 * p.C2 > 0)) throw ParamInconsistent("-(beta / 2 alpha) C1 C2 must be positive");
    for (double x : {p.xi_lo, p.xi_hi})
        if (!(1 + p.C1 * x * x > 0)) throw ParamInconsistent("1 + C1 xi^2 must be positive on the window");
    if (!(p.xi_lo > 0 && p.xi_hi > p.xi_lo)) throw ParamInconsistent("spherical window needs 0 < xi_lo < xi_hi");
    const double k = p.beta / p.alpha, C1 = p.C1, C2 = p.C2;
    auto f = [C1](double x) { return std::sqrt(1 + C1 * x * x); };
    auto df = [C1, f](double x) { return C1 * x / f(x); };
    auto hh = [=](double x) { return -(k / 2) * C1 * C2 * x * x * std::pow(f(x), -k - 2); };
    std::function<double(double)> h1 = p.h1 ? p.h1 : [](double) { return 1.0; };
    AdjointIntervalFamily fam;
    fam.h1 = {h1, {}};
    fam.h2 = {[=](double x) { return std::sqrt(hh(x) / h1(x)); }, {}};
    fam.eta1 = {[=](double x) { return C2 * std::pow(f(x), -k); }, [=](double x) { return -k * C2 * std::pow(f(x), -k - 1) * df(x); }};
    fam.eta2 = {[=](double x) { return C2 * x * std::pow(f(x), -k); },
                [=](double x) { return C2 * std::pow(f(x), -k) - k * C2 * x * std::pow(f(x), -k - 1) * df(x); }};
    fam.xi_lo = p.xi_lo;
    fam.xi_hi = p.xi_hi;
    fam.mode = Compactification::Open;
    return fam;
}

Solution spherical_solution(const SphericalParams& p, int n, double margin)
{
    AdjointIntervalFamily fam = spherical_target_family(p);
    TargetPtr target = make_adjoint_interval_target(fam);
    GridPtr g = build_patch({p.xi_lo - margin, 0.0, 0.0}, {p.xi_hi + margin, M_PI, 2 * M_PI}, {n, n, n},
                            {false, false, true}, margin);
    const double scale = 1 - 3 * p.alpha / p.beta;
    Solution sol;
    sol.family = "spherical";
    sol.params = bps_coefficients(p.alpha, p.beta, p.gamma);
    sol.config = Configuration(g, target);
    sol.config.label = sol.family;
    sol.config.orientation = scale > 0 ? 1 : -1;
    sol.config.gM.resize(g->size());
    sol.nonriemannian.assign(g->size(), 0);
    auto f = [&](double x) { return std::sqrt(1 + p.C1 * x * x); };
    for (std::size_t i = 0; i < g->size(); ++i) {
        auto q = g->point(i);
        double xi = q[0], u = q[1], v = q[2];
        Vec3 x = s2_point(u, v);
        Mat3 A = Mat3::Zero();
        A.col(1) = 0.5 * (f(xi) - 1) * x.cross(s2_du(u, v));
        A.col(2) = 0.5 * (f(xi) - 1) * x.cross(s2_dv(u, v));
        sol.config.set_phi(i, Vec3(xi, u, v));
        sol.config.set_A(i, A);
        double h1 = fam.h1(xi), h2 = fam.h2(xi), fs = f(xi) * h2;
        sol.config.gM[i] = (scale * scale * Vec3(h1 * h1, fs * fs, fs * fs * std::sin(u) * std::sin(u))).asDiagonal();
    }
    // recover f from the stored connection and check the two BPS2 scalar equations
    std::vector<double> fv(g->size());
    for (std::size_t i = 0; i < g->size(); ++i) {
        auto q = g->point(i);
        Vec3 e = s2_point(q[1], q[2]).cross(s2_dv(q[1], q[2]));
        fv[i] = 1 + 2 * sol.config.A_at(i).col(2).dot(e) / e.squaredNorm();
    }
    double ea = 0, eb = 0;
    for (std::size_t i = 0; i < g->size(); ++i) {
        double xi = g->point(i)[0];
        double fp = diff_at(*g, i, 0, [&](std::size_t j) { return fv[j]; });
        double hh = fam.h1(xi) * fam.h2(xi) * fam.h2(xi);
        ea = std::max(ea, std::abs(2 * p.alpha * hh * fv[i] * fv[i] + p.beta * fam.eta1(xi) * (fv[i] * fv[i] - 1)));
        eb = std::max(eb, std::abs(2 * p.alpha * hh * fv[i] + p.beta * fam.eta2(xi) * fp));
    }
    sol.checks["bps2a"] = ea;
    sol.checks["bps2b"] = eb;
    sol.checks["metric_scale"] = scale;
    return sol;
}

// ------------------------------------------------------------------ symplectic

SymplecticData SymplecticData::round_sphere(double kappa)
{
    SymplecticData d;
    d.chart = SurfaceGeometry::sphere(1.0);
    d.chart.name = "s2-symplectic";
    d.a = [](double s, double) { return std::array<double, 2>{0.0, -0.5 * std::tanh(s)}; };
    d.da = [](double s, double) { return -0.5 / (std::cosh(s) * std::cosh(s)); };
    d.w = [kappa](double xi, double s, double) {
        double l = std::exp(kappa * std::sin(xi));
        double r = 0.5 / std::cosh(s);
        return std::array<cd, 2>{cd(r * l, 0), cd(0, r / l)};
    };
    return d;
}

Solution symplectic_solution(const SymplecticData& data, const AdjointIntervalFamily& fam, double beta, int n, double margin,
                             double norm_scale)
{
    if (beta == 0.0) throw ParamInconsistent("symplectic family needs beta != 0");
    check_eta2_zero(fam, "symplectic family");
    TargetPtr target = make_adjoint_interval_target(fam);
    bool singular = fam.mode != Compactification::Open;
    GridPtr g = interval_surface_grid(fam.xi_lo, fam.xi_hi, singular, data.chart, n, margin);
    Solution sol;
    sol.family = "symplectic";
    sol.params = bps_coefficients(0, beta, 0);
    sol.config = Configuration(g, target);
    sol.config.label = sol.family;
    sol.config.gM.resize(g->size());
    sol.nonriemannian.assign(g->size(), 0);
    auto da = [&](double s, double t) {
        if (data.da) return data.da(s, t);
        return d4([&](double a) { return data.a(a, t)[1]; }, s) - d4([&](double b) { return data.a(s, b)[0]; }, t);
    };
    double norm = 0;
    for (std::size_t i = 0; i < g->size(); ++i) {
        auto q = g->point(i);
        double xi = q[0], s = q[1], t = q[2];
        auto a = data.a(s, t);
        auto w = data.w(xi, s, t);
        w[0] *= norm_scale;
        w[1] *= norm_scale;
        double lhs = -4 * (w[0] * std::conj(w[1])).imag();
        double rhs = -2 * da(s, t);
        norm = std::max(norm, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
        Mat3 A;
        A.col(0) = Vec3::Zero();
        A.col(1) = block_coeffs(a[0], w[0]);
        A.col(2) = block_coeffs(a[1], w[1]);
        sol.config.set_phi(i, Vec3(xi, kPhiE3[1], kPhiE3[2]));
        sol.config.set_A(i, A);
        double h1 = fam.h1(xi), h2 = fam.h2(xi);
        Mat3 gm = Mat3::Zero();
        gm(0, 0) = h1 * h1;
        for (int l = 0; l < 2; ++l)
            for (int k = 0; k < 2; ++k) gm(1 + l, 1 + k) = h2 * h2 * 4 * (w[l] * std::conj(w[k])).real();
        sol.config.gM[i] = gm;
        mark_metric(sol, i, Metric3(gm).riemannian ? 1.0 : -1.0);
    }
    sol.checks["normalization"] = norm;
    if (norm > 1e-10) throw NormalizationFailed("2i w ^ w_bar differs from -2 da by " + std::to_string(norm));
    // symplectic area of the window over 2 pi
    auto r = data.chart.s_range(margin);
    auto g2 = build_patch({r[0], 0, 0}, {r[1], 2 * M_PI, 1}, {n, n, 5}, {false, true, false}, 0.0);
    sol.checks["omega_C_over_2pi"] =
        integrate_points(*g2, [&](std::size_t i) { auto p = g2->point(i); return -2 * da(p[0], p[1]); }) / (2 * M_PI);
    return sol;
}

}  // namespace skyrme
