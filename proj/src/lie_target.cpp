#include "skyrme/lie_target.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "skyrme/grid.hpp"

namespace skyrme {

namespace {

double integrate1d(const std::function<double(double)>& f, double a, double b)
{
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, 1e-13);
}

// 4th-order central difference of a scalar function with a fixed step.
double central(const std::function<double(double)>& f, double x, double h = 1e-3)
{
    return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
}

}  // namespace

LieAlgebraSpec LieAlgebraSpec::su2()
{
    LieAlgebraSpec s;
    s.dim = 3;
    s.name = "su2";
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) s.f[a][b][c] = 2.0 * eps3(a, b, c);
    return s;
}

LieAlgebraSpec LieAlgebraSpec::u1()
{
    LieAlgebraSpec s;
    s.dim = 1;
    s.name = "u1";
    return s;
}

Vec3 LieAlgebraSpec::bracket(const Vec3& x, const Vec3& y) const
{
    Vec3 r = Vec3::Zero();
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b)
            for (int c = 0; c < dim; ++c) r[a] += f[a][b][c] * x[b] * y[c];
    return r;
}

double LieAlgebraSpec::antisymmetry_residual() const
{
    double r = 0;
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b)
            for (int c = 0; c < dim; ++c) r = std::max(r, std::abs(f[a][b][c] + f[a][c][b]));
    return r;
}

double LieAlgebraSpec::jacobi_residual() const
{
    double r = 0;
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b)
            for (int c = 0; c < dim; ++c)
                for (int d = 0; d < dim; ++d) {
                    double s = 0;
                    for (int e = 0; e < dim; ++e)
                        s += f[e][a][b] * f[d][e][c] + f[e][b][c] * f[d][e][a] + f[e][c][a] * f[d][e][b];
                    r = std::max(r, std::abs(s));
                }
    return r;
}

double Profile::derivative(double x) const
{
    if (df) return df(x);
    return central(f, x);
}

Profile Profile::constant(double c)
{
    return {[c](double) { return c; }, [](double) { return 0.0; }};
}

bool TargetGeometry::in_chart(const Vec3& y) const
{
    for (int a = 0; a < 3; ++a) {
        if (period_[a] > 0) continue;
        if (y[a] < lo_[a] || y[a] > hi_[a]) return false;
    }
    return true;
}

Mat3 TargetGeometry::mu_sharp(const Vec3& y) const
{
    return metric(y).inverse() * moment(y).transpose();
}

Mat3 TargetGeometry::sigma_dual(const Vec3& y) const
{
    return volume_density(y) * metric(y).inverse();
}

const MomentCheck& TargetGeometry::moment_status() const
{
    std::call_once(once_, [this] { status_ = std::make_shared<MomentCheck>(verify_moment_conditions(*this, 32)); });
    return *status_;
}

SigmaComponents sigma_eval(const TargetGeometry& t, const Vec3& y)
{
    Mat3 sd = t.sigma_dual(y);
    SigmaComponents s{};
    for (int m = 0; m < 3; ++m)
        for (int n = 0; n < 3; ++n)
            for (int r = 0; r < 3; ++r) {
                double acc = 0;
                for (int k = 0; k < 3; ++k) acc += eps3(k, n, r) * sd(m, k);
                s[m][n][r] = acc;
            }
    return s;
}

double sigma_duality_residual(const TargetGeometry& t, const Vec3& y)
{
    SigmaComponents s = sigma_eval(t, y);
    Mat3 g = t.metric(y);
    double v = t.volume_density(y);
    double r = 0;
    for (int u = 0; u < 3; ++u)
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                double lhs = 0;
                for (int m = 0; m < 3; ++m) lhs += g(u, m) * s[m][a][b];
                r = std::max(r, std::abs(lhs - v * eps3(u, a, b)));
            }
    return r;
}

MomentCheck verify_moment_conditions(const TargetGeometry& t, int n)
{
    std::array<bool, 3> per{};
    Vec3d lo = t.chart_lo(), hi = t.chart_hi();
    for (int a = 0; a < 3; ++a) per[a] = t.period(a) > 0;
    GridPtr g = build_patch(lo, hi, {n, n, n}, per, t.singular_margin());
    const std::size_t N = g->size();
    const int dim = t.algebra().dim;
    const auto& f = t.algebra().f;
    // Evaluator derivatives use a pointwise stencil whose step shrinks with
    // the distance kept from chart singularities.
    const double step = t.singular_margin() > 0 ? 1e-3 * t.singular_margin() : 1e-3;

    auto pack = [&](const Vec3& y, double* d) {
        Mat3 I = t.killing(y), mu = t.moment(y), sd = t.sigma_dual(y);
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) {
                d[r * 3 + c] = I(r, c);
                d[9 + r * 3 + c] = mu(r, c);
                d[18 + r * 3 + c] = sd(r, c);
            }
    };

    std::vector<std::array<double, 6>> res(N);
    parallel_for(N, [&](std::size_t i) {
        Vec3d p = g->point(i);
        Vec3 y(p[0], p[1], p[2]);
        double val[27], deriv[3][27], buf[4][27];
        pack(y, val);
        // deriv[l][k]: derivative along axis l of packed component k
        for (int l = 0; l < 3; ++l) {
            const double off[4] = {-2, -1, 1, 2};
            for (int q = 0; q < 4; ++q) {
                Vec3 yq = y;
                yq[l] += off[q] * step;
                pack(yq, buf[q]);
            }
            for (int k = 0; k < 27; ++k) deriv[l][k] = (buf[0][k] - 8 * buf[1][k] + 8 * buf[2][k] - buf[3][k]) / (12 * step);
        }
        auto I = [&](int mu, int a) { return val[mu * 3 + a]; };
        auto dI = [&](int l, int mu, int a) { return deriv[l][mu * 3 + a]; };
        auto M = [&](int a, int mu) { return val[9 + a * 3 + mu]; };
        auto dM = [&](int l, int a, int mu) { return deriv[l][9 + a * 3 + mu]; };
        auto S = [&](int mu, int k) { return val[18 + mu * 3 + k]; };
        auto dS = [&](int l, int mu, int k) { return deriv[l][18 + mu * 3 + k]; };
        double v = t.volume_density(y);

        // All residuals are tensors measured in the pointwise g_N norm.
        const Mat3 G = t.metric(y), Gi = G.inverse();
        const double detG = std::abs(G.determinant());
        auto norm_vec = [&](const Vec3& R) { return std::sqrt(std::max(0.0, R.dot(G * R))); };
        auto norm_1form = [&](const Vec3& R) { return std::sqrt(std::max(0.0, R.dot(Gi * R))); };
        auto norm_2form = [&](const Vec3& R) { return std::sqrt(std::max(0.0, R.dot(G * R) / detG)); };

        std::array<double, 6> r{};
        for (int a = 0; a < dim; ++a) {
            Vec3 R;
            for (int k = 0; k < 3; ++k) {
                double curl = 0;
                for (int l = 0; l < 3; ++l)
                    for (int s = 0; s < 3; ++s) curl += eps3(k, l, s) * dM(l, a, s);
                R[k] = curl - v * I(k, a);
            }
            r[0] = std::max(r[0], norm_2form(R));
            double c = 0;
            for (int m = 0; m < 3; ++m) c += M(a, m) * I(m, a);
            r[1] = std::max(r[1], std::abs(c));
        }
        for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b) {
                Vec3 R;
                for (int lam = 0; lam < 3; ++lam) {
                    double s = 0;
                    for (int m = 0; m < 3; ++m) s += I(m, a) * dI(m, lam, b) - I(m, b) * dI(m, lam, a);
                    for (int c = 0; c < dim; ++c) s -= f[c][a][b] * I(lam, c);
                    R[lam] = s;
                }
                r[2] = std::max(r[2], norm_vec(R));
            }
        // L_{nu_b} mu_a = f^c_{ba} mu_c
        for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b) {
                Vec3 R;
                for (int m = 0; m < 3; ++m) {
                    double s = 0;
                    for (int nu = 0; nu < 3; ++nu) s += I(nu, b) * dM(nu, a, m) + M(a, nu) * dI(m, nu, b);
                    for (int c = 0; c < dim; ++c) s -= f[c][b][a] * M(c, m);
                    R[m] = s;
                }
                r[3] = std::max(r[3], norm_1form(R));
            }
        // L_{nu_b} Sigma = 0 on full components T^mu_{nu rho}
        auto T = [&](int m, int nn, int rr) {
            double acc = 0;
            for (int k = 0; k < 3; ++k) acc += eps3(k, nn, rr) * S(m, k);
            return acc;
        };
        auto dT = [&](int l, int m, int nn, int rr) {
            double acc = 0;
            for (int k = 0; k < 3; ++k) acc += eps3(k, nn, rr) * dS(l, m, k);
            return acc;
        };
        for (int b = 0; b < dim; ++b) {
            Mat3 R;  // R(mu, kappa): dual components of the vector-valued 2-form
            for (int m = 0; m < 3; ++m)
                for (int kap = 0; kap < 3; ++kap) {
                    int nn = (kap + 1) % 3, rr = (kap + 2) % 3;
                    double s = 0;
                    for (int k = 0; k < 3; ++k) {
                        s += I(k, b) * dT(k, m, nn, rr);
                        s -= T(k, nn, rr) * dI(k, m, b);
                        s += T(m, k, rr) * dI(nn, k, b);
                        s += T(m, nn, k) * dI(rr, k, b);
                    }
                    R(m, kap) = s;
                }
            r[4] = std::max(r[4], std::sqrt(std::max(0.0, (G * R * G * R.transpose()).trace() / detG)));
        }
        r[5] = sigma_duality_residual(t, y);
        res[i] = r;
    });
    MomentCheck out;
    for (const auto& r : res) {
        out.def_residual = std::max(out.def_residual, r[0]);
        out.constraint_residual = std::max(out.constraint_residual, r[1]);
        out.homomorphism_residual = std::max(out.homomorphism_residual, r[2]);
        out.mu_equivariance = std::max(out.mu_equivariance, r[3]);
        out.sigma_equivariance = std::max(out.sigma_equivariance, r[4]);
        out.sigma_duality = std::max(out.sigma_duality, r[5]);
    }
    return out;
}

// ---------------------------------------------------------------- U(1) fibred

namespace {

class U1Fibered final : public TargetGeometry {
public:
    explicit U1Fibered(const U1FiberedSpec& s)
        : TargetGeometry("u1-fibered", LieAlgebraSpec::u1(), s.lo, s.hi,
                         {s.periodic[0] ? s.hi[0] - s.lo[0] : 0.0, s.periodic[1] ? s.hi[1] - s.lo[1] : 0.0,
                          s.periodic[2] ? s.hi[2] - s.lo[2] : 0.0},
                         s.margin),
          spec_(s)
    {
    }

    double dmu(double x, double y) const
    {
        const double h = 1e-4;
        auto dx = [&](const std::function<double(double, double)>& fn) {
            return (fn(x - 2 * h, y) - 8 * fn(x - h, y) + 8 * fn(x + h, y) - fn(x + 2 * h, y)) / (12 * h);
        };
        auto dy = [&](const std::function<double(double, double)>& fn) {
            return (fn(x, y - 2 * h) - 8 * fn(x, y - h) + 8 * fn(x, y + h) - fn(x, y + 2 * h)) / (12 * h);
        };
        return dx(spec_.mu_y) - dy(spec_.mu_x);
    }

    Mat3 metric(const Vec3& p) const override
    {
        double x = p[1], y = p[2];
        double mx = spec_.mu_x(x, y), my = spec_.mu_y(x, y), h = spec_.h(x, y), w = spec_.omega_x(x, y);
        double D = dmu(x, y);
        double f = D * D / (h * my);
        Mat3 g = Mat3::Zero();
        g(0, 0) = f;
        g(0, 1) = g(1, 0) = f * w;
        g(1, 1) = f * w * w + h + mx * mx / my;
        g(1, 2) = g(2, 1) = mx;
        g(2, 2) = my;
        return g;
    }
    double volume_density(const Vec3& p) const override { return dmu(p[1], p[2]); }
    Mat3 killing(const Vec3&) const override
    {
        Mat3 I = Mat3::Zero();
        I(0, 0) = 1.0;
        return I;
    }
    Mat3 moment(const Vec3& p) const override
    {
        Mat3 m = Mat3::Zero();
        m(0, 1) = spec_.mu_x(p[1], p[2]);
        m(0, 2) = spec_.mu_y(p[1], p[2]);
        return m;
    }
    Vec3 flow(const Vec3& y, const Vec3& lambda) const override { return y + Vec3(lambda[0], 0, 0); }
    double volume() const override
    {
        double lt = spec_.hi[0] - spec_.lo[0];
        auto inner = [&](double x) {
            return integrate1d([&](double y) { return dmu(x, y); }, spec_.lo[2], spec_.hi[2]);
        };
        return std::abs(lt * integrate1d(inner, spec_.lo[1], spec_.hi[1]));
    }

private:
    U1FiberedSpec spec_;
};

}  // namespace

TargetPtr make_u1_fibered_target(const U1FiberedSpec& spec)
{
    if (!spec.mu_x || !spec.mu_y || !spec.h || !spec.omega_x) throw MomentConditionFailed("u1-fibered target needs mu_x, mu_y, h, omega_x");
    auto t = std::make_shared<U1Fibered>(spec);
    // Sample the (x, y) plane on the margin-shrunk box.
    double dmax = 0, mymin = INFINITY, hmin = INFINITY;
    const int m = 41;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            double x = spec.lo[1] + spec.margin + (spec.hi[1] - spec.lo[1] - 2 * spec.margin) * i / (m - 1);
            double y = spec.lo[2] + (spec.hi[2] - spec.lo[2]) * j / (m - 1);
            if (!spec.periodic[2]) y = spec.lo[2] + spec.margin + (spec.hi[2] - spec.lo[2] - 2 * spec.margin) * j / (m - 1);
            dmax = std::max(dmax, std::abs(t->dmu(x, y)));
            mymin = std::min(mymin, spec.mu_y(x, y));
            hmin = std::min(hmin, spec.h(x, y));
        }
    if (!(mymin > 0) || !(hmin > 0)) throw MomentConditionFailed("u1-fibered target needs mu_y > 0 and h > 0 on the chart");
    if (dmax < 1e-12)
        throw MomentConditionFailed("d mu vanishes identically; d mu = iota_nu V_N would force a degenerate volume form");
    MomentCheck mc = verify_moment_conditions(*t, spec.check_n);
    if (!(mc.def_residual <= spec.tol * std::max(1.0, dmax)))
        throw MomentConditionFailed("moment-map residual " + std::to_string(mc.def_residual) + " exceeds tolerance");
    return t;
}

TargetPtr make_u1_round_s3()
{
    U1FiberedSpec s;
    s.mu_x = [](double, double) { return 0.0; };
    s.mu_y = [](double x, double) { return 0.25 * std::sin(x) * std::sin(x); };
    s.h = [](double, double) { return 1.0; };
    s.omega_x = [](double, double) { return 0.0; };
    return make_u1_fibered_target(s);
}

// ------------------------------------------------------------ adjoint interval

Vec3 s2_point(double u, double v) { return {std::cos(u), std::sin(u) * std::cos(v), std::sin(u) * std::sin(v)}; }
Vec3 s2_du(double u, double v) { return {-std::sin(u), std::cos(u) * std::cos(v), std::cos(u) * std::sin(v)}; }
Vec3 s2_dv(double u, double v) { return {0.0, -std::sin(u) * std::sin(v), std::sin(u) * std::cos(v)}; }

std::pair<double, double> s2_angles(const Vec3& x)
{
    Vec3 n = x.normalized();
    double u = std::acos(std::clamp(n[0], -1.0, 1.0));
    double v = std::atan2(n[2], n[1]);
    if (v < 0) v += 2 * M_PI;
    return {u, v};
}

AdjointIntervalFamily AdjointIntervalFamily::round_s3()
{
    AdjointIntervalFamily f;
    f.h1 = Profile::constant(1.0);
    f.h2 = {[](double x) { return std::sin(x); }, [](double x) { return std::cos(x); }};
    f.eta1 = Profile::constant(-1.0);
    f.eta2 = {[](double x) { return -0.5 * std::sin(2 * x); }, [](double x) { return -std::cos(2 * x); }};
    f.xi_lo = 0;
    f.xi_hi = M_PI;
    f.mode = Compactification::S3;
    return f;
}

ProfileCheck check_adjoint_profiles(const AdjointIntervalFamily& fam)
{
    ProfileCheck pc;
    pc.min_h = INFINITY;
    const int m = 2001;
    double len = fam.xi_hi - fam.xi_lo;
    double d = 1e-6 * len;
    for (int i = 0; i < m; ++i) {
        double x = fam.xi_lo + d + (len - 2 * d) * i / (m - 1);
        double h1 = fam.h1(x), h2 = fam.h2(x);
        pc.constraint = std::max(pc.constraint, std::abs(2 * h1 * h2 * h2 - fam.eta2.derivative(x) + fam.eta1(x)));
        pc.min_h = std::min({pc.min_h, h1, h2});
    }
    pc.eta1_integral = integrate1d([&](double x) { return fam.eta1(x); }, fam.xi_lo, fam.xi_hi);
    pc.volume = 4 * M_PI * integrate1d([&](double x) { return fam.h1(x) * fam.h2(x) * fam.h2(x); }, fam.xi_lo, fam.xi_hi);
    return pc;
}

namespace {

class AdjointInterval final : public TargetGeometry {
public:
    AdjointInterval(const AdjointIntervalFamily& fam, bool round, double vol)
        : TargetGeometry(round ? "adjoint-s3" : "adjoint-interval", LieAlgebraSpec::su2(), {fam.xi_lo, 0.0, 0.0},
                         {fam.xi_hi, M_PI, 2 * M_PI}, {0.0, 0.0, 2 * M_PI}, fam.margin),
          fam_(fam), round_(round), vol_(vol)
    {
    }

    Mat3 metric(const Vec3& y) const override
    {
        double h1 = fam_.h1(y[0]), h2 = fam_.h2(y[0]), s = std::sin(y[1]);
        return Vec3(h1 * h1, h2 * h2, h2 * h2 * s * s).asDiagonal();
    }
    double volume_density(const Vec3& y) const override
    {
        double h2 = fam_.h2(y[0]);
        return fam_.h1(y[0]) * h2 * h2 * std::sin(y[1]);
    }
    Mat3 killing(const Vec3& y) const override
    {
        Vec3 x = s2_point(y[1], y[2]), xu = s2_du(y[1], y[2]), xv = s2_dv(y[1], y[2]);
        double s2 = std::sin(y[1]) * std::sin(y[1]);
        Mat3 I = Mat3::Zero();
        for (int a = 0; a < 3; ++a) {
            Vec3 T = 2.0 * x.cross(Vec3::Unit(a));
            I(1, a) = T.dot(xu);
            I(2, a) = T.dot(xv) / s2;
        }
        return I;
    }
    Mat3 moment(const Vec3& y) const override
    {
        Vec3 x = s2_point(y[1], y[2]), xu = s2_du(y[1], y[2]), xv = s2_dv(y[1], y[2]);
        double e1 = fam_.eta1(y[0]), e2 = fam_.eta2(y[0]);
        Mat3 m;
        m.col(0) = e1 * x;
        m.col(1) = e2 * xu;
        m.col(2) = e2 * xv;
        return m;
    }
    Vec3 flow(const Vec3& y, const Vec3& lambda) const override
    {
        Eigen::Matrix3d R = su2::adjoint(su2::exp(-lambda));
        auto [u, v] = s2_angles(R * s2_point(y[1], y[2]));
        return {y[0], u, v};
    }
    bool in_chart(const Vec3& y) const override
    {
        return y[0] >= chart_lo()[0] && y[0] <= chart_hi()[0] && std::sin(y[1]) > 1e-8 && y[1] > 0 && y[1] < M_PI;
    }
    double volume() const override { return vol_; }
    std::optional<su2::Mat2c> su2_element(const Vec3& y) const override
    {
        if (!round_) return std::nullopt;
        return std::cos(y[0]) * su2::Mat2c::Identity() + std::sin(y[0]) * su2::from_coeffs(s2_point(y[1], y[2]));
    }
    bool is_round_adjoint_s3() const override { return round_; }

private:
    AdjointIntervalFamily fam_;
    bool round_;
    double vol_;
};

bool same_as_round(const AdjointIntervalFamily& f)
{
    if (f.mode != Compactification::S3 || std::abs(f.xi_lo) > 1e-14 || std::abs(f.xi_hi - M_PI) > 1e-14) return false;
    for (double x : {0.3, 0.9, 1.7, 2.5}) {
        if (std::abs(f.h1(x) - 1) > 1e-12 || std::abs(f.h2(x) - std::sin(x)) > 1e-12 || std::abs(f.eta1(x) + 1) > 1e-12 ||
            std::abs(f.eta2(x) + 0.5 * std::sin(2 * x)) > 1e-12)
            return false;
    }
    return true;
}

}  // namespace

TargetPtr make_adjoint_interval_target(const AdjointIntervalFamily& fam)
{
    if (!fam.h1.f || !fam.h2.f || !fam.eta1.f || !fam.eta2.f) throw ConstraintViolated("adjoint family needs h1, h2, eta1, eta2");
    if (!(fam.xi_hi > fam.xi_lo)) throw BoundsError("adjoint family needs xi_lo < xi_hi");
    ProfileCheck pc = check_adjoint_profiles(fam);
    if (!(pc.constraint <= 1e-8))
        throw ConstraintViolated("2 h1 h2^2 = eta2' - eta1 violated by " + std::to_string(pc.constraint));
    if (!(pc.min_h > 0)) throw ConstraintViolated("h1 and h2 must be positive on the open interval");
    if (fam.mode != Compactification::Open) {
        double want = -pc.volume / (2 * M_PI);
        if (!(std::abs(pc.eta1_integral - want) <= 1e-6 * std::max(1.0, std::abs(want))))
            throw ConstraintViolated("integral of eta1 differs from -Vol(N)/2pi");
    }
    return std::make_shared<AdjointInterval>(fam, same_as_round(fam), pc.volume);
}

// ----------------------------------------------------------------- SU(2) left

namespace {

class Su2Left final : public TargetGeometry {
public:
    explicit Su2Left(double K)
        : TargetGeometry("su2-left", LieAlgebraSpec::su2(), {0.0, 0.0, 0.0}, {M_PI, M_PI, 2 * M_PI}, {0.0, 0.0, 2 * M_PI}, 0.05),
          K_(K)
    {
    }

    su2::Mat2c U(const Vec3& y) const
    {
        return std::cos(y[0]) * su2::Mat2c::Identity() + std::sin(y[0]) * su2::from_coeffs(s2_point(y[1], y[2]));
    }
    std::array<su2::Mat2c, 3> dU(const Vec3& y) const
    {
        Vec3 x = s2_point(y[1], y[2]);
        return {-std::sin(y[0]) * su2::Mat2c::Identity() + std::cos(y[0]) * su2::from_coeffs(x),
                std::sin(y[0]) * su2::from_coeffs(s2_du(y[1], y[2])), std::sin(y[0]) * su2::from_coeffs(s2_dv(y[1], y[2]))};
    }

    Mat3 metric(const Vec3& y) const override
    {
        double s = std::sin(y[0]), su = std::sin(y[1]);
        return std::pow(K_, 2.0 / 3.0) * Vec3(1.0, s * s, s * s * su * su).asDiagonal().toDenseMatrix();
    }
    double volume_density(const Vec3& y) const override
    {
        // -(K/12) tr(theta_R^3) in chart components
        su2::Mat2c Ui = U(y).adjoint();
        auto d = dU(y);
        su2::Mat2c R0 = d[0] * Ui, R1 = d[1] * Ui, R2 = d[2] * Ui;
        return -0.25 * K_ * (R0 * (R1 * R2 - R2 * R1)).trace().real();
    }
    Mat3 killing(const Vec3& y) const override
    {
        auto d = dU(y);
        su2::Mat2c u = U(y);
        // the chart tangent vectors are mutually orthogonal in R^4
        Eigen::Vector4d J[3] = {su2::quat(d[0]), su2::quat(d[1]), su2::quat(d[2])};
        Mat3 I;
        for (int a = 0; a < 3; ++a) {
            Eigen::Vector4d T = su2::quat(-su2::basis(a) * u);
            for (int m = 0; m < 3; ++m) I(m, a) = J[m].dot(T) / J[m].squaredNorm();
        }
        return I;
    }
    Mat3 moment(const Vec3& y) const override
    {
        su2::Mat2c Ui = U(y).adjoint();
        auto d = dU(y);
        Mat3 m;
        for (int a = 0; a < 3; ++a)
            for (int k = 0; k < 3; ++k) m(a, k) = 0.25 * K_ * (su2::basis(a) * d[k] * Ui).trace().real();
        return m;
    }
    Vec3 flow(const Vec3& y, const Vec3& lambda) const override
    {
        Eigen::Vector4d q = su2::quat(su2::exp(-lambda) * U(y));
        double xi = std::acos(std::clamp(q[0], -1.0, 1.0));
        auto [u, v] = s2_angles(q.tail<3>());
        return {xi, u, v};
    }
    bool in_chart(const Vec3& y) const override
    {
        return std::sin(y[0]) > 1e-8 && std::sin(y[1]) > 1e-8 && y[0] > 0 && y[0] < M_PI && y[1] > 0 && y[1] < M_PI;
    }
    double volume() const override { return K_ * 2 * M_PI * M_PI; }
    std::optional<su2::Mat2c> su2_element(const Vec3& y) const override { return U(y); }

private:
    double K_;
};

class StaticTarget final : public TargetGeometry {
public:
    StaticTarget(std::function<Mat3(const Vec3&)> g, Vec3d lo, Vec3d hi)
        : TargetGeometry("static", LieAlgebraSpec::u1(), lo, hi, {0, 0, 0}, 0.0), g_(std::move(g))
    {
    }
    Mat3 metric(const Vec3& y) const override { return g_(y); }
    double volume_density(const Vec3& y) const override { return std::sqrt(g_(y).determinant()); }
    Mat3 killing(const Vec3&) const override { return Mat3::Zero(); }
    Mat3 moment(const Vec3&) const override { return Mat3::Zero(); }
    Vec3 flow(const Vec3& y, const Vec3&) const override { return y; }
    double volume() const override { return std::nan(""); }

private:
    std::function<Mat3(const Vec3&)> g_;
};

}  // namespace

TargetPtr make_su2_left_target(double K)
{
    if (!(K > 0)) throw ParamInconsistent("the left-action target needs K > 0");
    return std::make_shared<Su2Left>(K);
}

double left_action_contraction(const TargetGeometry& t, const Vec3& X, const Vec3& y)
{
    Mat3 I = t.killing(y), mu = t.moment(y);
    // iota_{nu(X)} mu(X) = X^a X^b mu_{b;m} I_a^m
    return (mu.transpose() * X).dot(I * X);
}

double left_action_obstruction(double K)
{
    TargetPtr t = make_su2_left_target(K);
    const Vec3 pts[] = {{0.4, 0.7, 1.1}, {1.3, 1.9, 4.0}, {2.2, 1.2, 5.5}, {1.57, 1.57, 0.3}, {0.9, 2.6, 3.0}};
    double sum = 0;
    int cnt = 0;
    for (const auto& y : pts)
        for (int a = 0; a < 3; ++a) {
            sum += left_action_contraction(*t, Vec3::Unit(a), y);
            ++cnt;
        }
    return sum / cnt;
}

TargetPtr make_static_target(std::function<Mat3(const Vec3&)> metric, Vec3d lo, Vec3d hi)
{
    return std::make_shared<StaticTarget>(std::move(metric), lo, hi);
}

}  // namespace skyrme
