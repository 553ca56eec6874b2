#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "skyrme/gaugefield.hpp"

using namespace skyrme;

namespace {

Configuration sample(GridPtr g, TargetPtr t, const std::function<Vec3(const Vec3d&)>& phi,
                     const std::function<Mat3(const Vec3d&)>& A)
{
    Configuration c(g, t);
    for (std::size_t i = 0; i < g->size(); ++i) {
        c.set_phi(i, phi(g->point(i)));
        c.set_A(i, A(g->point(i)));
    }
    return c;
}

GridPtr fibred_base(int n)
{
    return build_patch({0, 0.4, 0}, {2 * M_PI, 1.1, 4 * M_PI}, {n, n, n}, {true, false, true}, 0.0);
}

// Generic smooth pair on the fibred U(1) target; periodic in theta and y.
Configuration fibred_config(int n, bool gauged = true)
{
    auto t = make_u1_round_s3();
    return sample(
        fibred_base(n), t,
        [](const Vec3d& p) {
            double th = p[0], x = p[1], y = p[2];
            return Vec3(th + 0.3 * std::sin(y / 2) + 0.2 * std::cos(th), x + 0.1 * std::sin(th) * std::cos(y / 2),
                        y + 0.2 * std::sin(th));
        },
        [gauged](const Vec3d& p) {
            Mat3 a = Mat3::Zero();
            if (gauged) a.row(0) = Vec3(0.3 * std::cos(p[0]), 0.2 * std::sin(p[2] / 2), 0.1 * p[1] * std::sin(p[0])).transpose();
            return a;
        });
}

TargetPtr adjoint_round() { return make_adjoint_interval_target(AdjointIntervalFamily::round_s3()); }

// Small unit box mapped near the equator of the S^2 factor, away from chart edges.
Configuration su2_config(int n)
{
    auto g = build_patch({0, 0, 0}, {1, 1, 1}, {n, n, n}, {false, false, false}, 0.0);
    return sample(
        g, adjoint_round(),
        [](const Vec3d& p) {
            return Vec3(1.2 + 0.3 * p[0] + 0.05 * std::sin(p[1]), 1.3 + 0.2 * p[1] + 0.05 * p[0] * p[2], 1.5 + 0.3 * p[2]);
        },
        [](const Vec3d& p) {
            Mat3 a;
            a << 0.2 * std::sin(p[1]), 0.1 * p[2], -0.3 * std::cos(p[0]),  //
                0.1 * p[0] * p[1], 0.25 * std::cos(p[2]), 0.05,            //
                -0.15, 0.2 * std::sin(p[0] + p[2]), 0.1 * p[1];
            return a;
        });
}

GaugeTransform su2_lambda(GridPtr g)
{
    return GaugeTransform::sample(g, [](const Vec3d& p) {
        return Vec3(0.2 * std::sin(p[0] + 0.5 * p[1]), -0.15 * std::cos(p[2]), 0.1 * p[0] * p[1]);
    });
}

}  // namespace

TEST_CASE("zero connection has zero curvature")
{
    Configuration c = su2_config(12);
    std::fill(c.A.begin(), c.A.end(), 0.0);
    FormField F = curvature(c);
    CHECK(F.degree == 2);
    CHECK(F.slot == Slot::Lie);
    for (double x : F.v) CHECK(x == 0.0);
    // A = 0 gives the ordinary differential
    FormField D = covariant_differential(c);
    CHECK(D.at(5, 1, 1) == doctest::Approx(0.2).epsilon(1e-9));
}

TEST_CASE("abelian curvature matches the analytic curl")
{
    auto t = make_u1_round_s3();
    auto error_at = [&](int n) {
        auto g = fibred_base(n);
        auto c = sample(
            g, t, [](const Vec3d& p) { return Vec3(p[0], p[1], p[2]); },
            [](const Vec3d& p) {
                Mat3 a = Mat3::Zero();
                a(0, 2) = std::sin(p[0]) * p[1] * p[1];
                return a;
            });
        FormField F = curvature(c);
        double err = 0;
        for (std::size_t i = 0; i < g->size(); ++i) {
            auto p = g->point(i);
            err = std::max(err, std::abs(F.at(i, 0, 0) - 2 * p[1] * std::sin(p[0])));
            err = std::max(err, std::abs(F.at(i, 0, 1) + p[1] * p[1] * std::cos(p[0])));
            err = std::max(err, std::abs(F.at(i, 0, 2)));
        }
        return err;
    };
    double e32 = error_at(32), e64 = error_at(64);
    CHECK(e64 < 1e-5);
    CHECK(e32 / e64 > 12.0);
}

TEST_CASE("constant su(2) connection curvature is purely quadratic")
{
    Configuration c = su2_config(8);
    Mat3 A;
    A << 0.3, -0.2, 0.1, 0.5, 0.0, -0.4, 0.2, 0.7, 0.3;
    for (std::size_t i = 0; i < c.size(); ++i) c.set_A(i, A);
    PointFields pf = point_fields(c, 17);
    for (int a = 0; a < 3; ++a) {
        Vec3 expect = Vec3(A.row((a + 1) % 3)).cross(Vec3(A.row((a + 2) % 3))) * 2.0;
        CHECK((Vec3(pf.Ft.row(a)) - expect).norm() < 1e-12);
    }
}

TEST_CASE("identity map with a fibre connection")
{
    auto t = make_u1_round_s3();
    auto g = fibred_base(16);
    auto c = sample(
        g, t, [](const Vec3d& p) { return Vec3(p[0], p[1], p[2]); },
        [](const Vec3d& p) {
            Mat3 a = Mat3::Zero();
            a(0, 1) = std::cos(p[1]);
            return a;
        });
    double err = 0;
    for (std::size_t i = 0; i < g->size(); ++i) {
        PointFields pf = point_fields(c, i);
        Mat3 expect = Mat3::Identity();
        expect(0, 1) = -std::cos(g->point(i)[1]);
        err = std::max(err, (pf.D - expect).cwiseAbs().maxCoeff());
    }
    // the theta row crosses the branch cut at 2 pi and must still be 1
    CHECK(err < 1e-12);
    // pulling back V_N: (dtheta - A) ^ dx ^ dy = dtheta ^ dx ^ dy
    FormField vol = equivariant_pullback(c, EquivariantForm::volume());
    CHECK(vol.degree == 3);
    for (std::size_t i = 0; i < g->size(); i += 37)
        CHECK(vol.at(i, 0, 0) == doctest::Approx(t->volume_density(c.phi_at(i))).epsilon(1e-12));
    // identity section gives d^A phi back
    FormField Iv = equivariant_pullback(c, EquivariantForm::identity());
    FormField D = covariant_differential(c);
    for (std::size_t k = 0; k < D.v.size(); ++k) CHECK(Iv.v[k] == doctest::Approx(D.v[k]).epsilon(1e-14));
}

TEST_CASE("pullback grading")
{
    Configuration c = fibred_config(8);
    for (auto b : {EquivariantForm::volume(), EquivariantForm::moment(), EquivariantForm::sigma(), EquivariantForm::killing(),
                   EquivariantForm::moment_sharp(), EquivariantForm::identity(), EquivariantForm::moment_slice(0)}) {
        FormField f = equivariant_pullback(c, b);
        CHECK(f.degree == b.degree());
        CHECK(f.slot == (b.tangent ? Slot::Tangent : Slot::None));
    }
    EquivariantForm big{"F^2", 2, 0, false, [](const TargetGeometry&, const Vec3&, double*) {}};
    CHECK_THROWS_AS(equivariant_pullback(c, big), DegreeOverflow);
    CHECK_THROWS_AS(pullback_naturality_residual(c, EquivariantForm::volume()), DegreeOverflow);
}

TEST_CASE("bianchi identity")
{
    CHECK(bianchi_residual(su2_config(48)) < 1e-5);
    CHECK(bianchi_residual(fibred_config(24)) < 1e-10);
    // fourth-order convergence of the nonlinear part
    double r1 = bianchi_residual(su2_config(13)), r2 = bianchi_residual(su2_config(25));
    CHECK(r1 / r2 > 8.0);
}

TEST_CASE("pullback naturality")
{
    Configuration c = fibred_config(48);
    double r = pullback_naturality_residual(c, EquivariantForm::moment_slice(0));
    MESSAGE("mu naturality residual " << r);
    CHECK(r < 1e-5);
    auto f0 = EquivariantForm::invariant("cos x", 0, [](const Vec3& y, double* o) { o[0] = std::cos(y[1]) * std::sin(y[2] / 2); });
    CHECK(pullback_naturality_residual(c, f0) < 1e-5);
    auto f2 = EquivariantForm::invariant("2-form", 2, [](const Vec3& y, double* o) {
        o[0] = std::sin(y[1]);
        o[1] = std::cos(y[2] / 2);
        o[2] = y[1] * y[1];
    });
    CHECK(pullback_naturality_residual(c, f2) < 1e-5);
    EquivariantForm lin{"x.cos", 1, 0, false, [](const TargetGeometry&, const Vec3& y, double* o) { o[0] = std::cos(y[1]); }};
    CHECK(pullback_naturality_residual(c, lin) < 1e-5);
    // classical naturality with A = 0
    Configuration c0 = fibred_config(48, false);
    CHECK(pullback_naturality_residual(c0, f2) < 1e-5);
}

TEST_CASE("u(1) gauge transform")
{
    Configuration c = fibred_config(24);
    auto lam = GaugeTransform::sample(c.grid, [](const Vec3d& p) { return Vec3(0.7 * std::sin(p[0]) * std::cos(p[2] / 2) + p[1], 0, 0); });
    Configuration c2 = gauge_transform(c, lam);
    // theta shifts by lambda, A by d lambda
    CHECK(c2.phi[3 * 100] == doctest::Approx(std::fmod(c.phi[3 * 100] + lam.lambda[300], 2 * M_PI)).epsilon(1e-12));
    for (auto b : {EquivariantForm::volume(), EquivariantForm::moment(), EquivariantForm::sigma(), EquivariantForm::killing(),
                   EquivariantForm::moment_sharp()}) {
        FormField f1 = equivariant_pullback(c, b), f2 = equivariant_pullback(c2, b);
        double d = 0;
        for (std::size_t k = 0; k < f1.v.size(); ++k) d = std::max(d, std::abs(f1.v[k] - f2.v[k]));
        CHECK_MESSAGE(d < 1e-8, b.name);
    }
    // lambda = 0 is the identity
    Configuration c3 = gauge_transform(c, lam.scaled(0.0));
    CHECK(c3.A == c.A);
}

TEST_CASE("su(2) gauge transform")
{
    Configuration c = su2_config(32);
    auto lam = su2_lambda(c.grid);
    Configuration c2 = gauge_transform(c, lam);
    for (auto b : {EquivariantForm::volume(), EquivariantForm::moment()}) {
        FormField f1 = equivariant_pullback(c, b), f2 = equivariant_pullback(c2, b);
        double d = 0;
        for (std::size_t k = 0; k < f1.v.size(); ++k) d = std::max(d, std::abs(f1.v[k] - f2.v[k]));
        CHECK_MESSAGE(d < 1e-5, b.name << " " << d);
    }
    // curvature transforms in the adjoint representation
    for (std::size_t i : {0ul, 517ul, 9000ul}) {
        PointFields p1 = point_fields(c, i), p2 = point_fields(c2, i);
        Eigen::Matrix3d R = su2::adjoint(su2::exp(lam.at(i)).adjoint());
        CHECK((p2.Ft - R * p1.Ft).cwiseAbs().maxCoeff() < 1e-5);
    }
    // rotating e_2 onto the polar axis of the S^2 chart leaves it
    Configuration pole = c;
    for (std::size_t i = 0; i < pole.size(); ++i) pole.set_phi(i, Vec3(1.0, M_PI / 2, 0.0));
    auto quarter = GaugeTransform::sample(c.grid, [](const Vec3d&) { return Vec3(0, 0, M_PI / 4); });
    CHECK_THROWS_AS(gauge_transform(pole, quarter), ChartExit);
}

TEST_CASE("finite and infinitesimal transforms agree to first order")
{
    Configuration c = su2_config(16);
    auto lam = su2_lambda(c.grid);
    GaugeVariation var = gauge_variation(c, lam);
    double prev = 0;
    for (double t : {1e-2, 1e-3}) {
        Configuration ct = gauge_transform(c, lam.scaled(t));
        double e = 0;
        for (std::size_t k = 0; k < c.phi.size(); ++k) e = std::max(e, std::abs((ct.phi[k] - c.phi[k]) / t - var.phi_dot[k]));
        for (std::size_t k = 0; k < c.A.size(); ++k) e = std::max(e, std::abs((ct.A[k] - c.A[k]) / t - var.A_dot[k]));
        MESSAGE("t = " << t << " error " << e);
        if (prev > 0) CHECK(prev / e > 8.0);
        prev = e;
    }
    CHECK(prev < 1e-2);
}

TEST_CASE("rank profile")
{
    auto t = make_u1_round_s3();
    auto g = fibred_base(12);
    auto id = sample(g, t, [](const Vec3d& p) { return Vec3(p[0], p[1], p[2]); }, [](const Vec3d&) { return Mat3::Zero().eval(); });
    RankProfile r = rank_profile(id);
    CHECK(r.histogram[3] == g->size());
    CHECK(r.max_trace_residual < 1e-10);
    auto cst = sample(g, t, [](const Vec3d&) { return Vec3(1, 0.7, 2); }, [](const Vec3d&) { return Mat3::Zero().eval(); });
    r = rank_profile(cst);
    CHECK(r.histogram[0] == g->size());
    CHECK(r.lemma_violations == 0);
    CHECK(r.max_sigma == 0.0);
    // rank 2: phi depends on two coordinates only
    auto r2 = sample(g, t, [](const Vec3d& p) { return Vec3(p[0], p[1], 1.0); }, [](const Vec3d&) { return Mat3::Zero().eval(); });
    r = rank_profile(r2);
    CHECK(r.histogram[2] == g->size());
    CHECK(r.lemma_violations == 0);
    CHECK(numerical_rank(Mat3::Identity(), 0.5) == 3);
}

TEST_CASE("snapshot round trip is bit exact")
{
    Configuration c = su2_config(7);
    c.label = "probe";
    c.orientation = -1;
    c.gM.assign(c.size(), Mat3::Identity() * (1.0 / 3.0));
    auto dir = std::filesystem::temp_directory_path();
    std::string js = (dir / "skyrme_snap.json").string(), bin = (dir / "skyrme_snap.bin").string();
    save_snapshot_json(c, js);
    save_snapshot_binary(c, bin);
    for (const Configuration& d : {load_snapshot_json(js, c.target), load_snapshot_binary(bin, c.target)}) {
        CHECK(*d.grid == *c.grid);
        CHECK(d.phi == c.phi);
        CHECK(d.A == c.A);
        REQUIRE(d.gM.size() == c.gM.size());
        for (std::size_t i = 0; i < c.gM.size(); ++i) CHECK(d.gM[i] == c.gM[i]);
        CHECK(d.label == "probe");
        CHECK(d.orientation == -1);
    }
    CHECK_THROWS_AS(load_snapshot_json(js, make_u1_round_s3()), TargetMismatch);
    std::remove(js.c_str());
    std::remove(bin.c_str());
}
