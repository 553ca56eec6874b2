#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "skyrme/solutions.hpp"

using namespace skyrme;

namespace {

double ax_sin(double th, double) { return 0.1 * std::sin(th); }

AdjointIntervalFamily eta2_free_family()
{
    AdjointIntervalFamily f;
    f.h1 = Profile::constant(1.0);
    f.h2 = {[](double x) { return std::sin(x); }, [](double x) { return std::cos(x); }};
    f.eta1 = {[](double x) { return -2 * std::sin(x) * std::sin(x); }, [](double x) { return -2 * std::sin(2 * x); }};
    f.eta2 = Profile::constant(0.0);
    return f;
}

double max_diff(const Configuration& a, const Configuration& b)
{
    double e = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        e = std::max(e, (a.phi_at(i) - b.phi_at(i)).cwiseAbs().maxCoeff());
        e = std::max(e, (a.A_at(i) - b.A_at(i)).cwiseAbs().maxCoeff());
        e = std::max(e, (a.gM[i] - b.gM[i]).cwiseAbs().maxCoeff());
    }
    return e;
}

}  // namespace

TEST_CASE("surface curvature and Gauss-Bonnet")
{
    for (auto S : {SurfaceGeometry::sphere(1.0), SurfaceGeometry::sphere(0.7), SurfaceGeometry::deformed_sphere(0.2)}) {
        CHECK(S.gauss_consistency(16, 0.1) < 1e-6);
        auto gb = S.gauss_bonnet(96, 0.02);
        CHECK(gb[0] == doctest::Approx(2 * M_PI * S.chi).epsilon(0.01));
    }
    auto gb = SurfaceGeometry::sphere(0.5).gauss_bonnet(96, 0.02);
    CHECK(gb[1] == doctest::Approx(M_PI).epsilon(0.01));
    CHECK_THROWS_AS(SurfaceGeometry::sphere().s_range(0.0), BoundsError);
}

TEST_CASE("identity map on the Hopf target with a fibre connection")
{
    auto t = make_u1_round_s3();
    auto s16 = identity_u1_solution(t, ax_sin, 16, 0.3);
    auto s32 = identity_u1_solution(t, ax_sin, 32, 0.3);
    auto r16 = bps_residuals(s16.config, s16.params), r32 = bps_residuals(s32.config, s32.params);
    CHECK(r32.r1 < 5e-4);
    CHECK(r32.r2 == 0.0);
    CHECK(r16.r1 / r32.r1 > 10);

    // the first BPS equation recovers the formula metric (with the discrete F)
    auto rec = solve_base_metric(s32.config);
    double e = 0;
    for (std::size_t i = 0; i < s32.config.size(); ++i) {
        PointFields pf = point_fields(s32.config, i);
        Mat3 g = identity_u1_metric(*t, s32.config.phi_at(i), pf.D, pf.Ft.row(0).transpose());
        e = std::max(e, (rec.metric[i].g - g).cwiseAbs().maxCoeff());
    }
    CHECK(e < 1e-6);

    // A = 0 gives the target metric
    auto s0 = identity_u1_solution(t, [](double, double) { return 0.0; }, 12, 0.1);
    for (std::size_t i = 0; i < s0.config.size(); i += 97)
        CHECK((s0.config.gM[i] - t->metric(s0.config.phi_at(i))).cwiseAbs().maxCoeff() < 1e-14);

    // the conformal factor turns negative near the x = 0 end
    CHECK_THROWS_AS(identity_u1_solution(t, ax_sin, 12, 0.1), NotRiemannian);

    std::vector<double> m{0.3, 0.25, 0.2}, d;
    for (double mm : m) d.push_back(degree(identity_u1_solution(t, ax_sin, 32, mm).config));
    CHECK(extrapolate_margin(m, d, 2.0) == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("Dirac monopole")
{
    auto s = dirac_monopole(32, 0.05);
    CHECK(s.checks["monopole_residual"] < 1e-5);
    CHECK(s.checks["sigma_max"] < 1e-12);
    auto rp = rank_profile(s.config);
    CHECK(rp.histogram[1] == s.config.size());
    auto r = bps_residuals(s.config, s.params);
    CHECK(r.r1 < 5e-4);
    CHECK(r.r2 == 0.0);
    auto r_1 = bps_residuals(s.config, bps_coefficients(0, 1, 0));
    auto r_3 = bps_residuals(s.config, bps_coefficients(0, -3, 0));
    CHECK(r_1.r2 > 1e-2);
    CHECK(r_3.r2 / r_1.r2 == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("spinorial family")
{
    auto fam = AdjointIntervalFamily::round_s3();
    auto S1 = SurfaceGeometry::sphere(1.0);

    SUBCASE("curvature identity converges")
    {
        auto a = spinorial_solution(S1, fam, 16, 0.1), b = spinorial_solution(S1, fam, 32, 0.1);
        CHECK(b.checks["curvature_identity"] < 1e-3);
        CHECK(a.checks["curvature_identity"] / b.checks["curvature_identity"] > 10);
        CHECK(b.checks["dphi_identity"] < 1e-12);
        auto d = spinorial_solution(SurfaceGeometry::deformed_sphere(0.2), fam, 32, 0.1);
        CHECK(d.checks["curvature_identity"] < 1e-3);
    }
    SUBCASE("round sphere: flat connection, pullback metric, degree one")
    {
        auto s = spinorial_solution(S1, fam, 32, 0.1);
        CHECK(s.topology == "S3");
        double e = 0;
        for (std::size_t i = 0; i < s.config.size(); ++i) {
            PointFields pf = point_fields(s.config, i);
            e = std::max(e, (s.config.gM[i] - pf.D.transpose() * pf.H * pf.D).cwiseAbs().maxCoeff());
        }
        CHECK(e < 1e-12);
        auto r = bps_residuals(s.config, s.params);
        CHECK(r.r1 < 5e-3);
        CHECK(r.r2 == 0.0);
        std::vector<double> m{0.2, 0.15, 0.1}, d;
        for (double mm : m) d.push_back(degree(spinorial_solution(S1, fam, 32, mm).config));
        CHECK(extrapolate_margin(m, d, 2.0) == doctest::Approx(0.5 * S1.chi).epsilon(1e-2));
    }
    SUBCASE("K = 2 sphere closes up as S1 x S2 and satisfies the volume identity")
    {
        auto S2 = SurfaceGeometry::sphere(1 / std::sqrt(2.0));
        std::vector<double> m{0.2, 0.15, 0.1}, v;
        for (double mm : m) {
            auto s = spinorial_solution(S2, fam, 32, mm);
            CHECK(s.topology == "S1xS2");
            CHECK(s.nonriemannian_count == 0);
            v.push_back(s.checks["volume_M"]);
        }
        double area = 2 * M_PI;  // 4 pi R^2
        double expected = (M_PI / 2) * (6 * M_PI * S2.chi - 2 * area);
        CHECK(extrapolate_margin(m, v, 1.0) == doctest::Approx(expected).epsilon(0.01));
    }
    SUBCASE("non-riemannian flag follows the metric coefficient")
    {
        auto D = SurfaceGeometry::deformed_sphere(0.2);
        auto s = spinorial_solution(D, fam, 24, 0.1);
        CHECK(s.nonriemannian_count > 0);
        CHECK(s.nonriemannian_count < s.config.size());
        std::size_t mismatch = 0;
        for (std::size_t i = 0; i < s.config.size(); ++i) {
            auto p = s.config.grid->point(i);
            double h2 = fam.h2(p[0]);
            bool bad = h2 * h2 + 1.5 * fam.eta1(p[0]) * (1 - D.gauss(p[1], p[2])) <= 0;
            mismatch += bad != bool(s.nonriemannian[i]);
        }
        CHECK(mismatch == 0);
        CHECK_THROWS_AS(energy(s.config, s.params), NotRiemannian);
    }
}

TEST_CASE("twisted spinorial family")
{
    auto S2 = SurfaceGeometry::sphere(1 / std::sqrt(2.0));
    auto fam = eta2_free_family();
    fam.mode = Compactification::S3;
    fam.xi_lo = 0;
    fam.xi_hi = M_PI;

    auto t0 = twisted_spinorial_solution(S2, fam, 0.0, 1.0, 0.7, 16, 0.1);
    auto sp = spinorial_solution(S2, fam, 16, 0.1);
    CHECK(max_diff(t0.config, sp.config) < 1e-12);
    CHECK(t0.checks["B"] == 0.0);

    auto s = twisted_spinorial_solution(S2, fam, -1.0, 1.0, 1.0, 32, 0.1);
    CHECK(s.checks["B"] == -0.5);
    CHECK(s.checks["bps2_first"] < 5e-4);
    CHECK(s.checks["bps2_second"] < 5e-4);
    CHECK(s.checks["bps2_third"] == 0.0);
    auto r = bps_residuals(s.config, s.params);
    CHECK(r.r1 < 2e-3);
    CHECK(r.r2 < 1e-3);

    // alpha != 0 needs K constant with h2^2 = beta eta1 (K - 1) / (2 alpha)
    CHECK_THROWS_AS(twisted_spinorial_solution(SurfaceGeometry::sphere(1.0), fam, -1.0, 1.0, 1.0, 8, 0.1),
                    ParamInconsistent);
    CHECK_THROWS_AS(twisted_spinorial_solution(S2, fam, -1.0, 1.0, 0.0, 8, 0.1), ParamInconsistent);
}

TEST_CASE("spherically symmetric family")
{
    SphericalParams p;
    auto s = spherical_solution(p, 32, 0.05);
    CHECK(s.config.orientation == -1);
    CHECK(s.checks["bps2a"] < 5e-4);
    CHECK(s.checks["bps2b"] < 5e-4);
    auto rep = full_report(s.config, s.params);
    CHECK(rep.r1 < 5e-4);
    CHECK(rep.r2 < 5e-4);
    CHECK(std::abs(rep.gap) < 0.01 * rep.energy);

    auto fam = spherical_target_family(p);
    auto t = make_adjoint_interval_target(fam);
    auto mc = verify_moment_conditions(*t);
    CHECK(mc.def_residual < 1e-6);
    CHECK(mc.constraint_residual < 1e-6);

    for (auto bad : {[] { SphericalParams q; q.gamma = 1; return q; }(), [] { SphericalParams q; q.alpha = 0; return q; }(),
                     [] { SphericalParams q; q.beta = 3; return q; }(), [] { SphericalParams q; q.C1 = 0; return q; }(),
                     [] { SphericalParams q; q.C2 = 1; return q; }()})
        CHECK_THROWS_AS(spherical_solution(bad, 8, 0.05), ParamInconsistent);
}

TEST_CASE("spherical target with h1 = 1/(1+xi^2) is the round S^3")
{
    SphericalParams p;
    p.h1 = [](double x) { return 1 / (1 + x * x); };
    auto fam = spherical_target_family(p);
    auto round = AdjointIntervalFamily::round_s3();
    double e = 0;
    for (int k = 0; k <= 50; ++k) {
        double xi = p.xi_lo + (p.xi_hi - p.xi_lo) * k / 50, xt = std::atan(xi), J = 1 + xi * xi;
        e = std::max(e, std::abs(fam.h1(xi) * J - round.h1(xt)));
        e = std::max(e, std::abs(fam.h2(xi) - round.h2(xt)));
        e = std::max(e, std::abs(fam.eta1(xi) * J - round.eta1(xt)));
        e = std::max(e, std::abs(fam.eta2(xi) - round.eta2(xt)));
    }
    CHECK(e < 1e-12);
}

TEST_CASE("symplectic family")
{
    auto fam = eta2_free_family();
    auto data = SymplecticData::round_sphere(0.3);
    auto s = symplectic_solution(data, fam, 1.0, 32, 0.1);
    CHECK(s.checks["normalization"] < 1e-10);
    auto r = bps_residuals(s.config, s.params);
    CHECK(r.r1 < 2e-3);
    CHECK(r.r2 < 1e-3);

    std::vector<double> m{0.2, 0.15, 0.1}, w;
    for (double mm : m) w.push_back(symplectic_solution(data, fam, 1.0, 24, mm).checks["omega_C_over_2pi"]);
    CHECK(extrapolate_margin(m, w, 2.0) == doctest::Approx(2.0).epsilon(2e-2));

    // xi-independent w reduces to the spinorial configuration on the unit sphere
    auto flat = symplectic_solution(SymplecticData::round_sphere(0.0), fam, 1.0, 16, 0.1);
    auto sp = spinorial_solution(SurfaceGeometry::sphere(1.0), fam, 16, 0.1);
    double e = 0;
    for (std::size_t i = 0; i < flat.config.size(); ++i)
        e = std::max(e, (flat.config.A_at(i) - sp.config.A_at(i)).cwiseAbs().maxCoeff());
    CHECK(e < 1e-8);

    CHECK_THROWS_AS(symplectic_solution(data, fam, 1.0, 8, 0.1, 1.01), NormalizationFailed);
    CHECK_THROWS_AS(symplectic_solution(data, fam, 0.0, 8, 0.1), ParamInconsistent);
    CHECK_THROWS_AS(symplectic_solution(data, AdjointIntervalFamily::round_s3(), 1.0, 8, 0.1), ParamInconsistent);
}
