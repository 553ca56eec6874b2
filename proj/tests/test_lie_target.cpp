#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "skyrme/lie_target.hpp"

using namespace skyrme;

TEST_CASE("structure constants")
{
    auto s = LieAlgebraSpec::su2();
    CHECK(s.antisymmetry_residual() == 0.0);
    CHECK(s.jacobi_residual() == 0.0);
    // coefficient bracket matches the matrix commutator in the -i sigma basis
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> U(-1, 1);
    for (int t = 0; t < 20; ++t) {
        Vec3 x(U(rng), U(rng), U(rng)), y(U(rng), U(rng), U(rng));
        auto X = su2::from_coeffs(x), Y = su2::from_coeffs(y);
        CHECK((su2::coeffs(X * Y - Y * X) - s.bracket(x, y)).norm() < 1e-14);
        CHECK(su2::inner(X, Y) == doctest::Approx(x.dot(y)));
    }
    auto u = LieAlgebraSpec::u1();
    CHECK(u.dim == 1);
    CHECK(u.bracket(Vec3(1, 0, 0), Vec3(2, 0, 0)).norm() == 0.0);
}

TEST_CASE("su(2) helpers")
{
    Vec3 x(0.3, -0.4, 1.1);
    auto g = su2::exp(x);
    CHECK((g * g.adjoint() - su2::Mat2c::Identity()).norm() < 1e-14);
    // adjoint rotation of coefficients
    Vec3 y(0.2, 0.5, -0.7);
    CHECK((su2::coeffs(g * su2::from_coeffs(y) * g.adjoint()) - su2::adjoint(g) * y).norm() < 1e-14);
    Eigen::Vector4d q(0.5, 0.1, -0.2, 0.3);
    CHECK((su2::quat(su2::from_quat(q)) - q).norm() < 1e-15);
}

TEST_CASE("u1 round S^3 target")
{
    auto t = make_u1_round_s3();
    for (double x : {0.2, 0.8, 1.4}) {
        Vec3 y(1.0, x, 2.0);
        Mat3 g = t->metric(y);
        CHECK(g(0, 0) == doctest::Approx(std::cos(x) * std::cos(x)).epsilon(1e-9));
        CHECK(g(1, 1) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(g(2, 2) == doctest::Approx(0.25 * std::sin(x) * std::sin(x)));
        CHECK(t->volume_density(y) == doctest::Approx(std::sqrt(g.determinant())).epsilon(1e-9));
        CHECK(std::abs((t->moment(y).row(0) * t->killing(y).col(0)).value()) == 0.0);
    }
    CHECK(t->volume() == doctest::Approx(2 * M_PI * M_PI).epsilon(1e-9));
    auto mc = verify_moment_conditions(*t, 64);
    CHECK(mc.def_residual < 1e-6);
    CHECK(mc.constraint_residual < 1e-6);
    CHECK(mc.homomorphism_residual < 1e-6);
    CHECK(mc.mu_equivariance < 1e-6);
    CHECK(mc.sigma_equivariance < 1e-6);
    CHECK(mc.sigma_duality < 1e-12);
}

TEST_CASE("u1 target with constant mu_y is rejected")
{
    U1FiberedSpec s;
    s.mu_x = [](double, double) { return 0.0; };
    s.mu_y = [](double, double) { return 0.5; };
    s.h = [](double, double) { return 1.0; };
    s.omega_x = [](double, double) { return 0.0; };
    CHECK_THROWS_AS(make_u1_fibered_target(s), MomentConditionFailed);
}

TEST_CASE("u1 target with a twisted fibration and mu_x")
{
    U1FiberedSpec s;
    s.mu_x = [](double x, double y) { return 0.1 * std::sin(y) * x; };
    s.mu_y = [](double x, double) { return 1.0 + x * x; };
    s.h = [](double x, double y) { return 1.0 + 0.2 * std::cos(y) * x; };
    s.omega_x = [](double x, double) { return 0.3 * x; };
    s.lo = {0, 0.5, 0};
    s.hi = {2 * M_PI, 1.5, 2 * M_PI};
    s.margin = 0.0;
    auto t = make_u1_fibered_target(s);
    Vec3 y(0.3, 1.0, 0.7);
    CHECK(std::sqrt(t->metric(y).determinant()) == doctest::Approx(std::abs(t->volume_density(y))).epsilon(1e-9));
    auto mc = verify_moment_conditions(*t, 48);
    CHECK(mc.def_residual < 1e-6);
    CHECK(mc.constraint_residual == 0.0);
}

TEST_CASE("adjoint round S^3 target")
{
    auto t = make_adjoint_interval_target(AdjointIntervalFamily::round_s3());
    CHECK(t->is_round_adjoint_s3());
    CHECK(t->volume() == doctest::Approx(2 * M_PI * M_PI).epsilon(1e-10));
    auto mc = verify_moment_conditions(*t, 64);
    CHECK(mc.def_residual < 1e-6);
    CHECK(mc.constraint_residual < 1e-12);
    CHECK(mc.homomorphism_residual < 1e-6);
    CHECK(mc.mu_equivariance < 1e-6);
    CHECK(mc.sigma_equivariance < 1e-6);
    CHECK(mc.sigma_duality < 1e-12);
}

TEST_CASE("adjoint moment map agrees with the Maurer-Cartan form on SU(2)")
{
    // mu(X) = 1/4 tr(X (theta_L + theta_R)) with U = cos xi + sin xi x
    auto t = make_adjoint_interval_target(AdjointIntervalFamily::round_s3());
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> U(0.2, 2.9), V(0, 2 * M_PI);
    for (int k = 0; k < 20; ++k) {
        Vec3 y(U(rng), U(rng), V(rng));
        auto u = *t->su2_element(y);
        Vec3 x = s2_point(y[1], y[2]), xu = s2_du(y[1], y[2]), xv = s2_dv(y[1], y[2]);
        su2::Mat2c dU[3] = {-std::sin(y[0]) * su2::Mat2c::Identity() + std::cos(y[0]) * su2::from_coeffs(x),
                            std::sin(y[0]) * su2::from_coeffs(xu), std::sin(y[0]) * su2::from_coeffs(xv)};
        Mat3 mu = t->moment(y);
        for (int a = 0; a < 3; ++a)
            for (int m = 0; m < 3; ++m) {
                su2::Mat2c th = u.adjoint() * dU[m] + dU[m] * u.adjoint();
                double ref = 0.25 * (su2::basis(a) * th).trace().real();
                CHECK(std::abs(mu(a, m) - ref) < 1e-12);
            }
    }
}

TEST_CASE("mu sharp is dual to mu")
{
    auto t = make_adjoint_interval_target(AdjointIntervalFamily::round_s3());
    Vec3 y(1.1, 0.9, 2.3);
    Mat3 ms = t->mu_sharp(y);
    Mat3 g = t->metric(y);
    CHECK(((g * ms).transpose() - t->moment(y)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Sigma for the adjoint family")
{
    // Sigma = *dxi (x) d/dxi + *dx^a (x) x_a, so Sigma(d/du, d/dv) = (h2^2 sin u / h1) d/dxi
    auto t = make_adjoint_interval_target(AdjointIntervalFamily::round_s3());
    Vec3 y(0.8, 1.2, 0.4);
    auto s = sigma_eval(*t, y);
    CHECK(s[0][1][2] == doctest::Approx(std::sin(0.8) * std::sin(0.8) * std::sin(1.2)));
    CHECK(s[1][1][2] == 0.0);
    // Sigma(d/dv, d/dxi) = h1 sin u d/du
    CHECK(s[1][2][0] == doctest::Approx(std::sin(1.2)));
}

TEST_CASE("static targets: Euclidean Sigma and random SPD duality")
{
    auto e = make_static_target([](const Vec3&) { return Mat3::Identity(); }, {0, 0, 0}, {1, 1, 1});
    auto s = sigma_eval(*e, Vec3(0.5, 0.5, 0.5));
    CHECK(s[2][0][1] == 1.0);
    CHECK(s[0][1][2] == 1.0);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> U(-1, 1);
    for (int k = 0; k < 50; ++k) {
        Mat3 a;
        for (int i = 0; i < 9; ++i) a(i / 3, i % 3) = U(rng);
        Mat3 g = a * a.transpose() + 0.2 * Mat3::Identity();
        auto t = make_static_target([g](const Vec3&) { return g; }, {0, 0, 0}, {1, 1, 1});
        CHECK(sigma_duality_residual(*t, Vec3(0.1, 0.2, 0.3)) < 1e-12);
    }
}

TEST_CASE("adjoint profiles are validated")
{
    auto f = AdjointIntervalFamily::round_s3();
    f.eta1 = Profile::constant(-1.0 + 1e-3);
    CHECK_THROWS_AS(make_adjoint_interval_target(f), ConstraintViolated);

    // eta2 = 0, eta1 = -2 h1 h2^2 is a valid family
    AdjointIntervalFamily s;
    s.h1 = Profile::constant(1.0);
    s.h2 = {[](double x) { return std::sin(x); }, {}};
    s.eta1 = {[](double x) { return -2 * std::sin(x) * std::sin(x); }, {}};
    s.eta2 = Profile::constant(0.0);
    auto t = make_adjoint_interval_target(s);
    CHECK_FALSE(t->is_round_adjoint_s3());
    auto mc = verify_moment_conditions(*t, 48);
    CHECK(mc.def_residual < 1e-6);
}

TEST_CASE("left action: closed but not constrained")
{
    for (double K : {1.0, 2.0}) {
        auto t = make_su2_left_target(K);
        CHECK(t->volume() == doctest::Approx(2 * M_PI * M_PI * K));
        Vec3 y(1.0, 1.3, 0.4);
        CHECK(std::abs(std::abs(t->volume_density(y)) - std::sqrt(t->metric(y).determinant())) < 1e-12);
        auto mc = verify_moment_conditions(*t, 64);
        CHECK(mc.def_residual < 1e-6);
        CHECK(mc.homomorphism_residual < 1e-6);
        CHECK(mc.constraint_residual == doctest::Approx(K / 2).epsilon(1e-9));
        CHECK(std::abs(left_action_obstruction(K) - K / 2) < 1e-6);
        CHECK(left_action_contraction(*t, Vec3::Zero(), y) == 0.0);
    }
    CHECK_THROWS_AS(make_su2_left_target(0.0), ParamInconsistent);
}

TEST_CASE("flow integrates the Killing fields")
{
    auto t = make_adjoint_interval_target(AdjointIntervalFamily::round_s3());
    auto l = make_su2_left_target(1.0);
    Vec3 y(0.9, 1.1, 2.0), lam(0.3, -0.2, 0.5);
    for (const auto& tg : {t, l}) {
        double e = 1e-5;
        Vec3 fd = (tg->flow(y, e * lam) - tg->flow(y, -e * lam)) / (2 * e);
        CHECK((fd - tg->killing(y) * lam).norm() < 1e-8);
    }
    auto u = make_u1_round_s3();
    CHECK((u->flow(y, Vec3(0.5, 0, 0)) - Vec3(1.4, 1.1, 2.0)).norm() < 1e-15);
}
