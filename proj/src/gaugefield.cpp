#include "skyrme/gaugefield.hpp"

#include <cstring>
#include <fstream>
#include <json.hpp>

namespace skyrme {

namespace {

Mat3 cofactor(const Mat3& D)
{
    Mat3 c;
    for (int i = 0; i < 3; ++i) {
        Vec3 r1 = D.row((i + 1) % 3).transpose(), r2 = D.row((i + 2) % 3).transpose();
        c.row(i) = r1.cross(r2).transpose();
    }
    return c;
}

// Pointwise 4th-order derivative of a target-coordinate evaluator.
template <class F>
auto target_diff(F&& f, const Vec3& y, int axis, double h = 1e-4)
{
    Vec3 e = Vec3::Zero();
    e[axis] = h;
    return (f(y - 2 * e) - 8 * f(y - e) + 8 * f(y + e) - f(y + 2 * e)) / (12 * h);
}

}  // namespace

Configuration::Configuration(GridPtr g, TargetPtr t) : grid(std::move(g)), target(std::move(t))
{
    phi.assign(grid->size() * 3, 0.0);
    A.assign(grid->size() * 9, 0.0);
}

Mat3 Configuration::A_at(std::size_t i) const
{
    Mat3 a;
    for (int r = 0; r < 3; ++r)
        for (int l = 0; l < 3; ++l) a(r, l) = A[9 * i + 3 * r + l];
    return a;
}

void Configuration::set_phi(std::size_t i, const Vec3& y)
{
    for (int m = 0; m < 3; ++m) phi[3 * i + m] = y[m];
}

void Configuration::set_A(std::size_t i, const Mat3& a)
{
    for (int r = 0; r < 3; ++r)
        for (int l = 0; l < 3; ++l) A[9 * i + 3 * r + l] = a(r, l);
}

void Configuration::check_chart() const
{
    for (std::size_t i = 0; i < size(); ++i)
        if (!target->in_chart(phi_at(i))) throw ChartExit("phi leaves the target chart at grid point " + std::to_string(i));
}

PointFields point_fields(const Configuration& c, std::size_t idx)
{
    const PatchGrid& g = *c.grid;
    const TargetGeometry& t = *c.target;
    const auto& f = t.algebra().f;
    const int dim = t.algebra().dim;
    PointFields pf;
    pf.y = c.phi_at(idx);
    for (int m = 0; m < 3; ++m)
        for (int l = 0; l < 3; ++l)
            pf.dphi(m, l) = diff_at(g, idx, l, [&](std::size_t j) { return c.phi[3 * j + m]; }, t.period(m));
    pf.A = c.A_at(idx);
    double dA[3][3][3];  // dA[l][a][s] = d_l A^a_s
    for (int l = 0; l < 3; ++l)
        for (int a = 0; a < dim; ++a)
            for (int s = 0; s < 3; ++s)
                dA[l][a][s] = diff_at(g, idx, l, [&](std::size_t j) { return c.A[9 * j + 3 * a + s]; });
    pf.Ft.setZero();
    for (int a = 0; a < dim; ++a) {
        for (int k = 0; k < 3; ++k) {
            double curl = 0;
            for (int l = 0; l < 3; ++l)
                for (int s = 0; s < 3; ++s) curl += eps3(k, l, s) * dA[l][a][s];
            pf.Ft(a, k) = curl;
        }
        for (int b = 0; b < dim; ++b)
            for (int cc = 0; cc < dim; ++cc) {
                if (f[a][b][cc] == 0.0) continue;
                Vec3 w = Vec3(pf.A.row(b)).cross(Vec3(pf.A.row(cc)));
                pf.Ft.row(a) += 0.5 * f[a][b][cc] * w.transpose();
            }
    }
    pf.H = t.metric(pf.y);
    pf.Hi = pf.H.inverse();
    pf.v = t.volume_density(pf.y);
    pf.I = t.killing(pf.y);
    pf.mu = t.moment(pf.y);
    pf.D = pf.dphi;
    for (int a = 0; a < dim; ++a) pf.D -= pf.I.col(a) * pf.A.row(a);
    return pf;
}

FormField curvature(const Configuration& c)
{
    const int dim = c.target->algebra().dim;
    FormField F(c.grid, 2, Slot::Lie, dim);
    parallel_for(c.size(), [&](std::size_t i) {
        PointFields pf = point_fields(c, i);
        for (int a = 0; a < dim; ++a)
            for (int k = 0; k < 3; ++k) F.at(i, a, k) = pf.Ft(a, k);
    });
    return F;
}

FormField covariant_differential(const Configuration& c)
{
    FormField D(c.grid, 1, Slot::Tangent, 3);
    parallel_for(c.size(), [&](std::size_t i) {
        PointFields pf = point_fields(c, i);
        for (int m = 0; m < 3; ++m)
            for (int l = 0; l < 3; ++l) D.at(i, m, l) = pf.D(m, l);
    });
    return D;
}

double bianchi_residual(const Configuration& c)
{
    const int dim = c.target->algebra().dim;
    const auto& f = c.target->algebra().f;
    FormField F = curvature(c);
    const PatchGrid& g = *c.grid;
    return max_points(g, [&](std::size_t i) {
        Mat3 A = c.A_at(i);
        double r = 0;
        for (int a = 0; a < dim; ++a) {
            double s = 0;
            for (int k = 0; k < 3; ++k) s += diff_at(g, i, k, [&](std::size_t j) { return F.at(j, a, k); });
            for (int b = 0; b < dim; ++b)
                for (int cc = 0; cc < dim; ++cc) {
                    if (f[a][b][cc] == 0.0) continue;
                    for (int k = 0; k < 3; ++k) s += f[a][b][cc] * A(b, k) * F.at(i, cc, k);
                }
            r = std::max(r, std::abs(s));
        }
        return r;
    });
}

// ------------------------------------------------------------ pullbacks

int EquivariantForm::coeff_size(int dim) const
{
    return (tangent ? 3 : 1) * (p == 1 ? dim : 1) * FormField::components(q);
}

EquivariantForm EquivariantForm::volume()
{
    return {"V_N", 0, 3, false, [](const TargetGeometry& t, const Vec3& y, double* o) { o[0] = t.volume_density(y); }};
}

EquivariantForm EquivariantForm::moment()
{
    return {"mu", 1, 1, false, [](const TargetGeometry& t, const Vec3& y, double* o) {
                Mat3 m = t.moment(y);
                for (int a = 0; a < t.algebra().dim; ++a)
                    for (int k = 0; k < 3; ++k) o[a * 3 + k] = m(a, k);
            }};
}

EquivariantForm EquivariantForm::sigma()
{
    return {"Sigma", 0, 2, true, [](const TargetGeometry& t, const Vec3& y, double* o) {
                Mat3 s = t.sigma_dual(y);
                for (int m = 0; m < 3; ++m)
                    for (int k = 0; k < 3; ++k) o[m * 3 + k] = s(m, k);
            }};
}

EquivariantForm EquivariantForm::killing()
{
    return {"nu", 1, 0, true, [](const TargetGeometry& t, const Vec3& y, double* o) {
                Mat3 I = t.killing(y);
                int dim = t.algebra().dim;
                for (int m = 0; m < 3; ++m)
                    for (int a = 0; a < dim; ++a) o[m * dim + a] = I(m, a);
            }};
}

EquivariantForm EquivariantForm::moment_sharp()
{
    return {"mu_sharp", 1, 0, true, [](const TargetGeometry& t, const Vec3& y, double* o) {
                Mat3 ms = t.mu_sharp(y);
                int dim = t.algebra().dim;
                for (int m = 0; m < 3; ++m)
                    for (int a = 0; a < dim; ++a) o[m * dim + a] = ms(m, a);
            }};
}

EquivariantForm EquivariantForm::identity()
{
    return {"I", 0, 1, true, [](const TargetGeometry&, const Vec3&, double* o) {
                for (int m = 0; m < 3; ++m)
                    for (int k = 0; k < 3; ++k) o[m * 3 + k] = (m == k) ? 1.0 : 0.0;
            }};
}

EquivariantForm EquivariantForm::moment_slice(int a)
{
    return {"mu_" + std::to_string(a), 0, 1, false, [a](const TargetGeometry& t, const Vec3& y, double* o) {
                Mat3 m = t.moment(y);
                for (int k = 0; k < 3; ++k) o[k] = m(a, k);
            }};
}

EquivariantForm EquivariantForm::invariant(std::string name, int q, std::function<void(const Vec3&, double*)> f)
{
    return {std::move(name), 0, q, false, [f](const TargetGeometry&, const Vec3& y, double* o) { f(y, o); }};
}

namespace {

// Pulls back one scalar-valued block of coefficients b with bidegree (p, q).
void pull_block(const PointFields& pf, int dim, int p, int q, const double* b, double* o)
{
    if (p == 0) {
        switch (q) {
        case 0: o[0] = b[0]; break;
        case 1: {
            Vec3 r = pf.D.transpose() * Vec3(b[0], b[1], b[2]);
            for (int k = 0; k < 3; ++k) o[k] = r[k];
            break;
        }
        case 2: {
            Vec3 r = cofactor(pf.D).transpose() * Vec3(b[0], b[1], b[2]);
            for (int k = 0; k < 3; ++k) o[k] = r[k];
            break;
        }
        default: o[0] = pf.D.determinant() * b[0]; break;
        }
        return;
    }
    if (q == 0) {
        Vec3 r = Vec3::Zero();
        for (int a = 0; a < dim; ++a) r += b[a] * Vec3(pf.Ft.row(a));
        for (int k = 0; k < 3; ++k) o[k] = r[k];
        return;
    }
    double s = 0;
    for (int a = 0; a < dim; ++a) s += Vec3(pf.Ft.row(a)).dot(pf.D.transpose() * Vec3(b[3 * a], b[3 * a + 1], b[3 * a + 2]));
    o[0] = s;
}

}  // namespace

FormField equivariant_pullback(const Configuration& c, const EquivariantForm& beta)
{
    const int deg = beta.degree();
    if (beta.p > 1 || deg > 3) throw DegreeOverflow("pullback of a (" + std::to_string(beta.p) + "," + std::to_string(beta.q) + ") form exceeds degree 3");
    const int dim = c.target->algebra().dim;
    const int nt = beta.tangent ? 3 : 1;
    const int block = beta.coeff_size(dim) / nt;
    FormField out(c.grid, deg, beta.tangent ? Slot::Tangent : Slot::None, nt);
    parallel_for(c.size(), [&](std::size_t i) {
        PointFields pf = point_fields(c, i);
        double buf[81];
        beta.coeff(*c.target, pf.y, buf);
        for (int m = 0; m < nt; ++m) pull_block(pf, dim, beta.p, beta.q, buf + m * block, &out.at(i, m, 0));
    });
    return out;
}

double pullback_naturality_residual(const Configuration& c, const EquivariantForm& beta)
{
    if (beta.tangent || beta.degree() > 2 || beta.p > 1) throw DegreeOverflow("naturality residual needs a scalar-valued form of degree <= 2");
    const TargetGeometry& t = *c.target;
    const int dim = t.algebra().dim;
    const int nb = beta.coeff_size(dim);
    FormField lhs = equivariant_pullback(c, beta);
    const PatchGrid& g = *c.grid;
    auto coeffs = [&](const Vec3& y) {
        Eigen::Matrix<double, 9, 1> b = Eigen::Matrix<double, 9, 1>::Zero();
        beta.coeff(t, y, b.data());
        return b;
    };
    return max_points(g, [&](std::size_t i) {
        PointFields pf = point_fields(c, i);
        Eigen::Matrix<double, 9, 1> b = coeffs(pf.y);
        Eigen::Matrix<double, 9, 1> db[3];
        for (int l = 0; l < 3; ++l) db[l] = target_diff(coeffs, pf.y, l);
        auto d = [&](int comp, int l) { return diff_at(g, i, l, [&](std::size_t j) { return lhs.at(j, 0, comp); }); };
        Vec3 dlhs = Vec3::Zero();
        Vec3 rhs = Vec3::Zero();
        int n = 1;
        if (beta.p == 0 && beta.q == 0) {
            for (int l = 0; l < 3; ++l) dlhs[l] = d(0, l);
            rhs = pf.D.transpose() * Vec3(db[0][0], db[1][0], db[2][0]);
            n = 3;
        } else if (beta.p == 0 && beta.q == 1) {
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l)
                    for (int s = 0; s < 3; ++s) dlhs[k] += eps3(k, l, s) * d(s, l);
            Vec3 curl = Vec3::Zero();
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l)
                    for (int s = 0; s < 3; ++s) curl[k] += eps3(k, l, s) * db[l][s];
            rhs = cofactor(pf.D).transpose() * curl;
            for (int a = 0; a < dim; ++a) rhs -= Vec3(b[0], b[1], b[2]).dot(pf.I.col(a)) * Vec3(pf.Ft.row(a));
            n = 3;
        } else if (beta.p == 0 && beta.q == 2) {
            for (int k = 0; k < 3; ++k) dlhs[0] += d(k, k);
            double div = db[0][0] + db[1][1] + db[2][2];
            rhs[0] = div * pf.D.determinant();
            Vec3 bt(b[0], b[1], b[2]);
            for (int a = 0; a < dim; ++a) rhs[0] -= Vec3(pf.Ft.row(a)).dot(pf.D.transpose() * bt.cross(Vec3(pf.I.col(a))));
        } else {
            // (1,0): beta(X) = X^a beta_a, d_g beta = d beta_a
            for (int k = 0; k < 3; ++k) dlhs[0] += d(k, k);
            for (int a = 0; a < dim; ++a) {
                Vec3 grad(db[0][a], db[1][a], db[2][a]);
                rhs[0] += Vec3(pf.Ft.row(a)).dot(pf.D.transpose() * grad);
            }
        }
        (void)nb;
        return (dlhs - rhs).head(n).cwiseAbs().maxCoeff();
    });
}

// ------------------------------------------------------- gauge transforms

GaugeTransform GaugeTransform::sample(GridPtr g, const std::function<Vec3(const Vec3d&)>& f)
{
    GaugeTransform gt;
    gt.grid = g;
    gt.lambda.resize(3 * g->size());
    for (std::size_t i = 0; i < g->size(); ++i) {
        Vec3 l = f(g->point(i));
        for (int a = 0; a < 3; ++a) gt.lambda[3 * i + a] = l[a];
    }
    return gt;
}

GaugeTransform GaugeTransform::scaled(double t) const
{
    GaugeTransform o = *this;
    for (double& x : o.lambda) x *= t;
    return o;
}

Configuration gauge_transform(const Configuration& c, const GaugeTransform& gt)
{
    if (*gt.grid != *c.grid) throw GridMismatch("gauge parameter lives on a different grid");
    const TargetGeometry& t = *c.target;
    const int dim = t.algebra().dim;
    const PatchGrid& g = *c.grid;
    Configuration out = c;
    if (dim == 1) {
        parallel_for(c.size(), [&](std::size_t i) {
            Vec3 lam = gt.at(i);
            out.set_phi(i, t.flow(c.phi_at(i), lam));
            for (int l = 0; l < 3; ++l)
                out.A[9 * i + l] += diff_at(g, i, l, [&](std::size_t j) { return gt.lambda[3 * j]; });
        });
    } else {
        std::vector<double> q(4 * c.size());
        parallel_for(c.size(), [&](std::size_t i) {
            Eigen::Vector4d qi = su2::quat(su2::exp(gt.at(i)));
            for (int k = 0; k < 4; ++k) q[4 * i + k] = qi[k];
        });
        parallel_for(c.size(), [&](std::size_t i) {
            su2::Mat2c gi = su2::exp(gt.at(i)).adjoint();
            Eigen::Matrix3d R = su2::adjoint(gi);
            Mat3 A = c.A_at(i), An;
            for (int l = 0; l < 3; ++l) {
                Eigen::Vector4d dq;
                for (int k = 0; k < 4; ++k) dq[k] = diff_at(g, i, l, [&](std::size_t j) { return q[4 * j + k]; });
                Vec3 mc = su2::coeffs(gi * su2::from_quat(dq));
                An.col(l) = mc + R * A.col(l);
            }
            out.set_A(i, An);
            out.set_phi(i, t.flow(c.phi_at(i), gt.at(i)));
        });
    }
    out.check_chart();
    return out;
}

GaugeVariation gauge_variation(const Configuration& c, const GaugeTransform& gt)
{
    const TargetGeometry& t = *c.target;
    const int dim = t.algebra().dim;
    const auto& f = t.algebra().f;
    const PatchGrid& g = *c.grid;
    GaugeVariation v;
    v.phi_dot.assign(3 * c.size(), 0.0);
    v.A_dot.assign(9 * c.size(), 0.0);
    parallel_for(c.size(), [&](std::size_t i) {
        Vec3 lam = gt.at(i);
        Mat3 I = t.killing(c.phi_at(i));
        Mat3 A = c.A_at(i);
        for (int m = 0; m < 3; ++m)
            for (int a = 0; a < dim; ++a) v.phi_dot[3 * i + m] += I(m, a) * lam[a];
        for (int a = 0; a < dim; ++a)
            for (int l = 0; l < 3; ++l) {
                double s = diff_at(g, i, l, [&](std::size_t j) { return gt.lambda[3 * j + a]; });
                for (int b = 0; b < dim; ++b)
                    for (int cc = 0; cc < dim; ++cc) s += f[a][b][cc] * A(b, l) * lam[cc];
                v.A_dot[9 * i + 3 * a + l] = s;
            }
    });
    return v;
}

// ------------------------------------------------------------ rank profile

int numerical_rank(const Mat3& m, double abs_threshold)
{
    Eigen::JacobiSVD<Mat3> svd(m);
    const Vec3& s = svd.singularValues();
    int r = 0;
    for (int k = 0; k < 3; ++k)
        if (s[k] > abs_threshold) ++r;
    return r;
}

RankProfile rank_profile(const Configuration& c, double rel)
{
    RankProfile rp;
    const std::size_t N = c.size();
    rp.rank_D.assign(N, 0);
    rp.rank_sigma.assign(N, 0);
    std::vector<double> tr(N, 0.0), sig(N, 0.0);
    const int dim = c.target->algebra().dim;
    parallel_for(N, [&](std::size_t i) {
        PointFields pf = point_fields(c, i);
        double smax = Eigen::JacobiSVD<Mat3>(pf.D).singularValues()[0];
        int r = smax > 0 ? numerical_rank(pf.D, rel * smax) : 0;
        Mat3 S = pf.v * pf.Hi * cofactor(pf.D);
        double scale = smax * smax * std::abs(pf.v) * pf.Hi.norm();
        int rs = scale > 0 ? numerical_rank(S, rel * scale) : 0;
        rp.rank_D[i] = r;
        rp.rank_sigma[i] = rs;
        if (r == 3) {
            Mat3 Ms = Mat3::Zero();
            Mat3 sharp = pf.Hi * pf.mu.transpose();
            for (int a = 0; a < dim; ++a) Ms += sharp.col(a) * pf.Ft.row(a);
            StarMap m{pf.D.inverse() * (S + 3 * Ms)};
            tr[i] = star_trace_residual(m);
        } else {
            sig[i] = S.cwiseAbs().maxCoeff();
        }
    });
    for (std::size_t i = 0; i < N; ++i) {
        int r = rp.rank_D[i];
        ++rp.histogram[r];
        if (r < 3 && rp.rank_sigma[i] != std::max(r - 1, 0)) ++rp.lemma_violations;
        rp.max_trace_residual = std::max(rp.max_trace_residual, tr[i]);
        rp.max_sigma = std::max(rp.max_sigma, sig[i]);
    }
    return rp;
}

// --------------------------------------------------------------- snapshots

namespace {

using nlohmann::json;

json header_of(const Configuration& c)
{
    const PatchGrid& g = *c.grid;
    json j;
    j["format"] = "skyrme-snapshot";
    j["version"] = 1;
    j["grid"] = {{"lo", g.chart_lo()}, {"hi", g.chart_hi()}, {"n", g.n()}, {"periodic", g.periodic()}, {"margin", g.margin()}};
    j["target"] = c.target ? c.target->name() : "";
    j["label"] = c.label;
    j["orientation"] = c.orientation;
    j["sizes"] = {{"phi", c.phi.size()}, {"A", c.A.size()}, {"gM", c.gM.size() * 9}};
    return j;
}

Configuration from_header(const json& j, TargetPtr target)
{
    if (j.value("format", "") != "skyrme-snapshot") throw ConfigError("not a configuration snapshot");
    if (target && j.value("target", "") != target->name())
        throw TargetMismatch("snapshot was written for target '" + j.value("target", "") + "'");
    const json& g = j.at("grid");
    GridPtr grid = build_patch(g.at("lo").get<Vec3d>(), g.at("hi").get<Vec3d>(), g.at("n").get<std::array<int, 3>>(),
                               g.at("periodic").get<std::array<bool, 3>>(), g.at("margin").get<double>());
    Configuration c(grid, target);
    c.label = j.value("label", "");
    c.orientation = j.value("orientation", 1);
    return c;
}

std::vector<double> flat_metric(const Configuration& c)
{
    std::vector<double> m;
    m.reserve(c.gM.size() * 9);
    for (const auto& g : c.gM)
        for (int k = 0; k < 9; ++k) m.push_back(g(k / 3, k % 3));
    return m;
}

void set_metric(Configuration& c, const std::vector<double>& m)
{
    c.gM.resize(m.size() / 9);
    for (std::size_t i = 0; i < c.gM.size(); ++i)
        for (int k = 0; k < 9; ++k) c.gM[i](k / 3, k % 3) = m[9 * i + k];
}

}  // namespace

void save_snapshot_json(const Configuration& c, const std::string& path)
{
    json j = header_of(c);
    j["phi"] = c.phi;
    j["A"] = c.A;
    j["gM"] = flat_metric(c);
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot write " + path);
    os << j.dump();
}

Configuration load_snapshot_json(const std::string& path, TargetPtr target)
{
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read " + path);
    json j = json::parse(is);
    Configuration c = from_header(j, target);
    c.phi = j.at("phi").get<std::vector<double>>();
    c.A = j.at("A").get<std::vector<double>>();
    set_metric(c, j.at("gM").get<std::vector<double>>());
    if (c.phi.size() != 3 * c.size() || c.A.size() != 9 * c.size()) throw ConfigError("snapshot arrays do not match the grid");
    return c;
}

void save_snapshot_binary(const Configuration& c, const std::string& path)
{
    std::string h = header_of(c).dump();
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot write " + path);
    const char magic[8] = {'S', 'K', 'Y', 'S', 'N', 'A', 'P', '1'};
    os.write(magic, 8);
    std::uint64_t len = h.size();
    os.write(reinterpret_cast<const char*>(&len), sizeof len);
    os.write(h.data(), static_cast<std::streamsize>(h.size()));
    auto put = [&](const std::vector<double>& v) {
        os.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
    };
    put(c.phi);
    put(c.A);
    put(flat_metric(c));
}

Configuration load_snapshot_binary(const std::string& path, TargetPtr target)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("cannot read " + path);
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, "SKYSNAP1", 8) != 0) throw ConfigError("not a binary configuration snapshot");
    std::uint64_t len = 0;
    is.read(reinterpret_cast<char*>(&len), sizeof len);
    std::string h(len, '\0');
    is.read(h.data(), static_cast<std::streamsize>(len));
    json j = json::parse(h);
    Configuration c = from_header(j, target);
    auto get = [&](std::size_t n) {
        std::vector<double> v(n);
        is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
        if (!is) throw ConfigError("truncated snapshot");
        return v;
    };
    const json& s = j.at("sizes");
    c.phi = get(s.at("phi").get<std::size_t>());
    c.A = get(s.at("A").get<std::size_t>());
    set_metric(c, get(s.at("gM").get<std::size_t>()));
    return c;
}

}  // namespace skyrme
