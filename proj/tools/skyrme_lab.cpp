// Batch driver: verify one family, sweep a parameter grid, or report the
// left-action obstruction. Exit codes: 0 pass, 1 tolerance failure, 2 config error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "skyrme/cli.hpp"

using namespace skyrme;
using skyrme::cli::ojson;

namespace {

ojson load_json(const std::string& path)
{
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config " + path);
    try {
        return ojson::parse(f);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON in ") + path + ": " + e.what());
    }
}

std::string join_rows(const std::string& header, const std::vector<std::string>& rows)
{
    std::string s = header + "\n";
    for (auto& r : rows) s += r + "\n";
    return s;
}

// gnuplot-ready columns: margin E deg r1 r2 gap
std::string columns(const cli::RunConfig& c, const cli::VerifyResult& r)
{
    std::ostringstream os;
    os.precision(12);
    os << "# margin energy degree r1 r2 gap\n";
    for (std::size_t i = 0; i < r.runs.size() && i < c.margins.size(); ++i)
        os << c.margins[i] << ' ' << r.runs[i].energy << ' ' << r.runs[i].degree << ' ' << r.runs[i].r1 << ' ' << r.runs[i].r2
           << ' ' << r.runs[i].gap << '\n';
    return os.str();
}

struct Overrides {
    std::string config, family, surface, target, ax, out;
    int n = 0;
    std::vector<double> margins;
    std::optional<double> alpha, beta, gamma, epsilon;
    bool no_diag = false, cols = false;
};

ojson merged(const Overrides& o)
{
    ojson j = o.config.empty() ? ojson::object() : load_json(o.config);
    if (!j.is_object()) throw ConfigError("config root must be an object");
    if (!o.family.empty()) j["family"] = o.family;
    if (!o.surface.empty()) j["surface"] = o.surface;
    if (!o.target.empty()) j["target"] = o.target;
    if (!o.ax.empty()) j["params"]["ax"] = o.ax;
    if (o.n) j["grid"]["n"] = o.n;
    if (!o.margins.empty()) j["grid"]["margins"] = o.margins;
    if (o.alpha || o.beta || o.gamma) {
        ojson b = j.value("bps", ojson::object());
        if (o.alpha) b["alpha"] = *o.alpha;
        if (o.beta) b["beta"] = *o.beta;
        if (o.gamma) b["gamma"] = *o.gamma;
        j["bps"] = b;
    }
    if (o.epsilon) j["perturbation"]["epsilon"] = *o.epsilon;
    if (o.no_diag) j["diagnostics"] = false;
    if (!o.out.empty()) j["output"]["dir"] = o.out;
    return j;
}

void add_common(CLI::App* app, Overrides& o)
{
    app->add_option("--config", o.config, "JSON run configuration");
    app->add_option("--family", o.family, "identity-u1, dirac, spinorial, twisted, spherical, symplectic");
    app->add_option("--surface", o.surface, "s2-round or s2-deformed");
    app->add_option("--target", o.target, "target preset (hopf, s3-round, s3-eta2-free)");
    app->add_option("--ax", o.ax, "A_x(theta, x) expression for identity-u1");
    app->add_option("--n,-n", o.n, "grid points per axis");
    app->add_option("--margins", o.margins, "margins used for extrapolation");
    app->add_option("--alpha", o.alpha, "BPS alpha used for evaluation");
    app->add_option("--beta", o.beta, "BPS beta used for evaluation");
    app->add_option("--gamma", o.gamma, "BPS gamma used for evaluation");
    app->add_option("--epsilon", o.epsilon, "perturbation amplitude added to phi");
    app->add_flag("--no-diagnostics", o.no_diag, "skip moment, Bianchi and naturality checks");
    app->add_option("--out", o.out, "output directory");
}

int cmd_verify(const Overrides& o)
{
    cli::RunConfig c = cli::parse_config(merged(o));
    cli::VerifyResult r = cli::run_verify(c);
    cli::write_atomic(c.out_dir + "/report.json", r.report.dump(2) + "\n");
    cli::write_atomic(c.out_dir + "/results.csv", join_rows(csv_header(), r.csv_rows));
    if (o.cols) cli::write_atomic(c.out_dir + "/columns.dat", columns(c, r));
    for (auto& k : r.checks)
        std::printf("%-22s %-4s %.6e (tol %.1e)\n", k.name.c_str(), k.pass ? "ok" : "FAIL", k.value, k.tolerance);
    std::printf("degree (extrapolated) %.8f\n", r.degree_extrapolated);
    for (auto& f : r.failures) std::fprintf(stderr, "failure: %s\n", f.c_str());
    return r.exit_code;
}

int cmd_sweep(const Overrides& o)
{
    cli::RunConfig c = cli::parse_config(merged(o));
    cli::SweepResult r = cli::run_sweep(c);
    cli::write_atomic(c.out_dir + "/results.csv", join_rows(csv_header(), r.rows));
    cli::write_atomic(c.out_dir + "/convergence.csv", join_rows(cli::convergence_header(), r.convergence));
    cli::write_atomic(c.out_dir + "/report.json", r.report.dump(2) + "\n");
    std::printf("%zu rows, %zu convergence pairs\n", r.rows.size(), r.convergence.size());
    return r.exit_code;
}

int cmd_obstruction(double K, const std::string& out)
{
    cli::ObstructionResult r = cli::run_obstruction(K);
    ojson j;
    j["schema"] = "skyrme-report";
    j["schema_version"] = cli::kSchemaVersion;
    j["command"] = "obstruction";
    j["K"] = r.K;
    j["contraction"] = r.contraction;
    j["expected"] = K / 2;
    j["moment_def_residual"] = r.def_residual;
    j["moment_constraint_residual"] = r.constraint_residual;
    j["pass"] = r.pass;
    if (!out.empty()) cli::write_atomic(out + "/report.json", j.dump(2) + "\n");
    std::printf("iota_nu mu = %.10f (K/2 = %.10f), def residual %.3e\n", r.contraction, K / 2, r.def_residual);
    return r.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Gauged Skyrme BPS verification lab"};
    app.require_subcommand(1);
    Overrides verify_o, sweep_o;
    auto* verify = app.add_subcommand("verify", "construct a family and check every invariant");
    add_common(verify, verify_o);
    verify->add_flag("--columns", verify_o.cols, "also write gnuplot-ready columns.dat");
    auto* sweep = app.add_subcommand("sweep", "run verify over the sweep.grid of a config");
    add_common(sweep, sweep_o);
    double K = 0;
    std::string obs_out;
    auto* obs = app.add_subcommand("obstruction", "contraction of the left-action moment map");
    obs->add_option("--K", K, "volume scale K > 0")->required();
    obs->add_option("--out", obs_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    try {
        if (*verify) return cmd_verify(verify_o);
        if (*sweep) return cmd_sweep(sweep_o);
        return cmd_obstruction(K, obs_out);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const ParamInconsistent& e) {
        std::fprintf(stderr, "config error: ParamInconsistent: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s: %s\n", e.kind(), e.what());
        return 1;
    }
}
