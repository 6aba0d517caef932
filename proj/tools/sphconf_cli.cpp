// Command line front end: mesh validation, curvature, Delaunay flips,
// Jacobians, the prescribed-curvature solver and the icosahedral spectra.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "sphconf/io.hpp"
#include "sphconf/sphconf.hpp"

using namespace sphconf;
using io::json;

namespace
{
constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;

struct Options {
    std::string mesh;
    std::string target;
    std::string output;
    double tol = 1e-10;
    int max_iter = 100;
    bool fd_check = false;
    bool eigen = false;
    bool csv = false;
    std::vector<double> angles = kIcosaAngleFractions;
};

void emit(const Options& opts, const std::string& text)
{
    if (opts.output.empty()) {
        std::cout << text;
    } else {
        io::write_text(opts.output, text);
    }
}

SphericalConeMetric spherical_mesh(const std::string& path)
{
    auto any = io::read_mesh(path);
    if (!std::holds_alternative<SphericalConeMetric>(any)) {
        throw Error(ErrorKind::ParseError, path + ": this command needs a spherical mesh");
    }
    return std::get<SphericalConeMetric>(std::move(any));
}

int cmd_validate(const Options& opts)
{
    const auto any = io::read_mesh(opts.mesh);
    json out;
    std::visit(
        [&](const auto& m) {
            validate_metric(m);
            const auto& s = m.surface;
            out = {{"ok", true},
                   {"geometry", std::decay_t<decltype(m)>::geometry::name},
                   {"vertex_count", s.vertex_count()},
                   {"edge_count", s.edge_count()},
                   {"triangle_count", s.triangle_count()},
                   {"euler_characteristic", s.vertex_count() - s.edge_count() + s.triangle_count()},
                   {"gauss_bonnet_residual", gauss_bonnet(m).residual},
                   {"delaunay_edges", count_delaunay_edges(m)}};
        },
        any);
    std::cout << out.dump(2) << '\n';
    return 0;
}

int cmd_curvature(const Options& opts)
{
    const auto any = io::read_mesh(opts.mesh);
    json out;
    std::visit(
        [&](const auto& m) {
            validate_metric(m);
            const auto gb = gauss_bonnet(m);
            out = {{"kappa", vertex_curvature(m)},
                   {"total", gb.total_curvature},
                   {"area", gb.total_area},
                   {"gauss_bonnet_residual", gb.residual}};
        },
        any);
    emit(opts, out.dump(2) + "\n");
    return 0;
}

int cmd_delaunay(const Options& opts)
{
    const auto any = io::read_mesh(opts.mesh);
    json out;
    std::visit(
        [&](const auto& m) {
            const auto [d, report] = make_delaunay(m);
            out = io::mesh_to_json(d);
            out["flip_report"] = io::to_json(report);
        },
        any);
    emit(opts, out.dump(2) + "\n");
    return 0;
}

json matrix_rows(const Eigen::MatrixXd& m)
{
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        rows.push_back(std::vector<double>(m.row(i).data(), m.row(i).data() + m.cols()));
    }
    return rows;
}

int cmd_jacobian(const Options& opts)
{
    const auto chart = chart_from_metric(spherical_mesh(opts.mesh));
    const Eigen::MatrixXd J = jacobian(chart, chart.base_u);
    if (opts.csv) {
        std::ostringstream text;
        text << std::setprecision(17);
        for (int i = 0; i < J.rows(); ++i) {
            for (int j = 0; j < J.cols(); ++j) {
                text << (j ? "," : "") << J(i, j);
            }
            text << '\n';
        }
        emit(opts, text.str());
        return 0;
    }
    json out{{"jacobian", matrix_rows(J)}, {"symmetry_residual", symmetry_residual(J)}};
    if (opts.eigen) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (J + J.transpose()), Eigen::EigenvaluesOnly);
        const auto& ev = es.eigenvalues();
        out["eigenvalues"] = std::vector<double>(ev.data(), ev.data() + ev.size());
    }
    if (opts.fd_check) {
        const Eigen::MatrixXd F = jacobian_fd(chart, chart.base_u);
        const double scale = std::max(1.0, J.cwiseAbs().maxCoeff());
        double worst = 0.0;
        for (int i = 0; i < J.rows(); ++i) {
            for (int j = 0; j < J.cols(); ++j) {
                const double den = std::max({std::abs(J(i, j)), std::abs(F(i, j)), 1e-6 * scale});
                worst = std::max(worst, std::abs(J(i, j) - F(i, j)) / den);
            }
        }
        out["fd_check"] = {{"step", 1e-5}, {"max_relative_error", worst}};
    }
    emit(opts, out.dump(2) + "\n");
    return 0;
}

int cmd_solve(const Options& opts)
{
    const auto metric = spherical_mesh(opts.mesh);
    const auto target = validate_target(io::read_target(opts.target));
    const auto chart = chart_from_metric(metric);
    SolveOptions so;
    so.tol = opts.tol;
    so.max_iter = opts.max_iter;
    so.throw_on_failure = false;
    const auto report = solve(chart, target, so);
    auto summary = io::to_json(report);
    summary["kappa"] = report.solution.kappa;
    if (!opts.output.empty()) {
        auto doc = io::mesh_to_json(report.solution.metric());
        doc["solve_report"] = summary;
        io::write_text(opts.output, doc.dump(2) + "\n");
    }
    std::cout << summary.dump(2) << '\n';
    return report.converged ? 0 : kExitNumerical;
}

int cmd_icosa_table(const Options& opts)
{
    std::ostringstream text;
    write_icosa_csv(text, icosa_table(opts.angles));
    emit(opts, text.str());
    return 0;
}

int run_guarded(const std::function<int()>& body)
{
    try {
        return body();
    } catch (const Error& e) {
        const json out{{"ok", false}, {"error", to_string(e.kind())}, {"message", e.what()}};
        std::cout << out.dump(2) << '\n';
        return is_validation_error(e.kind()) ? kExitValidation : kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
}
}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Discrete conformal spherical cone-metrics"};
    app.require_subcommand(1);
    Options opts;

    auto* validate = app.add_subcommand("validate", "check a mesh file and report its invariants");
    validate->add_option("mesh", opts.mesh, "mesh JSON")->required()->check(CLI::ExistingFile);

    auto* curvature = app.add_subcommand("curvature", "vertex curvatures, total curvature and area");
    curvature->add_option("mesh", opts.mesh, "mesh JSON")->required()->check(CLI::ExistingFile);
    curvature->add_option("-o", opts.output, "output path");

    auto* delaunay = app.add_subcommand("delaunay", "flip to the Delaunay triangulation");
    delaunay->add_option("mesh", opts.mesh, "mesh JSON")->required()->check(CLI::ExistingFile);
    delaunay->add_option("-o", opts.output, "output mesh path");

    auto* jac = app.add_subcommand("jacobian", "curvature Jacobian at the mesh metric");
    jac->add_option("mesh", opts.mesh, "spherical mesh JSON")->required()->check(CLI::ExistingFile);
    jac->add_flag("--eigen", opts.eigen, "eigenvalues of the symmetrized Jacobian");
    jac->add_flag("--fd-check", opts.fd_check, "compare with central differences");
    jac->add_flag("--csv", opts.csv, "write the matrix as CSV");
    jac->add_option("-o", opts.output, "output path");

    auto* solve_cmd = app.add_subcommand("solve", "find the conformal metric with prescribed curvature");
    solve_cmd->add_option("mesh", opts.mesh, "spherical mesh JSON")->required()->check(CLI::ExistingFile);
    solve_cmd->add_option("target", opts.target, "JSON array of target curvatures")
        ->required()
        ->check(CLI::ExistingFile);
    solve_cmd->add_option("--tol", opts.tol, "max-norm residual tolerance")->capture_default_str();
    solve_cmd->add_option("--max-iter", opts.max_iter, "Newton iteration limit")->capture_default_str();
    solve_cmd->add_option("-o", opts.output, "output path for the solved mesh");

    auto* icosa = app.add_subcommand("icosa-table", "Jacobian spectra of equilateral icosahedra");
    icosa->add_option("--angles", opts.angles, "inner angles as multiples of pi/5")->delimiter(',');
    icosa->add_option("-o", opts.output, "output CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    if (*validate) {
        return run_guarded([&] { return cmd_validate(opts); });
    }
    if (*curvature) {
        return run_guarded([&] { return cmd_curvature(opts); });
    }
    if (*delaunay) {
        return run_guarded([&] { return cmd_delaunay(opts); });
    }
    if (*jac) {
        return run_guarded([&] { return cmd_jacobian(opts); });
    }
    if (*solve_cmd) {
        return run_guarded([&] { return cmd_solve(opts); });
    }
    return run_guarded([&] { return cmd_icosa_table(opts); });
}
