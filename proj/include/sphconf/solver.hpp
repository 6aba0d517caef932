#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sphconf/conformal.hpp"

namespace sphconf
{

/// Prescribed curvature that passed validate_target.
struct CurvatureTarget {
    std::vector<double> kappa_star;
};

/**
 * @brief Accept a target curvature iff every entry lies in (0, 2pi), the total
 * is below 4pi and each entry is below the sum of the others.
 */
inline CurvatureTarget validate_target(std::span<const double> kappa_star, double margin = 1e-12)
{
    const int V = static_cast<int>(kappa_star.size());
    if (V < 3) {
        throw Error(ErrorKind::OutOfRange, "a target needs at least 3 vertices");
    }
    for (int v = 0; v < V; ++v) {
        const double k = kappa_star[v];
        if (!(k > margin && k < 2.0 * kPi - margin)) {
            throw Error(ErrorKind::OutOfRange,
                        "target at vertex " + std::to_string(v) + " is " + std::to_string(k) +
                            ", outside (0, 2pi)",
                        v);
        }
    }
    const double total = std::accumulate(kappa_star.begin(), kappa_star.end(), 0.0);
    if (!(total < 4.0 * kPi - margin)) {
        throw Error(ErrorKind::GaussBonnetExcess,
                    "target curvatures sum to " + std::to_string(total) + ", not below 4pi");
    }
    for (int v = 0; v < V; ++v) {
        const double others = total - kappa_star[v];
        if (!(kappa_star[v] < others - margin)) {
            throw Error(ErrorKind::TriangleLikeViolation,
                        "target at vertex " + std::to_string(v) + " is " +
                            std::to_string(kappa_star[v]) + ", not below the sum " +
                            std::to_string(others) + " of the others",
                        v);
        }
    }
    return {std::vector<double>(kappa_star.begin(), kappa_star.end())};
}

struct SolveOptions {
    double tol = 1e-10;  ///< on the max-norm of kappa(u) - kappa*
    int max_iter = 100;
    std::optional<std::vector<double>> initial_u;
    double margin = 1e-10;      ///< triangle validity margin in the line search
    double min_damping = 1e-10;
    double min_rcond = 1e-12;   ///< min |eig| / max |eig| of the symmetrized Jacobian
    bool throw_on_failure = true;
};

struct SolveTraceEntry {
    double residual = 0;  ///< 2-norm of kappa(u) - kappa* before the step
    double step = 0;      ///< max-norm of the accepted step
    double damping = 0;   ///< accepted step fraction
};

struct SolveReport {
    std::vector<double> u_solution;
    int iterations = 0;
    double final_residual = 0;  ///< max-norm
    int flips_total = 0;
    bool converged = false;
    std::vector<SolveTraceEntry> trace;
    CurvatureEvaluation solution;
    /// set when the solve stopped without converging
    std::optional<ErrorKind> failure;
    std::string message;

    /// all curvatures of the final metric in (0, 2pi)
    bool in_convex_region() const
    {
        return std::all_of(solution.kappa.begin(), solution.kappa.end(),
                           [](double k) { return k > 0.0 && k < 2.0 * kPi; });
    }
};

namespace detail
{
inline double max_abs(std::span<const double> x)
{
    double m = 0.0;
    for (double v : x) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

inline Eigen::VectorXd residual(const CurvatureEvaluation& ev, std::span<const double> target)
{
    Eigen::VectorXd r(target.size());
    for (std::size_t v = 0; v < target.size(); ++v) {
        r[v] = ev.kappa[v] - target[v];
    }
    return r;
}
}  // namespace detail

/**
 * @brief Damped Newton for kappa(u) = kappa*.
 *
 * Each step solves J s = -r with the symmetrized Jacobian through its
 * eigendecomposition and halves the step until the trial point evaluates,
 * keeps every curvature below 2pi and reduces |r|_2.
 */
inline SolveReport solve(const ConformalChart& chart, const CurvatureTarget& target,
                         const SolveOptions& opts = {})
{
    const int V = chart.vertex_count();
    if (static_cast<int>(target.kappa_star.size()) != V) {
        throw Error(ErrorKind::OutOfRange, "target has " +
                                               std::to_string(target.kappa_star.size()) +
                                               " entries, expected " + std::to_string(V));
    }
    const KappaOptions kopts{opts.margin};
    SolveReport report;
    auto fail = [&](ErrorKind kind, const std::string& msg) {
        report.failure = kind;
        report.message = msg;
        if (opts.throw_on_failure) {
            throw Error(kind, msg);
        }
        return report;
    };

    std::vector<double> u = opts.initial_u.value_or(chart.base_u);
    CurvatureEvaluation ev = kappa_of_u(chart, u, kopts);
    report.flips_total = ev.flip_report.flips_performed;
    Eigen::VectorXd r = detail::residual(ev, target.kappa_star);
    auto sync = [&] {
        report.u_solution = ev.u;
        report.final_residual = r.cwiseAbs().maxCoeff();
        report.solution = ev;
    };
    sync();

    for (int iter = 0;; ++iter) {
        if (r.cwiseAbs().maxCoeff() <= opts.tol) {
            report.converged = true;
            return report;
        }
        if (iter >= opts.max_iter) {
            return fail(ErrorKind::MaxIterations,
                        "residual " + std::to_string(report.final_residual) + " after " +
                            std::to_string(iter) + " iterations");
        }
        Eigen::MatrixXd J;
        try {
            J = jacobian(ev);
        } catch (const Error& err) {
            return fail(err.kind(), err.what());
        }
        const Eigen::MatrixXd sym = 0.5 * (J + J.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
        const auto abs_eig = es.eigenvalues().cwiseAbs();
        const double rcond = abs_eig.minCoeff() / abs_eig.maxCoeff();
        if (!(rcond >= opts.min_rcond)) {
            return fail(ErrorKind::SingularJacobian,
                        "reciprocal condition " + std::to_string(rcond) + " at iteration " +
                            std::to_string(iter));
        }
        const Eigen::VectorXd s = -(es.eigenvectors() *
                                    (es.eigenvalues().cwiseInverse().asDiagonal() *
                                     (es.eigenvectors().transpose() * r)));
        const ConformalChart here = rebase(ev);
        const double norm = r.norm();
        double damping = 1.0;
        std::vector<double> trial(V);
        for (;;) {
            for (int v = 0; v < V; ++v) {
                trial[v] = u[v] + damping * s[v];
            }
            try {
                auto cand = kappa_of_u(here, trial, kopts);
                const bool below = std::all_of(cand.kappa.begin(), cand.kappa.end(),
                                               [](double k) { return k < 2.0 * kPi; });
                const Eigen::VectorXd rc = detail::residual(cand, target.kappa_star);
                if (below && rc.norm() < norm) {
                    report.trace.push_back({norm, damping * s.cwiseAbs().maxCoeff(), damping});
                    report.flips_total += cand.flip_report.flips_performed;
                    ev = std::move(cand);
                    r = rc;
                    u = trial;
                    break;
                }
            } catch (const Error&) {
                // rejected trial point; shrink the step
            }
            damping *= 0.5;
            if (damping < opts.min_damping) {
                return fail(ErrorKind::LineSearchStall,
                            "no decrease along the Newton direction at iteration " +
                                std::to_string(iter) + ", residual " +
                                std::to_string(r.cwiseAbs().maxCoeff()));
            }
        }
        report.iterations = iter + 1;
        sync();
    }
}

/** @brief Curvature of the chord metric of the chart's base metric */
inline std::vector<double> euclidean_limit_curvature(const ConformalChart& chart)
{
    return vertex_curvature(chord_map(base_metric(chart)));
}

}  // namespace sphconf
