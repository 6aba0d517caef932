#pragma once

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "sphconf/conformal.hpp"
#include "sphconf/fixtures.hpp"

namespace sphconf
{

/// Inner angles of the equilateral icosahedral family, in units of pi/5.
inline const std::vector<double> kIcosaAngleFractions{2.0, 2.4, 2.8, 3.2, 3.6, 4.0, 4.4};

struct IcosaRow {
    double angle_fraction = 0;  ///< beta / (pi/5)
    double edge_arc = 0;
    std::vector<double> eigenvalues;  ///< ascending, of -(J + J^T)/2
    double symmetry_residual = 0;
    int kernel_dimension = 0;
};

/// Eigenvalues within this fraction of the largest magnitude count as zero.
inline constexpr double kKernelThreshold = 1e-6;

/**
 * @brief Spectrum of the curvature Jacobian for the equilateral icosahedral
 * metric with inner angle beta = angle_fraction * pi / 5.
 *
 * The reported eigenvalues are those of the angle derivative d omega / d u,
 * i.e. of -J.
 */
inline IcosaRow icosa_row(double angle_fraction)
{
    IcosaRow row;
    row.angle_fraction = angle_fraction;
    const double beta = angle_fraction * kPi / 5.0;
    row.edge_arc = equilateral_arc_for_angle(beta);
    const auto chart = chart_from_metric(equilateral_metric(fixtures::icosahedron(), row.edge_arc));
    const Eigen::MatrixXd J = jacobian(chart, chart.base_u);
    row.symmetry_residual = symmetry_residual(J);
    const Eigen::MatrixXd A = -0.5 * (J + J.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
    row.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(row.eigenvalues.begin(), row.eigenvalues.end());
    const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
    row.kernel_dimension = static_cast<int>(std::count_if(
        row.eigenvalues.begin(), row.eigenvalues.end(),
        [&](double l) { return std::abs(l) <= kKernelThreshold * scale; }));
    return row;
}

inline std::vector<IcosaRow> icosa_table(const std::vector<double>& fractions = kIcosaAngleFractions)
{
    std::vector<IcosaRow> rows;
    for (double f : fractions) {
        rows.push_back(icosa_row(f));
    }
    return rows;
}

inline void write_icosa_csv(std::ostream& out, const std::vector<IcosaRow>& rows)
{
    out << "beta_over_pi5,edge_arc";
    for (int k = 1; k <= 12; ++k) {
        out << ",ev" << k;
    }
    out << '\n';
    out << std::setprecision(12);
    for (const auto& r : rows) {
        out << r.angle_fraction << ',' << r.edge_arc;
        for (double l : r.eigenvalues) {
            out << ',' << l;
        }
        out << '\n';
    }
}

}  // namespace sphconf
