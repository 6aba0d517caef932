#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sphconf/trig.hpp"

namespace sphconf
{

/**
 * @brief Euclidean cone over an n-gon: apex joined to boundary kinks w_i by
 * radial segments rho_i, consecutive kinks joined by boundary segments lam_i.
 *
 * Triangle i has sides (rho_i, rho_{i+1}, lam_i), indices mod n.
 */
struct ConePolygon {
    std::vector<double> rho;
    std::vector<double> lam;

    int size() const { return static_cast<int>(rho.size()); }
};

struct PolygonAngles {
    double omega = 0;            ///< total apex angle
    std::vector<double> apex;    ///< omega_i, apex angle of triangle i
    std::vector<double> alpha;   ///< boundary angle at w_i
    std::vector<double> before;  ///< part of alpha_i inside triangle i-1
    std::vector<double> after;   ///< part of alpha_i inside triangle i
};

namespace detail
{
inline void check_polygon(const ConePolygon& p)
{
    const int n = p.size();
    if (n < 3 || static_cast<int>(p.lam.size()) != n) {
        throw Error(ErrorKind::DegenerateTriangle,
                    "cone polygon needs n >= 3 radial and boundary lengths");
    }
}
}  // namespace detail

inline PolygonAngles polygon_angles(const ConePolygon& p)
{
    detail::check_polygon(p);
    const int n = p.size();
    PolygonAngles out;
    out.apex.resize(n);
    out.alpha.resize(n);
    out.before.resize(n);
    out.after.resize(n);
    for (int i = 0; i < n; ++i) {
        const int j = (i + 1) % n;
        try {
            out.apex[i] = euclidean_angle(p.lam[i], p.rho[i], p.rho[j]);
            out.after[i] = euclidean_angle(p.rho[j], p.rho[i], p.lam[i]);
            out.before[j] = euclidean_angle(p.rho[i], p.rho[j], p.lam[i]);
        } catch (const Error& err) {
            throw Error(ErrorKind::DegenerateTriangle,
                        "radial triangle " + std::to_string(i) + ": " + err.what(), i);
        }
        out.omega += out.apex[i];
    }
    for (int i = 0; i < n; ++i) {
        out.alpha[i] = out.before[i] + out.after[i];
    }
    return out;
}

/**
 * @brief Matrix of I(x, y) = sum rho_i x_i d alpha_i(y), I_ij = rho_i d alpha_i / d rho_j.
 *
 * In triangle i the angle at w_i depends on rho_i and rho_{i+1} only:
 * rho_i d/d rho_{i+1} = 1 / sin(omega_i) and rho_i d/d rho_i = -cot(omega_i).
 */
inline Eigen::MatrixXd form_I(const ConePolygon& p)
{
    const auto ang = polygon_angles(p);
    const int n = p.size();
    Eigen::MatrixXd I = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const int j = (i + 1) % n;
        const double s = std::sin(ang.apex[i]);
        const double cot = std::cos(ang.apex[i]) / s;
        // triangle i contributes to alpha_i (after) and alpha_j (before)
        I(i, i) -= cot;
        I(i, j) += 1.0 / s;
        I(j, j) -= cot;
        I(j, i) += 1.0 / s;
    }
    return I;
}

/** @brief d omega / d rho_j */
inline Eigen::VectorXd omega_gradient(const ConePolygon& p)
{
    const auto ang = polygon_angles(p);
    const int n = p.size();
    Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
        const int j = (i + 1) % n;
        // dA = a / (2K) (da - cos C db - cos B dc) with A = omega_i, a = lam_i
        const double two_k = p.rho[i] * p.rho[j] * std::sin(ang.apex[i]);
        const double f = p.lam[i] / two_k;
        g[i] -= f * std::cos(ang.after[i]);
        g[j] -= f * std::cos(ang.before[j]);
    }
    return g;
}

struct Signature {
    int n_plus = 0, n_minus = 0, n_zero = 0;

    bool operator==(const Signature&) const = default;
};

/** @brief Eigenvalue sign counts of the symmetric part of @p m */
inline Signature signature_of(const Eigen::MatrixXd& m, double tol)
{
    const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
    Signature s;
    for (int k = 0; k < es.eigenvalues().size(); ++k) {
        const double l = es.eigenvalues()[k];
        if (std::abs(l) <= tol) {
            ++s.n_zero;
        } else if (l > 0) {
            ++s.n_plus;
        } else {
            ++s.n_minus;
        }
    }
    return s;
}

struct LinkDirection {
    double omega_dot = 0;
    double form_value = 0;
};

/** @brief (omega'(x), I(x, x)) for a radial deformation x */
inline LinkDirection link_direction_check(const ConePolygon& p, const Eigen::VectorXd& x)
{
    return {omega_gradient(p).dot(x), x.dot(form_I(p) * x)};
}

/** @brief Regular cone polygon with n kinks, apex angle omega and radius rho */
inline ConePolygon regular_polygon(int n, double omega, double rho = 1.0)
{
    return {std::vector<double>(n, rho),
            std::vector<double>(n, 2.0 * rho * std::sin(0.5 * omega / n))};
}

}  // namespace sphconf
