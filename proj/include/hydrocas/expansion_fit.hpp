#ifndef HYDROCAS_EXPANSION_FIT_HPP
#define HYDROCAS_EXPANSION_FIT_HPP

// Least-squares fits of the small-q power series of the inverse
// susceptibilities. Requires Eigen.

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "lindhard.hpp"

namespace hydrocas
{
struct ExpansionFit
{
    // normalized coefficients of q^2 and q^4; ideal values 1/5, 8/175 (T)
    // or 3/5, 12/175 (L)
    complex c2;
    complex c4;
    double residual = 0.0; // relative rms of the fit
};

namespace detail
{
// Fit y(x) = sum_{j=0}^{n-1} a_j x^{j+first_power} with x = (q ell)^2 in [x_lo, x_hi].
inline Eigen::VectorXcd poly_fit(const std::vector<double> &x, const std::vector<complex> &y, int first_power,
                                 int n_terms, double &rel_rms)
{
    const auto n = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXcd M(n, n_terms);
    Eigen::VectorXcd b(n);
    const double xs = x.back();
    for (Eigen::Index i = 0; i < n; ++i)
    {
        const double t = x[static_cast<std::size_t>(i)] / xs;
        for (int j = 0; j < n_terms; ++j)
            M(i, j) = std::pow(t, first_power + j);
        b(i) = y[static_cast<std::size_t>(i)];
    }
    Eigen::VectorXcd a = M.colPivHouseholderQr().solve(b);
    rel_rms = (M * a - b).norm() / b.norm();
    for (int j = 0; j < n_terms; ++j)
        a(j) /= std::pow(xs, first_power + j);
    return a;
}

inline std::vector<double> fit_grid(double ql_lo, double ql_hi, int n)
{
    std::vector<double> x;
    for (int i = 0; i < n; ++i)
    {
        const double ql = ql_lo + (ql_hi - ql_lo) * i / (n - 1);
        x.push_back(ql * ql);
    }
    return x;
}
} // namespace detail

// sigma_0/sigma_T(q, omega) - (1 - i omega tau) fitted by q^2, q^4, q^6 over
// q ell in [ql_lo, ql_hi]; coefficients normalized by i tau v_F^2 / w~ and
// i tau v_F^4 / w~^3.
inline ExpansionFit fit_transverse_expansion(double omega, const MaterialParams &mat, double ql_lo = 0.01,
                                             double ql_hi = 0.2, int n = 40)
{
    const double ell = mat.mean_free_path();
    const auto x = detail::fit_grid(ql_lo, ql_hi, n);
    std::vector<complex> y;
    for (double xi : x)
    {
        const double q = std::sqrt(xi) / ell;
        // use the exact subtraction to avoid cancellation
        y.push_back(extract_eta_finite_q(q, omega, mat) * q * q * mat.tau);
    }
    ExpansionFit f;
    const auto a = detail::poly_fit(x, y, 1, 3, f.residual);
    const complex wt = omega + I / mat.tau;
    const double v2 = mat.v_F * mat.v_F;
    // a_j multiplies (q ell)^{2j}
    f.c2 = a(0) * ell * ell * wt / (I * mat.tau * v2);
    f.c4 = a(1) * std::pow(ell, 4) * wt * wt * wt / (I * mat.tau * v2 * v2);
    return f;
}

// Omega_p^2/(eps0_L - 1) at real omega fitted by 1, q^2, q^4, q^6;
// coefficients normalized by v_F^2 and v_F^4 / omega^2.
inline ExpansionFit fit_longitudinal_expansion(double omega, const MaterialParams &mat, double ql_lo = 0.01,
                                               double ql_hi = 0.2, int n = 40)
{
    const double ell = mat.mean_free_path();
    const auto x = detail::fit_grid(ql_lo, ql_hi, n);
    const double wp2 = mat.omega_p * mat.omega_p;
    std::vector<complex> y;
    for (double xi : x)
    {
        const double q = std::sqrt(xi) / ell;
        y.push_back(wp2 / (eps0(Response::longitudinal, q, omega, mat, 1e-14) - 1.0) + omega * omega);
    }
    ExpansionFit f;
    const auto a = detail::poly_fit(x, y, 1, 3, f.residual);
    const double v2 = mat.v_F * mat.v_F;
    f.c2 = a(0) * ell * ell / v2;
    f.c4 = a(1) * std::pow(ell, 4) * omega * omega / (v2 * v2);
    return f;
}

} // namespace hydrocas

#endif // HYDROCAS_EXPANSION_FIT_HPP
