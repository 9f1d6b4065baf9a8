#ifndef HYDROCAS_LINDHARD_HPP
#define HYDROCAS_LINDHARD_HPP

// Longitudinal and transverse dielectric functions of the degenerate electron
// gas (random-phase approximation), their relaxation-time extensions, and the
// visco-elastic coefficients obtained from their long-wavelength expansion.
//
// All functions in this header use a unit background permittivity.

#include <algorithm>
#include <cmath>
#include <complex>

#include "constants.hpp"
#include "errors.hpp"
#include "materials.hpp"

namespace hydrocas
{
enum class Response
{
    longitudinal,
    transverse
};

namespace detail
{
// Relative imaginary offset applied to a real Lindhard frequency variable.
inline constexpr double kRealAxisOffset = 1e-12;

// The inverse-power series is used once both |u - z| and |u + z| exceed this
// radius; it converges geometrically with ratio 1/radius^2.
inline constexpr double kSeriesRadius = 4.0;

inline complex log_ratio(complex w) { return std::log((w + 1.0) / (w - 1.0)); }

inline complex f_longitudinal_direct(double z, complex u)
{
    const complex wp = z + u;
    const complex wm = z - u;
    return 0.5 + (1.0 - wp * wp) / (8.0 * z) * log_ratio(wp) +
           (1.0 - wm * wm) / (8.0 * z) * log_ratio(wm);
}

// f_T - 1, direct closed form.
inline complex f_transverse_deviation_direct(double z, complex u)
{
    const complex wp = z + u;
    const complex wm = z - u;
    const complex ap = 1.0 - wp * wp;
    const complex am = 1.0 - wm * wm;
    return 3.0 / 8.0 * (z * z + 3.0 * u * u + 1.0) - 1.0 -
           3.0 * ap * ap / (32.0 * z) * log_ratio(wp) - 3.0 * am * am / (32.0 * z) * log_ratio(wm);
}

// Inverse-power expansion valid for |u -+ z| > 1. With a = 1/(u-z) and
// b = 1/(u+z) the divided differences
//   E_m = [(u-z)^-m - (u+z)^-m] / (2z) = a b h_{m-1}(a, b),
// where h_j is the complete homogeneous polynomial of degree j, carry the
// small-z limit without cancellation. Then
//   f_L     = -sum_n E_{2n+1} / ((2n+1)(2n+3))
//   f_T - 1 =  sum_n 3 E_{2n+1} / ((2n+1)(2n+3)(2n+5)).
struct SeriesPair
{
    complex f_longitudinal;
    complex f_transverse_deviation;
};

inline SeriesPair lindhard_series(double z, complex u)
{
    const complex a = 1.0 / (u - z);
    const complex b = 1.0 / (u + z);
    const complex ab = a * b;

    complex h = 1.0;  // h_j(a, b), starting at j = 0
    complex bj = 1.0; // b^j
    complex sum_l = 0.0;
    complex sum_t = 0.0;
    for (int n = 0; n < 400; ++n)
    {
        const double m = 2.0 * n + 1.0;
        const complex E = ab * h;
        const complex tl = E / (m * (m + 2.0));
        const complex tt = 3.0 * E / (m * (m + 2.0) * (m + 4.0));
        sum_l -= tl;
        sum_t += tt;
        if (n > 2 && std::abs(tl) <= 1e-18 * std::abs(sum_l) && std::abs(tt) <= 1e-18 * std::abs(sum_t))
            break;
        // advance h by two degrees
        for (int step = 0; step < 2; ++step)
        {
            bj *= b;
            h = a * h + bj;
        }
    }
    return {sum_l, sum_t};
}

inline bool use_series(double z, complex u)
{
    return std::abs(u - z) >= kSeriesRadius && std::abs(u + z) >= kSeriesRadius;
}

// Static limits u -> 0 from the upper half-plane.
inline double f_longitudinal_static(double z)
{
    if (z == 1.0)
        return 0.5;
    const double s = z < 1.0 ? z : 1.0 / z;
    // (1 - z^2)/(4z) ln|(z+1)/(z-1)| = (1 - z^2) atanh(s) / (2z)
    return 0.5 + (1.0 - z * z) * std::atanh(s) / (2.0 * z);
}

inline double f_transverse_static(double z)
{
    if (z < 0.5)
    {
        // z^2 - 3 sum_{n>=2} z^{2n} / ((2n+1)(2n-1)(2n-3))
        double sum = 0.0;
        double zp = z * z * z * z;
        for (int n = 2; n < 200; ++n)
        {
            const double t = zp / ((2.0 * n + 1.0) * (2.0 * n - 1.0) * (2.0 * n - 3.0));
            sum += t;
            if (t < 1e-18 * sum)
                break;
            zp *= z * z;
        }
        return z * z - 3.0 * sum;
    }
    if (z == 1.0)
        return 0.75;
    const double s = z < 1.0 ? z : 1.0 / z;
    const double a = 1.0 - z * z;
    return 3.0 / 8.0 * (1.0 + z * z) - 3.0 * a * a * std::atanh(s) / (8.0 * z);
}

inline complex regularize(complex u)
{
    if (u.imag() == 0.0)
        return {u.real(), kRealAxisOffset * std::max(1.0, std::abs(u.real()))};
    return u;
}

inline void check_lindhard_args(double z, complex u)
{
    if (!(z > 0.0))
        throw domain_error("lindhard: z = q/(2 k_F) must be positive");
    if (u.imag() < 0.0)
        throw domain_error("lindhard: Im(u) < 0 is outside the causal half-plane");
}

// f_L(z,u), or f_T(z,u) - 1 for the transverse channel.
inline complex lindhard_reduced(Response r, double z, complex u)
{
    check_lindhard_args(z, u);
    if (u == complex{0.0, 0.0})
        return r == Response::longitudinal ? complex{f_longitudinal_static(z)}
                                           : complex{f_transverse_static(z) - 1.0};
    u = regularize(u);
    if (use_series(z, u))
    {
        const auto s = lindhard_series(z, u);
        return r == Response::longitudinal ? s.f_longitudinal : s.f_transverse_deviation;
    }
    return r == Response::longitudinal ? f_longitudinal_direct(z, u)
                                       : f_transverse_deviation_direct(z, u);
}

inline void check_q(double q)
{
    if (!(q > 0.0))
        throw domain_error("lindhard: wavenumber q must be positive");
}

inline complex tilde(double omega, const MaterialParams &mat) { return omega + I / mat.tau; }
} // namespace detail

// Lindhard functions f_L(z,u), f_T(z,u) on the principal branch; a real u is
// shifted by a positive infinitesimal (limit from the upper half-plane).
inline complex lindhard_f(Response r, double z, complex u)
{
    const complex v = detail::lindhard_reduced(r, z, u);
    return r == Response::longitudinal ? v : 1.0 + v;
}

// Collisionless Lindhard dielectric function at a complex frequency in the
// closed upper half-plane. A real frequency is shifted by i * offset / tau.
inline complex eps0(Response r, double q, complex omega, const MaterialParams &mat,
                    double offset = 1e-9)
{
    detail::check_q(q);
    if (omega.imag() < 0.0)
        throw domain_error("eps0: Im(omega) < 0");
    const double wp2 = mat.omega_p * mat.omega_p;
    const double z = q / (2.0 * mat.k_F());
    if (omega == complex{0.0, 0.0})
    {
        if (r == Response::transverse)
            throw domain_error("eps0: transverse function has a pole at omega = 0");
        return 1.0 + 3.0 * wp2 / (q * q * mat.v_F * mat.v_F) * detail::f_longitudinal_static(z);
    }
    if (omega.imag() == 0.0)
        omega += I * offset / mat.tau;
    const complex u = omega / (q * mat.v_F);
    if (r == Response::longitudinal)
        return 1.0 + 3.0 * wp2 / (q * q * mat.v_F * mat.v_F) * lindhard_f(r, z, u);
    return 1.0 - wp2 / (omega * omega) * lindhard_f(r, z, u);
}

// Omega_p^2 / (eps - 1) for the relaxation-time dielectric functions
// (Mermin for L, Kliewer-Fuchs-Conti for T) at real omega > 0.
inline complex inverse_susceptibility(Response r, double q, double omega, const MaterialParams &mat)
{
    detail::check_q(q);
    if (!(omega > 0.0))
        throw domain_error("inverse_susceptibility: omega must be positive");
    const double z = q / (2.0 * mat.k_F());
    const complex wt = detail::tilde(omega, mat);
    const complex u = wt / (q * mat.v_F);
    if (r == Response::transverse)
        return -omega * wt / lindhard_f(r, z, u);

    const double qv2 = q * q * mat.v_F * mat.v_F;
    const complex dynamic = qv2 / (3.0 * lindhard_f(r, z, u));
    const double stat = qv2 / (3.0 * detail::f_longitudinal_static(z));
    return (omega * dynamic + (I / mat.tau) * stat) / wt;
}

inline complex eps_collisional(Response r, double q, double omega, const MaterialParams &mat)
{
    const double wp2 = mat.omega_p * mat.omega_p;
    return 1.0 + wp2 / inverse_susceptibility(r, q, omega, mat);
}

// Normalized inverse conductivity sigma_0 / sigma(q, omega).
inline complex inverse_conductivity(Response r, double q, double omega, const MaterialParams &mat)
{
    return (I * mat.tau / omega) * inverse_susceptibility(r, q, omega, mat);
}

struct ViscoelasticCoeffs
{
    complex longitudinal_modulus; // beta^2 - i w (zeta + 4/3 eta), m^2/s^2
    complex shear_viscosity;      // eta, kinematic, m^2/s
    complex bulk_viscosity;       // zeta, m^2/s (vanishes identically)
    complex bulk_modulus;         // beta^2 - i w zeta, m^2/s^2
    double shear_velocity_sq;     // beta_T^2 = w Im(eta), m^2/s^2
};

// Kinematic shear viscosity v_F^2 tau / (5 (1 - i w tau)), also on the
// imaginary frequency axis.
inline complex shear_viscosity(complex omega, const MaterialParams &mat)
{
    return mat.v_F * mat.v_F * mat.tau / (5.0 * (1.0 - I * omega * mat.tau));
}

// Hydrodynamic parameters matched to the small-q expansion of the
// relaxation-time Lindhard functions.
inline ViscoelasticCoeffs hydro_coeffs(double omega, const MaterialParams &mat)
{
    if (!(omega >= 0.0))
        throw domain_error("hydro_coeffs: omega must be non-negative");
    const double v2 = mat.v_F * mat.v_F;
    const complex denom = 1.0 - I * omega * mat.tau;

    ViscoelasticCoeffs h;
    h.longitudinal_modulus = v2 * (1.0 / 3.0 - 0.6 * I * omega * mat.tau) / denom;
    h.shear_viscosity = shear_viscosity(omega, mat);
    h.bulk_modulus = h.longitudinal_modulus + (4.0 / 3.0) * I * omega * h.shear_viscosity;
    // zeta = i (K - beta^2) / omega with beta^2 = v_F^2 / 3 the static modulus
    h.bulk_viscosity = omega > 0.0 ? I * (h.bulk_modulus - v2 / 3.0) / omega : complex{0.0};
    h.shear_velocity_sq = omega * h.shear_viscosity.imag();
    return h;
}

// Finite-q effective shear viscosity: subtract the local limit 1 - i w tau
// from sigma_0/sigma_T(q, w) and divide by q^2 tau.
inline complex extract_eta_finite_q(double q, double omega, const MaterialParams &mat)
{
    detail::check_q(q);
    if (!(omega > 0.0))
        throw domain_error("extract_eta_finite_q: omega must be positive");
    const double z = q / (2.0 * mat.k_F());
    const complex u = detail::tilde(omega, mat) / (q * mat.v_F);
    // sigma_0/sigma_T = (1 - i w tau) / f_T; f_T - 1 is evaluated directly
    const complex dev = detail::lindhard_reduced(Response::transverse, z, u);
    const complex local = 1.0 - I * omega * mat.tau;
    return -local * dev / ((1.0 + dev) * q * q * mat.tau);
}

// Shear viscosity implied by the collisional magnetic-response construction
// (de Andres et al.). It carries a 1/omega pole.
inline complex deandres_eta(double omega, const MaterialParams &mat)
{
    if (!(omega > 0.0))
        throw domain_error("deandres_eta: omega must be positive (1/omega pole at zero)");
    const double v2 = mat.v_F * mat.v_F;
    const double kF = mat.k_F();
    const complex wt = detail::tilde(omega, mat);
    return I * v2 / omega * (1.0 / 3.0 - 0.6 * I * omega * mat.tau) / (1.0 - I * omega * mat.tau) +
           wt * wt * wt * mat.tau / (4.0 * omega * kF * kF);
}

// Hydrodynamic dielectric functions built from hydro_coeffs.
inline complex eps_hd(Response r, double q, double omega, const MaterialParams &mat)
{
    if (!(q >= 0.0))
        throw domain_error("eps_hd: q must be non-negative");
    if (!(omega > 0.0))
        throw domain_error("eps_hd: omega must be positive");
    const auto h = hydro_coeffs(omega, mat);
    const double wp2 = mat.omega_p * mat.omega_p;
    const complex ww = omega * detail::tilde(omega, mat);
    if (r == Response::longitudinal)
        return 1.0 - wp2 / (ww - h.longitudinal_modulus * q * q);
    return 1.0 - wp2 / (ww + I * omega * h.shear_viscosity * q * q);
}

enum class DielectricModel
{
    collisional,  // Mermin / Kliewer-Fuchs-Conti
    collisionless // bare Lindhard, real frequency approached from above
};

// Relative permeability from the difference of transverse and longitudinal
// dielectric functions: 1 - 1/mu = (w^2 / c^2 q^2)(eps_T - eps_L).
inline complex permeability_from(complex eps_L, complex eps_T, double q, double omega)
{
    const double s = omega * omega / (si::c * si::c * q * q);
    return 1.0 / (1.0 - s * (eps_T - eps_L));
}

inline complex permeability(double q, double omega, const MaterialParams &mat,
                            DielectricModel model = DielectricModel::collisional)
{
    detail::check_q(q);
    if (!(omega > 0.0))
        throw domain_error("permeability: omega must be positive");
    if (model == DielectricModel::collisional)
        return permeability_from(eps_collisional(Response::longitudinal, q, omega, mat),
                                 eps_collisional(Response::transverse, q, omega, mat), q, omega);
    // Use the Lindhard functions directly so that eps_T - eps_L stays exact
    // when both are large: w^2 (eps_T - eps_L) = -w_p^2 [f_T + 3 u^2 f_L].
    const double z = q / (2.0 * mat.k_F());
    const complex u = detail::regularize(complex{omega / (q * mat.v_F), 0.0});
    const complex bracket =
        lindhard_f(Response::transverse, z, u) + 3.0 * u * u * lindhard_f(Response::longitudinal, z, u);
    const double wp2 = mat.omega_p * mat.omega_p;
    const complex x = -wp2 * bracket / (si::c * si::c * q * q);
    return 1.0 / (1.0 - x);
}

} // namespace hydrocas

#endif // HYDROCAS_LINDHARD_HPP
