#ifndef HYDROCAS_REFLECTION_HPP
#define HYDROCAS_REFLECTION_HPP

#include <cmath>
#include <complex>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "constants.hpp"
#include "errors.hpp"
#include "lindhard.hpp"
#include "materials.hpp"

namespace hydrocas
{
enum class Polarization
{
    s,
    p
};

enum class ReflectionModel
{
    local,
    hydro,
    surfcond,
    ideal
};

inline std::string to_string(Polarization p) { return p == Polarization::s ? "s" : "p"; }

inline std::string to_string(ReflectionModel m)
{
    switch (m)
    {
    case ReflectionModel::local:
        return "local";
    case ReflectionModel::hydro:
        return "hydro";
    case ReflectionModel::surfcond:
        return "surfcond";
    case ReflectionModel::ideal:
        return "ideal";
    }
    return "?";
}

inline ReflectionModel parse_model(const std::string &s)
{
    if (s == "local")
        return ReflectionModel::local;
    if (s == "hydro")
        return ReflectionModel::hydro;
    if (s == "surfcond")
        return ReflectionModel::surfcond;
    if (s == "ideal")
        return ReflectionModel::ideal;
    throw config_error("unknown reflection model '" + s + "'");
}

// In-plane wavenumber k, frequency and vacuum normal wavenumber k_z with
// Im k_z >= 0. Evanescent modes have k_z = i kappa.
struct ModeCoordinates
{
    double k = 0.0;
    complex omega{0.0, 0.0};
    Polarization pol = Polarization::s;
    complex k_z{0.0, 0.0};

    bool evanescent() const { return k_z.real() == 0.0 && k_z.imag() > 0.0; }

    static ModeCoordinates real_frequency(double k, double omega, Polarization pol)
    {
        if (!(k >= 0.0))
            throw domain_error("ModeCoordinates: k must be non-negative");
        if (!(omega > 0.0))
            throw domain_error("ModeCoordinates: omega must be positive");
        const double k0 = omega / si::c;
        ModeCoordinates m{k, omega, pol, {}};
        if (k <= k0)
            m.k_z = std::sqrt((k0 - k) * (k0 + k));
        else
            m.k_z = complex{0.0, std::sqrt((k - k0) * (k + k0))};
        return m;
    }

    // Evanescent mode from its vacuum decay constant kappa > 0.
    static ModeCoordinates from_kappa(double kappa, double omega, Polarization pol)
    {
        if (!(kappa > 0.0))
            throw domain_error("ModeCoordinates: kappa must be positive");
        if (!(omega > 0.0))
            throw domain_error("ModeCoordinates: omega must be positive");
        const double k0 = omega / si::c;
        return {std::hypot(kappa, k0), omega, pol, complex{0.0, kappa}};
    }

    // Propagating mode from its real normal wavenumber 0 <= k_z <= omega/c.
    static ModeCoordinates from_kz(double kz, double omega, Polarization pol)
    {
        const double k0 = omega / si::c;
        if (!(kz >= 0.0 && kz <= k0))
            throw domain_error("ModeCoordinates: need 0 <= k_z <= omega/c");
        return {std::sqrt((k0 - kz) * (k0 + kz)), omega, pol, complex{kz, 0.0}};
    }

    // Imaginary frequency omega = i xi; k_z = i sqrt(k^2 + xi^2/c^2).
    static ModeCoordinates imaginary_frequency(double k, double xi, Polarization pol)
    {
        if (!(k >= 0.0))
            throw domain_error("ModeCoordinates: k must be non-negative");
        if (!(xi > 0.0))
            throw domain_error("ModeCoordinates: xi must be positive");
        return {k, complex{0.0, xi}, pol, complex{0.0, std::hypot(k, xi / si::c)}};
    }
};

struct DecayModes
{
    complex kappa_b;
    complex kappa_m;
    complex kappa_1; // boundary-layer root (larger real part)
    complex kappa_2; // bulk root, tends to kappa_m as eta -> 0
    bool degenerate = false;
};

namespace detail
{
inline void check_mode(const ModeCoordinates &m)
{
    if (m.omega.imag() < 0.0 || m.omega == complex{0.0, 0.0})
        throw domain_error("reflection: frequency must be nonzero with Im(omega) >= 0");
    if (!(m.k >= 0.0))
        throw domain_error("reflection: k must be non-negative");
}

inline complex principal_sqrt(complex x) { return std::sqrt(x); }

// Roots lambda = kappa^2 of (A - lambda)(B - lambda) = C.
inline void hydro_roots(complex A, complex B, complex C, complex &big, complex &small)
{
    const complex D = std::sqrt((A - B) * (A - B) + 4.0 * C);
    const complex s = A + B;
    const complex p1 = 0.5 * (s + D);
    const complex p2 = 0.5 * (s - D);
    big = std::abs(p1) >= std::abs(p2) ? p1 : p2;
    small = (A * B - C) / big;
}
} // namespace detail

// Decay constants in the metal: kappa_b (background), kappa_m (Drude) and,
// for the hydrodynamic model, the two no-slip modes kappa_1, kappa_2.
inline DecayModes decay_modes(const ModeCoordinates &mode, const MaterialParams &mat,
                              ReflectionModel model = ReflectionModel::hydro, double eta_scale = 1.0)
{
    detail::check_mode(mode);
    const complex w = mode.omega;
    const complex k0sq = (w / si::c) * (w / si::c);
    const double k2 = mode.k * mode.k;
    const auto drude = drude_response(w, mat);

    DecayModes d;
    const complex B = k2 - mat.eps_b * k0sq;
    d.kappa_b = detail::principal_sqrt(B);
    d.kappa_m = detail::principal_sqrt(k2 - k0sq * drude.eps_m);
    d.kappa_1 = d.kappa_m;
    d.kappa_2 = d.kappa_m;
    if (model != ReflectionModel::hydro)
        return d;

    complex eta = eta_scale * shear_viscosity(w, mat);
    const double lp2 = mat.plasma_wavelength_reduced() * mat.plasma_wavelength_reduced();
    complex big, small;
    for (int attempt = 0; attempt < 2; ++attempt)
    {
        const complex A = (1.0 - I * w * mat.tau) / (eta * mat.tau) + k2;
        const complex C = I * w / (eta * lp2);
        detail::hydro_roots(A, B, C, big, small);
        if (std::abs(big - small) > 1e-12 * std::abs(big))
            break;
        d.degenerate = true;
        eta *= 1.0 + 1e-9;
        std::clog << "hydrocas: warning: degenerate no-slip modes at k = " << mode.k
                  << ", omega = " << w << "; eta perturbed by 1e-9\n";
    }
    complex ka = detail::principal_sqrt(big);
    complex kb = detail::principal_sqrt(small);
    if (ka.real() < kb.real())
        std::swap(ka, kb);
    d.kappa_1 = ka;
    d.kappa_2 = kb;
    return d;
}

// Fresnel amplitudes of the local Drude half-space.
inline complex r_local(const ModeCoordinates &mode, const MaterialParams &mat)
{
    detail::check_mode(mode);
    const auto dm = decay_modes(mode, mat, ReflectionModel::local);
    const complex kz = mode.k_z;
    if (mode.pol == Polarization::s)
        return (kz - I * dm.kappa_m) / (kz + I * dm.kappa_m);
    const complex em = drude_response(mode.omega, mat).eps_m;
    return (em * kz - I * dm.kappa_m) / (em * kz + I * dm.kappa_m);
}

// Surface impedance (in units of mu_0 omega) of the no-slip fluid.
inline complex hydro_impedance(const DecayModes &d)
{
    return (d.kappa_1 + d.kappa_2) / (d.kappa_b * d.kappa_b + d.kappa_1 * d.kappa_2);
}

inline complex r_s_hydro(const ModeCoordinates &mode, const MaterialParams &mat, double eta_scale = 1.0)
{
    if (mode.pol != Polarization::s)
        throw unsupported_model_error("hydro reflection is implemented for s polarization only");
    const auto d = decay_modes(mode, mat, ReflectionModel::hydro, eta_scale);
    const complex y = I / hydro_impedance(d);
    return (mode.k_z - y) / (mode.k_z + y);
}

// Factorized form, exact for eps_b = 1.
inline complex r_s_hydro_factorized(const ModeCoordinates &mode, const MaterialParams &mat)
{
    const auto d = decay_modes(mode, mat, ReflectionModel::hydro);
    const complex kz = mode.k_z;
    return (kz - I * d.kappa_2) * (I * d.kappa_1 - kz) / ((kz + I * d.kappa_2) * (I * d.kappa_1 + kz));
}

struct SurfaceParams
{
    double ell_0 = 0.0; // signed length (m)
    double tau_s = 0.0; // s
};

inline SurfaceParams default_surface_params(const MaterialParams &mat)
{
    return {-0.36 * mat.mean_free_path(), 2.0 * mat.tau};
}

struct SurfaceResponse
{
    double ell_0 = 0.0;
    double tau_s = 0.0;
    complex sigma_s; // S
    complex R_s;     // Ohm m^2
};

inline SurfaceResponse surface_response(complex omega, const MaterialParams &mat, double ell_0, double tau_s)
{
    if (!(tau_s > 0.0))
        throw domain_error("surface_response: tau_s must be positive");
    const double s0 = mat.sigma_0();
    const complex f = 1.0 - I * omega * tau_s;
    return {ell_0, tau_s, ell_0 * s0 / f, ell_0 * f / s0};
}

inline SurfaceResponse surface_response(double omega, const MaterialParams &mat, double ell_0, double tau_s)
{
    return surface_response(complex{omega, 0.0}, mat, ell_0, tau_s);
}

// Reflection with excess-field surface conductivity and resistivity.
inline complex r_surf(const ModeCoordinates &mode, const MaterialParams &mat, const SurfaceResponse &sr)
{
    detail::check_mode(mode);
    const auto dm = decay_modes(mode, mat, ReflectionModel::local);
    const complex w = mode.omega;
    const complex kz = mode.k_z;
    const complex km = dm.kappa_m;
    if (mode.pol == Polarization::s)
    {
        const complex g = w * si::mu_0 * sr.sigma_s;
        return (kz - I * km - g) / (kz + I * km + g);
    }
    const complex em = drude_response(w, mat).eps_m;
    const double k2 = mode.k * mode.k;
    const complex mix = 1.0 + 0.25 * sr.sigma_s * sr.R_s * k2;
    const complex cond = I * sr.sigma_s / (si::epsilon_0 * w) * kz * km;
    const complex res = si::epsilon_0 * em * w * sr.R_s * k2;
    return ((em * kz - I * km) * mix + cond - res) / ((em * kz + I * km) * mix + cond + res);
}

inline complex reflect(ReflectionModel model, const ModeCoordinates &mode, const MaterialParams &mat,
                       const std::optional<SurfaceParams> &sp = std::nullopt)
{
    switch (model)
    {
    case ReflectionModel::ideal:
        return mode.pol == Polarization::s ? -1.0 : 1.0;
    case ReflectionModel::local:
        return r_local(mode, mat);
    case ReflectionModel::hydro:
        return r_s_hydro(mode, mat);
    case ReflectionModel::surfcond:
        if (!sp)
            throw unsupported_model_error("surfcond model needs surface parameters");
        return r_surf(mode, mat, surface_response(mode.omega, mat, sp->ell_0, sp->tau_s));
    }
    throw unsupported_model_error("unknown reflection model");
}

inline void check_model_pol(ReflectionModel model, Polarization pol)
{
    if (model == ReflectionModel::hydro && pol == Polarization::p)
        throw unsupported_model_error("hydro model supports s polarization only");
}

// Sub-surface fields for a unit-amplitude s-polarized incident wave, metal in
// z > 0. Velocities refer to the electron fluid (charge -e).
struct CurrentProfile
{
    std::vector<double> z;
    std::vector<complex> v, A, v_loc, A_loc;
    complex v1, v2;         // mode amplitudes of exp(-kappa_1 z), exp(-kappa_2 z)
    complex A1, A2;         // vector-potential amplitudes of the same modes
    complex kappa_1, kappa_2, kappa_m, kappa_b;
    complex v_loc0, A_loc0; // local-model surface values (decay kappa_m)
    complex r_s, r_s_loc;
    complex E0;             // tangential electric field at the surface
    complex j_excess;       // A/m
    double omega = 0.0;
    double k = 0.0;
};

namespace detail
{
inline double electron_density(const MaterialParams &mat)
{
    return si::epsilon_0 * mat.omega_p * mat.omega_p * si::m_e / (si::e * si::e);
}

inline constexpr double kElectronCharge = -si::e;

inline std::vector<double> profile_grid(double z_min, double z_max, int n)
{
    std::vector<double> z;
    z.reserve(static_cast<std::size_t>(n) + 1);
    z.push_back(0.0);
    const double la = std::log(z_min), lb = std::log(z_max);
    for (int i = 0; i < n; ++i)
        z.push_back(std::exp(la + (lb - la) * (n == 1 ? 1.0 : static_cast<double>(i) / (n - 1))));
    return z;
}
} // namespace detail

// n_points log-spaced depths in [lambda_p/100, z_max] plus z = 0. A
// non-positive z_max selects 10 mean free paths.
inline CurrentProfile current_profile(const ModeCoordinates &mode, const MaterialParams &mat,
                                      double z_max = 0.0, int n_points = 200, double eta_scale = 1.0)
{
    if (mode.pol != Polarization::s)
        throw unsupported_model_error("current_profile: s polarization only");
    if (mode.omega.imag() != 0.0)
        throw domain_error("current_profile: real frequency required");
    if (n_points < 1)
        throw domain_error("current_profile: n_points must be positive");
    if (!(z_max > 0.0))
        z_max = 10.0 * mat.mean_free_path();
    const double z_min = mat.plasma_wavelength_reduced() / 100.0;
    if (!(z_max > z_min))
        throw domain_error("current_profile: z_max below the grid start");

    CurrentProfile p;
    p.omega = mode.omega.real();
    p.k = mode.k;
    const complex w = mode.omega;
    const auto d = decay_modes(mode, mat, ReflectionModel::hydro, eta_scale);
    p.kappa_1 = d.kappa_1;
    p.kappa_2 = d.kappa_2;
    p.kappa_m = d.kappa_m;
    p.kappa_b = d.kappa_b;

    const complex A_inc = 1.0 / (I * w); // E = i w A, unit incident field
    p.r_s = r_s_hydro(mode, mat, eta_scale);
    p.r_s_loc = r_local(mode, mat);
    const complex A0 = A_inc * (1.0 + p.r_s);
    p.E0 = I * w * A0;

    const complex B = d.kappa_b * d.kappa_b;
    const complex k1sq = d.kappa_1 * d.kappa_1;
    const complex k2sq = d.kappa_2 * d.kappa_2;
    const complex t = A0 / (k2sq - k1sq);
    p.A1 = -(B - k2sq) * t;
    p.A2 = (B - k1sq) * t;

    const double lp = mat.plasma_wavelength_reduced();
    const double q_over_m = detail::kElectronCharge / si::m_e;
    p.v1 = (B - k1sq) * lp * lp * q_over_m * p.A1;
    p.v2 = -p.v1; // no slip

    p.A_loc0 = A_inc * (1.0 + p.r_s_loc);
    const complex sigma = drude_response(w, mat).sigma;
    const double n_e = detail::electron_density(mat);
    p.v_loc0 = sigma * I * w * p.A_loc0 / (n_e * detail::kElectronCharge);

    p.z = detail::profile_grid(z_min, z_max, n_points);
    for (double z : p.z)
    {
        const complex e1 = std::exp(-d.kappa_1 * z);
        const complex e2 = std::exp(-d.kappa_2 * z);
        const complex em = std::exp(-d.kappa_m * z);
        p.v.push_back(p.v1 * e1 + p.v2 * e2);
        p.A.push_back(p.A1 * e1 + p.A2 * e2);
        p.v_loc.push_back(p.v_loc0 * em);
        p.A_loc.push_back(p.A_loc0 * em);
    }
    // excess over the bulk mode extrapolated to the surface
    p.j_excess = n_e * detail::kElectronCharge * p.v1 / d.kappa_1;
    return p;
}

// Excess surface current: the boundary-layer mode integrated over depth,
// i.e. the deviation from the bulk (kappa_2) mode extrapolated up to z = 0.
// Computed in closed form. A local profile (v1 = 0) gives zero.
inline complex excess_current(const CurrentProfile &p, const MaterialParams &mat)
{
    if (p.v1 == complex{0.0, 0.0})
        return 0.0;
    return detail::electron_density(mat) * detail::kElectronCharge * p.v1 / p.kappa_1;
}

// n q integral of [v(z) - v_loc(z)] with v_loc the separately solved Drude
// half-space.
inline complex excess_current_vs_drude(const CurrentProfile &p, const MaterialParams &mat)
{
    const complex integral = p.v1 / p.kappa_1 + p.v2 / p.kappa_2 - p.v_loc0 / p.kappa_m;
    return detail::electron_density(mat) * detail::kElectronCharge * integral;
}

// Local profile expressed in the same structure: a single kappa_m mode.
inline CurrentProfile local_profile(const CurrentProfile &p)
{
    CurrentProfile q = p;
    q.v = p.v_loc;
    q.A = p.A_loc;
    q.v1 = 0.0;
    q.A1 = 0.0;
    q.v2 = p.v_loc0;
    q.A2 = p.A_loc0;
    q.kappa_2 = p.kappa_m;
    q.j_excess = 0.0;
    return q;
}

struct ProfileResidual
{
    double momentum = 0.0; // Navier-Stokes equation
    double wave = 0.0;     // vector-potential wave equation
    double no_slip = 0.0;  // |v(0)| relative to |v1|
};

// Plug the profile into the equations of motion with analytic derivatives.
// Each residual is normalized by the largest term of its equation.
inline ProfileResidual profile_residual(const CurrentProfile &p, const MaterialParams &mat,
                                        double eta_scale = 1.0)
{
    const complex w{p.omega, 0.0};
    const complex eta = eta_scale * shear_viscosity(w, mat);
    const double k2 = p.k * p.k;
    const complex B = p.kappa_b * p.kappa_b;
    const double n_e = detail::electron_density(mat);
    const double q = detail::kElectronCharge;
    const double q_over_m = q / si::m_e;
    const complex k1sq = p.kappa_1 * p.kappa_1, k2sq = p.kappa_2 * p.kappa_2;

    ProfileResidual r;
    for (std::size_t i = 0; i < p.z.size(); ++i)
    {
        const double z = p.z[i];
        const complex e1 = std::exp(-p.kappa_1 * z), e2 = std::exp(-p.kappa_2 * z);
        const complex v = p.v1 * e1 + p.v2 * e2;
        const complex vpp = p.v1 * k1sq * e1 + p.v2 * k2sq * e2;
        const complex A = p.A1 * e1 + p.A2 * e2;
        const complex App = p.A1 * k1sq * e1 + p.A2 * k2sq * e2;

        // (1/tau - i w) v - eta (v'' - k^2 v) = (q/m) i w A
        const complex t1 = (1.0 / mat.tau - I * w) * v;
        const complex t2 = eta * (vpp - k2 * v);
        const complex t3 = q_over_m * I * w * A;
        const double s1 = std::max({std::abs(t1), std::abs(t2), std::abs(t3)});
        if (s1 > 0.0)
            r.momentum = std::max(r.momentum, std::abs(t1 - t2 - t3) / s1);

        // A'' - kappa_b^2 A = -mu_0 n q v
        const complex u1 = App, u2 = B * A, u3 = -si::mu_0 * n_e * q * v;
        const double s2 = std::max({std::abs(u1), std::abs(u2), std::abs(u3)});
        if (s2 > 0.0)
            r.wave = std::max(r.wave, std::abs(u1 - u2 - u3) / s2);
    }
    if (!p.v.empty() && std::abs(p.v1) > 0.0)
        r.no_slip = std::abs(p.v.front()) / std::abs(p.v1);
    return r;
}

// Flux continuity of A at z = 0 against the vacuum side.
inline double profile_matching_error(const CurrentProfile &p, const ModeCoordinates &mode)
{
    const complex A_inc = 1.0 / (I * mode.omega);
    const complex vac = I * mode.k_z * A_inc * (1.0 - p.r_s);
    const complex metal = -p.kappa_1 * p.A1 - p.kappa_2 * p.A2;
    return std::abs(vac - metal) / std::max(std::abs(vac), std::abs(metal));
}

} // namespace hydrocas

#endif // HYDROCAS_REFLECTION_HPP
