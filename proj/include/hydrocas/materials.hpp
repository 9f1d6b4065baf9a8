#ifndef HYDROCAS_MATERIALS_HPP
#define HYDROCAS_MATERIALS_HPP

#include <cmath>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "constants.hpp"
#include "errors.hpp"

namespace hydrocas
{
// Bulk metal description in SI units.
struct MaterialParams
{
    std::string name = "unnamed";
    double eps_b = 1.0;   // background permittivity of bound electrons
    double omega_p = 0.0; // plasma frequency (rad/s)
    double tau = 0.0;     // Drude relaxation time (s)
    double v_F = 0.0;     // Fermi velocity (m/s)
    std::optional<double> E_F; // Fermi energy (J)

    // Fermi wavenumber 2 E_F / (hbar v_F); throws if E_F is unset.
    double k_F() const
    {
        if (!E_F)
            throw domain_error("material '" + name + "' has no Fermi energy; k_F undefined");
        return 2.0 * *E_F / (si::hbar * v_F);
    }

    double sigma_0() const { return si::epsilon_0 * omega_p * omega_p * tau; }
    double mean_free_path() const { return v_F * tau; }
    double plasma_wavelength_reduced() const { return si::c / omega_p; }

    // Throws domain_error when an invariant is violated.
    void validate() const
    {
        if (!(omega_p > 0.0) || !std::isfinite(omega_p))
            throw domain_error("omega_p must be positive");
        if (!(tau > 0.0) || !std::isfinite(tau))
            throw domain_error("tau must be positive");
        if (!(v_F > 0.0) || !std::isfinite(v_F))
            throw domain_error("v_F must be positive");
        if (!(eps_b >= 1.0))
            throw domain_error("eps_b must be >= 1");
        if (E_F && !(*E_F > 0.0))
            throw domain_error("E_F must be positive when given");
    }

    // Construct from the customary spectroscopic units.
    static MaterialParams from_spectroscopic(std::string name, double eps_b, double hbar_omega_p_eV,
                                             double hbar_over_tau_meV, double v_F,
                                             std::optional<double> E_F_eV)
    {
        MaterialParams m;
        m.name = std::move(name);
        m.eps_b = eps_b;
        m.omega_p = hbar_omega_p_eV * si::eV / si::hbar;
        m.tau = si::hbar / (hbar_over_tau_meV * 1e-3 * si::eV);
        m.v_F = v_F;
        if (E_F_eV)
            m.E_F = *E_F_eV * si::eV;
        m.validate();
        return m;
    }
};

// Gold at room temperature: hbar Omega_p = 9.1 eV, hbar/tau = 27 meV,
// v_F = 1.4e6 m/s, E_F = 5.5 eV, eps_b = 1.
inline MaterialParams gold()
{
    return MaterialParams::from_spectroscopic("gold", 1.0, 9.1, 27.0, 1.4e6, 5.5);
}

struct DerivedScales
{
    double sigma_0 = 0.0;      // DC conductivity (S/m)
    double ell = 0.0;          // mean free path (m)
    double lambda_p_red = 0.0; // c / Omega_p (m)
    double D_m = 0.0;          // magnetic diffusion constant (m^2/s)
    double l_m = 0.0;          // thermal magnetic length (m)
    double lambda_T_red = 0.0; // hbar c / k_B T (m)
};

inline DerivedScales derived_scales(const MaterialParams &mat, double T)
{
    if (!(T > 0.0))
        throw domain_error("derived_scales: temperature must be positive");
    mat.validate();
    DerivedScales s;
    s.sigma_0 = mat.sigma_0();
    s.ell = mat.mean_free_path();
    s.lambda_p_red = mat.plasma_wavelength_reduced();
    s.D_m = 1.0 / (si::mu_0 * s.sigma_0);
    s.l_m = std::sqrt(si::hbar * s.D_m / (si::k_B * T));
    s.lambda_T_red = si::hbar * si::c / (si::k_B * T);
    return s;
}

struct DrudeResponse
{
    complex eps_m;
    complex sigma;
};

// Local Drude permittivity and conductivity at a frequency in the closed
// upper half-plane (real omega, or omega = i xi on the Matsubara axis).
inline DrudeResponse drude_response(complex omega, const MaterialParams &mat)
{
    if (omega == complex{0.0, 0.0})
        throw domain_error("drude_response: omega = 0 is a pole");
    if (omega.imag() < 0.0)
        throw domain_error("drude_response: Im(omega) < 0 lies outside the causal half-plane");
    const double wp2 = mat.omega_p * mat.omega_p;
    DrudeResponse r;
    r.eps_m = mat.eps_b - wp2 / (omega * (omega + I / mat.tau));
    r.sigma = mat.sigma_0() / (1.0 - I * omega * mat.tau);
    return r;
}

inline DrudeResponse drude_response(double omega, const MaterialParams &mat)
{
    return drude_response(complex{omega, 0.0}, mat);
}

// Flat key/value material file, one "key = value" per line, '#' comments.
// Keys: name, eps_b, hbar_omega_p_eV, hbar_over_tau_meV, v_F_m_per_s, E_F_eV.
inline MaterialParams parse_material(std::istream &in)
{
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos)
                return std::string{};
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        };
        line = trim(line);
        if (line.empty())
            continue;
        auto sep = line.find_first_of("=:");
        if (sep == std::string::npos)
            throw config_error("material file line " + std::to_string(lineno) +
                               ": expected 'key = value'");
        kv[trim(line.substr(0, sep))] = trim(line.substr(sep + 1));
    }

    auto number = [&](const std::string &key, std::optional<double> fallback) -> double {
        auto it = kv.find(key);
        if (it == kv.end())
        {
            if (fallback)
                return *fallback;
            throw config_error("material file: missing key '" + key + "'");
        }
        std::istringstream ss(it->second);
        double v = 0.0;
        if (!(ss >> v) || !(ss >> std::ws).eof())
            throw config_error("material file: key '" + key + "' is not a number: " + it->second);
        return v;
    };

    static const char *known[] = {"name", "eps_b", "hbar_omega_p_eV", "hbar_over_tau_meV",
                                  "v_F_m_per_s", "E_F_eV"};
    for (const auto &[key, value] : kv)
    {
        bool ok = false;
        for (const char *k : known)
            ok = ok || key == k;
        if (!ok)
            throw config_error("material file: unknown key '" + key + "'");
    }

    std::optional<double> E_F;
    if (kv.count("E_F_eV"))
        E_F = number("E_F_eV", std::nullopt);
    try
    {
        return MaterialParams::from_spectroscopic(kv.count("name") ? kv["name"] : "unnamed",
                                                  number("eps_b", 1.0),
                                                  number("hbar_omega_p_eV", std::nullopt),
                                                  number("hbar_over_tau_meV", std::nullopt),
                                                  number("v_F_m_per_s", std::nullopt), E_F);
    }
    catch (const domain_error &e)
    {
        throw config_error(std::string("material file: ") + e.what());
    }
}

} // namespace hydrocas

#endif // HYDROCAS_MATERIALS_HPP
