#ifndef HYDROCAS_APP_HPP
#define HYDROCAS_APP_HPP

// Command implementations behind the hydrocas command-line tool. Each
// command renders a self-describing CSV into memory; the caller decides where
// it goes.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "expansion_fit.hpp"
#include "hydrocas.hpp"

namespace hydrocas::app
{
inline constexpr const char *kVersion = "1.0.0";

enum ExitCode
{
    exit_ok = 0,
    exit_config = 1,
    exit_numerical = 2
};

struct RunConfig
{
    std::string material_path; // empty: gold preset
    std::vector<std::string> models{"local"};
    std::string pol = "s"; // s, p, both
    double T = 300.0, T1 = 310.0, T2 = 300.0;
    double d_min_nm = 100.0, d_max_nm = 1000.0;
    int n_d = 10;
    double k_min = 1e-3, k_max = 1e3; // 1/lambda_p
    int n_k = 64;
    double w_min = 1e-3, w_max = 1e3; // 1/tau
    int n_w = 64;
    double ell0 = -0.36; // units of ell
    double tau_s = 2.0;  // units of tau
    std::vector<double> q_ell{0.1, 0.3, 1.0, 3.0};
    double profile_k = 0.5;   // 1/lambda_p
    double profile_w = 1.0;   // 1/tau
    double z_max_nm = 0.0;    // 0: ten mean free paths
    int n_z = 200;
    std::string quantity = "pressure";
    double rel_tol = 1e-6;
    double omega_max_factor = 50.0;
    double kappa_max_factor = 60.0;
    unsigned threads = 1;
    std::string output = "-";
};

struct CommandOutput
{
    int status = exit_ok;
    std::string csv;     // file body
    std::string message; // human-readable summary or error
};

namespace detail
{
inline std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

inline std::string fmt_short(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// FNV-1a, 64 bit.
inline std::uint64_t fnv1a(const std::string &s)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s)
    {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string join(const std::vector<std::string> &v, char sep = ',')
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out += (i ? std::string(1, sep) : "") + v[i];
    return out;
}

// Canonical form of the inputs that affect numbers. The thread count and the
// output path are deliberately absent.
inline std::string canonical(const std::string &command, const RunConfig &c, const MaterialParams &mat)
{
    std::ostringstream s;
    s << std::setprecision(17) << "command=" << command << ";material=" << mat.name << ',' << mat.eps_b << ','
      << mat.omega_p << ',' << mat.tau << ',' << mat.v_F << ',' << mat.E_F.value_or(0.0)
      << ";models=" << join(c.models) << ";pol=" << c.pol << ";T=" << c.T << ";T1=" << c.T1 << ";T2=" << c.T2
      << ";d=" << c.d_min_nm << ',' << c.d_max_nm << ',' << c.n_d << ";k=" << c.k_min << ',' << c.k_max << ','
      << c.n_k << ";w=" << c.w_min << ',' << c.w_max << ',' << c.n_w << ";surface=" << c.ell0 << ','
      << c.tau_s << ";q_ell=";
    for (double q : c.q_ell)
        s << q << ',';
    s << ";profile=" << c.profile_k << ',' << c.profile_w << ',' << c.z_max_nm << ',' << c.n_z
      << ";quantity=" << c.quantity << ";tol=" << c.rel_tol << ',' << c.omega_max_factor << ','
      << c.kappa_max_factor;
    return s.str();
}

inline std::string provenance(const std::string &command, const RunConfig &c, const MaterialParams &mat,
                              const std::string &status)
{
    char hash[20];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(fnv1a(canonical(command, c, mat))));
    std::ostringstream s;
    s << "# hydrocas " << kVersion << " command=" << command << " config_hash=" << hash
      << " material=" << mat.name << " rel_tol=" << fmt_short(c.rel_tol)
      << " omega_max_factor=" << fmt_short(c.omega_max_factor)
      << " kappa_max_factor=" << fmt_short(c.kappa_max_factor) << " status=" << status << '\n';
    return s.str();
}

inline std::vector<double> logspace(double a, double b, int n)
{
    std::vector<double> v;
    if (n == 1)
        return {a};
    for (int i = 0; i < n; ++i)
        v.push_back(a * std::pow(b / a, static_cast<double>(i) / (n - 1)));
    return v;
}

inline PolarizationSet parse_pols(const std::string &p)
{
    if (p == "s")
        return PolarizationSet::s;
    if (p == "p")
        return PolarizationSet::p;
    if (p == "both")
        return PolarizationSet::both;
    throw config_error("unknown polarization '" + p + "' (expected s, p or both)");
}

inline std::vector<ReflectionModel> parse_models(const RunConfig &c)
{
    if (c.models.empty())
        throw config_error("no reflection model given");
    std::vector<ReflectionModel> out;
    for (const auto &m : c.models)
        out.push_back(parse_model(m));
    return out;
}

inline void validate_config(const RunConfig &c)
{
    auto positive = [](double v, const char *name) {
        if (!(v > 0.0))
            throw config_error(std::string(name) + " must be positive");
    };
    positive(c.T, "T");
    positive(c.T1, "T1");
    positive(c.T2, "T2");
    positive(c.d_min_nm, "d-min");
    positive(c.k_min, "k-min");
    positive(c.w_min, "omega-min");
    positive(c.tau_s, "tau-s");
    positive(c.rel_tol, "rel-tol");
    positive(c.omega_max_factor, "omega-max-factor");
    positive(c.kappa_max_factor, "kappa-max-factor");
    positive(c.profile_k, "profile-k");
    positive(c.profile_w, "profile-omega");
    if (c.d_max_nm < c.d_min_nm || c.k_max <= c.k_min || c.w_max <= c.w_min)
        throw config_error("empty range");
    if (c.n_d < 1 || c.n_k < 2 || c.n_w < 2 || c.n_z < 1)
        throw config_error("grid sizes must be at least 1 (d, z) or 2 (k, omega)");
    if (c.q_ell.empty())
        throw config_error("q-ell list is empty");
    for (double q : c.q_ell)
        positive(q, "q-ell");
    const auto pols = parse_pols(c.pol);
    for (auto m : parse_models(c))
        if (m == ReflectionModel::hydro && pols != PolarizationSet::s)
            throw config_error("model 'hydro' supports s polarization only");
    if (c.threads < 1)
        throw config_error("threads must be at least 1");
}

inline MaterialParams load_material(const RunConfig &c)
{
    if (c.material_path.empty())
        return gold();
    std::ifstream in(c.material_path);
    if (!in)
        throw config_error("cannot open material file '" + c.material_path + "'");
    return parse_material(in);
}

inline SpectralOptions spectral_options(const RunConfig &c)
{
    SpectralOptions o;
    o.pols = parse_pols(c.pol);
    o.rel_tol = c.rel_tol;
    o.omega_max_factor = c.omega_max_factor;
    o.kappa_max_factor = c.kappa_max_factor;
    o.threads = c.threads;
    return o;
}

inline SurfaceParams surface_params(const RunConfig &c, const MaterialParams &mat)
{
    return {c.ell0 * mat.mean_free_path(), c.tau_s * mat.tau};
}

inline PlateSystem plates(const RunConfig &c, const MaterialParams &mat, ReflectionModel model, double d)
{
    return PlateSystem::symmetric(mat, model, d, surface_params(c, mat));
}

// Numerical failures keep the rows computed so far.
inline CommandOutput finish(const std::string &command, const RunConfig &c, const MaterialParams &mat,
                            const std::string &header, const std::string &rows, const std::string &failure,
                            const std::string &extra = "")
{
    CommandOutput out;
    out.csv = provenance(command, c, mat, failure.empty() ? "ok" : "partial") + extra + header + '\n' + rows;
    if (!failure.empty())
    {
        out.status = exit_numerical;
        out.message = command + ": numerical failure: " + failure;
    }
    return out;
}
} // namespace detail

inline CommandOutput material_info(const RunConfig &c)
{
    const auto mat = detail::load_material(c);
    const auto ds = derived_scales(mat, c.T);
    std::ostringstream rows;
    auto row = [&](const char *q, double v, const char *unit) {
        rows << q << ',' << detail::fmt(v) << ',' << unit << '\n';
    };
    row("eps_b", mat.eps_b, "1");
    row("hbar_omega_p", si::hbar * mat.omega_p / si::eV, "eV");
    row("hbar_over_tau", si::hbar / mat.tau / si::eV * 1e3, "meV");
    row("v_F", mat.v_F, "m/s");
    if (mat.E_F)
    {
        row("E_F", *mat.E_F / si::eV, "eV");
        row("k_F", mat.k_F(), "1/m");
    }
    row("sigma_0", ds.sigma_0, "S/m");
    row("ell", ds.ell * 1e9, "nm");
    row("lambda_p_red", ds.lambda_p_red * 1e9, "nm");
    row("D_m", ds.D_m, "m^2/s");
    row("l_m", ds.l_m * 1e9, "nm");
    row("lambda_T_red", ds.lambda_T_red * 1e6, "um");
    row("kBT_over_hbar_times_tau", si::k_B * c.T / si::hbar * mat.tau, "1");
    auto out = detail::finish("material-info", c, mat, "quantity,value,unit", rows.str(), "");
    std::ostringstream msg;
    msg << mat.name << ": ell = " << detail::fmt_short(ds.ell * 1e9) << " nm, lambda_p = "
        << detail::fmt_short(ds.lambda_p_red * 1e9) << " nm, sigma_0 = " << detail::fmt_short(ds.sigma_0)
        << " S/m";
    out.message = msg.str();
    return out;
}

inline CommandOutput viscosity_scan(const RunConfig &c)
{
    const auto mat = detail::load_material(c);
    const double v2tau = mat.v_F * mat.v_F * mat.tau;
    const double v2 = mat.v_F * mat.v_F;
    std::ostringstream rows;
    for (double wt : detail::logspace(c.w_min, c.w_max, c.n_w))
    {
        const double w = wt / mat.tau;
        const auto h = hydro_coeffs(w, mat);
        rows << detail::fmt(wt) << ",0," << detail::fmt(h.shear_viscosity.real() / v2tau) << ','
             << detail::fmt(h.shear_velocity_sq / v2) << ",hydro\n";
        const complex eta_da = deandres_eta(w, mat);
        rows << detail::fmt(wt) << ",0," << detail::fmt(eta_da.real() / v2tau) << ','
             << detail::fmt(w * eta_da.imag() / v2) << ",deandres\n";
        for (double ql : c.q_ell)
        {
            const complex eta = extract_eta_finite_q(ql / mat.mean_free_path(), w, mat);
            rows << detail::fmt(wt) << ',' << detail::fmt(ql) << ',' << detail::fmt(eta.real() / v2tau) << ','
                 << detail::fmt(w * eta.imag() / v2) << ",finite_q\n";
        }
    }
    return detail::finish("viscosity-scan", c, mat, "omega_tau,q_ell,re_eta_over_vF2tau,beta_T_sq_over_vF2,model_tag",
                          rows.str(), "");
}

inline CommandOutput reflection_scan(const RunConfig &c)
{
    const auto mat = detail::load_material(c);
    const auto models = detail::parse_models(c);
    const auto pols = hydrocas::detail::polarizations(detail::parse_pols(c.pol));
    const auto sp = detail::surface_params(c, mat);
    const double lp = mat.plasma_wavelength_reduced();
    std::ostringstream rows;
    std::string failure;
    try
    {
        for (double wt : detail::logspace(c.w_min, c.w_max, c.n_w))
            for (double kl : detail::logspace(c.k_min, c.k_max, c.n_k))
                for (auto model : models)
                    for (auto pol : pols)
                    {
                        const double w = wt / mat.tau, k = kl / lp;
                        const auto mode = ModeCoordinates::real_frequency(k, w, pol);
                        const complex r = reflect(model, mode, mat, sp);
                        rows << detail::fmt(kl) << ',' << detail::fmt(k) << ',' << detail::fmt(wt) << ','
                             << detail::fmt(si::hbar * w / si::eV) << ',' << to_string(model) << ','
                             << to_string(pol) << ',' << detail::fmt(r.real()) << ',' << detail::fmt(r.imag())
                             << ',' << detail::fmt(std::norm(r)) << '\n';
                    }
    }
    catch (const domain_error &e)
    {
        failure = e.what();
    }
    return detail::finish("reflection-scan", c, mat,
                          "k_over_lambda_p_inv,k_per_m,omega_tau,omega_eV,model,pol,re_r,im_r,abs_r2", rows.str(),
                          failure);
}

inline CommandOutput profile(const RunConfig &c)
{
    const auto mat = detail::load_material(c);
    const double k = c.profile_k / mat.plasma_wavelength_reduced();
    const double w = c.profile_w / mat.tau;
    const auto mode = ModeCoordinates::real_frequency(k, w, Polarization::s);
    const auto p = current_profile(mode, mat, c.z_max_nm * 1e-9, c.n_z);
    std::ostringstream rows;
    for (std::size_t i = 0; i < p.z.size(); ++i)
        rows << detail::fmt(p.z[i] * 1e9) << ',' << detail::fmt(p.v[i].real()) << ','
             << detail::fmt(p.v[i].imag()) << ',' << detail::fmt(p.v_loc[i].real()) << ','
             << detail::fmt(p.v_loc[i].imag()) << ',' << detail::fmt(p.A[i].real()) << ','
             << detail::fmt(p.A[i].imag()) << '\n';
    std::ostringstream extra;
    extra << "# k_over_lambda_p_inv=" << detail::fmt_short(c.profile_k)
          << " omega_tau=" << detail::fmt_short(c.profile_w) << " re_j_excess_A_per_m="
          << detail::fmt(p.j_excess.real()) << " im_j_excess_A_per_m=" << detail::fmt(p.j_excess.imag())
          << " re_r_s=" << detail::fmt(p.r_s.real()) << " im_r_s=" << detail::fmt(p.r_s.imag()) << '\n';
    return detail::finish("profile", c, mat, "z_nm,re_v,im_v,re_v_loc,im_v_loc,re_A,im_A", rows.str(), "",
                          extra.str());
}

inline CommandOutput pressure_scan(const RunConfig &c)
{
    const auto mat = detail::load_material(c);
    const auto models = detail::parse_models(c);
    const auto o = detail::spectral_options(c);
    std::ostringstream rows;
    std::string failure;
    try
    {
        for (double dn : detail::logspace(c.d_min_nm, c.d_max_nm, c.n_d))
            for (auto model : models)
            {
                const auto r = pressure_thermal(detail::plates(c, mat, model, dn * 1e-9), c.T, o);
                rows << detail::fmt(dn) << ',' << to_string(model) << ',' << detail::fmt(r.value) << ','
                     << detail::fmt(r.evanescent_part) << ',' << detail::fmt(r.propagating_part) << ','
                     << detail::fmt(r.abs_error_estimate) << '\n';
            }
    }
    catch (const convergence_error &e)
    {
        failure = std::string(e.what()) + " (partial " + detail::fmt_short(e.partial_value()) + ")";
    }
    catch (const domain_error &e)
    {
        failure = e.what();
    }
    return detail::finish("pressure-scan", c, mat, "d_nm,model,P_thermal_Pa,P_evan,P_prop,err", rows.str(), failure);
}

inline CommandOutput heat_scan(const RunConfig &c)
{
    const auto mat = detail::load_material(c);
    const auto models = detail::parse_models(c);
    const auto o = detail::spectral_options(c);
    std::ostringstream rows;
    std::string failure;
    try
    {
        for (double dn : detail::logspace(c.d_min_nm, c.d_max_nm, c.n_d))
            for (auto model : models)
            {
                const auto r = heat_coefficient(detail::plates(c, mat, model, dn * 1e-9), c.T, o);
                rows << detail::fmt(dn) << ',' << to_string(model) << ',' << detail::fmt(r.value) << ','
                     << detail::fmt(r.abs_error_estimate) << '\n';
            }
    }
    catch (const convergence_error &e)
    {
        failure = std::string(e.what()) + " (partial " + detail::fmt_short(e.partial_value()) + ")";
    }
    catch (const domain_error &e)
    {
        failure = e.what();
    }
    return detail::finish("heat-scan", c, mat, "d_nm,model,h_W_m2K,err", rows.str(), failure);
}

inline CommandOutput map(const RunConfig &c)
{
    const auto mat = detail::load_material(c);
    const auto models = detail::parse_models(c);
    if (models.size() != 1)
        throw config_error("map takes exactly one model");
    MapQuantity q;
    if (c.quantity == "pressure")
        q = MapQuantity::pressure;
    else if (c.quantity == "heat")
        q = MapQuantity::heat;
    else
        throw config_error("unknown map quantity '" + c.quantity + "' (expected pressure or heat)");
    MapGrid grid{c.k_min, c.k_max, c.w_min, c.w_max, c.n_k, c.n_w};
    const auto m = spectral_map(detail::plates(c, mat, models.front(), c.d_min_nm * 1e-9), c.T, q, grid,
                                detail::spectral_options(c));
    const double lp = mat.plasma_wavelength_reduced();
    std::ostringstream rows;
    for (std::size_t j = 0; j < m.omega.size(); ++j)
        for (std::size_t i = 0; i < m.k.size(); ++i)
            rows << detail::fmt(m.k[i] * lp) << ',' << detail::fmt(m.omega[j] * mat.tau) << ','
                 << detail::fmt(m.at(static_cast<int>(j), static_cast<int>(i))) << '\n';
    std::ostringstream extra;
    extra << "# quantity=" << c.quantity << " d_nm=" << detail::fmt_short(c.d_min_nm)
          << " normalization=" << detail::fmt(m.normalization)
          << " guide_thermal_omega_tau=" << detail::fmt(m.omega_thermal * mat.tau)
          << " guide_gap_k_over_lambda_p_inv=" << detail::fmt(m.k_gap * lp)
          << " guide_diffusion_omega_tau_per_klp2=" << detail::fmt(m.diffusion_coeff / (lp * lp) * mat.tau)
          << " guide_viscous_omega_tau_per_klp2=" << detail::fmt(m.viscous_coeff / (lp * lp) * mat.tau) << '\n';
    return detail::finish("map", c, mat, "k_over_lambda_p_inv,omega_tau,value_normalized", rows.str(), "",
                          extra.str());
}

// Oracle suite: ideal-mirror Matsubara sum, zeta = 0 identity, hydrodynamic
// limit of the finite-q viscosity and the expansion coefficients.
inline CommandOutput validate(const RunConfig &c)
{
    const auto mat = detail::load_material(c);
    std::ostringstream rows;
    bool all = true;
    auto check = [&](const std::string &name, double value, double target, double tol, bool ok) {
        all = all && ok;
        rows << name << ',' << detail::fmt(value) << ',' << detail::fmt(target) << ',' << detail::fmt_short(tol)
             << ',' << (ok ? "pass" : "fail") << '\n';
    };

    {
        SpectralOptions o;
        o.pols = PolarizationSet::both;
        o.threads = c.threads;
        const double d = 1e-6;
        const auto r = pressure_matsubara(PlateSystem::symmetric(mat, ReflectionModel::ideal, d), 1.0, o);
        const double target = pressure_ideal_zeroT(d);
        const double rel = std::fabs(r.value / target - 1.0);
        check("ideal_mirror_matsubara_Pa", r.value, target, 5e-3, rel <= 5e-3);
    }
    {
        double worst = 0.0;
        for (double wt : detail::logspace(1e-2, 1e2, 100))
        {
            const auto h = hydro_coeffs(wt / mat.tau, mat);
            const double b2 = mat.v_F * mat.v_F / 3.0;
            worst = std::max(worst, std::abs(h.bulk_modulus - b2) / b2);
        }
        check("bulk_modulus_static_identity", worst, 0.0, 1e-12, worst <= 1e-12);
    }
    for (double wt : {0.1, 1.0, 10.0})
    {
        const double w = wt / mat.tau;
        const complex eta = extract_eta_finite_q(1e-2 / mat.mean_free_path(), w, mat);
        const complex ref = hydro_coeffs(w, mat).shear_viscosity;
        const double rel = std::abs(eta - ref) / std::abs(ref);
        check("eta_hydro_limit_wt_" + detail::fmt_short(wt), rel, 0.0, 1e-2, rel <= 1e-2);
    }
    if (mat.E_F)
    {
        const auto ft = fit_transverse_expansion(1.0 / mat.tau, mat);
        check("transverse_q2_coeff", ft.c2.real(), 0.2, 1e-2, std::abs(ft.c2 - 0.2) <= 2e-3);
        check("transverse_q4_coeff", ft.c4.real(), 8.0 / 175.0, 1e-2,
              std::abs(ft.c4 - 8.0 / 175.0) <= 1e-2 * 8.0 / 175.0);
        const auto fl = fit_longitudinal_expansion(1.0 / mat.tau, mat);
        check("longitudinal_q2_coeff", fl.c2.real(), 0.6, 1e-2, std::abs(fl.c2 - 0.6) <= 6e-3);
        check("longitudinal_q4_coeff", fl.c4.real(), 12.0 / 175.0, 1e-2,
              std::abs(fl.c4 - 12.0 / 175.0) <= 1e-2 * 12.0 / 175.0);
    }
    auto out = detail::finish("validate", c, mat, "check,value,target,tolerance,result", rows.str(),
                              all ? "" : "oracle check failed");
    if (all)
        out.message = "validate: all oracle checks passed";
    return out;
}

inline const std::vector<std::string> &command_names()
{
    static const std::vector<std::string> names{"material-info", "viscosity-scan", "reflection-scan", "profile",
                                                "pressure-scan", "heat-scan",      "map",             "validate"};
    return names;
}

// Dispatch with error-to-exit-code mapping.
inline CommandOutput run(const std::string &command, const RunConfig &c)
{
    try
    {
        detail::validate_config(c);
        if (command == "material-info")
            return material_info(c);
        if (command == "viscosity-scan")
            return viscosity_scan(c);
        if (command == "reflection-scan")
            return reflection_scan(c);
        if (command == "profile")
            return profile(c);
        if (command == "pressure-scan")
            return pressure_scan(c);
        if (command == "heat-scan")
            return heat_scan(c);
        if (command == "map")
            return map(c);
        if (command == "validate")
            return validate(c);
        throw config_error("unknown command '" + command + "'");
    }
    catch (const config_error &e)
    {
        return {exit_config, "", e.what()};
    }
    catch (const unsupported_model_error &e)
    {
        return {exit_config, "", e.what()};
    }
    catch (const convergence_error &e)
    {
        return {exit_numerical, "", e.what()};
    }
    catch (const domain_error &e)
    {
        return {exit_numerical, "", e.what()};
    }
}

} // namespace hydrocas::app

#endif // HYDROCAS_APP_HPP
