#ifndef HYDROCAS_FLUCTUATION_HPP
#define HYDROCAS_FLUCTUATION_HPP

#include <algorithm>
#include <cmath>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

#include "constants.hpp"
#include "errors.hpp"
#include "materials.hpp"
#include "quadrature.hpp"
#include "reflection.hpp"

namespace hydrocas
{
struct Plate
{
    MaterialParams mat;
    ReflectionModel model = ReflectionModel::local;
    std::optional<SurfaceParams> surface;

    complex r(const ModeCoordinates &mode) const { return reflect(model, mode, mat, surface); }
};

struct PlateSystem
{
    Plate plate1, plate2;
    double d = 0.0; // gap (m)

    void validate() const
    {
        if (!(d > 0.0))
            throw domain_error("PlateSystem: gap d must be positive");
        plate1.mat.validate();
        plate2.mat.validate();
    }

    static PlateSystem symmetric(const MaterialParams &mat, ReflectionModel model, double d,
                                 std::optional<SurfaceParams> sp = std::nullopt)
    {
        if (model == ReflectionModel::surfcond && !sp)
            sp = default_surface_params(mat);
        Plate p{mat, model, sp};
        return {p, p, d};
    }
};

enum class PolarizationSet
{
    s,
    p,
    both
};

struct SpectralOptions
{
    PolarizationSet pols = PolarizationSet::s;
    double omega_max_factor = 50.0; // omega_max = factor k_B T / hbar
    double kappa_max_factor = 60.0; // kappa_max = factor / d
    double rel_tol = 1e-6;
    int omega_panels = 24;
    unsigned threads = 1;
    long max_evals = 400000;
};

struct SpectralResult
{
    double value = 0.0;
    double evanescent_part = 0.0;
    double propagating_part = 0.0;
    double abs_error_estimate = 0.0;
    long n_evals = 0;
};

struct ThermalWeights
{
    double n_bar = 0.0;
    double dn_dT = 0.0; // 1/K
};

inline ThermalWeights bose_factors(double omega, double T)
{
    if (!(omega > 0.0) || !(T > 0.0))
        throw domain_error("bose_factors: omega and T must be positive");
    const double x = si::hbar * omega / (si::k_B * T);
    const double n = 1.0 / std::expm1(x);
    return {n, x / T * n * (n + 1.0)};
}

inline double pressure_ideal_zeroT(double d)
{
    if (!(d > 0.0))
        throw domain_error("pressure_ideal_zeroT: d must be positive");
    return -si::pi * si::pi * si::hbar * si::c / (240.0 * d * d * d * d);
}

namespace detail
{
inline std::vector<Polarization> polarizations(PolarizationSet set)
{
    switch (set)
    {
    case PolarizationSet::s:
        return {Polarization::s};
    case PolarizationSet::p:
        return {Polarization::p};
    case PolarizationSet::both:
        return {Polarization::s, Polarization::p};
    }
    return {};
}

inline void check_models(const PlateSystem &sys, PolarizationSet set)
{
    for (auto pol : polarizations(set))
    {
        check_model_pol(sys.plate1.model, pol);
        check_model_pol(sys.plate2.model, pol);
    }
}

// Loop factor R e / (1 - R e) with a guard against a vanishing denominator.
inline complex loop(complex Re)
{
    const complex den = 1.0 - Re;
    if (std::abs(den) < 1e-12)
        throw domain_error("fluctuation: loop factor 1 - r1 r2 exp(...) vanishes");
    return Re / den;
}

struct Leg
{
    double value = 0.0;
    double error = 0.0;
    long evals = 0;
};

// Outer frequency integral over log-spaced panels. Panels run concurrently;
// a coarse first pass fixes an absolute tolerance so that near-zero panels
// do not stall refinement.
template <class F>
Leg frequency_integral(const F &g, double w_lo, double w_hi, const SpectralOptions &o, double floor_scale)
{
    const int np = std::max(1, o.omega_panels);
    std::vector<double> edges(static_cast<std::size_t>(np) + 1);
    const double la = std::log(w_lo), lb = std::log(w_hi);
    for (int i = 0; i <= np; ++i)
        edges[static_cast<std::size_t>(i)] = std::exp(la + (lb - la) * i / np);
    edges.front() = w_lo;
    edges.back() = w_hi;

    IntegrationSettings coarse;
    coarse.rel_tol = 1.0;
    coarse.transform = Transform::log;
    coarse.max_evals = 21;
    std::vector<double> est(static_cast<std::size_t>(np), 0.0);
    std::vector<std::exception_ptr> fail(est.size());
    auto work = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t i = begin; i < est.size(); i += stride)
        {
            try
            {
                est[i] = std::fabs(integrate_adaptive(g, edges[i], edges[i + 1], coarse).value);
            }
            catch (const convergence_error &e)
            {
                est[i] = std::fabs(e.partial_value());
            }
            catch (...)
            {
                fail[i] = std::current_exception();
            }
        }
    };
    const unsigned nt = std::max(1u, std::min<unsigned>(o.threads, static_cast<unsigned>(np)));
    if (nt == 1)
        work(0, 1);
    else
    {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nt; ++t)
            pool.emplace_back(work, t, nt);
        for (auto &th : pool)
            th.join();
    }
    for (auto &e : fail)
        if (e)
            std::rethrow_exception(e);
    double scale = 0.0;
    for (double e : est)
        scale += e;

    Leg L;
    if (!(scale > 0.0))
        return L;
    IntegrationSettings s;
    s.rel_tol = o.rel_tol;
    // nearly transparent plates: fall back to a floor far below any physical size
    s.abs_tol = std::max(0.1 * o.rel_tol * scale, 1e-6 * o.rel_tol * floor_scale);
    s.transform = Transform::log;
    s.max_evals = o.max_evals;
    const auto r = integrate_panels(g, edges, s, o.threads);
    L.value = r.value;
    L.error = r.abs_error;
    L.evals = r.n_evals;
    return L;
}

// Inner wavenumber settings; the absolute floor is referred to `scale`, the
// magnitude of the same integral for ideal mirrors.
inline IntegrationSettings inner_settings(const SpectralOptions &o, double scale, Transform t)
{
    IntegrationSettings s;
    s.rel_tol = o.rel_tol / 10.0;
    s.abs_tol = o.rel_tol * 1e-4 * scale;
    s.transform = t;
    s.max_evals = o.max_evals;
    return s;
}

inline SpectralResult combine(const Leg &evan, const Leg &prop)
{
    SpectralResult r;
    r.evanescent_part = evan.value;
    r.propagating_part = prop.value;
    r.value = evan.value + prop.value;
    r.abs_error_estimate = evan.error + prop.error;
    r.n_evals = evan.evals + prop.evals;
    return r;
}

// Spectral densities of the pressure: integrand per d(kappa) on the
// evanescent leg and per d(k_z) on the propagating leg (without the
// thermal weight and the 1/(2 pi)^2 measure).
inline double pressure_kernel_evan(const PlateSystem &sys, Polarization pol, double w, double kappa)
{
    const auto m = ModeCoordinates::from_kappa(kappa, w, pol);
    const complex R = sys.plate1.r(m) * sys.plate2.r(m);
    const complex g = loop(R * std::exp(-2.0 * kappa * sys.d));
    return -2.0 * si::hbar * kappa * kappa * g.imag();
}

inline double pressure_kernel_prop(const PlateSystem &sys, Polarization pol, double w, double kz)
{
    const auto m = ModeCoordinates::from_kz(kz, w, pol);
    const complex R = sys.plate1.r(m) * sys.plate2.r(m);
    const complex g = loop(R * std::exp(2.0 * I * kz * sys.d));
    return 2.0 * si::hbar * kz * kz * g.real();
}

inline double heat_kernel_evan(const PlateSystem &sys, Polarization pol, double w, double kappa)
{
    const auto m = ModeCoordinates::from_kappa(kappa, w, pol);
    const complex r1 = sys.plate1.r(m), r2 = sys.plate2.r(m);
    const double e = std::exp(-2.0 * kappa * sys.d);
    const complex den = 1.0 - r1 * r2 * e;
    return kappa * 4.0 * r1.imag() * r2.imag() * e / std::norm(den);
}

inline double heat_kernel_prop(const PlateSystem &sys, Polarization pol, double w, double kz)
{
    const auto m = ModeCoordinates::from_kz(kz, w, pol);
    const complex r1 = sys.plate1.r(m), r2 = sys.plate2.r(m);
    const complex den = 1.0 - r1 * r2 * std::exp(2.0 * I * kz * sys.d);
    return kz * (1.0 - std::norm(r1)) * (1.0 - std::norm(r2)) / std::norm(den);
}

// Wavenumber integral at fixed frequency over one leg, summed over
// polarizations: kappa in (0, kappa_max] (evanescent) or k_z in [0, omega/c].
// scale_evan and scale_prop are ideal-mirror magnitudes of the two legs.
template <class K>
double wavenumber_integral(const PlateSystem &sys, const SpectralOptions &o, double w, bool evanescent,
                           const K &kernel, double scale)
{
    double total = 0.0;
    for (auto pol : polarizations(o.pols))
    {
        auto f = [&](double x) { return kernel(sys, pol, w, x); };
        if (evanescent)
            total += integrate_adaptive(f, 1e-6 / sys.d, o.kappa_max_factor / sys.d,
                                        inner_settings(o, scale, Transform::log))
                         .value;
        else
            total += integrate_adaptive(f, 0.0, w / si::c, inner_settings(o, scale, Transform::none)).value;
    }
    return total;
}

inline double omega_floor(double T) { return 1e-9 * si::k_B * T / si::hbar; }
} // namespace detail

// Temperature-dependent part of the real-frequency pressure (Pa); positive
// values are repulsive.
inline SpectralResult pressure_thermal(const PlateSystem &sys, double T, const SpectralOptions &o = {})
{
    sys.validate();
    if (!(T > 0.0))
        throw domain_error("pressure_thermal: T must be positive");
    detail::check_models(sys, o.pols);
    const double norm = 1.0 / (4.0 * si::pi * si::pi);
    auto fe = [&](double w) {
        return 2.0 * bose_factors(w, T).n_bar * norm *
               detail::wavenumber_integral(sys, o, w, true, detail::pressure_kernel_evan,
                                           si::hbar / (2.0 * sys.d * sys.d * sys.d));
    };
    auto fp = [&](double w) {
        return 2.0 * bose_factors(w, T).n_bar * norm *
               detail::wavenumber_integral(sys, o, w, false, detail::pressure_kernel_prop,
                                           2.0 * si::hbar * std::pow(w / si::c, 3) / 3.0);
    };
    const double w_lo = detail::omega_floor(T);
    const double w_hi = o.omega_max_factor * si::k_B * T / si::hbar;
    const double floor = si::k_B * T / (sys.d * sys.d * sys.d);
    const auto evan = detail::frequency_integral(fe, w_lo, w_hi, o, floor);
    const auto prop = detail::frequency_integral(fp, w_lo, w_hi, o, floor);
    return detail::combine(evan, prop);
}

namespace detail
{
// -(1/pi) int_{xi/c}^inf kappa^2 sum_pol g(i xi, kappa) d kappa, g the
// imaginary-frequency loop factor.
inline IntegrationResult matsubara_term(const PlateSystem &sys, double xi, const SpectralOptions &o)
{
    IntegrationSettings s = inner_settings(o, 1.0 / (4.0 * sys.d * sys.d * sys.d), Transform::exp_tail);
    s.x0 = 1.0 / (2.0 * sys.d);
    IntegrationResult total;
    for (auto pol : polarizations(o.pols))
    {
        auto f = [&](double kappa) {
            const double k = std::sqrt(std::max(0.0, (kappa - xi / si::c) * (kappa + xi / si::c)));
            auto m = ModeCoordinates::imaginary_frequency(k, xi, pol);
            m.k_z = complex{0.0, kappa};
            const complex R = sys.plate1.r(m) * sys.plate2.r(m);
            return kappa * kappa * loop(R * std::exp(-2.0 * kappa * sys.d)).real();
        };
        auto r = integrate_adaptive(f, xi / si::c, std::numeric_limits<double>::infinity(), s);
        total.value += r.value;
        total.abs_error += r.abs_error;
        total.n_evals += r.n_evals;
    }
    total.value *= -1.0 / si::pi;
    total.abs_error /= si::pi;
    return total;
}

// Matsubara n = 0 is evaluated just above the origin.
inline constexpr double kStaticXiFraction = 1e-10;
inline constexpr double kMatsubaraCutoff = 30.0; // stop once xi_n d / c exceeds this
} // namespace detail

// Total pressure from the Matsubara sum (k_B T) sum'_n over xi_n = 2 pi n k_B T / hbar.
inline SpectralResult pressure_matsubara(const PlateSystem &sys, double T, const SpectralOptions &o = {})
{
    sys.validate();
    if (!(T > 0.0))
        throw domain_error("pressure_matsubara: T must be positive");
    detail::check_models(sys, o.pols);
    const double xi1 = 2.0 * si::pi * si::k_B * T / si::hbar;
    const long n_max = static_cast<long>(std::ceil(detail::kMatsubaraCutoff * si::c / (xi1 * sys.d))) + 1;

    std::vector<IntegrationResult> terms(static_cast<std::size_t>(n_max) + 1);
    std::vector<std::exception_ptr> fail(terms.size());
    auto work = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t n = begin; n < terms.size(); n += stride)
        {
            try
            {
                const double xi = n == 0 ? detail::kStaticXiFraction * xi1 : static_cast<double>(n) * xi1;
                terms[n] = detail::matsubara_term(sys, xi, o);
            }
            catch (...)
            {
                fail[n] = std::current_exception();
            }
        }
    };
    const unsigned nt = std::max(1u, o.threads);
    if (nt == 1)
        work(0, 1);
    else
    {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nt; ++t)
            pool.emplace_back(work, t, nt);
        for (auto &th : pool)
            th.join();
    }
    for (auto &e : fail)
        if (e)
            std::rethrow_exception(e);

    SpectralResult r;
    for (std::size_t n = 0; n < terms.size(); ++n)
    {
        const double w = n == 0 ? 0.5 : 1.0;
        r.value += w * terms[n].value;
        r.abs_error_estimate += w * terms[n].abs_error;
        r.n_evals += terms[n].n_evals;
    }
    r.value *= si::k_B * T;
    r.abs_error_estimate *= si::k_B * T;
    r.evanescent_part = r.value; // the imaginary axis has no propagating leg
    return r;
}

// Zero-temperature pressure as an integral along the imaginary frequency
// axis, -(hbar / 2 pi^2) int dxi int kappa^2 g.
inline SpectralResult pressure_zeroT_imaginary(const PlateSystem &sys, const SpectralOptions &o = {})
{
    sys.validate();
    detail::check_models(sys, o.pols);
    IntegrationSettings s;
    s.rel_tol = o.rel_tol;
    s.transform = Transform::exp_tail;
    s.x0 = si::c / (2.0 * sys.d);
    s.max_evals = o.max_evals;
    long evals = 0;
    auto f = [&](double xi) {
        if (xi <= 0.0)
            xi = 1e-300;
        auto t = detail::matsubara_term(sys, xi, o);
        evals += t.n_evals;
        return t.value;
    };
    auto r = integrate_adaptive(f, 0.0, std::numeric_limits<double>::infinity(), s);
    SpectralResult out;
    // -(1/pi) already inside; remaining factor hbar / (2 pi)
    out.value = si::hbar / (2.0 * si::pi) * r.value;
    out.evanescent_part = out.value;
    out.abs_error_estimate = si::hbar / (2.0 * si::pi) * r.abs_error;
    out.n_evals = evals;
    return out;
}

namespace detail
{
template <class Weight>
SpectralResult heat_integral(const PlateSystem &sys, const Weight &weight, double T_ref,
                             const SpectralOptions &o, double floor_scale)
{
    const double norm = 1.0 / (4.0 * si::pi * si::pi);
    auto fe = [&](double w) {
        return weight(w) * si::hbar * w * norm * wavenumber_integral(sys, o, w, true, heat_kernel_evan, 1.0 / (sys.d * sys.d));
    };
    auto fp = [&](double w) {
        return weight(w) * si::hbar * w * norm * wavenumber_integral(sys, o, w, false, heat_kernel_prop,
                                                                   0.5 * (w / si::c) * (w / si::c));
    };
    const double w_lo = omega_floor(T_ref);
    const double w_hi = o.omega_max_factor * si::k_B * T_ref / si::hbar;
    const auto evan = frequency_integral(fe, w_lo, w_hi, o, floor_scale);
    const auto prop = frequency_integral(fp, w_lo, w_hi, o, floor_scale);
    return combine(evan, prop);
}
} // namespace detail

// Net radiative heat flux from plate 1 (temperature T1) to plate 2 (T2), W/m^2.
// T1 < T2 gives a negative flux.
inline SpectralResult heat_flux(const PlateSystem &sys, double T1, double T2, const SpectralOptions &o = {})
{
    sys.validate();
    if (!(T1 > 0.0) || !(T2 > 0.0))
        throw domain_error("heat_flux: temperatures must be positive");
    detail::check_models(sys, o.pols);
    if (T1 == T2)
        return {};
    auto weight = [&](double w) { return bose_factors(w, T1).n_bar - bose_factors(w, T2).n_bar; };
    const double bb = si::sigma_SB * std::fabs(std::pow(T1, 4) - std::pow(T2, 4));
    return detail::heat_integral(sys, weight, std::max(T1, T2), o, bb);
}

// Linearized heat transfer coefficient dS/dT, W m^-2 K^-1.
inline SpectralResult heat_coefficient(const PlateSystem &sys, double T, const SpectralOptions &o = {})
{
    sys.validate();
    if (!(T > 0.0))
        throw domain_error("heat_coefficient: T must be positive");
    detail::check_models(sys, o.pols);
    auto weight = [&](double w) { return bose_factors(w, T).dn_dT; };
    return detail::heat_integral(sys, weight, T, o, 4.0 * si::sigma_SB * T * T * T);
}

enum class MapQuantity
{
    pressure,
    heat
};

struct MapGrid
{
    double k_min = 1e-3, k_max = 1e2;        // units of 1/lambda_p
    double omega_min = 1e-4, omega_max = 1e2; // units of 1/tau
    int n_k = 64, n_omega = 64;
};

struct SpectralMap
{
    std::vector<double> k;     // 1/m
    std::vector<double> omega; // rad/s
    std::vector<double> value; // row-major [i_omega * n_k + i_k], normalized
    double normalization = 0.0;
    // guide lines
    double omega_thermal = 0.0;      // hbar omega = k_B T
    double k_gap = 0.0;              // k = 1/d
    double diffusion_coeff = 0.0;    // omega = coeff k^2 (4.11 lambda_p^2 / tau)
    double viscous_coeff = 0.0;      // omega = coeff k^2 (0.2 v_F^2 tau)

    double at(int i_omega, int i_k) const
    {
        return value[static_cast<std::size_t>(i_omega) * k.size() + static_cast<std::size_t>(i_k)];
    }
};

namespace detail
{
// Log-density omega k dP/(d omega dk) or omega k dh/(d omega dk).
inline double map_density(const PlateSystem &sys, MapQuantity q, double T, PolarizationSet pols, double w,
                          double k)
{
    const double k0 = w / si::c;
    double total = 0.0;
    for (auto pol : polarizations(pols))
    {
        if (q == MapQuantity::pressure)
        {
            const double nb = 2.0 * bose_factors(w, T).n_bar;
            if (k > k0)
            {
                const double kappa = std::sqrt((k - k0) * (k + k0));
                total += nb * pressure_kernel_evan(sys, pol, w, kappa) * k / kappa;
            }
            else if (k < k0)
            {
                const double kz = std::sqrt((k0 - k) * (k0 + k));
                total += nb * pressure_kernel_prop(sys, pol, w, kz) * k / kz;
            }
        }
        else
        {
            const double wt = si::hbar * w * bose_factors(w, T).dn_dT;
            if (k > k0)
            {
                const double kappa = std::sqrt((k - k0) * (k + k0));
                total += wt * heat_kernel_evan(sys, pol, w, kappa) * k / kappa;
            }
            else if (k < k0)
            {
                const double kz = std::sqrt((k0 - k) * (k0 + k));
                total += wt * heat_kernel_prop(sys, pol, w, kz) * k / kz;
            }
        }
    }
    return w * k * total / (4.0 * si::pi * si::pi);
}
} // namespace detail

// Integrand maps on a log-log (k, omega) grid, normalized by the largest
// magnitude of the same map for the local model.
inline SpectralMap spectral_map(const PlateSystem &sys, double T, MapQuantity q, const MapGrid &grid,
                                const SpectralOptions &o = {})
{
    sys.validate();
    if (!(T > 0.0))
        throw domain_error("spectral_map: T must be positive");
    if (grid.n_k < 2 || grid.n_omega < 2 || !(grid.k_min > 0.0) || !(grid.k_max > grid.k_min) ||
        !(grid.omega_min > 0.0) || !(grid.omega_max > grid.omega_min))
        throw domain_error("spectral_map: invalid grid");
    detail::check_models(sys, o.pols);
    const auto &mat = sys.plate1.mat;
    const double lp = mat.plasma_wavelength_reduced();

    SpectralMap m;
    for (int i = 0; i < grid.n_k; ++i)
        m.k.push_back(grid.k_min * std::pow(grid.k_max / grid.k_min, double(i) / (grid.n_k - 1)) / lp);
    for (int j = 0; j < grid.n_omega; ++j)
        m.omega.push_back(grid.omega_min * std::pow(grid.omega_max / grid.omega_min, double(j) / (grid.n_omega - 1)) /
                          mat.tau);

    PlateSystem local = sys;
    local.plate1.model = ReflectionModel::local;
    local.plate2.model = ReflectionModel::local;

    const std::size_t n = m.k.size() * m.omega.size();
    std::vector<double> raw(n), ref(n);
    auto work = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t idx = begin; idx < n; idx += stride)
        {
            const double w = m.omega[idx / m.k.size()];
            const double k = m.k[idx % m.k.size()];
            raw[idx] = detail::map_density(sys, q, T, o.pols, w, k);
            ref[idx] = detail::map_density(local, q, T, o.pols, w, k);
        }
    };
    const unsigned nt = std::max(1u, o.threads);
    if (nt == 1)
        work(0, 1);
    else
    {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nt; ++t)
            pool.emplace_back(work, t, nt);
        for (auto &th : pool)
            th.join();
    }
    double mx = 0.0;
    for (double v : ref)
        mx = std::max(mx, std::fabs(v));
    m.normalization = mx;
    m.value.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        m.value[i] = mx > 0.0 ? raw[i] / mx : 0.0;

    m.omega_thermal = si::k_B * T / si::hbar;
    m.k_gap = 1.0 / sys.d;
    m.diffusion_coeff = 4.11 * lp * lp / mat.tau;
    m.viscous_coeff = 0.2 * mat.v_F * mat.v_F * mat.tau;
    return m;
}

} // namespace hydrocas

#endif // HYDROCAS_FLUCTUATION_HPP
