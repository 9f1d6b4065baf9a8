#ifndef HYDROCAS_CONSTANTS_HPP
#define HYDROCAS_CONSTANTS_HPP

#include <complex>
#include <numbers>

namespace hydrocas
{
using complex = std::complex<double>;

inline constexpr complex I{0.0, 1.0};

// CODATA 2018, SI units.
namespace si
{
inline constexpr double hbar = 1.054571817e-34;         // J s
inline constexpr double c = 299792458.0;                // m/s
inline constexpr double k_B = 1.380649e-23;             // J/K
inline constexpr double e = 1.602176634e-19;            // C
inline constexpr double m_e = 9.1093837015e-31;         // kg
inline constexpr double epsilon_0 = 8.8541878128e-12;   // F/m
inline constexpr double mu_0 = 1.25663706212e-6;        // N/A^2
inline constexpr double eV = e;                         // J
inline constexpr double pi = std::numbers::pi;

// Stefan-Boltzmann constant derived from the constants above.
inline constexpr double sigma_SB =
    pi * pi * k_B * k_B * k_B * k_B / (60.0 * hbar * hbar * hbar * c * c);
} // namespace si

} // namespace hydrocas

#endif // HYDROCAS_CONSTANTS_HPP
