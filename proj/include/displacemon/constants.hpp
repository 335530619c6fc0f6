#pragma once

/**
 * @file constants.hpp
 * @brief Pinned physical constants, material definitions and the
 *        temperature/occupation conversion shared by every module.
 *
 * All quantities are SI. Frequencies are angular (rad/s) everywhere inside the
 * library; only the report layer divides by 2π.
 */

#include "displacemon/error.hpp"

#include <cmath>
#include <numbers>

namespace displacemon {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// CODATA-2018 values.
struct PhysicalConstants {
    static constexpr double hbar = 1.054571817e-34; ///< J·s
    static constexpr double k_B = 1.380649e-23;     ///< J/K
    static constexpr double G = 6.67430e-11;        ///< m³·kg⁻¹·s⁻²
    static constexpr double Phi0 = 2.067833848e-15; ///< Wb, h/2e
    static constexpr double amu = 1.66053907e-27;   ///< kg
    static constexpr double eV = 1.602176634e-19;   ///< J
};

using constants = PhysicalConstants;

/// Mechanical and nuclear properties of the beam material.
struct Material {
    double rho0;      ///< density, kg/m³
    double youngs_E;  ///< Young's modulus, Pa
    double m_a;       ///< atomic mass, kg
    double a_lattice; ///< nearest-neighbour distance, m
    double sigma_nuc; ///< nuclear radius, m
    double Omega_p;   ///< phonon branch maximum, rad/s

    void validate() const
    {
        using detail::require;
        require(rho0 > 0, "Material.rho0", "must be positive");
        require(youngs_E > 0, "Material.youngs_E", "must be positive");
        require(m_a > 0, "Material.m_a", "must be positive");
        require(a_lattice > 0, "Material.a_lattice", "must be positive");
        require(sigma_nuc > 0, "Material.sigma_nuc", "must be positive");
        require(Omega_p > 0, "Material.Omega_p", "must be positive");
        require(sigma_nuc < a_lattice, "Material.sigma_nuc", "must be smaller than a_lattice");
    }
};

inline Material aluminium()
{
    return Material{
        .rho0 = 2700.0,
        .youngs_E = 68e9,
        .m_a = 26.9815 * constants::amu,
        .a_lattice = 2.9e-10,
        .sigma_nuc = 3.06e-15,
        .Omega_p = two_pi * 3e12,
    };
}

/// Bath occupation N̄ = k_B T / (ħ Ω).
inline double thermal_occupation(double T_eff, double Omega)
{
    detail::require(Omega > 0, "Omega", "must be positive");
    detail::require(T_eff >= 0, "T_eff", "must be non-negative");
    return constants::k_B * T_eff / (constants::hbar * Omega);
}

inline double temperature_from_occupation(double n_bar, double Omega)
{
    detail::require(Omega > 0, "Omega", "must be positive");
    detail::require(n_bar >= 0, "N_bar", "must be non-negative");
    return n_bar * constants::hbar * Omega / constants::k_B;
}

} // namespace displacemon
