#pragma once

/**
 * @file beam.hpp
 * @brief Fundamental out-of-plane mode of a doubly clamped, untensioned beam
 *        with a square cross-section (Euler-Bernoulli theory).
 *
 * The mode is solved once in dimensionless form (length 1) and rescaled:
 * the clamped-clamped root kℓ and the coupling integral β₀ do not depend on
 * the geometry.
 */

#include "displacemon/constants.hpp"
#include "displacemon/error.hpp"
#include "displacemon/numerics.hpp"

#include <cmath>

namespace displacemon {

struct BeamGeometry {
    double D;   ///< side of the square cross-section, m
    double ell; ///< length, m

    void validate() const
    {
        detail::require(D > 0, "BeamGeometry.D", "must be positive");
        detail::require(ell > 0, "BeamGeometry.ell", "must be positive");
        detail::require(ell > D, "BeamGeometry.ell", "must exceed D (slender beam)");
    }
};

struct FundamentalMode {
    double k_ell; ///< dimensionless wavenumber root
    double Omega; ///< rad/s
    double mass;  ///< kg
    double X_ZP;  ///< m
    double beta0; ///< dimensionless
};

/// Clamped-clamped characteristic function; its lowest positive root is kℓ.
inline double clamped_characteristic(double x)
{
    const double h = 0.5 * x;
    return std::cos(h) * std::sinh(h) + std::cosh(h) * std::sin(h);
}

inline double clamped_characteristic_derivative(double x)
{
    const double h = 0.5 * x;
    // d/dx of cos(h)sinh(h) + cosh(h)sin(h) with h = x/2
    return 0.5 * (-std::sin(h) * std::sinh(h) + std::cos(h) * std::cosh(h)
                  + std::sinh(h) * std::sin(h) + std::cosh(h) * std::cos(h));
}

/// Lowest positive root of the clamped-clamped equation (kℓ ≈ 4.730).
inline double solve_mode_wavenumber()
{
    return numerics::bisect_newton(clamped_characteristic, clamped_characteristic_derivative, pi,
                                   5.0, 1e-14);
}

/// Unit-length, unit-norm mode ū₀(ζ) for ζ ∈ [-1/2, 1/2], antinode positive.
/// Numerator and denominator are divided by cosh(kℓ/2) to keep the hyperbolic
/// terms bounded.
inline double unit_mode_shape(double zeta, double k_ell)
{
    const double half = 0.5 * k_ell;
    const double ratio = std::cos(half) / std::cosh(half);
    const double numerator = ratio * std::cosh(k_ell * zeta) - std::cos(k_ell * zeta);
    return -std::sqrt(2.0) * numerator / std::sqrt(ratio * ratio + 1.0);
}

/// u₀(Z) in m^(-1/2), normalised so that ∫u₀²dZ = 1 over the beam.
inline double mode_shape(double Z, const FundamentalMode& mode, const BeamGeometry& geometry)
{
    detail::require(std::abs(Z) <= 0.5 * geometry.ell, "Z", "outside the beam");
    return unit_mode_shape(Z / geometry.ell, mode.k_ell) / std::sqrt(geometry.ell);
}

/// Ω = (kℓ)²/√12 · (D/ℓ²) · √(E/ρ₀), from the dispersion relation
/// k⁴ = 12 Ω² ρ₀ / (E D²).
inline double fundamental_frequency(const BeamGeometry& geometry, const Material& material,
                                    double k_ell)
{
    geometry.validate();
    material.validate();
    return k_ell * k_ell / std::sqrt(12.0) * geometry.D / (geometry.ell * geometry.ell)
        * std::sqrt(material.youngs_E / material.rho0);
}

inline double fundamental_frequency(const BeamGeometry& geometry, const Material& material)
{
    return fundamental_frequency(geometry, material, solve_mode_wavenumber());
}

inline double beam_mass(const BeamGeometry& geometry, const Material& material)
{
    geometry.validate();
    material.validate();
    return material.rho0 * geometry.D * geometry.D * geometry.ell;
}

/// X_ZP = √(ħ / 2mΩ).
inline double zero_point_amplitude(double mass, double Omega)
{
    detail::require(mass > 0, "mass", "must be positive");
    detail::require(Omega > 0, "Omega", "must be positive");
    return std::sqrt(constants::hbar / (2.0 * mass * Omega));
}

/// ∫ū₀(ζ)dζ over the unit-length mode. Geometry independent.
inline double geometric_coupling_beta0(double k_ell, double tol = 1e-10)
{
    auto u = [k_ell](double z) { return unit_mode_shape(z, k_ell); };
    return numerics::adaptive_simpson(u, -0.5, 0.5, tol);
}

inline double geometric_coupling_beta0(const FundamentalMode& mode, const BeamGeometry& geometry)
{
    geometry.validate();
    return geometric_coupling_beta0(mode.k_ell);
}

/// Zero-point amplitude of a single atom in the lattice, √(ħ / 2 m_a Ω_p).
inline double single_atom_zpa(const Material& material)
{
    material.validate();
    return std::sqrt(constants::hbar / (2.0 * material.m_a * material.Omega_p));
}

inline FundamentalMode solve_fundamental_mode(const BeamGeometry& geometry, const Material& material)
{
    geometry.validate();
    material.validate();
    FundamentalMode mode{};
    mode.k_ell = solve_mode_wavenumber();
    mode.Omega = fundamental_frequency(geometry, material, mode.k_ell);
    mode.mass = beam_mass(geometry, material);
    mode.X_ZP = zero_point_amplitude(mode.mass, mode.Omega);
    mode.beta0 = geometric_coupling_beta0(mode.k_ell);
    return mode;
}

} // namespace displacemon
