#pragma once

/**
 * @file qubit.hpp
 * @brief Flux-tunable transmon coupled to the beam through the SQUID loop.
 *
 * Beam displacement changes the flux threaded through the SQUID and so the
 * qubit frequency. The coupling pulse is a rectangular window of constant
 * λ_on lasting T₂*, which gives |α| = |λ_on|·T₂*.
 */

#include "displacemon/beam.hpp"
#include "displacemon/constants.hpp"
#include "displacemon/error.hpp"

#include <cmath>

namespace displacemon {

struct QubitConfig {
    double omega_q0;       ///< bare qubit frequency at zero flux, rad/s
    double delta_phi_frac; ///< operating point ΔΦ/Φ₀
    double T2_star;        ///< dephasing time, s
    double B_par;          ///< in-plane field, T

    void validate() const
    {
        using detail::require;
        require(omega_q0 > 0, "QubitConfig.omega_q0", "must be positive");
        require(std::abs(delta_phi_frac) < 1.0, "QubitConfig.delta_phi_frac",
                "must satisfy |ΔΦ/Φ₀| < 1");
        require(T2_star > 0, "QubitConfig.T2_star", "must be positive");
        require(B_par >= 0, "QubitConfig.B_par", "must be non-negative");
    }
};

struct GratingParams {
    double lambda_on;    ///< |λ| during the pulse, rad/s
    double alpha_mag;    ///< |α|
    double delta_x_max;  ///< m
    bool stationary_ok;  ///< Ω·T₂* ≤ 0.1, i.e. the beam barely moves during the pulse
};

/// E_J = E_J⁰ |cos(πΦ/Φ₀)| for a symmetric SQUID.
inline double josephson_energy_squid(double E_J0, double phi_frac)
{
    return E_J0 * std::abs(std::cos(pi * phi_frac));
}

/// Transmon frequency √(8 E_J E_C)/ħ.
inline double transmon_frequency(double E_J, double E_C)
{
    detail::require(E_J > 0, "E_J", "must be positive");
    detail::require(E_C > 0, "E_C", "must be positive");
    return std::sqrt(8.0 * E_J * E_C) / constants::hbar;
}

inline double qubit_frequency(double omega_q0, double delta_phi_frac)
{
    detail::require(std::abs(delta_phi_frac) < 1.0, "delta_phi_frac", "must satisfy |ΔΦ/Φ₀| < 1");
    const double c = std::abs(std::cos(0.5 * pi * delta_phi_frac));
    return omega_q0 * std::sqrt(c);
}

/// (π/4) tan(πΔΦ/2Φ₀); about 1.15 at the usual 0.620 operating point.
inline double effective_coupling_prefactor(double delta_phi_frac)
{
    detail::require(std::abs(delta_phi_frac) < 1.0, "delta_phi_frac", "must satisfy |ΔΦ/Φ₀| < 1");
    return 0.25 * pi * std::tan(0.5 * pi * delta_phi_frac);
}

/// Signed coupling rate λ = (X_ZP/2) dω_q/dX, rad/s.
inline double coupling_rate(const QubitConfig& qubit, const FundamentalMode& mode,
                            const BeamGeometry& geometry)
{
    qubit.validate();
    geometry.validate();
    const double omega_q = qubit_frequency(qubit.omega_q0, qubit.delta_phi_frac);
    const double flux_ratio = mode.X_ZP * geometry.ell * qubit.B_par / constants::Phi0;
    return -omega_q * mode.beta0 * flux_ratio * effective_coupling_prefactor(qubit.delta_phi_frac);
}

inline GratingParams grating_alpha(const QubitConfig& qubit, const FundamentalMode& mode,
                                   const BeamGeometry& geometry)
{
    GratingParams g{};
    g.lambda_on = std::abs(coupling_rate(qubit, mode, geometry));
    g.alpha_mag = g.lambda_on * qubit.T2_star;
    g.delta_x_max = 4.0 * g.alpha_mag * mode.X_ZP;
    g.stationary_ok = mode.Omega * qubit.T2_star <= 0.1;
    return g;
}

/// Θ = λ x τ_R with x = X/X_ZP.
inline double precession_angle(double lambda, double x_over_xzp, double tau_R)
{
    return lambda * x_over_xzp * tau_R;
}

/// p₊ = cos²Θ.
inline double plus_probability(double theta)
{
    const double c = std::cos(theta);
    return c * c;
}

} // namespace displacemon
