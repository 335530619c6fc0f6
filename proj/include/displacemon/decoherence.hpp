#pragma once

/**
 * @file decoherence.hpp
 * @brief Decoherence rates of the beam's centre-of-mass mode: thermal
 *        momentum diffusion, Diósi-Penrose self-energies and thresholds, CSL
 *        momentum diffusion, and the vibration noise budget.
 *
 * Diffusion constants D are the coefficients of the position double
 * commutator -D[X,[X,ρ]] in the master equation, in m⁻²s⁻¹.
 */

#include "displacemon/constants.hpp"
#include "displacemon/error.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string_view>

namespace displacemon {

/// Bath state plus mechanical damping. Build with from_occupation or
/// from_temperature so that N̄ and T_eff stay consistent.
struct Environment {
    double N_bar;
    double T_eff; ///< K
    double Q;
    double Omega; ///< rad/s
    double gamma; ///< rad/s, Ω/Q

    static Environment from_occupation(double N_bar, double Q, double Omega)
    {
        detail::require(Q > 0, "Environment.Q", "must be positive");
        detail::require(N_bar >= 0, "Environment.N_bar", "must be non-negative");
        return {N_bar, temperature_from_occupation(N_bar, Omega), Q, Omega, Omega / Q};
    }

    static Environment from_temperature(double T_eff, double Q, double Omega)
    {
        detail::require(Q > 0, "Environment.Q", "must be positive");
        return {thermal_occupation(T_eff, Omega), T_eff, Q, Omega, Omega / Q};
    }

    /// False when k_B T ≫ ħΩ is doubtful (N̄ < 10); the rates are still computed.
    bool high_temperature_ok() const { return N_bar >= 10.0; }
};

// ---------------------------------------------------------------------------
// Thermal bath

/// D_th = 2 m γ k_B T / ħ².
inline double thermal_diffusion(double mass, double gamma, double T_eff)
{
    detail::require(mass > 0, "mass", "must be positive");
    detail::require(gamma >= 0, "gamma", "must be non-negative");
    detail::require(T_eff >= 0, "T_eff", "must be non-negative");
    return 2.0 * mass * gamma * constants::k_B * T_eff / (constants::hbar * constants::hbar);
}

inline double thermal_diffusion(double mass, const Environment& env)
{
    return thermal_diffusion(mass, env.gamma, env.T_eff);
}

struct DecoherenceTime {
    double seconds;
    bool no_decoherence; ///< true for zero separation: the state just equilibrates
};

/// t_th = 1/(4 D ΔX²); ΔX = 0 gives +inf with the flag set.
inline DecoherenceTime thermal_decoherence_time(double D_th, double delta_x)
{
    detail::require(D_th > 0, "D_th", "must be positive");
    detail::require(delta_x >= 0, "delta_x", "must be non-negative");
    if (delta_x == 0.0)
        return {std::numeric_limits<double>::infinity(), true};
    return {1.0 / (4.0 * D_th * delta_x * delta_x), false};
}

/// Coefficient of the momentum double commutator, γ/(8 m k_B T). Negligible
/// for every parameter set of interest and kept only for completeness.
inline double spatial_diffusion_rate(double mass, double gamma, double T_eff)
{
    detail::require(mass > 0, "mass", "must be positive");
    detail::require(T_eff > 0, "T_eff", "must be positive");
    return gamma / (8.0 * mass * constants::k_B * T_eff);
}

// ---------------------------------------------------------------------------
// Diósi-Penrose

enum class SigmaChoice { NuclearRadius, BeamZeroPoint, AtomZeroPoint };

inline std::string_view to_string(SigmaChoice s)
{
    switch (s) {
    case SigmaChoice::NuclearRadius:
        return "nuclear";
    case SigmaChoice::BeamZeroPoint:
        return "beam_zpa";
    case SigmaChoice::AtomZeroPoint:
        return "atom_zpa";
    }
    return "";
}

inline std::optional<SigmaChoice> parse_sigma_choice(std::string_view s)
{
    if (s == "nuclear")
        return SigmaChoice::NuclearRadius;
    if (s == "beam_zpa")
        return SigmaChoice::BeamZeroPoint;
    if (s == "atom_zpa")
        return SigmaChoice::AtomZeroPoint;
    return std::nullopt;
}

inline constexpr SigmaChoice all_sigma_choices[] = {
    SigmaChoice::NuclearRadius, SigmaChoice::BeamZeroPoint, SigmaChoice::AtomZeroPoint};

struct DpConfig {
    SigmaChoice sigma_choice = SigmaChoice::NuclearRadius;
    double gamma_dp = 1.0 / (8.0 * pi);

    void validate() const { detail::require(gamma_dp > 0, "DpConfig.gamma_dp", "must be positive"); }

    /// 8πγ_DP, equal to 1 for the gravitational self-energy convention.
    double scale() const { return 8.0 * pi * gamma_dp; }
};

/// Quantities of a solved device that the DP and CSL formulas need.
struct MechanicalBody {
    double mass;        ///< kg
    double Omega;       ///< rad/s
    double X_ZP;        ///< m
    double delta_x_max; ///< m
    double D;           ///< cross-section side, m
    double ell;         ///< length, m
    Material material;
};

/// Self-energy of a single nucleus split over two positions ΔX apart.
/// Hard spheres of radius σ when 2ΔX ≥ σ; the leading small-separation
/// term below that. The two forms are not continuous at the branch point.
inline double dp_single_nucleus_energy(double delta_x, double sigma, double m_a, double gamma_dp)
{
    using detail::require;
    require(delta_x > 0, "delta_x", "must be positive");
    require(sigma > 0, "sigma", "must be positive");
    require(m_a > 0, "m_a", "must be positive");
    require(gamma_dp > 0, "gamma_dp", "must be positive");
    const double k = 8.0 * pi * gamma_dp * constants::G * m_a * m_a;
    if (2.0 * delta_x >= sigma)
        return k * (6.0 / (5.0 * sigma) - 1.0 / (2.0 * delta_x));
    return k * 2.0 * delta_x * delta_x / (sigma * sigma * sigma);
}

/// Mass-distribution radius σ for each choice.
inline double dp_sigma(SigmaChoice choice, const MechanicalBody& body)
{
    switch (choice) {
    case SigmaChoice::NuclearRadius:
        return body.material.sigma_nuc;
    case SigmaChoice::BeamZeroPoint:
        return body.X_ZP;
    case SigmaChoice::AtomZeroPoint:
        return std::sqrt(constants::hbar / (2.0 * body.material.m_a * body.material.Omega_p));
    }
    throw InvalidArgument("DpConfig.sigma_choice", "unknown value");
}

/// Gravitational self-energy E_G of the whole beam for a superposition of
/// size ΔX_max. The atom branch treats every nucleus as displaced by ΔX_max,
/// which makes it an order-of-magnitude estimate.
inline double dp_self_energy(const MechanicalBody& body, const DpConfig& dp)
{
    dp.validate();
    const double m_a = body.material.m_a;
    const double sigma = dp_sigma(dp.sigma_choice, body);
    const double gm = constants::G * body.mass * m_a;
    if (dp.sigma_choice == SigmaChoice::AtomZeroPoint)
        return dp.scale() * 2.0 * gm * body.delta_x_max * body.delta_x_max
            / (sigma * sigma * sigma);
    return dp.scale() * 1.2 * gm / sigma;
}

/// t_DP = ħ/E_G; +inf for zero energy.
inline double dp_lifetime(double E_G)
{
    detail::require(E_G >= 0, "E_G", "must be non-negative");
    if (E_G == 0.0)
        return std::numeric_limits<double>::infinity();
    return constants::hbar / E_G;
}

struct DpThreshold {
    double n_bar_max;
    double T_eff_max; ///< K
    bool physical;    ///< false when N̄_max < 10, outside the high-temperature model
};

/// Largest bath occupation at which DP decoherence beats thermal decoherence.
inline DpThreshold dp_max_occupation(const MechanicalBody& body, double Q, const DpConfig& dp)
{
    dp.validate();
    detail::require(Q > 0, "Q", "must be positive");
    const double sigma = dp_sigma(dp.sigma_choice, body);
    const double s3 = sigma * sigma * sigma;
    const double w2 = body.Omega * body.Omega;
    const double gq = constants::G * body.material.m_a * Q;
    double n_max = 0.0;
    if (dp.sigma_choice == SigmaChoice::AtomZeroPoint)
        n_max = dp.scale() * gq / (4.0 * w2 * s3);
    else
        n_max = dp.scale() * 7.0 * gq / (80.0 * s3 * w2);
    return {n_max, temperature_from_occupation(n_max, body.Omega), n_max >= 10.0};
}

/// N̄ bound below which DP decoherence at separation ΔX is faster than
/// thermal decoherence: E_G Q / (8 m Ω² ΔX²).
inline double dp_observability_condition(double E_G, double Q, double mass, double Omega,
                                         double delta_x)
{
    using detail::require;
    require(E_G >= 0, "E_G", "must be non-negative");
    require(Q > 0, "Q", "must be positive");
    require(mass > 0, "mass", "must be positive");
    require(Omega > 0, "Omega", "must be positive");
    require(delta_x > 0, "delta_x", "must be positive");
    return E_G * Q / (8.0 * mass * Omega * Omega * delta_x * delta_x);
}

// ---------------------------------------------------------------------------
// CSL

struct CslConfig {
    double lambda_csl; ///< 1/s
    double r_csl;      ///< m

    void validate() const
    {
        detail::require(lambda_csl >= 0, "CslConfig.lambda_csl", "must be non-negative");
        detail::require(r_csl > 0, "CslConfig.r_csl", "must be positive");
    }
};

namespace detail {

inline double gamma1_series(double x)
{
    const double x2 = x * x;
    return 1.0 + x2 * (-1.0 / 12.0 + x2 * (1.0 / 120.0 - x2 / 1344.0));
}

inline double gamma1_closed(double x)
{
    const double x2 = x * x;
    const double bracket
        = std::expm1(-0.5 * x2) + std::sqrt(0.5 * pi) * x * std::erf(x / std::sqrt(2.0));
    return 2.0 * bracket / x2;
}

} // namespace detail

/// Γ₁(x) = (2/x²)[e^{-x²/2} - 1 + √(π/2) x erf(x/√2)], the CSL form factor of
/// one side of a cuboid. Decreases from 1 at x = 0 like √(2π)/x - 2/x².
/// Below x = 0.05 a four-term Taylor series is used.
inline double gamma1(double x)
{
    detail::require(x >= 0, "x", "must be non-negative");
    return x <= 0.05 ? detail::gamma1_series(x) : detail::gamma1_closed(x);
}

/// Number of nucleons N_n = m / amu.
inline double nucleon_count(double mass)
{
    detail::require(mass > 0, "mass", "must be positive");
    return mass / constants::amu;
}

/// CSL diffusion per unit collapse rate, (N_n²/D²) Γ₁ Γ₁ (1 - e^{-D²/4r²}).
inline double csl_geometry_factor(const MechanicalBody& body, double r_csl)
{
    detail::require(r_csl > 0, "r_csl", "must be positive");
    const double n = nucleon_count(body.mass);
    const double s = std::sqrt(2.0) * r_csl;
    const double transverse = -std::expm1(-body.D * body.D / (4.0 * r_csl * r_csl));
    return n * n / (body.D * body.D) * gamma1(body.D / s) * gamma1(body.ell / s) * transverse;
}

inline double csl_diffusion(const MechanicalBody& body, const CslConfig& csl)
{
    csl.validate();
    return csl.lambda_csl * csl_geometry_factor(body, csl.r_csl);
}

/// The CSL rate formula assumes X_ZP ≪ r_CSL.
inline bool csl_regime_ok(const MechanicalBody& body, const CslConfig& csl)
{
    return body.X_ZP < csl.r_csl;
}

/// Collapse rate at which D_CSL equals a given thermal diffusion.
inline double csl_threshold_lambda(const MechanicalBody& body, double r_csl, double D_th)
{
    return D_th / csl_geometry_factor(body, r_csl);
}

// ---------------------------------------------------------------------------
// Vibration noise

/// Effective bath temperature from a displacement noise spectrum S_XX at Ω,
/// T = m Q Ω³ S_XX / (4 k_B).
inline double mech_noise_temperature(double mass, double Q, double Omega, double S_XX)
{
    using detail::require;
    require(mass > 0, "mass", "must be positive");
    require(Q > 0, "Q", "must be positive");
    require(Omega > 0, "Omega", "must be positive");
    require(S_XX >= 0, "S_XX", "must be non-negative");
    return mass * Q * Omega * Omega * Omega * S_XX / (4.0 * constants::k_B);
}

/// Largest S_XX (m²/Hz) that keeps the vibration temperature below T_target.
inline double required_sxx(double mass, double T_target, double Q, double Omega)
{
    using detail::require;
    require(mass > 0, "mass", "must be positive");
    require(T_target >= 0, "T_target", "must be non-negative");
    require(Q > 0, "Q", "must be positive");
    require(Omega > 0, "Omega", "must be positive");
    return 4.0 * constants::k_B * T_target / (mass * Q * Omega * Omega * Omega);
}

} // namespace displacemon
