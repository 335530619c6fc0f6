#pragma once

/**
 * @file grating.hpp
 * @brief Closed-form statistics of the two-grating protocol.
 *
 * The beam starts thermal with occupation n̄. A first grating cos(|α|x)
 * (x = X/X_ZP) is heralded, the beam evolves for k half-periods under damping
 * γ and momentum diffusion D, and a second grating is read out. P(k, D) is
 * the probability of the |+⟩ outcome at the second grating.
 *
 * Every diffusion constant here is dimensionless, D = 2 X_ZP² D_SI; use
 * dimensionless_diffusion() to convert.
 */

#include "displacemon/constants.hpp"
#include "displacemon/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace displacemon {

struct ProtocolParams {
    double alpha_mag;
    double n_bar; ///< initial occupation of the pre-cooled beam
    int k;        ///< half-periods between the gratings
    double Omega; ///< rad/s
    double gamma; ///< rad/s

    void validate() const
    {
        using detail::require;
        require(alpha_mag > 0, "ProtocolParams.alpha_mag", "must be positive");
        require(n_bar >= 0, "ProtocolParams.n_bar", "must be non-negative");
        require(k >= 0, "ProtocolParams.k", "must be non-negative");
        require(Omega > 0, "ProtocolParams.Omega", "must be positive");
        require(gamma >= 0, "ProtocolParams.gamma", "must be non-negative");
    }

    ProtocolParams with_k(int kk) const
    {
        ProtocolParams p = *this;
        p.k = kk;
        return p;
    }

    /// t_k = kπ/Ω.
    double elapsed() const { return k * pi / Omega; }
};

/// D = 2 X_ZP² D_SI.
inline double dimensionless_diffusion(double D_SI, double X_ZP)
{
    detail::require(D_SI >= 0, "D", "must be non-negative");
    detail::require(X_ZP > 0, "X_ZP", "must be positive");
    return 2.0 * X_ZP * X_ZP * D_SI;
}

namespace detail {

/// s = (1 + 2n̄)|α|².
inline double grating_strength(double alpha_mag, double n_bar)
{
    return (1.0 + 2.0 * n_bar) * alpha_mag * alpha_mag;
}

inline double log_sum_exp3(double a, double b, double c)
{
    const double m = std::max({a, b, c});
    if (m == -std::numeric_limits<double>::infinity())
        return m;
    return m + std::log(std::exp(a - m) + std::exp(b - m) + std::exp(c - m));
}

} // namespace detail

/// (1 + e^{-2s})/2.
inline double heralding_probability(double alpha_mag, double n_bar)
{
    detail::require(alpha_mag >= 0, "alpha_mag", "must be non-negative");
    detail::require(n_bar >= 0, "n_bar", "must be non-negative");
    return 0.5 * (1.0 + std::exp(-2.0 * detail::grating_strength(alpha_mag, n_bar)));
}

/// log(P_herald - 1/2). Finite whenever the excess over 1/2 is positive, even
/// after P_herald itself has rounded to 0.5.
inline double log_heralding_excess(double alpha_mag, double n_bar)
{
    detail::require(alpha_mag >= 0, "alpha_mag", "must be non-negative");
    detail::require(n_bar >= 0, "n_bar", "must be non-negative");
    return -2.0 * detail::grating_strength(alpha_mag, n_bar) - std::numbers::ln2;
}

/// P(k, 0) = (3 + 4y + y⁴)/(4(1 + y)), y = e^{-2s}. Written as 3/4 plus a
/// non-negative term so the [3/4, 1] bound survives rounding.
inline double p_no_decoherence(double alpha_mag, double n_bar)
{
    detail::require(alpha_mag >= 0, "alpha_mag", "must be non-negative");
    detail::require(n_bar >= 0, "n_bar", "must be non-negative");
    const double y = std::exp(-2.0 * detail::grating_strength(alpha_mag, n_bar));
    const double y4 = (y * y) * (y * y);
    return std::min(1.0, 0.75 + (y + y4) / (4.0 * (1.0 + y)));
}

/// log of the fringe envelope P₀(k). With q = e^{-kπγ/2Ω},
///   P₀ = [e^{-2s(1+q)²} + e^{-2s(1-q)²} + 2e^{-2sq²}] / (2(1 + e^{-2s})).
/// kπγ/2Ω is clamped at 50, beyond which q is zero to double precision.
inline double log_envelope_p0(const ProtocolParams& params)
{
    params.validate();
    const double s = detail::grating_strength(params.alpha_mag, params.n_bar);
    const double u = std::min(50.0, params.k * pi * params.gamma / (2.0 * params.Omega));
    const double q = std::exp(-u);
    const double one_minus_q = -std::expm1(-u);
    const double a = -2.0 * s * (1.0 + q) * (1.0 + q);
    const double b = -2.0 * s * one_minus_q * one_minus_q;
    const double c = -2.0 * s * q * q + std::numbers::ln2;
    const double log_norm = std::numbers::ln2 + std::log1p(std::exp(-2.0 * s));
    return std::min(0.0, detail::log_sum_exp3(a, b, c) - log_norm);
}

inline double envelope_p0(const ProtocolParams& params)
{
    return std::exp(log_envelope_p0(params));
}

/// Exponent 8D|α|²(1 - e^{-kπγ/Ω}) / (γ(4 + γ²/Ω²)) of the diffusive decay;
/// its γ → 0 limit is 2D|α|²kπ/Ω.
inline double decay_exponent(const ProtocolParams& params, double D)
{
    params.validate();
    detail::require(D >= 0, "D", "must be non-negative");
    const double a2 = params.alpha_mag * params.alpha_mag;
    const double g = params.gamma;
    const double w = params.Omega;
    if (g == 0.0)
        return 2.0 * D * a2 * params.k * pi / w;
    const double window = -std::expm1(-params.k * pi * g / w);
    return 8.0 * D * a2 * window / (g * (4.0 + (g / w) * (g / w)));
}

/// log(P(k, D) - 1/2).
inline double log_excess(const ProtocolParams& params, double D)
{
    return log_envelope_p0(params) - decay_exponent(params, D) - std::numbers::ln2;
}

/// P(k, D) = 1/2 + P₀(k) e^{-decay_exponent}/2.
inline double probability_full(const ProtocolParams& params, double D)
{
    return 0.5 + 0.5 * std::exp(log_envelope_p0(params) - decay_exponent(params, D));
}

/// Quality-factor threshold above which probability_highq is trusted.
inline bool highq_valid(const ProtocolParams& params)
{
    return params.gamma == 0.0 || params.Omega / params.gamma > 100.0;
}

/// High-Q approximation 1/2 + P₀(k) e^{-2D|α|²kπ/Ω}/2.
inline double probability_highq(const ProtocolParams& params, double D)
{
    params.validate();
    detail::require(D >= 0, "D", "must be non-negative");
    const double e = 2.0 * D * params.alpha_mag * params.alpha_mag * params.k * pi / params.Omega;
    return 0.5 + 0.5 * std::exp(log_envelope_p0(params) - e);
}

/// Δ = 2(P(D_th) - P(D_th + D_csl)) / (P(D_th) + P(D_th + D_csl)), with the
/// difference formed without cancellation.
inline double percentage_difference(const ProtocolParams& params, double D_th, double D_csl)
{
    detail::require(D_th >= 0, "D_th", "must be non-negative");
    detail::require(D_csl >= 0, "D_csl", "must be non-negative");
    const double log_p0 = log_envelope_p0(params);
    const double e_std = decay_exponent(params, D_th);
    const double e_csl = decay_exponent(params, D_th + D_csl);
    const double p_std = 0.5 + 0.5 * std::exp(log_p0 - e_std);
    const double p_csl = 0.5 + 0.5 * std::exp(log_p0 - e_csl);
    const double diff = std::exp(log_p0 - e_std) * -std::expm1(-(e_csl - e_std));
    return diff / (p_std + p_csl);
}

struct DeltaMax {
    double delta_max;
    int k_star;
};

/// Largest Δ over k = 1..k_max. params.k is ignored; ties go to the smaller k.
inline DeltaMax delta_max(const ProtocolParams& params, double D_th, double D_csl, int k_max)
{
    detail::require(k_max >= 1, "k_max", "must be at least 1");
    DeltaMax best{percentage_difference(params.with_k(1), D_th, D_csl), 1};
    for (int k = 2; k <= k_max; ++k) {
        const double d = percentage_difference(params.with_k(k), D_th, D_csl);
        if (d > best.delta_max)
            best = {d, k};
    }
    return best;
}

} // namespace displacemon
