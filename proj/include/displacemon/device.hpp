#pragma once

/**
 * @file device.hpp
 * @brief Device assembly and the derived scans: the parameter table, decay
 *        curves P(k) with and without CSL, and Δ_max maps over (λ_CSL, N̄).
 */

#include "displacemon/beam.hpp"
#include "displacemon/constants.hpp"
#include "displacemon/decoherence.hpp"
#include "displacemon/error.hpp"
#include "displacemon/grating.hpp"
#include "displacemon/qubit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace displacemon {

/// Inputs for one device as read from a config file.
struct DeviceSpec {
    std::string name;
    BeamGeometry geometry;
    Material material;
    QubitConfig qubit;
    std::optional<double> B_par_override; ///< reduced field for the protocol runs, T
    double Q;
    std::optional<double> N_bar; ///< bath occupation; exactly one of N_bar, T_eff
    std::optional<double> T_eff; ///< K
    CslConfig csl{1e-11, 1e-7};
    DpConfig dp{};
    double n_bar_init = 100.0;
    int k_max = 200;
};

/// A device with every derived quantity filled in.
struct Device {
    DeviceSpec spec;
    FundamentalMode mode;
    GratingParams grating;
    Environment environment;

    MechanicalBody body() const
    {
        return {mode.mass,       mode.Omega,          mode.X_ZP, grating.delta_x_max,
                spec.geometry.D, spec.geometry.ell,   spec.material};
    }

    /// Protocol parameters for the first k at the initial occupation.
    ProtocolParams protocol(int k = 0) const
    {
        return {grating.alpha_mag, spec.n_bar_init, k, mode.Omega, environment.gamma};
    }

    /// Dimensionless thermal diffusion at bath occupation N̄.
    double thermal_diffusion_dimless(double N_bar) const
    {
        const double T = temperature_from_occupation(N_bar, mode.Omega);
        return dimensionless_diffusion(thermal_diffusion(mode.mass, environment.gamma, T),
                                       mode.X_ZP);
    }

    double csl_diffusion_dimless(const CslConfig& csl) const
    {
        return dimensionless_diffusion(csl_diffusion(body(), csl), mode.X_ZP);
    }
};

/// Solves the beam and the coupling. With `use_field_override` the reduced
/// in-plane field replaces B_par when the DeviceSpec provides one.
inline Device build_device(const DeviceSpec& spec, bool use_field_override = false)
{
    auto prefixed = [&](const InvalidArgument& e) {
        const std::string what = e.what();
        const auto colon = what.find(": ");
        const std::string msg = colon == std::string::npos ? what : what.substr(colon + 2);
        return InvalidArgument(spec.name + "." + e.field(), msg);
    };
    try {
        detail::require(spec.N_bar.has_value() != spec.T_eff.has_value(), "N_bar",
                        "exactly one of N_bar and T_eff_K must be given");
        detail::require(spec.n_bar_init >= 0, "n_bar_init", "must be non-negative");
        detail::require(spec.k_max >= 1, "k_max", "must be at least 1");
        spec.geometry.validate();
        spec.material.validate();
        spec.csl.validate();
        spec.dp.validate();

        Device dev{spec, {}, {}, {}};
        if (use_field_override && spec.B_par_override)
            dev.spec.qubit.B_par = *spec.B_par_override;
        dev.spec.qubit.validate();
        dev.mode = solve_fundamental_mode(spec.geometry, spec.material);
        dev.grating = grating_alpha(dev.spec.qubit, dev.mode, spec.geometry);
        dev.environment = spec.N_bar
            ? Environment::from_occupation(*spec.N_bar, spec.Q, dev.mode.Omega)
            : Environment::from_temperature(*spec.T_eff, spec.Q, dev.mode.Omega);
        return dev;
    } catch (const InvalidArgument& e) {
        throw prefixed(e);
    }
}

// ---------------------------------------------------------------------------
// Parameter table

struct ReportRow {
    std::string parameter;
    std::string symbol;
    double value;         ///< SI
    double display_value; ///< in display_unit
    std::string display_unit;
};

inline std::vector<ReportRow> device_table(const Device& dev)
{
    std::vector<ReportRow> rows;
    auto add = [&](std::string p, std::string s, double si, double shown, std::string unit) {
        rows.push_back({std::move(p), std::move(s), si, shown, std::move(unit)});
    };
    const auto& g = dev.spec.geometry;
    add("Side length", "D", g.D, g.D, "m");
    add("Length", "ell", g.ell, g.ell, "m");
    add("Mass", "m", dev.mode.mass, dev.mode.mass, "kg");
    add("Frequency", "Omega/2pi", dev.mode.Omega, dev.mode.Omega / two_pi, "Hz");
    add("Zero-point amplitude", "X_ZP", dev.mode.X_ZP, dev.mode.X_ZP, "m");
    add("Coupling rate", "|lambda_on|/2pi", dev.grating.lambda_on, dev.grating.lambda_on / two_pi,
        "Hz");
    add("Grating parameter", "|alpha|", dev.grating.alpha_mag, dev.grating.alpha_mag, "1");
    add("Maximum separation", "DeltaX_max", dev.grating.delta_x_max, dev.grating.delta_x_max, "m");
    const auto body = dev.body();
    for (SigmaChoice c : all_sigma_choices) {
        DpConfig dp = dev.spec.dp;
        dp.sigma_choice = c;
        const double E = dp_self_energy(body, dp);
        const std::string tag(to_string(c));
        add("DP self-energy (" + tag + ")", "E_G", E, E / constants::eV, "eV");
        add("DP lifetime (" + tag + ")", "t_DP", dp_lifetime(E), dp_lifetime(E), "s");
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Decay curves

struct CurveRow {
    int k;
    double t_s;
    double p_std;
    double p_csl;
    double delta;
};

struct ProbabilityCurve {
    std::vector<CurveRow> rows; ///< k = 0..k_max
    int k_star;                 ///< argmax of Δ over k ≥ 1
    double delta_max;
};

/// P(k) for the thermal bath alone and with CSL added, k = 0..k_max.
inline ProbabilityCurve decay_curve(const Device& dev, const CslConfig& csl, double N_bar,
                                    double n_bar_init, int k_max)
{
    using detail::require;
    csl.validate();
    require(N_bar >= n_bar_init, "n_bar", "bath occupation must be at least n_bar_init");
    require(n_bar_init >= 0, "n_bar_init", "must be non-negative");
    require(k_max >= 1, "k_max", "must be at least 1");
    const double D_th = dev.thermal_diffusion_dimless(N_bar);
    const double D_csl = dev.csl_diffusion_dimless(csl);
    ProtocolParams p = dev.protocol();
    p.n_bar = n_bar_init;

    ProbabilityCurve curve{{}, 1, 0.0};
    curve.rows.reserve(std::size_t(k_max) + 1);
    for (int k = 0; k <= k_max; ++k) {
        const auto pk = p.with_k(k);
        const double d = percentage_difference(pk, D_th, D_csl);
        curve.rows.push_back(
            {k, pk.elapsed(), probability_full(pk, D_th), probability_full(pk, D_th + D_csl), d});
        if (k >= 1 && d > curve.delta_max) {
            curve.delta_max = d;
            curve.k_star = k;
        }
    }
    return curve;
}

// ---------------------------------------------------------------------------
// Δ_max maps

/// n log-spaced values from lo to hi inclusive.
inline std::vector<double> log_grid(double lo, double hi, int n)
{
    detail::require(lo > 0 && hi > 0, "grid", "bounds must be positive");
    detail::require(hi >= lo, "grid", "upper bound must not be below the lower bound");
    detail::require(n >= 1, "grid_points", "must be at least 1");
    std::vector<double> g(static_cast<std::size_t>(n));
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (int i = 0; i < n; ++i)
        g[std::size_t(i)] = n == 1 ? lo : std::pow(10.0, a + (b - a) * i / (n - 1));
    if (n > 1) {
        g.front() = lo;
        g.back() = hi;
    }
    return g;
}

/// Matrices are row-major with rows indexed by N̄ and columns by λ_CSL.
struct DeltaMap {
    std::vector<double> lambda_grid;
    std::vector<double> n_bar_grid;
    std::vector<double> t_eff_grid; ///< K, one per N̄
    std::vector<double> delta_max;
    std::vector<int> k_star;
    std::vector<std::uint8_t> excluded; ///< D_CSL < D_th

    std::size_t index(std::size_t i_nbar, std::size_t j_lambda) const
    {
        return i_nbar * lambda_grid.size() + j_lambda;
    }
};

inline DeltaMap delta_max_map(const Device& dev, const std::vector<double>& lambda_grid,
                              const std::vector<double>& n_bar_grid, double r_csl,
                              double n_bar_init, int k_max, unsigned threads = 0)
{
    using detail::require;
    require(!lambda_grid.empty(), "lambda_grid", "must not be empty");
    require(!n_bar_grid.empty(), "n_bar_grid", "must not be empty");
    require(r_csl > 0, "r_csl", "must be positive");
    require(k_max >= 1, "k_max", "must be at least 1");
    for (std::size_t j = 0; j < lambda_grid.size(); ++j) {
        require(lambda_grid[j] >= 0, "lambda_grid", "values must be non-negative");
        require(j == 0 || lambda_grid[j] > lambda_grid[j - 1], "lambda_grid",
                "values must be increasing");
    }
    for (std::size_t i = 0; i < n_bar_grid.size(); ++i) {
        require(n_bar_grid[i] >= n_bar_init, "n_bar_grid", "values must be at least n_bar_init");
        require(i == 0 || n_bar_grid[i] > n_bar_grid[i - 1], "n_bar_grid",
                "values must be increasing");
    }

    DeltaMap map;
    map.lambda_grid = lambda_grid;
    map.n_bar_grid = n_bar_grid;
    const std::size_t cells = lambda_grid.size() * n_bar_grid.size();
    map.delta_max.assign(cells, 0.0);
    map.k_star.assign(cells, 1);
    map.excluded.assign(cells, 0);
    for (double n : n_bar_grid)
        map.t_eff_grid.push_back(temperature_from_occupation(n, dev.mode.Omega));

    ProtocolParams p = dev.protocol();
    p.n_bar = n_bar_init;
    std::vector<double> d_csl(lambda_grid.size());
    for (std::size_t j = 0; j < lambda_grid.size(); ++j)
        d_csl[j] = dev.csl_diffusion_dimless({lambda_grid[j], r_csl});

    auto fill_row = [&](std::size_t i) {
        const double d_th = dev.thermal_diffusion_dimless(n_bar_grid[i]);
        for (std::size_t j = 0; j < lambda_grid.size(); ++j) {
            const auto r = delta_max(p, d_th, d_csl[j], k_max);
            const auto c = map.index(i, j);
            map.delta_max[c] = r.delta_max;
            map.k_star[c] = r.k_star;
            map.excluded[c] = d_csl[j] < d_th;
        }
    };

    threads = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, unsigned(n_bar_grid.size()));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n_bar_grid.size(); ++i)
            fill_row(i);
        return map;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < n_bar_grid.size(); i += threads)
                    fill_row(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool)
        th.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return map;
}

} // namespace displacemon
