#pragma once

/**
 * @file oracle.hpp
 * @brief Reference computations of P(k, D) that do not use the closed form.
 *
 * Two routes:
 *  - characteristic function: the heralded initial state is a mixture of three
 *    Gaussians, the noise displacement is Gaussian with a variance obtained by
 *    quadrature, so ⟨cos 2|α|x(t_k)⟩ factorises exactly.
 *  - Monte Carlo: the SI Langevin equations
 *        dX = (P/m) dt,   dP = (-mΩ²X - γP) dt + ħ√D_SI dW
 *    integrated with an exact damped-rotation propagator and weak-order
 *    stochastic kicks, starting from rejection-sampled positions.
 *
 * The Monte Carlo is split into 64 fixed shards with their own seed, and the
 * shard results are merged in shard order, so an estimate depends only on
 * (seed, n_samples, config) and never on the thread count.
 */

#include "displacemon/constants.hpp"
#include "displacemon/error.hpp"
#include "displacemon/grating.hpp"
#include "displacemon/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <exception>
#include <random>
#include <string_view>
#include <thread>
#include <vector>

namespace displacemon {

enum class OracleMethod { CharacteristicFunction, MonteCarloSDE };

inline std::string_view to_string(OracleMethod m)
{
    return m == OracleMethod::CharacteristicFunction ? "characteristic_function" : "monte_carlo_sde";
}

/// Random increments used by the Monte Carlo kicks. TwoPoint draws ±1 with
/// equal weight: it matches the first three Gaussian moments, which is all a
/// weak first-order scheme needs, and is far cheaper to generate.
enum class Increment { TwoPoint, Gaussian };

struct OracleConfig {
    std::int64_t n_samples = 1'000'000;
    std::uint64_t seed = 20240607;
    double dt_fraction = 1e-3;     ///< time step as a fraction of the period 2π/Ω
    double quadrature_tol = 1e-13; ///< relative, per half-period panel
    Increment increments = Increment::TwoPoint;
    int noise_substeps = 1; ///< kicks per step; (dt, 2) and (dt/2, 1) share random numbers
    unsigned threads = 0;   ///< 0 picks the hardware concurrency

    void validate() const
    {
        using detail::require;
        require(n_samples >= 10'000, "OracleConfig.n_samples", "must be at least 1e4");
        require(dt_fraction > 0 && dt_fraction <= 1e-3, "OracleConfig.dt_fraction",
                "must lie in (0, 1e-3]");
        require(quadrature_tol > 0, "OracleConfig.quadrature_tol", "must be positive");
        require(noise_substeps >= 1, "OracleConfig.noise_substeps", "must be at least 1");
    }
};

struct OracleEstimate {
    double p_hat;
    double std_err;
    OracleMethod method;
};

// ---------------------------------------------------------------------------
// Characteristic-function route

/// Variance of the noise displacement Δx(t) = ∫₀ᵗ e^{γt'/2} sin(Ω(t-t')) ξ(t') dt'
/// for dimensionless white noise of strength 2D. Integrated panel by panel
/// over half periods in τ = Ωt'.
inline double noise_variance(double t, double D, double gamma, double Omega,
                             double rel_tol = 1e-13)
{
    using detail::require;
    require(t >= 0, "t", "must be non-negative");
    require(D >= 0, "D", "must be non-negative");
    require(gamma >= 0, "gamma", "must be non-negative");
    require(Omega > 0, "Omega", "must be positive");
    if (D == 0.0 || t == 0.0)
        return 0.0;
    const double tau_end = Omega * t;
    const double g = gamma / Omega;
    auto integrand = [&](double tau) {
        const double s = std::sin(tau_end - tau);
        return std::exp(g * tau) * s * s;
    };
    double total = 0.0;
    for (double a = 0.0; a < tau_end;) {
        const double b = std::min(a + pi, tau_end);
        const double scale = 0.5 * (b - a) * std::exp(g * b);
        total += numerics::adaptive_simpson(integrand, a, b, rel_tol * scale, 4);
        a = b;
    }
    return 2.0 * D * total / Omega;
}

/// Same variance from the antiderivative of e^{γt'} sin²(Ω(t - t')).
inline double noise_variance_closed_form(double t, double D, double gamma, double Omega)
{
    if (D == 0.0 || t == 0.0)
        return 0.0;
    if (gamma == 0.0)
        return 2.0 * D * (0.5 * t - std::sin(2.0 * Omega * t) / (4.0 * Omega));
    const std::complex<double> z(-gamma, 2.0 * Omega);
    // e^{zt} - 1 without cancellation for small t
    const double a = -gamma * t;
    const double b = 2.0 * Omega * t;
    const double sh = std::sin(0.5 * b);
    const std::complex<double> w(std::expm1(a) * std::cos(b) - 2.0 * sh * sh,
                                 std::exp(a) * std::sin(b));
    const double oscillating = std::real(w / z);
    const double drift = -std::expm1(-gamma * t) / (2.0 * gamma);
    return 2.0 * D * std::exp(gamma * t) * (drift - 0.5 * oscillating);
}

/// ⟨e^{iβx}⟩ over the heralded state ∝ cos²(|α|x) × thermal Gaussian of
/// variance 2n̄ + 1. Real by symmetry.
inline double characteristic_expectation(double beta, double alpha_mag, double n_bar)
{
    detail::require(n_bar >= 0, "n_bar", "must be non-negative");
    const double v = 2.0 * n_bar + 1.0;
    auto chi = [v](double u) { return std::exp(-0.5 * u * u * v); };
    const double two_a = 2.0 * alpha_mag;
    const double num = 2.0 * chi(beta) + chi(beta + two_a) + chi(beta - two_a);
    return num / (4.0 * heralding_probability(alpha_mag, n_bar));
}

/// ⟨x²⟩ over the heralded state.
inline double heralded_second_moment(double alpha_mag, double n_bar)
{
    const double v = 2.0 * n_bar + 1.0;
    const double a2 = alpha_mag * alpha_mag;
    return (v + (v - 4.0 * a2 * v * v) * std::exp(-2.0 * a2 * v))
        / (2.0 * heralding_probability(alpha_mag, n_bar));
}

inline OracleEstimate oracle_probability_cf(const ProtocolParams& params, double D,
                                            double rel_tol = 1e-13)
{
    params.validate();
    detail::require(D >= 0, "D", "must be non-negative");
    const double t = params.elapsed();
    const double shrink = std::exp(-0.5 * params.gamma * t);
    const double beta = 2.0 * params.alpha_mag * shrink;
    const double var = noise_variance(t, D, params.gamma, params.Omega, rel_tol);
    const double mean = characteristic_expectation(beta, params.alpha_mag, params.n_bar);
    const double p = 0.5 + 0.5 * mean * std::exp(-0.5 * beta * beta * var);
    return {p, 0.0, OracleMethod::CharacteristicFunction};
}

// ---------------------------------------------------------------------------
// Monte Carlo route

namespace detail {

inline constexpr int mc_shards = 64;
inline constexpr int mc_lanes = 256;

using Engine = std::mt19937_64;

inline Engine shard_engine(std::uint64_t seed, int shard)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                      static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(shard)};
    return Engine(seq);
}

/// Draws x from Normal(0, v) weighted by cos²(|α|x), by rejection.
class HeraldedSampler {
public:
    HeraldedSampler(double alpha_mag, double n_bar)
        : alpha_(alpha_mag)
        , normal_(0.0, std::sqrt(2.0 * n_bar + 1.0))
    {
    }

    double operator()(Engine& eng)
    {
        for (;;) {
            const double x = normal_(eng);
            const double c = std::cos(alpha_ * x);
            ++attempts_;
            if (uniform_(eng) < c * c) {
                ++accepted_;
                return x;
            }
            if (attempts_ >= 1000 && accepted_ * 100 < attempts_)
                throw NumericalError("rejection sampler acceptance fell below 1%");
        }
    }

    double acceptance() const { return attempts_ ? double(accepted_) / double(attempts_) : 1.0; }

private:
    double alpha_;
    std::normal_distribution<double> normal_;
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
    std::int64_t attempts_ = 0;
    std::int64_t accepted_ = 0;
};

struct RunningStats {
    std::int64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    /// Merge a batch given by its size, mean and sum of squared deviations.
    void merge(std::int64_t nb, double mean_b, double m2_b)
    {
        if (nb == 0)
            return;
        const std::int64_t nt = n + nb;
        const double delta = mean_b - mean;
        mean += delta * double(nb) / double(nt);
        m2 += m2_b + delta * delta * double(n) * double(nb) / double(nt);
        n = nt;
    }

    void merge(const RunningStats& o) { merge(o.n, o.mean, o.m2); }

    double std_err() const { return n > 1 ? std::sqrt(m2 / double(n - 1) / double(n)) : 0.0; }
};

/// Step matrix exp(A h) of dX/dt = Ωy, dy/dt = -ΩX - γy.
struct Propagator {
    double m11, m12, m21, m22;

    static Propagator over(double h, double Omega, double gamma)
    {
        const double wd = std::sqrt(Omega * Omega - 0.25 * gamma * gamma);
        const double e = std::exp(-0.5 * gamma * h);
        const double c = std::cos(wd * h);
        const double s = std::sin(wd * h) / wd;
        return {e * (c + 0.5 * gamma * s), e * Omega * s, -e * Omega * s,
                e * (c - 0.5 * gamma * s)};
    }
};

struct McSetup {
    double alpha_mag;
    double n_bar;
    double X_ZP;
    Propagator step;
    double kick_x; ///< position response to a unit midpoint kick on y
    double kick_y;
    double sigma_y; ///< standard deviation of one kick on y, m
    int steps_per_half;
    std::vector<int> ks; ///< ascending
    OracleConfig cfg;
};

inline std::vector<RunningStats> run_shard(const McSetup& s, int shard, std::int64_t n)
{
    constexpr int B = mc_lanes;
    Engine eng = shard_engine(s.cfg.seed, shard);
    HeraldedSampler sampler(s.alpha_mag, s.n_bar);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double y_scale = s.X_ZP * std::sqrt(2.0 * s.n_bar + 1.0);
    const double two_a = 2.0 * s.alpha_mag / s.X_ZP;
    const int subs = s.cfg.noise_substeps;
    const double kick = s.sigma_y / std::sqrt(double(subs));
    const Propagator& m = s.step;

    std::vector<RunningStats> stats(s.ks.size());
    alignas(64) std::array<double, B> X{}, Y{}, eta{};
    std::array<std::uint64_t, B / 64> words{};

    for (std::int64_t done = 0; done < n; done += B) {
        const int count = int(std::min<std::int64_t>(B, n - done));
        for (int i = 0; i < count; ++i) {
            X[i] = s.X_ZP * sampler(eng);
            Y[i] = y_scale * normal(eng);
        }
        long step = 0;
        for (std::size_t j = 0; j < s.ks.size(); ++j) {
            const long target = long(s.ks[j]) * s.steps_per_half;
            for (; step < target; ++step) {
                std::fill(eta.begin(), eta.begin() + count, 0.0);
                for (int sub = 0; sub < subs; ++sub) {
                    if (s.cfg.increments == Increment::TwoPoint) {
                        for (int w = 0; w < (count + 63) / 64; ++w)
                            words[w] = eng();
                        for (int i = 0; i < count; ++i) {
                            const auto bit = (words[i >> 6] >> (i & 63)) & 1u;
                            eta[i] += bit ? 1.0 : -1.0;
                        }
                    } else {
                        for (int i = 0; i < count; ++i)
                            eta[i] += normal(eng);
                    }
                }
                for (int i = 0; i < count; ++i) {
                    const double k = kick * eta[i];
                    const double x = m.m11 * X[i] + m.m12 * Y[i] + s.kick_x * k;
                    const double y = m.m21 * X[i] + m.m22 * Y[i] + s.kick_y * k;
                    X[i] = x;
                    Y[i] = y;
                }
            }
            double sum = 0.0;
            for (int i = 0; i < count; ++i)
                sum += 0.5 * (1.0 + std::cos(two_a * X[i]));
            const double mean = sum / count;
            double m2 = 0.0;
            for (int i = 0; i < count; ++i) {
                const double d = 0.5 * (1.0 + std::cos(two_a * X[i])) - mean;
                m2 += d * d;
            }
            stats[j].merge(count, mean, m2);
        }
    }
    return stats;
}

} // namespace detail

/// Draws n positions x = X/X_ZP from the heralded state, for sampler checks.
inline std::vector<double> sample_heralded_positions(double alpha_mag, double n_bar,
                                                     std::int64_t n, std::uint64_t seed)
{
    detail::require(n > 0, "n", "must be positive");
    auto eng = detail::shard_engine(seed, 0);
    detail::HeraldedSampler sampler(alpha_mag, n_bar);
    std::vector<double> out(static_cast<std::size_t>(n));
    for (auto& x : out)
        x = sampler(eng);
    return out;
}

/// Monte Carlo estimates of P(k, D) for several k from the same trajectories.
/// D_SI is the physical momentum diffusion (m⁻²s⁻¹) and X_ZP fixes the mass
/// through m = ħ/(2ΩX_ZP²).
inline std::vector<OracleEstimate> oracle_probability_mc(const ProtocolParams& params,
                                                         std::vector<int> ks, double D_SI,
                                                         double X_ZP, const OracleConfig& cfg)
{
    using detail::require;
    params.validate();
    cfg.validate();
    require(!ks.empty(), "ks", "must not be empty");
    require(D_SI >= 0, "D", "must be non-negative");
    require(X_ZP > 0, "X_ZP", "must be positive");
    require(params.gamma < 2.0 * params.Omega, "ProtocolParams.gamma",
            "must be below 2Ω (underdamped)");
    for (int k : ks)
        require(k >= 0, "ks", "must be non-negative");

    std::vector<int> sorted = ks;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    const double Omega = params.Omega;
    const double mass = constants::hbar / (2.0 * Omega * X_ZP * X_ZP);
    const int steps_per_half = int(std::ceil(0.5 / cfg.dt_fraction - 1e-9));
    const double dt = pi / (Omega * steps_per_half);
    const auto half = detail::Propagator::over(0.5 * dt, Omega, params.gamma);

    detail::McSetup setup{
        .alpha_mag = params.alpha_mag,
        .n_bar = params.n_bar,
        .X_ZP = X_ZP,
        .step = detail::Propagator::over(dt, Omega, params.gamma),
        .kick_x = half.m12,
        .kick_y = half.m22,
        .sigma_y = constants::hbar * std::sqrt(D_SI * dt) / (mass * Omega),
        .steps_per_half = steps_per_half,
        .ks = sorted,
        .cfg = cfg,
    };

    constexpr int S = detail::mc_shards;
    std::vector<std::vector<detail::RunningStats>> per_shard(S);
    auto shard_size = [&](int s) { return cfg.n_samples / S + (s < cfg.n_samples % S ? 1 : 0); };
    unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, S);
    if (threads <= 1) {
        for (int s = 0; s < S; ++s)
            per_shard[s] = detail::run_shard(setup, s, shard_size(s));
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                try {
                    for (int s = int(t); s < S; s += int(threads))
                        per_shard[s] = detail::run_shard(setup, s, shard_size(s));
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
    }

    std::vector<detail::RunningStats> total(sorted.size());
    for (int s = 0; s < S; ++s)
        for (std::size_t j = 0; j < sorted.size(); ++j)
            total[j].merge(per_shard[s][j]);

    std::vector<OracleEstimate> out;
    out.reserve(ks.size());
    for (int k : ks) {
        const auto j = std::size_t(std::lower_bound(sorted.begin(), sorted.end(), k) - sorted.begin());
        out.push_back({total[j].mean, total[j].std_err(), OracleMethod::MonteCarloSDE});
    }
    return out;
}

inline OracleEstimate oracle_probability_mc(const ProtocolParams& params, double D_SI, double X_ZP,
                                            const OracleConfig& cfg)
{
    return oracle_probability_mc(params, std::vector<int>{params.k}, D_SI, X_ZP, cfg).front();
}

} // namespace displacemon
